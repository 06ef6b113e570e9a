"""Rule base builders shared by the tests."""

import numpy as np

from adar.model import RuleBase


def make_rulebase(
    num_rules: int = 2,
    num_attrs: int = 2,
    seed: int = 0,
    **flags: object,
) -> RuleBase:
    """Random rule base with unit-scale parameters and every attribute active."""
    rng = np.random.default_rng(seed)
    return RuleBase(
        centers=rng.normal(0.0, 1.0, size=(num_rules, num_attrs)),
        widths=rng.uniform(0.5, 1.5, size=(num_rules, num_attrs)),
        attr_logits=rng.normal(0.0, 1.0, size=(num_rules, num_attrs)),
        attr_mask=np.ones((num_rules, num_attrs)),
        rule_logits=rng.normal(0.0, 1.0, size=num_rules),
        consequents=rng.normal(0.0, 1.0, size=(num_rules, num_attrs)),
        bias=rng.normal(0.0, 1.0, size=num_rules),
        **flags,  # type: ignore[arg-type]
    )


def explicit_rulebase(
    centers: list[list[float]],
    widths: list[list[float]],
    consequents: list[list[float]] | None = None,
    attr_logits: list[list[float]] | None = None,
    rule_logits: list[float] | None = None,
    **flags: object,
) -> RuleBase:
    """Rule base from explicit values; unspecified blocks are zeros."""
    v = np.asarray(centers, dtype=np.float64)
    return RuleBase(
        centers=v,
        widths=np.asarray(widths, dtype=np.float64),
        attr_logits=np.zeros_like(v) if attr_logits is None else np.asarray(attr_logits, dtype=np.float64),
        attr_mask=np.ones_like(v),
        rule_logits=np.zeros(v.shape[0]) if rule_logits is None else np.asarray(rule_logits, dtype=np.float64),
        consequents=np.zeros_like(v) if consequents is None else np.asarray(consequents, dtype=np.float64),
        bias=np.zeros(v.shape[0]),
        **flags,  # type: ignore[arg-type]
    )
