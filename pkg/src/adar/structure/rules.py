"""
Rule pruning and rule growing.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit

from adar.core.events import StructuralEvent
from adar.core.exceptions import CapacityError, ShapeMismatchError, ValidationError
from adar.core.logging import get_logger
from adar.core.types import EventKind, FloatArray, IntArray
from adar.model.inference import compute_rule_weights
from adar.model.rulebase import RuleBase
from adar.structure.attributes import StructuralEdit

logger = get_logger("structure.rules")


def prune_rules(
    rb: RuleBase,
    streaks: IntArray,
    theta_rule: float,
    persistence: int,
    epoch: int = 0,
) -> StructuralEdit:
    """
    Delete rules whose importance weight stayed below theta_rule.

    At least one rule always survives: when every rule qualifies, the one
    with the highest beta is kept. Events are emitted in descending index
    order so each index is valid when its event is applied.

    Args:
        rb: Current rule base
        streaks: Consecutive low-beta counts, shape (L,)
        theta_rule: Pruning threshold on beta
        persistence: Checks a rule must stay low before removal
        epoch: Epoch stamped on emitted events

    Returns:
        StructuralEdit with the reduced rule base and removed indices
    """
    if streaks.shape != (rb.num_rules,):
        raise ShapeMismatchError("rule streaks do not match the rule base", (rb.num_rules,), streaks.shape)

    beta = compute_rule_weights(rb)
    low = beta < theta_rule
    streaks = np.where(low, streaks + 1, 0).astype(np.int64)
    candidates = low & (streaks >= persistence)

    if candidates.all():
        candidates[int(np.argmax(beta))] = False
    if not candidates.any():
        return StructuralEdit(rulebase=rb, streaks=streaks)

    removed = [int(i) for i in np.nonzero(candidates)[0]]
    events = [
        StructuralEvent(
            epoch=epoch,
            kind=EventKind.PRUNE_RULE,
            rule_index=index,
            weight_value=float(beta[index]),
        )
        for index in sorted(removed, reverse=True)
    ]
    logger.info(f"Epoch {epoch}: removed rule(s) {removed}, {rb.num_rules - len(removed)} remain")
    return StructuralEdit(
        rulebase=rb.without_rules(removed),
        streaks=np.delete(streaks, removed),
        events=events,
        removed_rules=removed,
    )


def worst_samples(residuals: FloatArray, k: int) -> IntArray:
    """Indices of the k largest |residual|; ties go to the lowest index."""
    order = np.argsort(-np.abs(residuals), kind="stable")
    return order[: max(1, min(k, residuals.shape[0]))].astype(np.int64)


def grow_rule(
    rb: RuleBase,
    X: FloatArray,
    residuals: FloatArray,
    k: int,
    seed: int | np.random.Generator,
    max_rules: int,
    attr_logit_std: float = 0.5,
    consequent_std: float = 0.1,
    rule_logit_init: float = 1.0,
    epoch: int = 0,
) -> tuple[RuleBase, StructuralEvent]:
    """
    Append one rule seeded from the highest-error training samples.

    The new rule's centers are the mean of the selected rows and its widths
    their population std, floored at the rule base's s_floor.

    Raises:
        CapacityError: If the rule base already holds max_rules rules
        ShapeMismatchError: If residuals do not align with X
    """
    if rb.num_rules >= max_rules:
        raise CapacityError("rule base is at capacity", num_rules=rb.num_rules, max_rules=max_rules)
    X = np.asarray(X, dtype=np.float64)
    residuals = np.asarray(residuals, dtype=np.float64)
    if X.ndim != 2 or residuals.shape != (X.shape[0],):
        raise ShapeMismatchError("residuals do not align with samples", (X.shape[0],), residuals.shape)
    if X.shape[0] == 0:
        raise ValidationError("cannot grow a rule from an empty sample")

    selected = worst_samples(residuals, k)
    rows = X[selected]
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    grown = rb.with_rule(
        center=rows.mean(axis=0),
        width=np.maximum(rows.std(axis=0), rb.s_floor),
        attr_logit=rng.normal(0.0, attr_logit_std, size=rb.num_attrs),
        rule_logit=rule_logit_init,
        consequent=rng.normal(0.0, consequent_std, size=rb.num_attrs),
    )
    event = StructuralEvent(
        epoch=epoch,
        kind=EventKind.GROW,
        rule_index=grown.num_rules - 1,
        weight_value=float(expit(rule_logit_init)) if rb.rule_weighting else 1.0,
        details={"seed_samples": int(selected.shape[0]), "max_abs_residual": float(np.abs(residuals[selected[0]]))},
    )
    logger.info(f"Epoch {epoch}: grew rule {grown.num_rules - 1} from {selected.shape[0]} high-error samples")
    return grown, event
