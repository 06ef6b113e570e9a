"""
Rule base parameterization.

A RuleBase holds every learnable parameter and mask of a Gaussian TSK
fuzzy model. Instances are treated as values: structural edits and
optimizer steps return new RuleBase objects, so a retained reference is a
valid rollback snapshot.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Any

import numpy as np

from adar.core.exceptions import ShapeMismatchError, ValidationError
from adar.core.types import FloatArray

# Learnable parameter blocks, in canonical order
PARAM_BLOCKS: tuple[str, ...] = (
    "centers",
    "widths",
    "attr_logits",
    "rule_logits",
    "consequents",
    "bias",
)

# Blocks with one row per rule and one column per attribute
MATRIX_BLOCKS: tuple[str, ...] = ("centers", "widths", "attr_logits", "attr_mask", "consequents")


@dataclass
class RuleBase:
    """
    Parameters of an L-rule, D-attribute fuzzy model.

    Attributes:
        centers: Gaussian centers v, shape (L, D)
        widths: Gaussian widths s, shape (L, D), all >= s_floor
        attr_logits: Attribute importance logits w_a, shape (L, D)
        attr_mask: Binary attribute mask m, shape (L, D)
        rule_logits: Rule importance logits w_r, shape (L,)
        consequents: Linear consequent coefficients c, shape (L, D)
        bias: Per-rule intercepts c0, shape (L,); only used when use_bias
        epsilon: Normalization constant
        s_floor: Minimum width
        use_bias: Add c0 to every rule output
        strict_mask: Literal product over all attributes (a masked attribute zeroes its rule)
        attr_weighting: Apply sigmoid attribute weights; when off alpha equals the mask
        rule_weighting: Apply sigmoid rule weights; when off beta is 1
    """

    centers: FloatArray
    widths: FloatArray
    attr_logits: FloatArray
    attr_mask: FloatArray
    rule_logits: FloatArray
    consequents: FloatArray
    bias: FloatArray
    epsilon: float = 1e-9
    s_floor: float = 1e-3
    use_bias: bool = False
    strict_mask: bool = False
    attr_weighting: bool = True
    rule_weighting: bool = True

    def __post_init__(self) -> None:
        self.validate()

    @property
    def num_rules(self) -> int:
        return int(self.centers.shape[0])

    @property
    def num_attrs(self) -> int:
        return int(self.centers.shape[1])

    @property
    def active(self) -> np.ndarray:
        """Boolean view of the attribute mask."""
        return self.attr_mask > 0.5

    def validate(self) -> None:
        """Check shapes and invariants; raise on violation."""
        if self.centers.ndim != 2:
            raise ShapeMismatchError("centers must be a matrix", expected=2, actual=self.centers.ndim)
        shape = self.centers.shape
        if shape[0] < 1 or shape[1] < 1:
            raise ValidationError("a rule base needs at least one rule and one attribute", {"shape": shape})
        for name in MATRIX_BLOCKS:
            arr = getattr(self, name)
            if arr.shape != shape:
                raise ShapeMismatchError(f"{name} has the wrong shape", expected=shape, actual=arr.shape)
        for name in ("rule_logits", "bias"):
            arr = getattr(self, name)
            if arr.shape != (shape[0],):
                raise ShapeMismatchError(f"{name} has the wrong shape", expected=(shape[0],), actual=arr.shape)
        if self.epsilon <= 0:
            raise ValidationError("epsilon must be positive", {"epsilon": self.epsilon})
        if self.s_floor <= 0:
            raise ValidationError("s_floor must be positive", {"s_floor": self.s_floor})
        if np.any(self.widths < self.s_floor):
            raise ValidationError("widths must not fall below s_floor", {"min_width": float(self.widths.min())})
        if not np.all((self.attr_mask == 0.0) | (self.attr_mask == 1.0)):
            raise ValidationError("attr_mask entries must be exactly 0 or 1")

    # ------------------------------------------------------------------
    # Value-style edits
    # ------------------------------------------------------------------

    def copy(self) -> RuleBase:
        """Deep copy of all arrays."""
        return self.replace()

    def replace(self, **changes: Any) -> RuleBase:
        """Return a copy with some fields replaced; arrays are copied."""
        values: dict[str, Any] = {}
        for f in dataclasses.fields(self):
            value = changes.get(f.name, getattr(self, f.name))
            if isinstance(value, np.ndarray):
                value = np.array(value, dtype=np.float64, copy=True)
            values[f.name] = value
        return RuleBase(**values)

    def without_rules(self, indices: list[int]) -> RuleBase:
        """Return a copy with the given rule rows deleted."""
        keep = np.setdiff1d(np.arange(self.num_rules), np.asarray(indices, dtype=np.int64))
        if keep.size == 0:
            raise ValidationError("cannot remove every rule")
        changes = {name: getattr(self, name)[keep] for name in (*MATRIX_BLOCKS, "rule_logits", "bias")}
        return self.replace(**changes)

    def with_rule(
        self,
        center: FloatArray,
        width: FloatArray,
        attr_logit: FloatArray,
        rule_logit: float,
        consequent: FloatArray,
        bias: float = 0.0,
    ) -> RuleBase:
        """Return a copy with one rule appended (all attributes active)."""
        return self.replace(
            centers=np.vstack([self.centers, center]),
            widths=np.vstack([self.widths, np.maximum(width, self.s_floor)]),
            attr_logits=np.vstack([self.attr_logits, attr_logit]),
            attr_mask=np.vstack([self.attr_mask, np.ones(self.num_attrs)]),
            rule_logits=np.append(self.rule_logits, rule_logit),
            consequents=np.vstack([self.consequents, consequent]),
            bias=np.append(self.bias, bias),
        )

    def with_mask(self, rule: int, attr: int, value: float) -> RuleBase:
        mask = self.attr_mask.copy()
        mask[rule, attr] = value
        return self.replace(attr_mask=mask)

    # ------------------------------------------------------------------
    # Serialization
    # ------------------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary with explicit arrays."""
        return {
            "num_rules": self.num_rules,
            "num_attrs": self.num_attrs,
            "centers": self.centers.tolist(),
            "widths": self.widths.tolist(),
            "attr_logits": self.attr_logits.tolist(),
            "attr_mask": self.attr_mask.astype(int).tolist(),
            "rule_logits": self.rule_logits.tolist(),
            "consequents": self.consequents.tolist(),
            "bias": self.bias.tolist(),
            "epsilon": self.epsilon,
            "s_floor": self.s_floor,
            "flags": {
                "use_bias": self.use_bias,
                "strict_mask": self.strict_mask,
                "attr_weighting": self.attr_weighting,
                "rule_weighting": self.rule_weighting,
            },
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RuleBase:
        """Create a RuleBase from a dictionary produced by to_dict."""
        flags = data.get("flags", {})
        num_rules = int(data["num_rules"])
        num_attrs = int(data["num_attrs"])

        def matrix(name: str) -> FloatArray:
            return np.asarray(data[name], dtype=np.float64).reshape(num_rules, num_attrs)

        return cls(
            centers=matrix("centers"),
            widths=matrix("widths"),
            attr_logits=matrix("attr_logits"),
            attr_mask=matrix("attr_mask"),
            rule_logits=np.asarray(data["rule_logits"], dtype=np.float64),
            consequents=matrix("consequents"),
            bias=np.asarray(data.get("bias", [0.0] * num_rules), dtype=np.float64),
            epsilon=float(data["epsilon"]),
            s_floor=float(data.get("s_floor", 1e-3)),
            use_bias=bool(flags.get("use_bias", False)),
            strict_mask=bool(flags.get("strict_mask", False)),
            attr_weighting=bool(flags.get("attr_weighting", True)),
            rule_weighting=bool(flags.get("rule_weighting", True)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> RuleBase:
        return cls.from_dict(json.loads(text))
