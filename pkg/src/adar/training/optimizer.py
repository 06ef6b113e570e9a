"""
Adam optimizer and mutable training state.

The moment buffers are shaped like the rule base they were created for.
After any structural edit they must be rebuilt with reset_optimizer;
stepping with stale buffers raises OptimizerStateError.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from adar.core.exceptions import OptimizerStateError
from adar.core.types import FloatArray, IntArray
from adar.model.rulebase import PARAM_BLOCKS, RuleBase
from adar.training.objective import Gradients

BETA1 = 0.9
BETA2 = 0.999
STABILIZER = 1e-8


@dataclass
class AdamState:
    """First and second moment estimates per parameter block."""

    first: dict[str, FloatArray]
    second: dict[str, FloatArray]
    step: int = 0

    @classmethod
    def fresh(cls, rb: RuleBase) -> AdamState:
        return cls(
            first={name: np.zeros_like(getattr(rb, name)) for name in PARAM_BLOCKS},
            second={name: np.zeros_like(getattr(rb, name)) for name in PARAM_BLOCKS},
            step=0,
        )


@dataclass
class TrainState:
    """
    Everything the training loop mutates besides the rule base.

    Attributes:
        adam: Optimizer moments and step counter
        attr_streaks: Consecutive low-alpha checks per (rule, attribute)
        rule_streaks: Consecutive low-beta checks per rule
        best_rulebase: Snapshot with the lowest validation RMSE so far
        best_val_rmse: Validation RMSE of best_rulebase
        epochs_since_improvement: Epochs since the last improvement larger than the growth threshold
    """

    adam: AdamState
    attr_streaks: IntArray
    rule_streaks: IntArray
    best_rulebase: RuleBase | None = None
    best_val_rmse: float = float("inf")
    epochs_since_improvement: int = 0

    @classmethod
    def initial(cls, rb: RuleBase) -> TrainState:
        return cls(
            adam=AdamState.fresh(rb),
            attr_streaks=np.zeros((rb.num_rules, rb.num_attrs), dtype=np.int64),
            rule_streaks=np.zeros(rb.num_rules, dtype=np.int64),
        )

    def reset_optimizer(self, rb: RuleBase) -> None:
        """Rebuild moments for the current structure and restart the step counter."""
        self.adam = AdamState.fresh(rb)


def adam_step(
    state: TrainState,
    rb: RuleBase,
    grads: Gradients,
    lr: float,
) -> tuple[RuleBase, TrainState]:
    """
    Apply one Adam update.

    Widths are clamped back to the floor afterwards.

    Raises:
        OptimizerStateError: If the moment buffers do not match the rule base
    """
    adam = state.adam
    for name in PARAM_BLOCKS:
        expected = getattr(rb, name).shape
        if adam.first[name].shape != expected or getattr(grads, name).shape != expected:
            raise OptimizerStateError(
                "optimizer state does not match the rule base; reinitialize after structural edits",
                block=name,
                details={"expected": expected, "moments": adam.first[name].shape},
            )

    adam.step += 1
    bc1 = 1.0 - BETA1**adam.step
    bc2 = 1.0 - BETA2**adam.step

    updated: dict[str, FloatArray] = {}
    for name in PARAM_BLOCKS:
        g = getattr(grads, name)
        m = adam.first[name]
        v = adam.second[name]
        m *= BETA1
        m += (1.0 - BETA1) * g
        v *= BETA2
        v += (1.0 - BETA2) * (g * g)
        denom = np.sqrt(v / bc2) + STABILIZER
        updated[name] = getattr(rb, name) - lr * (m / bc1) / denom

    updated["widths"] = np.maximum(updated["widths"], rb.s_floor)
    return rb.replace(**updated), state
