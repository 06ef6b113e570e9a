"""
Training module - objective, exact gradients, Adam and the adaptive training loop.

Example:
    >>> from adar.core.config import TrainConfig
    >>> from adar.training import fit
    >>> rulebase, result = fit(dataset, TrainConfig(epochs=200, max_rules=5))
    >>> result.test_metrics.rmse
"""

from adar.training.objective import Gradients, finite_diff_gradients, gradients, loss, loss_and_gradients
from adar.training.optimizer import AdamState, TrainState, adam_step
from adar.training.trainer import (
    RollbackCheck,
    TrainingResult,
    compare_on_validation,
    evaluate_rollback,
    fit,
    validation_rmse,
)

__all__ = [
    "Gradients",
    "loss",
    "loss_and_gradients",
    "gradients",
    "finite_diff_gradients",
    "AdamState",
    "TrainState",
    "adam_step",
    "RollbackCheck",
    "TrainingResult",
    "compare_on_validation",
    "evaluate_rollback",
    "fit",
    "validation_rmse",
]
