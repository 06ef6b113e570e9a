"""
ADAR - Adaptive neuro-fuzzy regression with attribute and rule importance weights

A Gaussian first-order TSK fuzzy model that learns which attributes and
rules matter, prunes the ones that do not, and grows rules where the model
is wrong.

Usage:
    >>> from adar import TrainConfig, fit, synthesize
    >>>
    >>> data = synthesize("piecewise_linear", n_samples=2000, n_features=3, seed=0)
    >>> rulebase, result = fit(data, TrainConfig(epochs=300, batch_size=64, max_rules=8))
    >>> result.test_metrics.final_rules, result.test_metrics.rmse
"""

from adar.core.config import Settings, TrainConfig
from adar.core.events import EpochRecord, StructuralEvent
from adar.core.exceptions import (
    AdarError,
    CapacityError,
    ConfigurationError,
    NumericalError,
    OptimizerStateError,
    RunError,
    SchemaError,
    ShapeMismatchError,
    ValidationError,
)
from adar.core.logging import configure_logging, get_logger
from adar.core.types import AblationMode, EventKind, MissingPolicy, RollbackDecision, SyntheticKind
from adar.data import Dataset, DatasetSchema, load_csv, load_dataset, synthesize
from adar.initialization import init_rulebase, kmeans
from adar.metrics import MetricsReport, evaluate, fsp_index, overlap_index, pairwise_overlap, rmse
from adar.model import RuleBase, predict, predict_batch
from adar.structure import grow_rule, prune_attributes, prune_rules, replay_masks
from adar.training import TrainingResult, evaluate_rollback, fit

__all__ = [
    # Configuration
    "TrainConfig",
    "Settings",
    # Model
    "RuleBase",
    "predict",
    "predict_batch",
    "init_rulebase",
    "kmeans",
    # Training
    "fit",
    "evaluate_rollback",
    "TrainingResult",
    # Structure
    "prune_attributes",
    "prune_rules",
    "grow_rule",
    "replay_masks",
    # Metrics
    "rmse",
    "pairwise_overlap",
    "overlap_index",
    "fsp_index",
    "evaluate",
    "MetricsReport",
    # Data
    "Dataset",
    "DatasetSchema",
    "load_csv",
    "load_dataset",
    "synthesize",
    # Types and events
    "AblationMode",
    "EventKind",
    "MissingPolicy",
    "RollbackDecision",
    "SyntheticKind",
    "StructuralEvent",
    "EpochRecord",
    # Exceptions
    "AdarError",
    "ConfigurationError",
    "ValidationError",
    "ShapeMismatchError",
    "SchemaError",
    "NumericalError",
    "CapacityError",
    "OptimizerStateError",
    "RunError",
    # Logging
    "configure_logging",
    "get_logger",
]
