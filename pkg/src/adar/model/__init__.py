"""
Model module - Rule base parameterization and fuzzy inference.

Example:
    >>> from adar.model import RuleBase, predict_batch
    >>> y_hat = predict_batch(rulebase, X)
"""

from adar.model.inference import (
    BatchTrace,
    InferenceTrace,
    compute_attribute_weights,
    compute_rule_weights,
    firing_strengths,
    forward,
    membership,
    normalized_activations,
    predict,
    predict_batch,
    rule_outputs,
)
from adar.model.rulebase import PARAM_BLOCKS, RuleBase

__all__ = [
    "RuleBase",
    "PARAM_BLOCKS",
    "InferenceTrace",
    "BatchTrace",
    "compute_attribute_weights",
    "compute_rule_weights",
    "membership",
    "firing_strengths",
    "normalized_activations",
    "rule_outputs",
    "forward",
    "predict",
    "predict_batch",
]
