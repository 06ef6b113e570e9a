"""
Structure module - attribute pruning, rule pruning, rule growing and replay.

Example:
    >>> from adar.structure import prune_attributes
    >>> edit = prune_attributes(rulebase, streaks, theta_attr=0.1, persistence=2)
    >>> rulebase = edit.rulebase
"""

from adar.structure.attributes import StructuralEdit, prune_attributes
from adar.structure.replay import replay_masks
from adar.structure.rules import grow_rule, prune_rules, worst_samples

__all__ = [
    "StructuralEdit",
    "prune_attributes",
    "prune_rules",
    "grow_rule",
    "worst_samples",
    "replay_masks",
]
