"""
Attribute pruning.

An active attribute whose importance weight stays below the threshold for
`persistence` consecutive checks is masked out of its rule. The last active
attribute of a rule is never masked here; removing whole rules is left to
rule pruning.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from adar.core.events import StructuralEvent
from adar.core.exceptions import ShapeMismatchError
from adar.core.logging import get_logger
from adar.core.types import EventKind, IntArray
from adar.model.inference import compute_attribute_weights
from adar.model.rulebase import RuleBase

logger = get_logger("structure.attributes")


@dataclass
class StructuralEdit:
    """
    Outcome of one pruning or growing pass.

    Attributes:
        rulebase: The edited rule base (the input itself when nothing changed)
        streaks: Updated low-weight streak counters, shaped for the edited rule base
        events: Events in application order; group and sequence are assigned by the caller
        removed_rules: Indices of deleted rules, in the original numbering
    """

    rulebase: RuleBase
    streaks: IntArray
    events: list[StructuralEvent] = field(default_factory=list)
    removed_rules: list[int] = field(default_factory=list)

    @property
    def changed(self) -> bool:
        return bool(self.events)


def _exempt_last_attributes(candidates: np.ndarray, active: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Keep one attribute active in every rule whose active attributes all qualify."""
    candidates = candidates.copy()
    for rule in range(active.shape[0]):
        if not active[rule].any() or np.any(active[rule] & ~candidates[rule]):
            continue
        # highest alpha survives; argmax picks the lowest index on ties
        scores = np.where(candidates[rule], alpha[rule], -np.inf)
        candidates[rule, int(np.argmax(scores))] = False
    return candidates


def prune_attributes(
    rb: RuleBase,
    streaks: IntArray,
    theta_attr: float,
    persistence: int,
    epoch: int = 0,
) -> StructuralEdit:
    """
    Run one attribute pruning check.

    Args:
        rb: Current rule base
        streaks: Consecutive low-alpha counts, shape (L, D)
        theta_attr: Pruning threshold on alpha
        persistence: Checks an attribute must stay low before it is masked
        epoch: Epoch stamped on emitted events

    Returns:
        StructuralEdit with the new mask, counters and prune_attr events
    """
    if streaks.shape != rb.attr_mask.shape:
        raise ShapeMismatchError("attribute streaks do not match the rule base", rb.attr_mask.shape, streaks.shape)

    active = rb.active
    alpha = compute_attribute_weights(rb)
    low = active & (alpha < theta_attr)
    streaks = np.where(low, streaks + 1, 0).astype(np.int64)

    candidates = _exempt_last_attributes(low & (streaks >= persistence), active, alpha)
    if not candidates.any():
        return StructuralEdit(rulebase=rb, streaks=streaks)

    mask = rb.attr_mask.copy()
    events: list[StructuralEvent] = []
    for rule, attr in zip(*np.nonzero(candidates), strict=True):
        mask[rule, attr] = 0.0
        events.append(
            StructuralEvent(
                epoch=epoch,
                kind=EventKind.PRUNE_ATTR,
                rule_index=int(rule),
                attr_index=int(attr),
                weight_value=float(alpha[rule, attr]),
            )
        )
    streaks[candidates] = 0
    logger.info(f"Epoch {epoch}: masked {len(events)} attribute(s)")
    return StructuralEdit(rulebase=rb.replace(attr_mask=mask), streaks=streaks, events=events)
