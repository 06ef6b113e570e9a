"""
Structural replay of a training event log.

Applying the logged events to a fresh all-ones mask of the initial shape
reproduces the final attribute mask and rule count. Rolling back a pruning
group restores the structure as it was before the group's first event;
rolling back a growth deletes the row the rollback event names, since
edits made after the growth are kept.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from adar.core.events import StructuralEvent
from adar.core.exceptions import ValidationError
from adar.core.types import EventKind, FloatArray


def replay_masks(num_rules: int, num_attrs: int, events: Iterable[StructuralEvent]) -> tuple[FloatArray, int]:
    """
    Rebuild the attribute mask from an event sequence.

    Args:
        num_rules: Rule count of the initial rule base
        num_attrs: Attribute count
        events: Logged events; applied in (epoch, sequence) order

    Returns:
        (mask, num_rules) after every event

    Raises:
        ValidationError: If an event references a missing rule or an unknown group
    """
    mask = np.ones((num_rules, num_attrs), dtype=np.float64)
    snapshots: dict[int, FloatArray] = {}
    kinds: dict[int, EventKind] = {}

    for event in sorted(events, key=lambda e: (e.epoch, e.sequence)):
        if event.kind == EventKind.ROLLBACK:
            group = event.details.get("reverted_group")
            if group not in snapshots:
                raise ValidationError("rollback references an unknown group", {"group": group})
            if kinds[group] != EventKind.GROW:
                mask = snapshots[group].copy()
                continue

        snapshots.setdefault(event.group, mask.copy())
        kinds.setdefault(event.group, event.kind)
        if event.kind == EventKind.GROW:
            mask = np.vstack([mask, np.ones(num_attrs)])
            continue
        if event.rule_index is None or not 0 <= event.rule_index < mask.shape[0]:
            raise ValidationError("event references a missing rule", {"sequence": event.sequence})
        if event.kind in (EventKind.PRUNE_RULE, EventKind.ROLLBACK):
            mask = np.delete(mask, event.rule_index, axis=0)
        elif event.kind == EventKind.PRUNE_ATTR:
            mask[event.rule_index, event.attr_index] = 0.0

    return mask, int(mask.shape[0])
