"""
Core event types for ADAR training logs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from adar.core.types import EventKind


@dataclass
class StructuralEvent:
    """
    A single structural edit of the rule base.

    Indices are valid at the time the event is applied. Events emitted by
    one edit share a `group`; a rollback event names the group it reverts
    in `details["reverted_group"]`.

    Attributes:
        epoch: Epoch at which the edit happened
        kind: prune_attr, prune_rule, grow or rollback
        rule_index: Affected rule (for a growth rollback, the removed rule;
            None for a pruning rollback)
        attr_index: Affected attribute (prune_attr only)
        weight_value: alpha or beta at decision time
        val_rmse_before: Validation RMSE of the snapshot
        val_rmse_after: Validation RMSE after the edit
        group: Edit batch id
        sequence: Position in the global event order
        details: Extra context
    """

    epoch: int
    kind: EventKind
    rule_index: int | None = None
    attr_index: int | None = None
    weight_value: float | None = None
    val_rmse_before: float | None = None
    val_rmse_after: float | None = None
    group: int = 0
    sequence: int = 0
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary."""
        return {
            "epoch": self.epoch,
            "kind": self.kind.value,
            "rule_index": self.rule_index,
            "attr_index": self.attr_index,
            "weight_value": self.weight_value,
            "val_rmse_before": self.val_rmse_before,
            "val_rmse_after": self.val_rmse_after,
            "group": self.group,
            "sequence": self.sequence,
            "details": self.details,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> StructuralEvent:
        """Create a StructuralEvent from a dictionary."""
        return cls(
            epoch=int(data["epoch"]),
            kind=EventKind(data["kind"]),
            rule_index=data.get("rule_index"),
            attr_index=data.get("attr_index"),
            weight_value=data.get("weight_value"),
            val_rmse_before=data.get("val_rmse_before"),
            val_rmse_after=data.get("val_rmse_after"),
            group=int(data.get("group", 0)),
            sequence=int(data.get("sequence", 0)),
            details=data.get("details", {}),
        )


@dataclass
class EpochRecord:
    """Per-epoch training summary."""

    epoch: int
    train_loss: float
    val_rmse: float
    best_val_rmse: float
    num_rules: int
    active_attr_total: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "epoch": self.epoch,
            "train_loss": self.train_loss,
            "val_rmse": self.val_rmse,
            "best_val_rmse": self.best_val_rmse,
            "L": self.num_rules,
            "active_attr_total": self.active_attr_total,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> EpochRecord:
        return cls(
            epoch=int(data["epoch"]),
            train_loss=float(data["train_loss"]),
            val_rmse=float(data["val_rmse"]),
            best_val_rmse=float(data["best_val_rmse"]),
            num_rules=int(data["L"]),
            active_attr_total=int(data["active_attr_total"]),
        )
