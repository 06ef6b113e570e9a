"""
Training log.

Collects per-epoch records and structural events in order and writes them
as JSONL: one line per epoch record, one line per structural event, in the
order they happened.
"""

from __future__ import annotations

import json
from collections.abc import Iterable
from pathlib import Path
from typing import Any

from adar.core.events import EpochRecord, StructuralEvent
from adar.core.exceptions import ValidationError
from adar.core.types import EventKind

RECORD_EPOCH = "epoch"
RECORD_EVENT = "event"


class TrainingLog:
    """
    Ordered record of one training run.

    Events recorded together via record_group share a group id; every event
    gets the next global sequence number.
    """

    def __init__(self) -> None:
        self._epochs: list[EpochRecord] = []
        self._events: list[StructuralEvent] = []
        self._order: list[tuple[str, int]] = []
        self._next_group = 1
        self._next_sequence = 1

    @property
    def epochs(self) -> list[EpochRecord]:
        return list(self._epochs)

    @property
    def events(self) -> list[StructuralEvent]:
        return list(self._events)

    def record_epoch(self, record: EpochRecord) -> None:
        self._order.append((RECORD_EPOCH, len(self._epochs)))
        self._epochs.append(record)

    def record_group(self, events: Iterable[StructuralEvent]) -> int:
        """
        Record the events of one structural edit under a fresh group id.

        Returns:
            The group id (0 if there were no events)
        """
        batch = list(events)
        if not batch:
            return 0
        group = self._next_group
        self._next_group += 1
        for event in batch:
            event.group = group
            event.sequence = self._next_sequence
            self._next_sequence += 1
            self._order.append((RECORD_EVENT, len(self._events)))
            self._events.append(event)
        return group

    def query(
        self,
        kind: EventKind | None = None,
        from_epoch: int | None = None,
        to_epoch: int | None = None,
    ) -> list[StructuralEvent]:
        """
        Filter structural events.

        Args:
            kind: Only events of this kind
            from_epoch: Events at or after this epoch
            to_epoch: Events at or before this epoch
        """
        results = []
        for event in self._events:
            if kind is not None and event.kind != kind:
                continue
            if from_epoch is not None and event.epoch < from_epoch:
                continue
            if to_epoch is not None and event.epoch > to_epoch:
                continue
            results.append(event)
        return results

    def count(self, kind: EventKind) -> int:
        return sum(1 for event in self._events if event.kind == kind)

    # ------------------------------------------------------------------
    # JSONL codec
    # ------------------------------------------------------------------

    def to_records(self) -> list[dict[str, Any]]:
        records: list[dict[str, Any]] = []
        for record_type, index in self._order:
            if record_type == RECORD_EPOCH:
                records.append({"record": RECORD_EPOCH, **self._epochs[index].to_dict()})
            else:
                records.append({"record": RECORD_EVENT, **self._events[index].to_dict()})
        return records

    def to_jsonl(self) -> str:
        return "".join(json.dumps(record, sort_keys=True) + "\n" for record in self.to_records())

    def write_jsonl(self, path: str | Path) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(self.to_jsonl(), encoding="utf-8")
        return target

    @classmethod
    def from_records(cls, records: Iterable[dict[str, Any]]) -> TrainingLog:
        log = cls()
        for raw in records:
            data = dict(raw)
            record_type = data.pop("record", None)
            if record_type == RECORD_EPOCH:
                log.record_epoch(EpochRecord.from_dict(data))
            elif record_type == RECORD_EVENT:
                event = StructuralEvent.from_dict(data)
                log._order.append((RECORD_EVENT, len(log._events)))
                log._events.append(event)
                log._next_group = max(log._next_group, event.group + 1)
                log._next_sequence = max(log._next_sequence, event.sequence + 1)
            else:
                raise ValidationError("unknown training log record", {"record": record_type})
        return log

    @classmethod
    def read_jsonl(cls, path: str | Path) -> TrainingLog:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return cls.from_records(json.loads(line) for line in lines if line.strip())
