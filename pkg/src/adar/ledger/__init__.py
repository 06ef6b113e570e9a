"""
Ledger module - ordered training log of epochs and structural events.
"""

from adar.ledger.event_log import TrainingLog

__all__ = ["TrainingLog"]
