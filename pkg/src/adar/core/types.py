"""
Type definitions for ADAR.

Enums and small value types shared across the package.
"""

from __future__ import annotations

from enum import Enum
from typing import TypeAlias

import numpy as np
import numpy.typing as npt

FloatArray: TypeAlias = npt.NDArray[np.float64]
IntArray: TypeAlias = npt.NDArray[np.int64]


class EventKind(str, Enum):
    """Kinds of structural events recorded during training."""

    PRUNE_ATTR = "prune_attr"
    PRUNE_RULE = "prune_rule"
    GROW = "grow"
    ROLLBACK = "rollback"


class RollbackDecision(str, Enum):
    """Outcome of comparing a structural edit against its snapshot."""

    KEEP = "keep"
    RESTORE = "restore"


class MissingPolicy(str, Enum):
    """How missing or non-numeric CSV cells are handled."""

    DROP = "drop"
    IMPUTE_MEAN = "impute_mean"

    @classmethod
    def from_string(cls, value: str) -> MissingPolicy:
        normalized = value.lower().replace("-", "_")
        for member in cls:
            if member.value == normalized:
                return member
        raise ValueError(f"Unknown missing policy: {value}. Supported: {[p.value for p in cls]}")


class SyntheticKind(str, Enum):
    """Synthetic target families with a known TSK rule count."""

    PIECEWISE_LINEAR = "piecewise_linear"
    GAUSSIAN_BUMPS = "gaussian_bumps"


class AblationMode(str, Enum):
    """The four ablation configurations."""

    BASELINE = "baseline"  # no weighting, no AP, no RG&RP
    BASELINE_AP = "baseline_ap"  # attribute weighting + AP
    BASELINE_RGRP = "baseline_rgrp"  # rule weighting + RG&RP
    FULL = "full"  # ADAR-ANFIS

    @property
    def label(self) -> str:
        return {
            AblationMode.BASELINE: "ANFIS",
            AblationMode.BASELINE_AP: "ANFIS+AP",
            AblationMode.BASELINE_RGRP: "ANFIS+RG&RP",
            AblationMode.FULL: "ADAR-ANFIS",
        }[self]

    @property
    def ap_enabled(self) -> bool:
        return self in (AblationMode.BASELINE_AP, AblationMode.FULL)

    @property
    def rgrp_enabled(self) -> bool:
        return self in (AblationMode.BASELINE_RGRP, AblationMode.FULL)


class ReportFormat(str, Enum):
    """Output formats for experiment reports."""

    CSV = "csv"
    JSON = "json"


class RunStatus(str, Enum):
    """Status of one experiment run."""

    COMPLETED = "completed"
    FAILED = "failed"
