"""
Dataset containers.

A Dataset stores standardized features and target together with the
statistics needed to map predictions back to original units, and the
train/val/test row indices it was split into.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from adar.core.exceptions import ShapeMismatchError, ValidationError
from adar.core.types import FloatArray, IntArray

SPLIT_NAMES: tuple[str, ...] = ("train", "val", "test")


@dataclass(frozen=True)
class NormStats:
    """Per-column mean and population std of features and target."""

    x_mean: FloatArray
    x_std: FloatArray
    y_mean: float
    y_std: float

    def target_to_original(self, y: FloatArray) -> FloatArray:
        return np.asarray(y, dtype=np.float64) * self.y_std + self.y_mean

    def features_to_original(self, X: FloatArray) -> FloatArray:
        return np.asarray(X, dtype=np.float64) * self.x_std + self.x_mean

    def to_dict(self) -> dict[str, Any]:
        return {
            "x_mean": self.x_mean.tolist(),
            "x_std": self.x_std.tolist(),
            "y_mean": self.y_mean,
            "y_std": self.y_std,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> NormStats:
        return cls(
            x_mean=np.asarray(data["x_mean"], dtype=np.float64),
            x_std=np.asarray(data["x_std"], dtype=np.float64),
            y_mean=float(data["y_mean"]),
            y_std=float(data["y_std"]),
        )


@dataclass(frozen=True)
class SplitIndices:
    """Disjoint row indices of the three splits."""

    train: IntArray
    val: IntArray
    test: IntArray

    def get(self, name: str) -> IntArray:
        if name not in SPLIT_NAMES:
            raise ValidationError(f"Unknown split: {name}", {"supported": list(SPLIT_NAMES)})
        return getattr(self, name)

    def sizes(self) -> tuple[int, int, int]:
        return int(self.train.size), int(self.val.size), int(self.test.size)

    def to_dict(self) -> dict[str, list[int]]:
        return {name: self.get(name).tolist() for name in SPLIT_NAMES}

    @classmethod
    def from_dict(cls, data: dict[str, list[int]]) -> SplitIndices:
        return cls(**{name: np.asarray(data[name], dtype=np.int64) for name in SPLIT_NAMES})


@dataclass(frozen=True)
class Dataset:
    """
    A standardized regression dataset with its split.

    Attributes:
        name: Dataset name used in reports
        X: Standardized features, shape (N, D)
        y: Standardized target, shape (N,)
        feature_names: Column names of X
        target_name: Column name of y
        norm_stats: Statistics used for standardization
        splits: Train/val/test row indices
        seed: Seed the split was drawn with
        ground_truth_rules: Known rule count for synthetic data
        labels: Ground-truth region of each row for synthetic data
    """

    name: str
    X: FloatArray
    y: FloatArray
    feature_names: tuple[str, ...]
    target_name: str
    norm_stats: NormStats
    splits: SplitIndices
    seed: int
    ground_truth_rules: int | None = None
    labels: IntArray | None = None

    def __post_init__(self) -> None:
        n_samples = self.X.shape[0]
        if self.X.ndim != 2 or self.y.shape != (n_samples,):
            raise ShapeMismatchError("features and target do not align", (n_samples,), self.y.shape)
        if len(self.feature_names) != self.X.shape[1]:
            raise ShapeMismatchError(
                "feature names do not match columns", self.X.shape[1], len(self.feature_names)
            )
        if np.any(self.norm_stats.x_std <= 0) or self.norm_stats.y_std <= 0:
            raise ValidationError("standardization stds must be positive")
        combined = np.concatenate([self.splits.train, self.splits.val, self.splits.test])
        if combined.size != n_samples or not np.array_equal(np.sort(combined), np.arange(n_samples)):
            raise ValidationError("splits must be disjoint and cover every row", {"n_samples": n_samples})

    @property
    def num_samples(self) -> int:
        return int(self.X.shape[0])

    @property
    def num_features(self) -> int:
        return int(self.X.shape[1])

    def arrays(self, split: str) -> tuple[FloatArray, FloatArray]:
        """Standardized (X, y) of one split."""
        index = self.splits.get(split)
        return self.X[index], self.y[index]

    # ------------------------------------------------------------------
    # JSON snapshot
    # ------------------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "X": self.X.tolist(),
            "y": self.y.tolist(),
            "feature_names": list(self.feature_names),
            "target_name": self.target_name,
            "norm_stats": self.norm_stats.to_dict(),
            "splits": self.splits.to_dict(),
            "seed": self.seed,
            "ground_truth_rules": self.ground_truth_rules,
            "labels": None if self.labels is None else self.labels.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Dataset:
        labels = data.get("labels")
        return cls(
            name=data["name"],
            X=np.asarray(data["X"], dtype=np.float64),
            y=np.asarray(data["y"], dtype=np.float64),
            feature_names=tuple(data["feature_names"]),
            target_name=data["target_name"],
            norm_stats=NormStats.from_dict(data["norm_stats"]),
            splits=SplitIndices.from_dict(data["splits"]),
            seed=int(data["seed"]),
            ground_truth_rules=data.get("ground_truth_rules"),
            labels=None if labels is None else np.asarray(labels, dtype=np.int64),
        )

    def write_snapshot(self, path: str | Path) -> Path:
        """Write the dataset as a JSON snapshot for reproducibility."""
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(json.dumps(self.to_dict()), encoding="utf-8")
        return target

    @classmethod
    def read_snapshot(cls, path: str | Path) -> Dataset:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
