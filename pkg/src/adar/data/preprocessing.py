"""
Standardization and splitting.

Statistics are computed on the full table before splitting, with the
population std. The split holds out 20% for test and 20% of the rest for
validation, giving 64/16/20 overall.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from adar.core.exceptions import ValidationError
from adar.core.logging import get_logger
from adar.core.types import FloatArray, IntArray
from adar.data.dataset import Dataset, NormStats, SplitIndices

logger = get_logger("data.preprocessing")

MIN_SAMPLES = 10
TEST_FRACTION = 0.2
VAL_FRACTION = 0.2


def _column_stats(
    values: FloatArray, names: Sequence[str], allow_constant: bool
) -> tuple[FloatArray, FloatArray]:
    mean = values.mean(axis=0)
    std = values.std(axis=0)
    constant = [names[i] for i in np.nonzero(std <= 0.0)[0]]
    if constant and allow_constant:
        # centred but not scaled
        return mean, np.where(std > 0.0, std, 1.0)
    if constant:
        raise ValidationError(
            "constant column cannot be standardized; remove it from the schema",
            {"columns": constant},
        )
    return mean, std


def standardize(
    X: FloatArray,
    y: FloatArray,
    feature_names: Sequence[str] | None = None,
    target_name: str = "target",
    allow_constant: bool = False,
) -> tuple[FloatArray, FloatArray, NormStats]:
    """
    Z-score every feature column and the target.

    Args:
        allow_constant: Center zero-variance columns with std 1 instead of raising

    Returns:
        (X_standardized, y_standardized, norm_stats)

    Raises:
        ValidationError: If any column has zero variance and allow_constant is off
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    names = list(feature_names) if feature_names is not None else [f"x{i}" for i in range(X.shape[1])]
    x_mean, x_std = _column_stats(X, names, allow_constant)
    y_mean, y_std = _column_stats(y[:, None], [target_name], allow_constant)
    stats = NormStats(x_mean=x_mean, x_std=x_std, y_mean=float(y_mean[0]), y_std=float(y_std[0]))
    return (X - x_mean) / x_std, (y - stats.y_mean) / stats.y_std, stats


def destandardize(values: FloatArray, mean: FloatArray | float, std: FloatArray | float) -> FloatArray:
    """Inverse of the z-score transform."""
    return np.asarray(values, dtype=np.float64) * std + mean


def _half_up(value: float) -> int:
    return int(np.floor(value + 0.5))


def split(n_samples: int, seed: int) -> SplitIndices:
    """
    Seeded train/val/test split of n_samples rows.

    Raises:
        ValidationError: If n_samples < 10
    """
    if n_samples < MIN_SAMPLES:
        raise ValidationError(
            f"need at least {MIN_SAMPLES} rows to split", {"n_samples": n_samples}
        )
    order: IntArray = np.random.default_rng(seed).permutation(n_samples).astype(np.int64)
    n_test = _half_up(TEST_FRACTION * n_samples)
    n_val = _half_up(VAL_FRACTION * (n_samples - n_test))
    return SplitIndices(
        train=np.sort(order[n_test + n_val :]),
        val=np.sort(order[n_test : n_test + n_val]),
        test=np.sort(order[:n_test]),
    )


def train_only_split(n_samples: int) -> SplitIndices:
    """Every row in train, empty val and test. For sets too small to split."""
    empty = np.empty(0, dtype=np.int64)
    return SplitIndices(train=np.arange(n_samples, dtype=np.int64), val=empty, test=empty.copy())


def build_dataset(
    name: str,
    X: FloatArray,
    y: FloatArray,
    feature_names: Sequence[str],
    target_name: str,
    seed: int,
    ground_truth_rules: int | None = None,
    labels: IntArray | None = None,
    allow_small: bool = False,
) -> Dataset:
    """
    Standardize raw arrays and split them into a Dataset.

    With allow_small, fewer than MIN_SAMPLES rows go entirely to train and
    constant columns are centred instead of rejected.
    """
    small = allow_small and len(X) < MIN_SAMPLES
    Xs, ys, stats = standardize(X, y, feature_names, target_name, allow_constant=small)
    splits = train_only_split(Xs.shape[0]) if small else split(Xs.shape[0], seed)
    logger.debug(f"Dataset {name}: {Xs.shape[0]} rows x {Xs.shape[1]} features, split {splits.sizes()}")
    return Dataset(
        name=name,
        X=Xs,
        y=ys,
        feature_names=tuple(feature_names),
        target_name=target_name,
        norm_stats=stats,
        splits=splits,
        seed=seed,
        ground_truth_rules=ground_truth_rules,
        labels=labels,
    )
