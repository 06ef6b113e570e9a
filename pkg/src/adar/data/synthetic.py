"""
Synthetic regression data with a known rule count.

piecewise_linear: three regions along the first feature, each with its own
linear map, so three first-order TSK rules represent the target exactly.

gaussian_bumps: a sum of three Gaussian bumps; each bump is one rule.

Features are drawn before the noise, so datasets that differ only in
noise_std share the same X.
"""

from __future__ import annotations

import numpy as np

from adar.core.exceptions import ValidationError
from adar.core.types import FloatArray, IntArray, SyntheticKind
from adar.data.dataset import Dataset
from adar.data.preprocessing import build_dataset

NUM_REGIONS = 3
FEATURE_RANGE = 3.0
REGION_EDGES = (-1.0, 1.0)
BUMP_WIDTH = 0.8


def _piecewise_linear(X: FloatArray, rng: np.random.Generator) -> tuple[FloatArray, IntArray]:
    labels = np.digitize(X[:, 0], REGION_EDGES).astype(np.int64)
    slopes = rng.normal(0.0, 2.0, size=(NUM_REGIONS, X.shape[1]))
    intercepts = rng.normal(0.0, 2.0, size=NUM_REGIONS)
    y = np.einsum("nd,nd->n", X, slopes[labels]) + intercepts[labels]
    return y, labels


def _gaussian_bumps(X: FloatArray, rng: np.random.Generator) -> tuple[FloatArray, IntArray]:
    centers = rng.uniform(-2.0, 2.0, size=(NUM_REGIONS, X.shape[1]))
    heights = rng.uniform(1.0, 3.0, size=NUM_REGIONS) * rng.choice([-1.0, 1.0], size=NUM_REGIONS)
    d2 = np.sum((X[:, None, :] - centers[None, :, :]) ** 2, axis=2)
    bumps = heights * np.exp(-0.5 * d2 / BUMP_WIDTH**2)
    return bumps.sum(axis=1), np.argmax(np.abs(bumps), axis=1).astype(np.int64)


def synthesize(
    kind: SyntheticKind | str,
    n_samples: int,
    n_features: int,
    noise_std: float = 0.0,
    seed: int = 0,
    split_seed: int | None = None,
) -> Dataset:
    """
    Generate a standardized, split synthetic Dataset.

    Args:
        kind: piecewise_linear or gaussian_bumps
        n_samples: Rows; below MIN_SAMPLES every row goes to train
        n_features: Feature columns
        noise_std: Std of Gaussian noise added to the target, original units
        seed: Seed for data and noise (and the split unless split_seed is given)
        split_seed: Seed for the train/val/test split

    Raises:
        ValidationError: On non-positive sizes or negative noise
    """
    kind = SyntheticKind(kind)
    if n_samples < 1 or n_features < 1:
        raise ValidationError(
            "synthetic data needs at least one row and one feature",
            {"n_samples": n_samples, "n_features": n_features},
        )
    if noise_std < 0:
        raise ValidationError("noise_std must be non-negative", {"noise_std": noise_std})

    rng = np.random.default_rng(seed)
    X = rng.uniform(-FEATURE_RANGE, FEATURE_RANGE, size=(n_samples, n_features))
    if kind == SyntheticKind.PIECEWISE_LINEAR:
        y, labels = _piecewise_linear(X, rng)
    else:
        y, labels = _gaussian_bumps(X, rng)
    y = y + noise_std * rng.standard_normal(n_samples)

    return build_dataset(
        name=kind.value,
        X=X,
        y=y,
        feature_names=[f"x{i}" for i in range(n_features)],
        target_name="y",
        seed=seed if split_seed is None else split_seed,
        ground_truth_rules=NUM_REGIONS,
        labels=labels,
        allow_small=True,
    )
