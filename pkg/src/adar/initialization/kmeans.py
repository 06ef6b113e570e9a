"""
Deterministic K-means with k-means++ seeding.

Lloyd iterations run until no assignment changes or max_iter is reached.
An empty cluster is re-seeded at the point farthest from its current
center, which keeps inertia non-increasing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from adar.core.exceptions import ConfigurationError
from adar.core.logging import get_logger
from adar.core.types import FloatArray, IntArray

logger = get_logger("initialization.kmeans")

SeedLike = int | np.random.SeedSequence


@dataclass
class KMeansResult:
    """
    Result of a K-means run.

    Attributes:
        centers: Cluster centers, shape (k, D)
        assignments: Cluster index per sample, shape (N,)
        inertia: Sum of squared distances to assigned centers
        n_iter: Lloyd iterations performed
        inertia_history: Inertia after each assignment step
    """

    centers: FloatArray
    assignments: IntArray
    inertia: float
    n_iter: int
    inertia_history: list[float] = field(default_factory=list)


def _squared_distances(X: FloatArray, centers: FloatArray) -> FloatArray:
    diff = X[:, None, :] - centers[None, :, :]
    return np.sum(diff * diff, axis=2)


def kmeans_plusplus(X: FloatArray, k: int, rng: np.random.Generator) -> FloatArray:
    """Pick k initial centers with D^2 weighting."""
    n_samples = X.shape[0]
    centers = np.empty((k, X.shape[1]), dtype=np.float64)
    centers[0] = X[rng.integers(0, n_samples)]

    closest = _squared_distances(X, centers[:1])[:, 0]
    for i in range(1, k):
        total = closest.sum()
        if total <= 0.0:
            # fewer distinct points than clusters
            next_idx = int(rng.integers(0, n_samples))
        else:
            next_idx = int(rng.choice(n_samples, p=closest / total))
        centers[i] = X[next_idx]
        closest = np.minimum(closest, _squared_distances(X, centers[i : i + 1])[:, 0])
    return centers


def _repair_empty(X: FloatArray, labels: IntArray, d2: FloatArray, k: int) -> IntArray:
    """Move the farthest point of a multi-member cluster into each empty cluster."""
    labels = labels.copy()
    for j in range(k):
        if np.any(labels == j):
            continue
        counts = np.bincount(labels, minlength=k)
        own = d2[np.arange(X.shape[0]), labels]
        candidates = np.where(counts[labels] > 1, own, -1.0)
        farthest = int(np.argmax(candidates))
        logger.debug(f"Re-seeding empty cluster {j} at sample {farthest}")
        labels[farthest] = j
        d2[farthest, j] = 0.0
    return labels


def _cluster_means(X: FloatArray, labels: IntArray, k: int) -> FloatArray:
    centers = np.empty((k, X.shape[1]), dtype=np.float64)
    for j in range(k):
        centers[j] = X[labels == j].mean(axis=0)
    return centers


def kmeans(X: FloatArray, k: int, seed: SeedLike, max_iter: int = 300) -> KMeansResult:
    """
    Cluster the rows of X into k groups.

    Args:
        X: Data matrix, shape (N, D)
        k: Number of clusters
        seed: Seed for k-means++ seeding
        max_iter: Maximum Lloyd iterations

    Returns:
        KMeansResult

    Raises:
        ConfigurationError: If k < 1 or there are fewer samples than clusters
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ConfigurationError("K-means input must be a matrix", {"ndim": X.ndim})
    n_samples = X.shape[0]
    if k < 1 or n_samples < k:
        raise ConfigurationError(
            "K-means needs at least as many samples as clusters",
            {"n_samples": n_samples, "k": k},
        )

    rng = np.random.default_rng(seed)
    centers = kmeans_plusplus(X, k, rng)
    labels: IntArray | None = None
    history: list[float] = []
    n_iter = 0

    for n_iter in range(1, max_iter + 1):
        d2 = _squared_distances(X, centers)
        new_labels = np.argmin(d2, axis=1).astype(np.int64)
        history.append(float(d2[np.arange(n_samples), new_labels].sum()))
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = _repair_empty(X, new_labels, d2, k)
        centers = _cluster_means(X, labels, k)

    d2 = _squared_distances(X, centers)
    final_labels = np.argmin(d2, axis=1).astype(np.int64)
    inertia = float(d2[np.arange(n_samples), final_labels].sum())
    return KMeansResult(
        centers=centers,
        assignments=final_labels,
        inertia=inertia,
        n_iter=n_iter,
        inertia_history=history,
    )
