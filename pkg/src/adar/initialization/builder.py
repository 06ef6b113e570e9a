"""
Initial rule base construction.

Standardized training data is clustered with K-means. Each cluster becomes
one rule: its centroid gives the Gaussian centers and its per-feature
standard deviation gives the widths. Attribute logits and consequents are
sampled from Gaussians; rule logits start equal so every rule contributes
equally at step zero.
"""

from __future__ import annotations

import numpy as np

from adar.core.config import TrainConfig
from adar.core.logging import get_logger
from adar.core.types import FloatArray
from adar.initialization.kmeans import kmeans
from adar.model.rulebase import RuleBase

logger = get_logger("initialization.builder")


def cluster_widths(X: FloatArray, assignments: np.ndarray, k: int, s_floor: float) -> FloatArray:
    """Population std of each feature within each cluster, floored at s_floor."""
    widths = np.empty((k, X.shape[1]), dtype=np.float64)
    for rule in range(k):
        members = X[assignments == rule]
        if members.shape[0] == 0:
            widths[rule] = X.std(axis=0)
        else:
            widths[rule] = members.std(axis=0)
    return np.maximum(widths, s_floor)


def init_rulebase(X: FloatArray, k: int, seed: int, cfg: TrainConfig) -> RuleBase:
    """
    Build a k-rule RuleBase from standardized training data.

    Args:
        X: Standardized training features, shape (N, D)
        k: Number of initial rules
        seed: Run seed
        cfg: Training configuration (floor, sampling scales, flags)

    Returns:
        A fresh RuleBase with every attribute mask set to 1

    Raises:
        ConfigurationError: Propagated from kmeans when N < k
    """
    X = np.asarray(X, dtype=np.float64)
    cluster_seed, param_seed = np.random.SeedSequence(seed).spawn(2)
    result = kmeans(X, k, cluster_seed, max_iter=cfg.kmeans_max_iter)
    rng = np.random.default_rng(param_seed)
    num_attrs = X.shape[1]

    rulebase = RuleBase(
        centers=result.centers.copy(),
        widths=cluster_widths(X, result.assignments, k, cfg.s_floor),
        attr_logits=rng.normal(0.0, cfg.attr_logit_std, size=(k, num_attrs)),
        attr_mask=np.ones((k, num_attrs)),
        rule_logits=np.full(k, cfg.rule_logit_init),
        consequents=rng.normal(0.0, cfg.consequent_std, size=(k, num_attrs)),
        bias=np.zeros(k),
        epsilon=cfg.epsilon,
        s_floor=cfg.s_floor,
        use_bias=cfg.use_bias,
        strict_mask=cfg.strict_mask,
        attr_weighting=cfg.attr_weighting,
        rule_weighting=cfg.rule_weighting,
    )
    logger.debug(
        f"Initialized {k} rules over {num_attrs} attributes "
        f"(K-means inertia {result.inertia:.4f}, {result.n_iter} iterations)"
    )
    return rulebase
