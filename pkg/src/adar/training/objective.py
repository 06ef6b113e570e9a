"""
Training objective and its exact gradients.

loss = mean squared error + l1_attr * sum(alpha) + l1_rule * sum(beta)

alpha and beta are nonnegative, so the L1 terms are plain sums. Gradients
are derived by hand through the inference path. Antecedent derivatives use
d f / d theta = f * d log(factor) / d theta, which stays exact when a
membership degree underflows to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from adar.core.exceptions import NumericalError, ShapeMismatchError, ValidationError
from adar.core.types import FloatArray
from adar.model.inference import BatchTrace, forward
from adar.model.rulebase import PARAM_BLOCKS, RuleBase


@dataclass
class Gradients:
    """Partial derivatives of the loss, shaped like the RuleBase parameters."""

    centers: FloatArray
    widths: FloatArray
    attr_logits: FloatArray
    rule_logits: FloatArray
    consequents: FloatArray
    bias: FloatArray

    def blocks(self) -> dict[str, FloatArray]:
        return {name: getattr(self, name) for name in PARAM_BLOCKS}

    @classmethod
    def zeros_like(cls, rb: RuleBase) -> Gradients:
        return cls(**{name: np.zeros_like(getattr(rb, name)) for name in PARAM_BLOCKS})


def _check_targets(X: FloatArray, y: FloatArray) -> tuple[FloatArray, FloatArray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValidationError("loss needs a nonempty batch", {"shape": X.shape})
    if y.shape != (X.shape[0],):
        raise ShapeMismatchError("targets do not align with inputs", expected=(X.shape[0],), actual=y.shape)
    return X, y


def _penalty(rb: RuleBase, trace: BatchTrace, l1_attr: float, l1_rule: float) -> float:
    total = 0.0
    if rb.attr_weighting:
        total += l1_attr * float(np.sum(trace.alpha))
    if rb.rule_weighting:
        total += l1_rule * float(np.sum(trace.beta))
    return total


def loss(rb: RuleBase, X: FloatArray, y: FloatArray, l1_attr: float = 0.0, l1_rule: float = 0.0) -> float:
    """Mean squared error plus L1 penalties on the activated importance weights."""
    X, y = _check_targets(X, y)
    trace = forward(rb, X)
    residuals = trace.outputs - y
    return float(np.mean(residuals * residuals)) + _penalty(rb, trace, l1_attr, l1_rule)


def loss_and_gradients(
    rb: RuleBase,
    X: FloatArray,
    y: FloatArray,
    l1_attr: float = 0.0,
    l1_rule: float = 0.0,
) -> tuple[float, Gradients]:
    """Compute the loss and its analytic gradients in one pass."""
    X, y = _check_targets(X, y)
    trace = forward(rb, X)
    n_samples = X.shape[0]
    residuals = trace.outputs - y
    value = float(np.mean(residuals * residuals)) + _penalty(rb, trace, l1_attr, l1_rule)

    active = rb.active
    g_out = 2.0 * residuals / n_samples  # (N,)

    # consequents: y = sum_l w_l * y_l
    g_rule_out = g_out[:, None] * trace.activations  # (N, L)
    g_consequents = (g_rule_out.T @ X) * rb.attr_mask
    g_bias = g_rule_out.sum(axis=0) if rb.use_bias else np.zeros(rb.num_rules)

    # scaled firing: d y / d f~_k = (y_k - y) / (sum f~ + eps)
    g_scaled = g_out[:, None] * (trace.rule_outputs - trace.outputs[:, None]) / trace.normalizer[:, None]

    if rb.rule_weighting:
        beta = trace.beta
        g_beta = np.sum(g_scaled * trace.firing, axis=0) + l1_rule
        g_rule_logits = g_beta * beta * (1.0 - beta)
    else:
        g_rule_logits = np.zeros(rb.num_rules)

    # d loss / d f scaled by f, shared by every antecedent parameter of a rule
    g_log_firing = g_scaled * trace.beta * trace.firing  # (N, L)

    diff = X[:, None, :] - rb.centers  # (N, L, D)
    inv_s2 = 1.0 / (rb.widths * rb.widths)
    g_centers = np.einsum("nl,nld->ld", g_log_firing, diff) * inv_s2 * active
    g_widths = np.einsum("nl,nld->ld", g_log_firing, diff * diff) * inv_s2 / rb.widths * active

    if rb.attr_weighting:
        sig = expit(rb.attr_logits)
        per_rule = np.sum(g_log_firing, axis=0)[:, None]
        g_attr_logits = (per_rule * (1.0 - sig) + l1_attr * sig * (1.0 - sig)) * active
    else:
        g_attr_logits = np.zeros_like(rb.attr_logits)

    grads = Gradients(
        centers=g_centers,
        widths=g_widths,
        attr_logits=g_attr_logits,
        rule_logits=g_rule_logits,
        consequents=g_consequents,
        bias=g_bias,
    )
    for name, block in grads.blocks().items():
        if not np.all(np.isfinite(block)):
            raise NumericalError("non-finite gradient", block=name)
    return value, grads


def gradients(
    rb: RuleBase,
    X: FloatArray,
    y: FloatArray,
    l1_attr: float = 0.0,
    l1_rule: float = 0.0,
) -> Gradients:
    """Exact partial derivatives of the loss with respect to every learnable block."""
    return loss_and_gradients(rb, X, y, l1_attr, l1_rule)[1]


def _shifted(rb: RuleBase, block: str, index: tuple[int, ...], delta: float) -> RuleBase:
    # in-place edit of a private copy; skips validation so widths near the floor can be perturbed
    shifted = rb.copy()
    getattr(shifted, block)[index] += delta
    return shifted


def finite_diff_gradients(
    rb: RuleBase,
    X: FloatArray,
    y: FloatArray,
    l1_attr: float = 0.0,
    l1_rule: float = 0.0,
    h: float = 1e-5,
) -> Gradients:
    """Central-difference gradients, one scalar parameter at a time."""
    if h <= 0:
        raise ValidationError("finite-difference step must be positive", {"h": h})
    result = Gradients.zeros_like(rb)
    for block in PARAM_BLOCKS:
        target = getattr(result, block)
        for index in np.ndindex(target.shape):
            upper = loss(_shifted(rb, block, index, h), X, y, l1_attr, l1_rule)
            lower = loss(_shifted(rb, block, index, -h), X, y, l1_attr, l1_rule)
            target[index] = (upper - lower) / (2.0 * h)
    return result
