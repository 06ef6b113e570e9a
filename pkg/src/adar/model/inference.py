"""
Fuzzy inference for a RuleBase.

Every public operation is a pure function of the rule base and its input.
Batch and single-sample paths share `forward`, so predict_batch agrees with
a loop of predict calls exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from adar.core.exceptions import ShapeMismatchError
from adar.core.types import FloatArray
from adar.model.rulebase import RuleBase


@dataclass(frozen=True)
class InferenceTrace:
    """Intermediate quantities of one prediction, kept for diagnostics."""

    alpha: FloatArray  # (L, D)
    mu: FloatArray  # (L, D)
    firing: FloatArray  # (L,)
    beta: FloatArray  # (L,)
    scaled_firing: FloatArray  # (L,)
    activations: FloatArray  # (L,)
    rule_outputs: FloatArray  # (L,)
    output: float


@dataclass(frozen=True)
class BatchTrace:
    """Intermediate quantities of a batch forward pass, used by backpropagation."""

    inputs: FloatArray  # (N, D)
    alpha: FloatArray  # (L, D)
    beta: FloatArray  # (L,)
    mu: FloatArray  # (N, L, D)
    firing: FloatArray  # (N, L)
    scaled_firing: FloatArray  # (N, L)
    normalizer: FloatArray  # (N,) sum of scaled firing plus epsilon
    activations: FloatArray  # (N, L)
    rule_outputs: FloatArray  # (N, L)
    outputs: FloatArray  # (N,)

    def sample(self, n: int) -> InferenceTrace:
        return InferenceTrace(
            alpha=self.alpha,
            mu=self.mu[n],
            firing=self.firing[n],
            beta=self.beta,
            scaled_firing=self.scaled_firing[n],
            activations=self.activations[n],
            rule_outputs=self.rule_outputs[n],
            output=float(self.outputs[n]),
        )


def compute_attribute_weights(rb: RuleBase) -> FloatArray:
    """alpha = sigmoid(w_a) * m, or the mask alone when attribute weighting is off."""
    if not rb.attr_weighting:
        return rb.attr_mask.copy()
    return expit(rb.attr_logits) * rb.attr_mask


def compute_rule_weights(rb: RuleBase) -> FloatArray:
    """beta = sigmoid(w_r), or ones when rule weighting is off."""
    if not rb.rule_weighting:
        return np.ones(rb.num_rules)
    return expit(rb.rule_logits)


def membership(x: FloatArray | float, v: FloatArray | float, s: FloatArray | float) -> FloatArray:
    """Gaussian membership degree exp(-(x - v)^2 / (2 s^2))."""
    z = (np.asarray(x, dtype=np.float64) - v) / s
    return np.exp(-0.5 * z * z)


def normalized_activations(f: FloatArray, beta: FloatArray, epsilon: float) -> FloatArray:
    """w_l = f_l * beta_l / (sum_m f_m * beta_m + epsilon), along the last axis."""
    scaled = np.asarray(f, dtype=np.float64) * beta
    return scaled / (np.sum(scaled, axis=-1, keepdims=True) + epsilon)


def _check_inputs(rb: RuleBase, X: FloatArray) -> FloatArray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != rb.num_attrs:
        raise ShapeMismatchError(
            "input columns do not match the rule base attributes",
            expected=(-1, rb.num_attrs),
            actual=X.shape,
        )
    return X


def _antecedent_factors(rb: RuleBase, mu: FloatArray, alpha: FloatArray) -> FloatArray:
    factors = mu * alpha
    if rb.strict_mask:
        return factors
    # masked attributes drop out of the product instead of zeroing the rule
    return np.where(rb.active, factors, 1.0)


def forward(rb: RuleBase, X: FloatArray) -> BatchTrace:
    """Run the full inference path on an (N, D) batch."""
    X = _check_inputs(rb, X)
    alpha = compute_attribute_weights(rb)
    beta = compute_rule_weights(rb)

    mu = membership(X[:, None, :], rb.centers, rb.widths)
    firing = np.prod(_antecedent_factors(rb, mu, alpha), axis=2)
    scaled = firing * beta
    normalizer = np.sum(scaled, axis=1) + rb.epsilon
    activations = scaled / normalizer[:, None]

    rule_outputs = np.sum(rb.consequents * rb.attr_mask * X[:, None, :], axis=2)
    if rb.use_bias:
        rule_outputs = rule_outputs + rb.bias

    outputs = np.sum(activations * rule_outputs, axis=1)
    return BatchTrace(
        inputs=X,
        alpha=alpha,
        beta=beta,
        mu=mu,
        firing=firing,
        scaled_firing=scaled,
        normalizer=normalizer,
        activations=activations,
        rule_outputs=rule_outputs,
        outputs=outputs,
    )


def firing_strengths(rb: RuleBase, x: FloatArray) -> FloatArray:
    """Product of mu * alpha over the rule's attributes, per rule."""
    return forward(rb, np.asarray(x, dtype=np.float64)[None, :]).firing[0]


def rule_outputs(rb: RuleBase, x: FloatArray) -> FloatArray:
    """Linear consequent of each rule over its active attributes."""
    return forward(rb, np.asarray(x, dtype=np.float64)[None, :]).rule_outputs[0]


def predict(rb: RuleBase, x: FloatArray) -> tuple[float, InferenceTrace]:
    """Predict one sample and return the full trace."""
    trace = forward(rb, np.asarray(x, dtype=np.float64)[None, :])
    return float(trace.outputs[0]), trace.sample(0)


def predict_batch(rb: RuleBase, X: FloatArray) -> FloatArray:
    """Predict every row of X."""
    return forward(rb, X).outputs
