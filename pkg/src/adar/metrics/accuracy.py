"""
Accuracy metrics.
"""

from __future__ import annotations

import numpy as np

from adar.core.exceptions import ShapeMismatchError, ValidationError
from adar.core.types import FloatArray


def rmse(pred: FloatArray, actual: FloatArray) -> float:
    """
    Root mean squared error.

    Raises:
        ValidationError: If there are no samples
        ShapeMismatchError: If the vectors differ in length
    """
    pred = np.asarray(pred, dtype=np.float64).ravel()
    actual = np.asarray(actual, dtype=np.float64).ravel()
    if pred.shape != actual.shape:
        raise ShapeMismatchError("predictions and targets differ in length", actual.shape, pred.shape)
    if pred.size == 0:
        raise ValidationError("rmse needs at least one sample")
    residuals = pred - actual
    return float(np.sqrt(np.mean(residuals * residuals)))
