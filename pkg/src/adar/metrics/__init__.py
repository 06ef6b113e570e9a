"""
Metrics module - RMSE, interpretability indices and run reports.
"""

from adar.metrics.accuracy import rmse
from adar.metrics.interpretability import (
    adaptive_simpson,
    fsp_index,
    overlap_index,
    pairwise_overlap,
    structural_counts,
)
from adar.metrics.report import MetricsReport, evaluate

__all__ = [
    "rmse",
    "adaptive_simpson",
    "pairwise_overlap",
    "overlap_index",
    "fsp_index",
    "structural_counts",
    "MetricsReport",
    "evaluate",
]
