"""
Per-run metrics report.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from adar.core.logging import get_logger
from adar.data.dataset import Dataset
from adar.metrics.accuracy import rmse
from adar.metrics.interpretability import fsp_index, overlap_index, structural_counts
from adar.model.inference import predict_batch
from adar.model.rulebase import RuleBase

logger = get_logger("metrics.report")


@dataclass(frozen=True)
class MetricsReport:
    """
    Accuracy, interpretability and size of one trained rule base.

    Attributes:
        rmse: Test RMSE in original target units
        rmse_standardized: Test RMSE in standardized target units
        i_ov: Average overlap index
        i_fsp: Average fuzzy set position index
        final_rules: Number of rules
        final_attributes: Number of active (rule, attribute) entries
    """

    rmse: float
    rmse_standardized: float
    i_ov: float
    i_fsp: float
    final_rules: int
    final_attributes: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "rmse": self.rmse,
            "rmse_standardized": self.rmse_standardized,
            "i_ov": self.i_ov,
            "i_fsp": self.i_fsp,
            "final_rules": self.final_rules,
            "final_attributes": self.final_attributes,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> MetricsReport:
        return cls(
            rmse=float(data["rmse"]),
            rmse_standardized=float(data["rmse_standardized"]),
            i_ov=float(data["i_ov"]),
            i_fsp=float(data["i_fsp"]),
            final_rules=int(data["final_rules"]),
            final_attributes=int(data["final_attributes"]),
        )


def evaluate(rb: RuleBase, data: Dataset, split: str = "test") -> MetricsReport:
    """Score a rule base on one split of a dataset."""
    X, y = data.arrays(split)
    pred = predict_batch(rb, X)
    stats = data.norm_stats
    final_rules, final_attributes = structural_counts(rb)
    report = MetricsReport(
        rmse=rmse(stats.target_to_original(pred), stats.target_to_original(y)),
        rmse_standardized=rmse(pred, y),
        i_ov=overlap_index(rb),
        i_fsp=fsp_index(rb),
        final_rules=final_rules,
        final_attributes=final_attributes,
    )
    logger.debug(f"{data.name}/{split}: rmse={report.rmse:.4f} rules={final_rules}")
    return report
