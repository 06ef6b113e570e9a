"""
Experiment reports.

Per-run rows are aggregated per (configuration, mode, rule budget) into
mean and population std. Both tables are written as CSV and/or JSON with a
fixed column order and no timestamps, so identical runs give identical
files.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from adar.core.exceptions import AdarError, ValidationError
from adar.core.logging import get_logger
from adar.core.types import AblationMode, ReportFormat, RunStatus
from adar.metrics.report import MetricsReport

logger = get_logger("experiments.report")

RUNS_FILE = "runs"
AGGREGATE_FILE = "aggregate"

# metric attribute -> aggregate column suffix
AGGREGATED_METRICS: dict[str, str] = {
    "rmse": "Test_RMSE",
    "i_ov": "I_ov",
    "i_fsp": "I_fsp",
    "final_rules": "Final_Rules",
    "final_attributes": "Final_Attributes",
    "rmse_standardized": "Test_RMSE_Standardized",
}

AGGREGATE_COLUMNS: tuple[str, ...] = (
    "Param_Set",
    "Average_Test_RMSE",
    "Average_I_ov",
    "Average_I_fsp",
    "Average_Final_Rules",
    "Average_Final_Attributes",
    "Average_Test_RMSE_Standardized",
    "Std_Test_RMSE",
    "Std_I_ov",
    "Std_I_fsp",
    "Std_Final_Rules",
    "Std_Final_Attributes",
    "Std_Test_RMSE_Standardized",
    "Mode",
    "Max_Rules",
    "Runs",
    "Failed_Runs",
)

RUN_COLUMNS: tuple[str, ...] = (
    "run_id",
    "dataset",
    "config_id",
    "mode",
    "max_rules",
    "repeat",
    "seed",
    "rmse",
    "rmse_standardized",
    "i_ov",
    "i_fsp",
    "final_rules",
    "final_attributes",
    "status",
    "error",
    "event_log",
)


@dataclass
class RunRow:
    """
    Result of one run.

    Metric fields are NaN for failed runs.
    """

    run_id: str
    dataset: str
    config_id: str
    mode: AblationMode
    max_rules: int
    repeat: int
    seed: int
    rmse: float = math.nan
    rmse_standardized: float = math.nan
    i_ov: float = math.nan
    i_fsp: float = math.nan
    final_rules: float = math.nan
    final_attributes: float = math.nan
    status: RunStatus = RunStatus.COMPLETED
    error: str | None = None
    event_log: str | None = None

    @property
    def completed(self) -> bool:
        return self.status == RunStatus.COMPLETED

    def with_metrics(self, metrics: MetricsReport) -> RunRow:
        values = asdict(self) | metrics.to_dict()
        values["mode"] = self.mode
        values["status"] = RunStatus.COMPLETED
        return RunRow(**values)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["mode"] = self.mode.value
        data["status"] = self.status.value
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RunRow:
        values = {name: data.get(name) for name in RUN_COLUMNS}
        for name in ("rmse", "rmse_standardized", "i_ov", "i_fsp", "final_rules", "final_attributes"):
            raw = values[name]
            values[name] = math.nan if raw is None else float(raw)
        values["mode"] = AblationMode(values["mode"])
        values["status"] = RunStatus(values["status"])
        values["max_rules"] = int(values["max_rules"])
        values["repeat"] = int(values["repeat"])
        values["seed"] = int(values["seed"])
        return cls(**values)


@dataclass
class ExperimentReport:
    """Per-run rows plus their aggregates."""

    runs: list[RunRow]
    aggregates: list[dict[str, Any]] = field(default_factory=list)

    @property
    def failed_runs(self) -> list[RunRow]:
        return [row for row in self.runs if not row.completed]

    @property
    def event_logs(self) -> list[str]:
        return [row.event_log for row in self.runs if row.event_log]


def param_set_label(config_id: str, mode: AblationMode) -> str:
    """Grid label, or the mode label for experiments without a grid."""
    if config_id == "default":
        return mode.label
    return config_id


def aggregate(runs: list[RunRow]) -> list[dict[str, Any]]:
    """
    Mean and population std per (config_id, mode, max_rules).

    Groups appear in the order of their first run. Failed runs are counted
    but excluded from the statistics.
    """
    groups: dict[tuple[str, AblationMode, int], list[RunRow]] = {}
    for row in runs:
        groups.setdefault((row.config_id, row.mode, row.max_rules), []).append(row)

    table = []
    for (config_id, mode, max_rules), rows in groups.items():
        completed = [row for row in rows if row.completed]
        failed = len(rows) - len(completed)
        if failed:
            logger.warning(f"{config_id}/{mode.value}/L{max_rules}: {failed} of {len(rows)} run(s) failed")

        entry: dict[str, Any] = {"Param_Set": param_set_label(config_id, mode)}
        for attribute, suffix in AGGREGATED_METRICS.items():
            values = np.asarray([getattr(row, attribute) for row in completed], dtype=np.float64)
            entry[f"Average_{suffix}"] = float(values.mean()) if values.size else math.nan
            entry[f"Std_{suffix}"] = float(values.std(ddof=0)) if values.size else math.nan
        entry.update({"Mode": mode.value, "Max_Rules": max_rules, "Runs": len(completed), "Failed_Runs": failed})
        table.append({column: entry[column] for column in AGGREGATE_COLUMNS})
    return table


def build_report(runs: list[RunRow]) -> ExperimentReport:
    return ExperimentReport(runs=runs, aggregates=aggregate(runs))


def _json_ready(records: list[dict[str, Any]]) -> list[dict[str, Any]]:
    # NaN is not valid JSON
    return [
        {key: (None if isinstance(value, float) and math.isnan(value) else value) for key, value in record.items()}
        for record in records
    ]


def emit_report(
    report: ExperimentReport,
    out_dir: str | Path,
    formats: tuple[ReportFormat, ...] = (ReportFormat.CSV, ReportFormat.JSON),
) -> list[Path]:
    """
    Write aggregate and per-run tables.

    Returns:
        Paths written, in a fixed order

    Raises:
        ValidationError: If the report has no runs
        AdarError: If the output directory cannot be written
    """
    if not report.runs:
        raise ValidationError("cannot emit an empty report")
    target = Path(out_dir)
    tables = {
        AGGREGATE_FILE: (report.aggregates, AGGREGATE_COLUMNS),
        RUNS_FILE: ([row.to_dict() for row in report.runs], RUN_COLUMNS),
    }
    written: list[Path] = []
    try:
        target.mkdir(parents=True, exist_ok=True)
        for stem, (records, columns) in tables.items():
            for fmt in formats:
                path = target / f"{stem}.{fmt.value}"
                if fmt == ReportFormat.CSV:
                    pd.DataFrame.from_records(records, columns=list(columns)).to_csv(path, index=False)
                else:
                    path.write_text(json.dumps(_json_ready(records), indent=2) + "\n", encoding="utf-8")
                written.append(path)
    except OSError as exc:
        raise AdarError("cannot write report", {"out_dir": str(target), "error": str(exc)}) from exc
    logger.info(f"Wrote {len(written)} report file(s) to {target}")
    return written


def _read_runs_csv(path: Path) -> list[dict[str, Any]]:
    text_columns = {name: str for name in ("run_id", "dataset", "config_id", "mode", "status", "error", "event_log")}
    frame = pd.read_csv(path, dtype=text_columns)
    # empty cells come back as NaN
    return frame.astype(object).where(frame.notna(), None).to_dict(orient="records")


def load_report(out_dir: str | Path) -> ExperimentReport:
    """
    Reload per-run rows and recompute the aggregates.

    Reads runs.json, or runs.csv when the report was written as CSV only.

    Raises:
        ValidationError: If neither file exists
    """
    base = Path(out_dir) / RUNS_FILE
    json_path = base.with_suffix(f".{ReportFormat.JSON.value}")
    csv_path = base.with_suffix(f".{ReportFormat.CSV.value}")
    if json_path.is_file():
        records = json.loads(json_path.read_text(encoding="utf-8"))
    elif csv_path.is_file():
        records = _read_runs_csv(csv_path)
    else:
        raise ValidationError("no per-run report found", {"paths": [str(json_path), str(csv_path)]})
    return build_report([RunRow.from_dict(record) for record in records])
