"""
Experiments module - declarative specs, grid and ablation runners, reports.

Example:
    >>> import asyncio
    >>> from adar.experiments import ExperimentSpec, run_grid, emit_report
    >>> spec = ExperimentSpec.from_file("experiment.json")
    >>> report = asyncio.run(run_grid(spec))
    >>> emit_report(report, spec.output_dir)
"""

from adar.experiments.report import (
    AGGREGATE_COLUMNS,
    RUN_COLUMNS,
    ExperimentReport,
    RunRow,
    aggregate,
    build_report,
    emit_report,
    load_report,
)
from adar.experiments.runner import (
    DataSource,
    RunPlan,
    plan_runs,
    run_ablation,
    run_experiment,
    run_grid,
    run_single,
)
from adar.experiments.spec import (
    ExperimentSpec,
    GridAxes,
    GridPoint,
    SyntheticSource,
    config_for_mode,
    derive_seed,
    expand_grid,
)

__all__ = [
    "ExperimentSpec",
    "SyntheticSource",
    "GridAxes",
    "GridPoint",
    "expand_grid",
    "derive_seed",
    "config_for_mode",
    "DataSource",
    "RunPlan",
    "plan_runs",
    "run_single",
    "run_experiment",
    "run_grid",
    "run_ablation",
    "RunRow",
    "ExperimentReport",
    "AGGREGATE_COLUMNS",
    "RUN_COLUMNS",
    "aggregate",
    "build_report",
    "emit_report",
    "load_report",
]
