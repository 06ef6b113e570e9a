"""
Experiment execution.

run_single trains and scores one (configuration, mode, rule budget, repeat)
combination and writes its artifacts under <output_dir>/runs/<run_id>/.
run_experiment executes every combination of a spec on worker threads,
at most `concurrency` at a time, and returns rows in plan order, so the
report does not depend on concurrency.

Within a repeat, every configuration and mode sees the same data split;
the split seed is derived from the repeat index alone.
"""

from __future__ import annotations

import asyncio
import json
from dataclasses import dataclass
from pathlib import Path

from adar.core.config import TrainConfig
from adar.core.exceptions import AdarError, RunError
from adar.core.logging import get_logger
from adar.core.types import AblationMode, RunStatus
from adar.data.dataset import Dataset
from adar.data.loader import RawTable, load_csv
from adar.data.preprocessing import build_dataset
from adar.data.synthetic import synthesize
from adar.experiments.report import ExperimentReport, RunRow, build_report
from adar.experiments.spec import (
    ExperimentSpec,
    GridAxes,
    GridPoint,
    config_for_mode,
    derive_seed,
    expand_grid,
)
from adar.training.trainer import TrainingResult, fit

logger = get_logger("experiments.runner")

SPLIT_CONFIG_ID = "split"


@dataclass(frozen=True)
class RunPlan:
    """Everything needed to execute one run."""

    run_id: str
    config_id: str
    mode: AblationMode
    max_rules: int
    repeat: int
    seed: int
    split_seed: int
    config: TrainConfig


class DataSource:
    """Loads the experiment's data once and re-splits it per repeat."""

    def __init__(self, spec: ExperimentSpec) -> None:
        self._spec = spec
        self._table: RawTable | None = None
        if spec.dataset is not None and spec.dataset_schema is not None:
            self._table = load_csv(spec.dataset, spec.dataset_schema)

    @property
    def name(self) -> str:
        if self._table is not None:
            return self._table.name
        assert self._spec.synthetic is not None
        return self._spec.synthetic.kind.value

    def load(self, split_seed: int) -> Dataset:
        if self._table is not None:
            table = self._table
            return build_dataset(table.name, table.X, table.y, table.feature_names, table.target_name, split_seed)
        source = self._spec.synthetic
        assert source is not None
        return synthesize(
            source.kind,
            source.n_samples,
            source.n_features,
            noise_std=source.noise_std,
            seed=source.seed,
            split_seed=split_seed,
        )


def plan_runs(spec: ExperimentSpec, points: list[GridPoint] | None = None) -> list[RunPlan]:
    """Expand a spec into runs: grid point, then mode, then rule budget, then repeat."""
    base = spec.base_config()
    plans = []
    for point in points if points is not None else spec.points():
        point_config = base.with_updates(**point.overrides)
        for mode in spec.modes:
            for max_rules in spec.max_rules:
                config_id = point.config_id
                key = f"{config_id}:{mode.value}:L{max_rules}"
                for repeat in range(spec.repeats):
                    seed = derive_seed(spec.base_seed, key, repeat)
                    plans.append(
                        RunPlan(
                            run_id=f"{config_id}__{mode.value}__L{max_rules}__r{repeat}",
                            config_id=config_id,
                            mode=mode,
                            max_rules=max_rules,
                            repeat=repeat,
                            seed=seed,
                            split_seed=derive_seed(spec.base_seed, SPLIT_CONFIG_ID, repeat),
                            config=config_for_mode(point_config, mode, max_rules).with_updates(seed=seed),
                        )
                    )
    return plans


def _write_artifacts(output_dir: Path, result: TrainingResult, plan: RunPlan) -> str:
    """Write run artifacts; returns the event log path relative to output_dir."""
    relative = Path("runs") / plan.run_id
    run_dir = output_dir / relative
    run_dir.mkdir(parents=True, exist_ok=True)
    result.log.write_jsonl(run_dir / "events.jsonl")
    (run_dir / "rulebase.json").write_text(result.rulebase.to_json(), encoding="utf-8")
    (run_dir / "initial_rulebase.json").write_text(result.initial_rulebase.to_json(), encoding="utf-8")
    (run_dir / "config.json").write_text(json.dumps(plan.config.to_dict(), indent=2, sort_keys=True), encoding="utf-8")
    (run_dir / "metrics.json").write_text(
        json.dumps(result.test_metrics.to_dict(), indent=2, sort_keys=True), encoding="utf-8"
    )
    return (relative / "events.jsonl").as_posix()


def run_single(plan: RunPlan, source: DataSource, output_dir: Path | None = None) -> tuple[RunRow, TrainingResult]:
    """
    Train and score one run.

    Raises:
        RunError: Wrapping any library error, with the run id
    """
    row = RunRow(
        run_id=plan.run_id,
        dataset=source.name,
        config_id=plan.config_id,
        mode=plan.mode,
        max_rules=plan.max_rules,
        repeat=plan.repeat,
        seed=plan.seed,
    )
    try:
        data = source.load(plan.split_seed)
        _, result = fit(data, plan.config)
        if output_dir is not None:
            row.event_log = _write_artifacts(output_dir, result, plan)
    except (AdarError, OSError) as exc:
        raise RunError(str(exc), run_id=plan.run_id, details={"error_type": type(exc).__name__}) from exc
    return row.with_metrics(result.test_metrics), result


def _failed_row(plan: RunPlan, dataset: str, error: BaseException) -> RunRow:
    return RunRow(
        run_id=plan.run_id,
        dataset=dataset,
        config_id=plan.config_id,
        mode=plan.mode,
        max_rules=plan.max_rules,
        repeat=plan.repeat,
        seed=plan.seed,
        status=RunStatus.FAILED,
        error=str(error),
    )


async def run_experiment(
    spec: ExperimentSpec,
    points: list[GridPoint] | None = None,
    write_artifacts: bool = True,
) -> ExperimentReport:
    """
    Execute every run of a spec.

    Failures are recorded as failed rows; aggregation proceeds over the
    completed runs.

    Args:
        spec: Experiment specification
        points: Grid points to run (defaults to the spec's own grid)
        write_artifacts: Write per-run artifacts under spec.output_dir
    """
    source = DataSource(spec)
    plans = plan_runs(spec, points)
    output_dir = spec.output_dir if write_artifacts else None
    sem = asyncio.Semaphore(spec.concurrency)
    logger.info(f"{spec.name}: {len(plans)} run(s), concurrency {spec.concurrency}")

    async def _bounded_run(plan: RunPlan) -> RunRow:
        async with sem:
            row, _ = await asyncio.to_thread(run_single, plan, source, output_dir)
            return row

    results = await asyncio.gather(*(_bounded_run(plan) for plan in plans), return_exceptions=True)

    rows: list[RunRow] = []
    for plan, outcome in zip(plans, results, strict=True):
        if isinstance(outcome, RunRow):
            rows.append(outcome)
        elif isinstance(outcome, Exception):
            logger.warning(f"Run failed: {outcome}", extra={"run_id": plan.run_id})
            rows.append(_failed_row(plan, source.name, outcome))
        else:
            raise outcome
    return build_report(rows)


async def run_grid(spec: ExperimentSpec, write_artifacts: bool = True) -> ExperimentReport:
    """Run the spec's sensitivity grid; the 32-point grid when none is given."""
    axes = spec.grid if spec.grid is not None else GridAxes.sensitivity()
    return await run_experiment(spec, expand_grid(axes), write_artifacts)


async def run_ablation(spec: ExperimentSpec, write_artifacts: bool = True) -> ExperimentReport:
    """Run all four ablation modes without a grid."""
    ablation = spec.model_copy(update={"modes": list(AblationMode), "grid": None})
    return await run_experiment(ablation, write_artifacts=write_artifacts)
