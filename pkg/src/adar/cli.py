"""
Command-line interface.

    adar train   --synthetic piecewise_linear --epochs 500 --max-rules 8
    adar ablate  --dataset auto-mpg.csv --schema auto-mpg.schema.json --max-rules 5
    adar grid    --config experiment.json --concurrency 4
    adar report  --out runs/experiment

Precedence: TrainConfig defaults < experiment file (--config) < flags.
Exit code is 0 when every run completed, 1 when any run failed or the
experiment could not start.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import pandas as pd
from dotenv import load_dotenv

from adar.core.config import Settings
from adar.core.exceptions import AdarError
from adar.core.logging import configure_logging, get_logger
from adar.core.types import AblationMode, ReportFormat, SyntheticKind
from adar.experiments.report import ExperimentReport, emit_report, load_report
from adar.experiments.runner import run_ablation, run_experiment, run_grid
from adar.experiments.spec import ExperimentSpec

logger = get_logger("cli")

DEFAULT_REPEATS = {"train": 1, "ablate": 5, "grid": 3}

# flag dest -> TrainConfig field
TRAIN_FLAGS: dict[str, str] = {
    "lr": "learning_rate",
    "batch_size": "batch_size",
    "epochs": "epochs",
    "g_thres": "growth_threshold",
    "theta_rule": "theta_rule",
    "pr_freq": "prune_rule_freq",
    "theta_attr": "theta_attr",
    "pa_freq": "prune_attr_freq",
    "initial_rules": "initial_rules",
    "patience": "patience",
    "persistence": "persistence_checks",
    "grow_topk": "grow_topk",
}

# flag dest -> ExperimentSpec field
RUN_FLAGS: dict[str, str] = {
    "max_rules": "max_rules",
    "seed": "base_seed",
    "repeats": "repeats",
    "concurrency": "concurrency",
    "out": "output_dir",
}


def _add_experiment_args(parser: argparse.ArgumentParser) -> None:
    source = parser.add_argument_group("data")
    source.add_argument("--config", type=Path, help="experiment JSON file")
    source.add_argument("--dataset", type=Path, help="CSV file with a header row")
    source.add_argument("--schema", type=Path, help="JSON file describing target/features/missing policy")
    source.add_argument("--target", help="target column (shortcut for a minimal schema)")
    source.add_argument("--synthetic", choices=[k.value for k in SyntheticKind], help="use synthetic data")
    source.add_argument("--n-samples", type=int, help="synthetic rows")
    source.add_argument("--n-features", type=int, help="synthetic features")
    source.add_argument("--noise", type=float, help="synthetic target noise std")

    train = parser.add_argument_group("training")
    train.add_argument("--lr", type=float)
    train.add_argument("--batch-size", type=int)
    train.add_argument("--epochs", type=int)
    train.add_argument("--max-rules", type=int, nargs="+")
    train.add_argument("--initial-rules", type=int)
    train.add_argument("--patience", type=int)
    train.add_argument("--persistence", type=int)
    train.add_argument("--grow-topk", type=int)
    train.add_argument("--g-thres", type=float, help="growth threshold on val RMSE improvement")
    train.add_argument("--theta-rule", "--pr-thres", dest="theta_rule", type=float)
    train.add_argument("--pr-freq", type=int, help="rule pruning frequency (epochs)")
    train.add_argument("--theta-attr", "--pa-thres", dest="theta_attr", type=float)
    train.add_argument("--pa-freq", type=int, help="attribute pruning frequency (epochs)")

    run = parser.add_argument_group("run")
    run.add_argument("--seed", type=int, help="base seed")
    run.add_argument("--repeats", type=int)
    run.add_argument("--concurrency", type=int)
    run.add_argument("--out", type=Path, help="output directory")
    run.add_argument("--format", choices=["csv", "json", "both"], default="both")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adar", description="Adaptive neuro-fuzzy regression experiments")
    parser.add_argument("--log-level", help="logging level (default from ADAR_LOG_LEVEL)")
    parser.add_argument("--log-json", action="store_true", help="one JSON object per log line")
    commands = parser.add_subparsers(dest="command", required=True)

    train = commands.add_parser("train", help="train one configuration")
    _add_experiment_args(train)
    train.add_argument("--mode", choices=[m.value for m in AblationMode], default=AblationMode.FULL.value)

    ablate = commands.add_parser("ablate", help="run the four ablation configurations")
    _add_experiment_args(ablate)

    grid = commands.add_parser("grid", help="run the sensitivity grid")
    _add_experiment_args(grid)

    report = commands.add_parser("report", help="re-aggregate a finished experiment")
    report.add_argument("--out", type=Path, required=True, help="experiment output directory")
    report.add_argument("--format", choices=["csv", "json", "both"], default="both")
    return parser


def _formats(value: str) -> tuple[ReportFormat, ...]:
    if value == "both":
        return (ReportFormat.CSV, ReportFormat.JSON)
    return (ReportFormat(value),)


def spec_from_args(args: argparse.Namespace, settings: Settings) -> ExperimentSpec:
    """Merge the experiment file and flags into a validated spec."""
    raw: dict[str, Any] = {}
    if args.config is not None:
        raw = json.loads(args.config.read_text(encoding="utf-8"))
    raw.setdefault("repeats", DEFAULT_REPEATS[args.command])
    raw.setdefault("output_dir", settings.output_dir)

    if args.dataset is not None:
        raw["dataset"] = str(args.dataset)
        raw.pop("synthetic", None)
    if args.schema is not None:
        raw["dataset_schema"] = json.loads(args.schema.read_text(encoding="utf-8"))
    elif args.target is not None:
        raw["dataset_schema"] = {"target_column": args.target}
    if args.synthetic is not None or any(v is not None for v in (args.n_samples, args.n_features, args.noise)):
        synthetic = dict(raw.get("synthetic") or {})
        for key, value in (
            ("kind", args.synthetic),
            ("n_samples", args.n_samples),
            ("n_features", args.n_features),
            ("noise_std", args.noise),
        ):
            if value is not None:
                synthetic[key] = value
        raw["synthetic"] = synthetic
        raw.pop("dataset", None)

    train = dict(raw.get("train") or {})
    for dest, field_name in TRAIN_FLAGS.items():
        value = getattr(args, dest)
        if value is not None:
            train[field_name] = value
    raw["train"] = train

    for dest, key in RUN_FLAGS.items():
        value = getattr(args, dest)
        if value is not None:
            raw[key] = str(value) if isinstance(value, Path) else value
    if args.command == "train":
        raw["modes"] = [args.mode]
    return ExperimentSpec.parse(raw)


def _print_aggregates(report: ExperimentReport) -> None:
    frame = pd.DataFrame.from_records(report.aggregates)
    print(frame.to_string(index=False))


async def _run(args: argparse.Namespace, spec: ExperimentSpec) -> ExperimentReport:
    if args.command == "ablate":
        return await run_ablation(spec)
    if args.command == "grid":
        return await run_grid(spec)
    return await run_experiment(spec)


def main(argv: Sequence[str] | None = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    overrides: dict[str, Any] = {"log_level": args.log_level}
    if args.log_json:
        overrides["log_json"] = True
    settings = Settings.from_env(**overrides)
    configure_logging(settings.log_level, json_format=settings.log_json)

    try:
        if args.command == "report":
            report = load_report(args.out)
            out_dir = args.out
        else:
            spec = spec_from_args(args, settings)
            report = asyncio.run(_run(args, spec))
            out_dir = spec.output_dir
        emit_report(report, out_dir, _formats(args.format))
    except AdarError as exc:
        logger.error(str(exc))
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        logger.error(f"Cannot read input: {exc}")
        return 1

    _print_aggregates(report)
    if report.failed_runs:
        logger.warning(f"{len(report.failed_runs)} of {len(report.runs)} run(s) failed")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
