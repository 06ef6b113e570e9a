"""
Rule dynamics on synthetic piecewise-linear data.

Starts from 2 rules and lets growth and pruning find the structure. Prints
the rule count and validation RMSE over the epochs, then every structural
event. The same run through the CLI:

    adar train --synthetic piecewise_linear --n-samples 2000 --n-features 3 \
        --initial-rules 2 --max-rules 9 --theta-attr 0.1 --theta-rule 0.25 \
        --batch-size 64 --epochs 500

Usage:
    python scripts/rule_dynamics.py [OUT_DIR]
"""

import sys
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

from adar import EventKind, Settings, TrainConfig, configure_logging, fit, synthesize  # noqa: E402

EPOCHS = 500
REPORT_EVERY = 25


def main() -> int:
    settings = Settings.from_env()
    configure_logging(settings.log_level, json_format=settings.log_json)
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(settings.output_dir) / "rule_dynamics"

    data = synthesize("piecewise_linear", n_samples=2000, n_features=3, seed=0)
    cfg = TrainConfig.from_env(
        initial_rules=2,
        max_rules=9,
        theta_attr=0.1,
        theta_rule=0.25,
        batch_size=64,
        epochs=EPOCHS,
    )
    print(f"Ground truth: {data.ground_truth_rules} regions, {data.num_features} features")

    _, result = fit(data, cfg)

    print(f"\n{'epoch':>6} {'rules':>6} {'attrs':>6} {'val RMSE':>10} {'best':>10}")
    for record in result.epochs:
        if record.epoch % REPORT_EVERY == 0 or record.epoch == 1:
            print(
                f"{record.epoch:>6} {record.num_rules:>6} {record.active_attr_total:>6} "
                f"{record.val_rmse:>10.4f} {record.best_val_rmse:>10.4f}"
            )

    print("\nStructural events:")
    for event in result.events:
        target = f"rule {event.rule_index}" if event.rule_index is not None else ""
        if event.attr_index is not None:
            target += f", attr {event.attr_index}"
        print(f"  epoch {event.epoch:>4}  group {event.group:>3}  {event.kind.value:<11} {target}")

    grown = result.log.count(EventKind.GROW)
    rolled_back = result.log.count(EventKind.ROLLBACK)
    metrics = result.test_metrics
    print(
        f"\n{grown} rule(s) grown, {rolled_back} rollback(s). Final model: {metrics.final_rules} rules, "
        f"{metrics.final_attributes} active attributes, test RMSE {metrics.rmse:.4f}"
    )

    path = result.log.write_jsonl(out_dir / "events.jsonl")
    print(f"Event log written to {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
