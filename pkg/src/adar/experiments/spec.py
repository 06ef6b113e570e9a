"""
Declarative experiment specification.

An experiment file is a JSON document validated by ExperimentSpec. It
names one data source (a CSV with its schema, or a synthetic generator),
TrainConfig overrides, the ablation modes and rule budgets to run, an
optional sensitivity grid, and how many repeats each point gets.

Run seeds are derived as the first 8 bytes of
sha256("{base_seed}:{config_id}:{repeat}"), read big-endian, modulo 2**32.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from adar.core.config import TrainConfig
from adar.core.exceptions import AdarError, ConfigurationError
from adar.core.types import AblationMode, SyntheticKind
from adar.data.loader import DatasetSchema

DEFAULT_CONFIG_ID = "default"

# grid axis -> (TrainConfig field, label prefix), in label order
GRID_AXES: dict[str, tuple[str, str]] = {
    "growth_threshold": ("growth_threshold", "G"),
    "theta_rule": ("theta_rule", "PR"),
    "prune_rule_freq": ("prune_rule_freq", "PF"),
    "theta_attr": ("theta_attr", "PA"),
    "prune_attr_freq": ("prune_attr_freq", "PAF"),
}


class SyntheticSource(BaseModel):
    """Synthetic data generator settings."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: SyntheticKind = SyntheticKind.PIECEWISE_LINEAR
    n_samples: int = Field(default=2000, ge=10)
    n_features: int = Field(default=3, ge=1)
    noise_std: float = Field(default=0.0, ge=0.0)
    seed: int = 0


class GridAxes(BaseModel):
    """Values per sensitivity axis; axes left out are not varied."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    growth_threshold: list[float] | None = None
    theta_rule: list[float] | None = None
    prune_rule_freq: list[int] | None = None
    theta_attr: list[float] | None = None
    prune_attr_freq: list[int] | None = None

    @model_validator(mode="after")
    def _check_axes(self) -> GridAxes:
        present = [name for name in GRID_AXES if getattr(self, name) is not None]
        if not present:
            raise ValueError("a grid needs at least one axis")
        for name in present:
            if not getattr(self, name):
                raise ValueError(f"grid axis {name} has no values")
        return self

    @classmethod
    def sensitivity(cls) -> GridAxes:
        """The 32-point sensitivity grid."""
        return cls(
            growth_threshold=[5e-5, 1e-4],
            theta_rule=[0.05, 0.1],
            prune_rule_freq=[50, 100],
            theta_attr=[0.05, 0.1],
            prune_attr_freq=[25, 50],
        )


@dataclass(frozen=True)
class GridPoint:
    """One concrete configuration of a grid."""

    config_id: str
    overrides: dict[str, Any] = field(default_factory=dict)


def expand_grid(axes: GridAxes | None) -> list[GridPoint]:
    """
    Cartesian product of the grid axes, in axis order.

    Labels join the present axes as prefix + str(value), for example
    "G5e-05_PR0.1_PF50_PA0.05_PAF25". Without a grid there is one point,
    "default", with no overrides.
    """
    if axes is None:
        return [GridPoint(config_id=DEFAULT_CONFIG_ID)]
    names = [name for name in GRID_AXES if getattr(axes, name) is not None]
    points = []
    for values in itertools.product(*(getattr(axes, name) for name in names)):
        overrides = {GRID_AXES[name][0]: value for name, value in zip(names, values, strict=True)}
        label = "_".join(f"{GRID_AXES[name][1]}{value}" for name, value in zip(names, values, strict=True))
        points.append(GridPoint(config_id=label, overrides=overrides))
    return points


def derive_seed(base_seed: int, config_id: str, repeat: int) -> int:
    """Stable run seed for (base seed, configuration, repeat index)."""
    digest = hashlib.sha256(f"{base_seed}:{config_id}:{repeat}".encode()).digest()
    return int.from_bytes(digest[:8], "big") % (2**32)


def config_for_mode(base: TrainConfig, mode: AblationMode, max_rules: int) -> TrainConfig:
    """
    Specialize a TrainConfig to an ablation mode and rule budget.

    Modes without rule growing and pruning train a fixed base of max_rules
    rules; the others start from initial_rules and may grow up to max_rules.
    """
    fixed_size = not mode.rgrp_enabled
    return base.with_updates(
        max_rules=max_rules,
        initial_rules=max_rules if fixed_size else min(base.initial_rules, max_rules),
        ap_enabled=mode.ap_enabled,
        rgrp_enabled=mode.rgrp_enabled,
        attr_weighting=mode in (AblationMode.BASELINE_AP, AblationMode.FULL),
        rule_weighting=mode in (AblationMode.BASELINE_RGRP, AblationMode.FULL),
    )


class ExperimentSpec(BaseModel):
    """
    A complete experiment description.

    Attributes:
        name: Experiment name
        dataset: CSV path (requires dataset_schema)
        dataset_schema: Target, features and missing policy of the CSV
        synthetic: Synthetic source, used when no CSV is given
        train: TrainConfig overrides
        modes: Ablation modes to run
        max_rules: Rule budgets to run
        grid: Sensitivity grid axes
        repeats: Runs per configuration
        base_seed: Seed all run seeds derive from
        output_dir: Where reports and run artifacts go
        concurrency: Runs executed at the same time
    """

    model_config = ConfigDict(extra="forbid")

    name: str = "experiment"
    dataset: Path | None = None
    dataset_schema: DatasetSchema | None = None
    synthetic: SyntheticSource | None = None
    train: dict[str, Any] = Field(default_factory=dict)
    modes: list[AblationMode] = Field(default_factory=lambda: [AblationMode.FULL], min_length=1)
    max_rules: list[int] = Field(default_factory=lambda: [9], min_length=1)
    grid: GridAxes | None = None
    repeats: int = Field(default=1, ge=1)
    base_seed: int = 0
    output_dir: Path = Path("runs")
    concurrency: int = Field(default=1, ge=1)

    @field_validator("max_rules")
    @classmethod
    def _positive_rules(cls, value: list[int]) -> list[int]:
        if any(v < 1 for v in value):
            raise ValueError("max_rules entries must be at least 1")
        return value

    @model_validator(mode="after")
    def _check_source(self) -> ExperimentSpec:
        if self.dataset is not None and self.synthetic is not None:
            raise ValueError("give either a dataset or a synthetic source, not both")
        if self.dataset is None and self.synthetic is None:
            raise ValueError("an experiment needs a dataset or a synthetic source")
        if self.dataset is not None and self.dataset_schema is None:
            raise ValueError("a CSV dataset needs a dataset_schema")
        try:
            self.base_config()
        except AdarError as exc:
            raise ValueError(str(exc)) from exc
        return self

    def base_config(self) -> TrainConfig:
        """TrainConfig with this experiment's overrides applied."""
        return TrainConfig().with_updates(**self.train)

    def points(self) -> list[GridPoint]:
        return expand_grid(self.grid)

    @classmethod
    def from_file(cls, path: str | Path) -> ExperimentSpec:
        """
        Load and validate an experiment JSON file.

        Raises:
            ConfigurationError: If the file is unreadable or invalid
        """
        source = Path(path)
        try:
            raw = json.loads(source.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError("cannot read experiment file", {"path": str(source), "error": str(exc)}) from exc
        return cls.parse(raw)

    @classmethod
    def parse(cls, raw: dict[str, Any]) -> ExperimentSpec:
        try:
            return cls.model_validate(raw)
        except ValidationError as exc:
            raise ConfigurationError("invalid experiment specification", {"errors": exc.errors()}) from exc
