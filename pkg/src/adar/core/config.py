"""
Configuration management for ADAR.

TrainConfig holds every training hyperparameter; Settings holds runtime
options (logging, output location). Both can be loaded from environment
variables and are validated on construction.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from typing import Any

from adar.core.exceptions import ConfigurationError


def _get_env_var(name: str, default: str | None = None) -> str | None:
    """Get environment variable with optional default."""
    return os.environ.get(name, default)


# Environment variables understood by TrainConfig.from_env, with their parsers
_ENV_FIELDS: dict[str, tuple[str, type]] = {
    "ADAR_LEARNING_RATE": ("learning_rate", float),
    "ADAR_BATCH_SIZE": ("batch_size", int),
    "ADAR_EPOCHS": ("epochs", int),
    "ADAR_MAX_RULES": ("max_rules", int),
    "ADAR_SEED": ("seed", int),
}


@dataclass(frozen=True)
class TrainConfig:
    """Training hyperparameters."""

    # Optimizer schedule
    learning_rate: float = 0.01
    batch_size: int = 512
    epochs: int = 1500

    # Pruning thresholds
    theta_attr: float = 0.1
    theta_rule: float = 0.25

    # Rule growing
    growth_threshold: float = 5e-5  # minimum val RMSE improvement that resets patience
    patience: int = 30
    max_rules: int = 9
    initial_rules: int = 2
    grow_topk: int | None = None  # None -> max(8, batch_size // 64)
    growth_grace_epochs: int = 10

    # Pruning schedule (epochs)
    prune_attr_freq: int = 25
    prune_rule_freq: int = 50
    persistence_checks: int = 2

    # Sparsity and rollback
    l1_attr: float = 1e-4
    l1_rule: float = 1e-4
    rollback_tolerance: float = 0.02

    # Mechanism switches
    ap_enabled: bool = True
    rgrp_enabled: bool = True
    attr_weighting: bool = True
    rule_weighting: bool = True

    # Model details
    seed: int = 0
    s_floor: float = 1e-3
    epsilon: float = 1e-9
    attr_logit_std: float = 0.5
    consequent_std: float = 0.1
    rule_logit_init: float = 1.0
    use_bias: bool = False
    strict_mask: bool = False
    kmeans_max_iter: int = 300

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ConfigurationError("learning_rate must be positive", {"learning_rate": self.learning_rate})
        if self.batch_size < 1:
            raise ConfigurationError("batch_size must be at least 1", {"batch_size": self.batch_size})
        if self.epochs < 0:
            raise ConfigurationError("epochs must be non-negative", {"epochs": self.epochs})
        for name in ("theta_attr", "theta_rule"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ConfigurationError(f"{name} must lie in (0, 1)", {name: value})
        for name in ("growth_threshold", "l1_attr", "l1_rule", "rollback_tolerance"):
            value = getattr(self, name)
            if value < 0:
                raise ConfigurationError(f"{name} must be non-negative", {name: value})
        for name in (
            "patience",
            "max_rules",
            "initial_rules",
            "prune_attr_freq",
            "prune_rule_freq",
            "persistence_checks",
            "growth_grace_epochs",
            "kmeans_max_iter",
        ):
            value = getattr(self, name)
            if value < 1:
                raise ConfigurationError(f"{name} must be at least 1", {name: value})
        if self.max_rules < self.initial_rules:
            raise ConfigurationError(
                "max_rules must not be below initial_rules",
                {"max_rules": self.max_rules, "initial_rules": self.initial_rules},
            )
        if self.grow_topk is not None and self.grow_topk < 1:
            raise ConfigurationError("grow_topk must be at least 1", {"grow_topk": self.grow_topk})
        for name in ("s_floor", "epsilon", "attr_logit_std", "consequent_std"):
            value = getattr(self, name)
            if value <= 0:
                raise ConfigurationError(f"{name} must be positive", {name: value})

    @property
    def effective_grow_topk(self) -> int:
        """Number of high-error samples used to seed a new rule."""
        if self.grow_topk is not None:
            return self.grow_topk
        return max(8, self.batch_size // 64)

    @classmethod
    def from_env(cls, **overrides: Any) -> TrainConfig:
        """Load configuration from ADAR_* environment variables."""
        values: dict[str, Any] = {}
        for env_name, (field_name, parser) in _ENV_FIELDS.items():
            raw = _get_env_var(env_name)
            if raw is None or raw == "":
                continue
            try:
                values[field_name] = parser(raw)
            except ValueError as exc:
                raise ConfigurationError(
                    f"Environment variable {env_name} is not a valid {parser.__name__}",
                    {"value": raw},
                ) from exc
        values.update(overrides)
        return cls(**values)

    def with_updates(self, **updates: Any) -> TrainConfig:
        """Create a new TrainConfig with updated values."""
        unknown = set(updates) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise ConfigurationError("Unknown TrainConfig fields", {"fields": sorted(unknown)})
        return dataclasses.replace(self, **updates)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class Settings:
    """Runtime settings for the CLI and scripts."""

    log_level: str = "INFO"
    log_json: bool = False
    output_dir: str = "runs"

    @classmethod
    def from_env(cls, **overrides: Any) -> Settings:
        """Load settings from environment variables."""
        log_level = overrides.get("log_level") or _get_env_var("ADAR_LOG_LEVEL", default="INFO")
        log_json_raw = _get_env_var("ADAR_LOG_JSON", default="false") or "false"
        log_json = overrides.get("log_json", log_json_raw.lower() in ("1", "true", "yes"))
        output_dir = overrides.get("output_dir") or _get_env_var("ADAR_OUTPUT_DIR", default="runs")
        return cls(
            log_level=str(log_level).upper(),
            log_json=bool(log_json),
            output_dir=str(output_dir),
        )
