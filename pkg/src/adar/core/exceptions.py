"""
Exception hierarchy for ADAR.

All library-specific exceptions inherit from AdarError for easy catching.
"""

from __future__ import annotations

from typing import Any


class AdarError(Exception):
    """
    Base exception for all ADAR errors.

    Catch this to handle any library-related exception.

    Example:
        >>> try:
        ...     fit(dataset, config)
        ... except AdarError as e:
        ...     print(f"Training failed: {e}")
    """

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        if self.details:
            return f"{self.message} | Details: {self.details}"
        return self.message


class ConfigurationError(AdarError):
    """
    Configuration is missing or invalid.

    Raised when:
    - A TrainConfig field is outside its allowed range
    - K-means is asked for more clusters than there are samples
    - An experiment file fails validation
    """

    pass


class ValidationError(AdarError):
    """
    Input validation error.

    Raised when:
    - A batch is empty
    - A column has zero variance and cannot be standardized
    - A dataset is too small to split
    """

    pass


class ShapeMismatchError(ValidationError):
    """Array shapes are incompatible with the rule base."""

    def __init__(
        self,
        message: str,
        expected: tuple[int, ...] | int | None = None,
        actual: tuple[int, ...] | int | None = None,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, details)
        self.expected = expected
        self.actual = actual

    def __str__(self) -> str:
        return f"{self.message} (expected {self.expected}, got {self.actual})"


class SchemaError(ValidationError):
    """
    A dataset schema does not match the CSV file.

    Raised when a declared target or feature column is absent.
    """

    def __init__(
        self,
        message: str,
        column: str,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, details)
        self.column = column

    def __str__(self) -> str:
        return f"[column:{self.column}] {self.message}"


class NumericalError(AdarError):
    """
    A non-finite value appeared during training.

    Attributes:
        block: Parameter block (or "loss") where the value was found
    """

    def __init__(
        self,
        message: str,
        block: str,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, details)
        self.block = block

    def __str__(self) -> str:
        base = f"[{self.block}] {self.message}"
        if self.details:
            return f"{base} | Details: {self.details}"
        return base


class CapacityError(AdarError):
    """The rule base is already at its maximum size; growth is refused."""

    def __init__(self, message: str, num_rules: int, max_rules: int) -> None:
        super().__init__(message, {"num_rules": num_rules, "max_rules": max_rules})
        self.num_rules = num_rules
        self.max_rules = max_rules


class OptimizerStateError(AdarError):
    """
    Optimizer moments no longer match the rule base.

    Raised when Adam is stepped after a structural edit without
    reinitializing its state.
    """

    def __init__(
        self,
        message: str,
        block: str,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, details)
        self.block = block


class RunError(AdarError):
    """An experiment run failed; carries the run id for context."""

    def __init__(
        self,
        message: str,
        run_id: str,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, details)
        self.run_id = run_id

    def __str__(self) -> str:
        return f"[run:{self.run_id}] {self.message}"
