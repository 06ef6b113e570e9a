"""
CSV ingestion.

Files are read with pandas; every declared column is coerced to numeric,
so unparseable cells become missing values and follow the schema's missing
policy. Rows with a missing target are always dropped, since imputing the
quantity being predicted would fabricate labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from adar.core.exceptions import SchemaError, ValidationError
from adar.core.logging import get_logger
from adar.core.types import FloatArray, MissingPolicy
from adar.data.dataset import Dataset
from adar.data.preprocessing import build_dataset

logger = get_logger("data.loader")


class DatasetSchema(BaseModel):
    """Which CSV columns to use and how to treat missing cells."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    target_column: str = Field(min_length=1)
    feature_columns: list[str] | None = None  # None -> every other column
    missing_policy: MissingPolicy = MissingPolicy.DROP
    name: str | None = None

    @field_validator("missing_policy", mode="before")
    @classmethod
    def _parse_policy(cls, value: object) -> object:
        if isinstance(value, str):
            return MissingPolicy.from_string(value)
        return value


@dataclass
class RawTable:
    """
    Numeric table after the missing-value policy, before standardization.

    Attributes:
        name: Dataset name
        X: Feature matrix in original units
        y: Target in original units
        feature_names: Feature column names
        target_name: Target column name
        dropped_rows: Rows removed by the policy
        imputed_cells: Feature cells filled with the column mean
    """

    name: str
    X: FloatArray
    y: FloatArray
    feature_names: tuple[str, ...]
    target_name: str
    dropped_rows: int = 0
    imputed_cells: int = 0


def load_csv(path: str | Path, schema: DatasetSchema) -> RawTable:
    """
    Load a CSV file according to a schema.

    Args:
        path: RFC-4180 CSV with a header row
        schema: Target, features and missing policy

    Returns:
        RawTable

    Raises:
        ValidationError: If the file is missing or no rows survive
        SchemaError: If a declared column is absent
    """
    source = Path(path)
    if not source.is_file():
        raise ValidationError("dataset file not found", {"path": str(source)})

    frame = pd.read_csv(source)
    header = [str(c) for c in frame.columns]
    frame.columns = header
    if schema.target_column not in header:
        raise SchemaError("target column not found in CSV header", column=schema.target_column)
    features = schema.feature_columns or [c for c in header if c != schema.target_column]
    for column in features:
        if column not in header:
            raise SchemaError("feature column not found in CSV header", column=column)

    numeric = frame[[*features, schema.target_column]].apply(pd.to_numeric, errors="coerce")
    total_rows = len(numeric)
    numeric = numeric[numeric[schema.target_column].notna()]
    imputed = 0

    if schema.missing_policy == MissingPolicy.DROP:
        numeric = numeric.dropna(axis=0, how="any")
    else:
        missing = numeric[features].isna()
        imputed = int(missing.to_numpy().sum())
        means = numeric[features].mean(axis=0)
        empty = [c for c in features if pd.isna(means[c])]
        if empty:
            raise ValidationError("column has no numeric values to impute from", {"columns": empty})
        numeric[features] = numeric[features].fillna(means)

    dropped = total_rows - len(numeric)
    if dropped or imputed:
        logger.warning(f"{source.name}: dropped {dropped} row(s), imputed {imputed} cell(s)")
    if numeric.empty:
        raise ValidationError("no rows left after applying the missing-value policy", {"path": str(source)})

    return RawTable(
        name=schema.name or source.stem,
        X=numeric[features].to_numpy(dtype=np.float64),
        y=numeric[schema.target_column].to_numpy(dtype=np.float64),
        feature_names=tuple(features),
        target_name=schema.target_column,
        dropped_rows=dropped,
        imputed_cells=imputed,
    )


def load_dataset(path: str | Path, schema: DatasetSchema, seed: int) -> Dataset:
    """Load, standardize and split a CSV file."""
    table = load_csv(path, schema)
    return build_dataset(table.name, table.X, table.y, table.feature_names, table.target_name, seed)
