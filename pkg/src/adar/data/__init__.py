"""
Data module - CSV ingestion, standardization, splitting and synthetic data.

Example:
    >>> from adar.data import DatasetSchema, load_dataset
    >>> schema = DatasetSchema(target_column="mpg", missing_policy="drop")
    >>> data = load_dataset("auto-mpg.csv", schema, seed=0)
    >>> X_train, y_train = data.arrays("train")
"""

from adar.data.dataset import SPLIT_NAMES, Dataset, NormStats, SplitIndices
from adar.data.loader import DatasetSchema, RawTable, load_csv, load_dataset
from adar.data.preprocessing import build_dataset, destandardize, split, standardize
from adar.data.synthetic import synthesize

__all__ = [
    "Dataset",
    "NormStats",
    "SplitIndices",
    "SPLIT_NAMES",
    "DatasetSchema",
    "RawTable",
    "load_csv",
    "load_dataset",
    "standardize",
    "destandardize",
    "split",
    "build_dataset",
    "synthesize",
]
