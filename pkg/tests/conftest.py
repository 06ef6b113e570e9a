import pytest

from adar.core.config import TrainConfig
from adar.data import Dataset, synthesize
from adar.model import RuleBase
from tests.factories import make_rulebase


@pytest.fixture
def rulebase() -> RuleBase:
    """Two rules over three attributes."""
    return make_rulebase(num_rules=2, num_attrs=3, seed=11)


@pytest.fixture
def piecewise_data() -> Dataset:
    """Small noiseless piecewise-linear dataset."""
    return synthesize("piecewise_linear", n_samples=200, n_features=2, seed=3)


@pytest.fixture
def fast_config() -> TrainConfig:
    """A configuration that trains in well under a second."""
    return TrainConfig(
        learning_rate=0.01,
        batch_size=32,
        epochs=12,
        initial_rules=2,
        max_rules=4,
        patience=3,
        prune_attr_freq=3,
        prune_rule_freq=4,
        persistence_checks=1,
        growth_grace_epochs=2,
        seed=5,
    )
