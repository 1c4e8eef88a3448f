import numpy as np
import pytest

from datagen.generators import sample_population
from datagen.models import Dataset, PopulationSpec
from learner.models import TrainConfig


@pytest.fixture
def spec() -> PopulationSpec:
    return PopulationSpec.from_auc(0.9)


@pytest.fixture
def dataset(spec) -> Dataset:
    return sample_population(spec, 2000, seed=11)


@pytest.fixture
def small_dataset(spec) -> Dataset:
    return sample_population(spec, 48, seed=5)


@pytest.fixture
def fast_config() -> TrainConfig:
    return TrainConfig(max_epochs=50, seed=3)


@pytest.fixture
def make_dataset():
    """Builds a Dataset from plain lists; features default to zeros."""

    def build(groups, true_labels, observed_labels=None, features=None) -> Dataset:
        groups = np.asarray(groups)
        if features is None:
            features = np.zeros((groups.size, 2))
        return Dataset(
            features=features,
            groups=groups,
            true_labels=true_labels,
            observed_labels=true_labels if observed_labels is None else observed_labels,
        )

    return build


@pytest.fixture
def experiment_settings() -> dict:
    """Desk-scale experiment configuration that runs in seconds."""
    return {
        'separability_targets': [0.55, 0.95],
        'noise_rates': [0.25],
        'n_train': 1500,
        'n_test': 1000,
        'n_seeds': 2,
        'arch': 'linear',
        'train_config': {'max_epochs': 10, 'batch_size': 256},
        'master_seed': 4,
    }
