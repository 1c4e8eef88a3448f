import json

import numpy as np
import pytest
from jsonschema import Draft202012Validator

from biasinject.injectors import (inject_underdiagnosis, positive_label_rate,
                                  underdiagnosis_flips)
from biasinject.models import NoiseSpec
from biasinject.schemas import NOISE_SPEC_SCHEMA
from biasinject.serializers import load_noise_spec, save_noise_spec
from sepbias.exceptions import (DegenerateTargetError, DomainError,
                                SchemaError)


@pytest.mark.parametrize('fields', [
    {'target_group': 2},
    {'target_group': True},
    {'rate': -0.1},
    {'rate': 1.5},
    {'rate': float('nan')},
    {'seed': -1},
])
def test_noise_spec_validation(fields):
    with pytest.raises(DomainError):
        NoiseSpec(**fields)


@pytest.mark.parametrize('rate, eligible, expected', [
    (0.25, 10, 3),
    (0.25, 2, 1),
    (0.5, 5, 3),
    (0.0, 10, 0),
    (1.0, 7, 7),
    (0.1, 4, 0),
])
def test_flip_count_rounds_half_up(rate, eligible, expected):
    assert NoiseSpec(rate=rate).flip_count(eligible) == expected


def test_only_target_group_positives_flip(dataset):
    noisy = inject_underdiagnosis(dataset, NoiseSpec(target_group=1, rate=0.4, seed=7))
    changed = np.flatnonzero(noisy.observed_labels != dataset.observed_labels)
    assert changed.size == NoiseSpec(rate=0.4).flip_count(dataset.count(1, 1))
    assert np.all(dataset.groups[changed] == 1)
    assert np.all(dataset.true_labels[changed] == 1)
    assert np.all(noisy.observed_labels[changed] == 0)
    assert np.array_equal(noisy.true_labels, dataset.true_labels)
    assert np.array_equal(noisy.features, dataset.features)
    assert positive_label_rate(noisy, group=0) == 1.0


def test_injection_is_deterministic(dataset):
    spec = NoiseSpec(rate=0.3, seed=2)
    assert inject_underdiagnosis(dataset, spec).same_samples(inject_underdiagnosis(dataset, spec))
    other = inject_underdiagnosis(dataset, NoiseSpec(rate=0.3, seed=3))
    assert not other.same_samples(inject_underdiagnosis(dataset, spec))


def test_flip_sets_are_nested(dataset):
    previous: set[int] = set()
    for rate in (0.0, 0.1, 0.25, 0.5, 1.0):
        flips = set(underdiagnosis_flips(dataset, NoiseSpec(rate=rate, seed=9)).tolist())
        assert previous <= flips
        previous = flips
    assert len(previous) == dataset.count(1, 1)


def test_zero_rate_returns_dataset_unchanged(dataset):
    assert inject_underdiagnosis(dataset, NoiseSpec(rate=0.0)) is dataset


def test_full_rate_erases_target_positives(dataset):
    noisy = inject_underdiagnosis(dataset, NoiseSpec(target_group=0, rate=1.0, seed=1))
    assert positive_label_rate(noisy, group=0) == 0.0
    assert positive_label_rate(noisy, group=1) == 1.0


def test_target_group_without_positives(make_dataset):
    dataset = make_dataset([0, 0, 1, 1], [1, 0, 0, 0])
    with pytest.raises(DegenerateTargetError):
        inject_underdiagnosis(dataset, NoiseSpec(target_group=1, rate=0.5))
    assert inject_underdiagnosis(dataset, NoiseSpec(target_group=1, rate=0.0)) is dataset


def test_small_group_rounding(make_dataset):
    dataset = make_dataset([1, 1, 0, 0], [1, 1, 1, 0])
    noisy = inject_underdiagnosis(dataset, NoiseSpec(target_group=1, rate=0.25, seed=0))
    assert int(np.count_nonzero(noisy.observed_labels[:2] == 0)) == 1


def test_noise_spec_json(tmp_path):
    spec = NoiseSpec(target_group=0, rate=0.2, seed=5)
    path = save_noise_spec(spec, tmp_path / 'noise.json')
    assert load_noise_spec(path) == spec
    path.write_text('{"target_group": 1, "rate": 2.0, "seed": 0}', encoding='utf-8')
    with pytest.raises(SchemaError) as error:
        load_noise_spec(path)
    assert error.value.column == 'rate'


def test_noise_spec_json_follows_published_schema(tmp_path):
    path = save_noise_spec(NoiseSpec(target_group=1, rate=0.25, seed=3), tmp_path / 'noise.json')
    Draft202012Validator(NOISE_SPEC_SCHEMA).validate(json.loads(path.read_text(encoding='utf-8')))
    path.write_text('{"target_group": 1, "rate": 0.25, "seed": 3, "extra": true}', encoding='utf-8')
    with pytest.raises(SchemaError) as error:
        load_noise_spec(path)
    assert error.value.column == 'extra'


def test_injection_invariants_on_random_datasets(make_dataset):
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        size = int(rng.integers(2, 60))
        groups = rng.integers(0, 2, size)
        true_labels = rng.integers(0, 2, size)
        target = int(rng.integers(0, 2))
        eligible = int(np.count_nonzero((groups == target) & (true_labels == 1)))
        if eligible == 0:
            continue
        dataset = make_dataset(groups, true_labels, features=rng.normal(size=(size, 2)))
        spec = NoiseSpec(target_group=target, rate=float(rng.uniform()), seed=int(rng.integers(0, 2**31)))
        noisy = inject_underdiagnosis(dataset, spec)
        changed = np.flatnonzero(noisy.observed_labels != dataset.observed_labels)
        assert changed.size == spec.flip_count(eligible)
        assert np.all(groups[changed] == target)
        assert np.all(true_labels[changed] == 1)
        assert np.array_equal(noisy.groups, dataset.groups)
        assert np.array_equal(noisy.true_labels, dataset.true_labels)
        assert np.array_equal(noisy.features, dataset.features)
