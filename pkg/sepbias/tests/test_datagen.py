import json

import numpy as np
import pytest
from jsonschema import Draft202012Validator

from datagen.generators import (auc_for_separation, sample_population,
                                separation_for_auc, split_dataset)
from datagen.models import Dataset, PopulationSpec, axes_at_angle
from datagen.presets import PRESETS, preset_spec
from datagen.schemas import POPULATION_SPEC_SCHEMA
from datagen.serializers import (load_dataset_csv, load_population_spec,
                                 save_dataset_csv, save_population_spec)
from oracle.tpr import bayes_group_auc
from sepbias.exceptions import (DegenerateDatasetError, DomainError,
                                SchemaError)

HEADER = 'feature_0,feature_1,group,true_label,observed_label\n'


@pytest.mark.parametrize('target', [0.6, 0.75, 0.9, 0.98])
def test_separation_inverts_auc(target):
    assert auc_for_separation(separation_for_auc(target, 1.5), 1.5) == pytest.approx(target, abs=1e-12)


def test_zero_separation_is_chance():
    assert auc_for_separation(0.0, 1.0) == 0.5
    assert separation_for_auc(0.5, 1.0) == 0.0


@pytest.mark.parametrize('target', [0.4, 1.0, float('nan')])
def test_separation_for_auc_rejects_out_of_range(target):
    with pytest.raises(DomainError):
        separation_for_auc(target, 1.0)


def test_axes_at_angle():
    assert axes_at_angle(2, 90.0) == ((1.0, 0.0), (0.0, 1.0))
    group_axis, disease_axis = axes_at_angle(3, 0.0)
    assert group_axis == (1.0, 0.0, 0.0)
    assert disease_axis == (1.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        axes_at_angle(1)


@pytest.mark.parametrize('fields', [
    {'group_prior': 0.0},
    {'class_prior': (0.5, 1.0)},
    {'noise_scale': 0.0},
    {'group_separation': -1.0},
    {'group_axis': (1.0, 1.0)},
    {'disease_axis': (0.0, 1.0, 0.0)},
])
def test_population_spec_validation(fields):
    with pytest.raises(DomainError):
        PopulationSpec(**fields)


def test_from_auc_sets_group_separation():
    spec = PopulationSpec.from_auc(0.9, noise_scale=2.0)
    assert spec.group_separation == separation_for_auc(0.9, 2.0)
    assert spec.noise_scale == 2.0


def test_sampling_is_deterministic(spec):
    first = sample_population(spec, 500, seed=3)
    assert first.same_samples(sample_population(spec, 500, seed=3))
    assert not first.same_samples(sample_population(spec, 500, seed=4))
    assert first.spec_fingerprint == spec.fingerprint()


def test_generated_labels_are_clean(dataset):
    assert dataset.is_clean()
    assert len(dataset) == 2000
    assert dataset.dim == 2


def test_empirical_priors(spec):
    dataset = sample_population(spec, 20000, seed=1)
    assert dataset.groups.mean() == pytest.approx(spec.group_prior, abs=0.02)
    for group in (0, 1):
        positives = dataset.count(group, 1) / (dataset.count(group, 0) + dataset.count(group, 1))
        assert positives == pytest.approx(spec.class_prior[group], abs=0.03)


def test_tiny_sample_misses_a_cell(spec):
    with pytest.raises(DegenerateDatasetError):
        sample_population(spec, 1, seed=0)
    with pytest.raises(DomainError):
        sample_population(spec, 0, seed=0)


@pytest.mark.parametrize('target', [0.5, 0.75, 0.9])
def test_bayes_group_auc_matches_target(target):
    assert bayes_group_auc(PopulationSpec.from_auc(target), n_mc=40000, seed=2) == pytest.approx(target, abs=0.01)


def test_dataset_rejects_promoted_labels(make_dataset):
    with pytest.raises(DomainError):
        make_dataset([0, 1], [0, 0], observed_labels=[1, 0])


def test_dataset_samples(make_dataset):
    dataset = make_dataset([0, 1, 1], [1, 0, 1], observed_labels=[0, 0, 1])
    sample = dataset[0]
    assert (sample.group, sample.true_label, sample.observed_label) == (0, 1, 0)
    assert [s.group for s in dataset] == [0, 1, 1]
    assert not dataset.is_clean()
    assert dataset.with_clean_labels().is_clean()


def test_split_dataset(dataset):
    train, test = split_dataset(dataset, 0.3, seed=8)
    assert (len(train), len(test)) == (1400, 600)
    merged = np.sort(np.concatenate([train.features[:, 0], test.features[:, 0]]))
    assert np.array_equal(merged, np.sort(dataset.features[:, 0]))
    again, _ = split_dataset(dataset, 0.3, seed=8)
    assert again.same_samples(train)


def test_dataset_csv_round_trip(tmp_path, dataset):
    path = save_dataset_csv(dataset, tmp_path / 'data.csv')
    assert path.read_text(encoding='utf-8').startswith(HEADER)
    assert load_dataset_csv(path).same_samples(dataset)


@pytest.mark.parametrize('text, line, column', [
    (HEADER + '0.1,0.2,0,1,1\nabc,0.3,1,0,0\n', 3, 'feature_0'),
    (HEADER + '0.1,inf,0,1,1\n', 2, 'feature_1'),
    (HEADER + '0.1,0.2,2,1,1\n', 2, 'group'),
    (HEADER + '0.1,0.2,0,1,1\n0.1,0.2,1,0,1\n', 3, 'observed_label'),
])
def test_dataset_csv_reports_bad_values(tmp_path, text, line, column):
    path = tmp_path / 'bad.csv'
    path.write_text(text, encoding='utf-8')
    with pytest.raises(SchemaError) as error:
        load_dataset_csv(path)
    assert (error.value.line, error.value.column) == (line, column)


@pytest.mark.parametrize('header, column', [
    ('feature_0,group,true_label\n', 'observed_label'),
    ('feature_0,group,true_label,observed_label,extra\n', 'extra'),
    ('feature_1,group,true_label,observed_label\n', 'feature_0'),
])
def test_dataset_csv_checks_columns(tmp_path, header, column):
    path = tmp_path / 'bad.csv'
    path.write_text(header, encoding='utf-8')
    with pytest.raises(SchemaError) as error:
        load_dataset_csv(path)
    assert error.value.column == column


def test_population_spec_json(tmp_path, spec):
    path = save_population_spec(spec, tmp_path / 'population.json')
    assert load_population_spec(path) == spec
    document = json.loads(path.read_text(encoding='utf-8'))
    document['unknown'] = 1
    path.write_text(json.dumps(document), encoding='utf-8')
    with pytest.raises(SchemaError):
        load_population_spec(path)


def test_presets_ascend_in_separability():
    aucs = [preset.separability_auc for preset in PRESETS]
    assert aucs == sorted(aucs)
    spec = preset_spec('chexpert-sex')
    assert spec.group_prior == 0.412
    assert spec.class_prior == (0.916, 0.912)
    assert auc_for_separation(spec.group_separation, spec.noise_scale) == pytest.approx(0.980)
    with pytest.raises(DomainError):
        preset_spec('unknown')


def test_population_spec_json_follows_published_schema(tmp_path, spec):
    path = save_population_spec(spec, tmp_path / 'population.json')
    document = json.loads(path.read_text(encoding='utf-8'))
    Draft202012Validator(POPULATION_SPEC_SCHEMA).validate(document)


@pytest.mark.parametrize('field, value', [
    ('dim', 0),
    ('class_prior', [0.5]),
    ('noise_scale', 'wide'),
])
def test_population_spec_json_names_the_bad_field(tmp_path, spec, field, value):
    path = save_population_spec(spec, tmp_path / 'population.json')
    document = json.loads(path.read_text(encoding='utf-8'))
    document[field] = value
    path.write_text(json.dumps(document), encoding='utf-8')
    with pytest.raises(SchemaError) as error:
        load_population_spec(path)
    assert error.value.column == field
