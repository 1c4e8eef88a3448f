import json

import numpy as np
import pytest
from jsonschema import Draft202012Validator

from datagen.generators import sample_population
from datagen.models import PopulationSpec
from learner.gradcheck import check_gradients, relative_error
from learner.models import Architecture, LinearModel, MlpModel, TrainConfig
from learner.probes import split_probe
from learner.schemas import MODEL_SCHEMA
from learner.serializers import load_model, save_model
from learner.training import (fit_classifier, initialize_model, predict,
                              predict_proba, representation, train_classifier)
from metrics.classification import roc_auc
from sepbias.exceptions import (DegenerateTargetError, DomainError,
                                SchemaError, TrainingFailureError,
                                UnsupportedArchitectureError)


@pytest.mark.parametrize('fields', [
    {'learning_rate': 0.0},
    {'max_epochs': 0},
    {'patience': 1.5},
    {'val_fraction': 1.0},
    {'batch_size': 0},
    {'batch_size': 'all'},
    {'hidden_width': True},
    {'seed': -1},
])
def test_train_config_validation(fields):
    with pytest.raises(DomainError):
        TrainConfig(**fields)


@pytest.mark.parametrize('arch, bound', [('linear', 1e-5), ('mlp', 1e-4)])
def test_gradients_match_finite_differences(arch, bound, small_dataset):
    assert check_gradients(arch, TrainConfig(hidden_width=4, seed=1), small_dataset) < bound
    assert check_gradients(arch, TrainConfig(hidden_width=4, seed=1), small_dataset, target='group') < bound


@pytest.mark.parametrize('seed', range(5))
def test_linear_gradients_across_initializations(seed, small_dataset):
    assert check_gradients('linear', TrainConfig(seed=seed), small_dataset) < 1e-5


def test_gradient_check_sample_limit(dataset):
    with pytest.raises(DomainError):
        check_gradients('linear', TrainConfig(), dataset)


def test_relative_error_floor():
    assert relative_error(0.0, 0.0) == 0.0
    assert relative_error(1e-9, 0.0) == pytest.approx(1e-4)
    assert relative_error(1.0, 1.0) == 0.0


def test_training_is_deterministic(dataset, fast_config):
    first = train_classifier(dataset, 'observed_label', 'mlp', fast_config)
    second = train_classifier(dataset, 'observed_label', 'mlp', fast_config)
    other = train_classifier(dataset, 'observed_label', 'mlp', TrainConfig(max_epochs=50, seed=4))
    assert first.fingerprint() == second.fingerprint()
    assert first.fingerprint() != other.fingerprint()


def test_fit_keeps_best_validation_snapshot(dataset, fast_config):
    result = fit_classifier(dataset, 'observed_label', 'linear', fast_config)
    losses = result.validation_losses
    assert len(losses) == result.stopped_epoch + 1
    assert result.best_epoch <= result.stopped_epoch <= fast_config.max_epochs
    assert losses[result.best_epoch] == min(losses)
    assert isinstance(result.model, LinearModel)
    assert result.model.train_config == fast_config


def test_group_classifier_learns_group(spec, dataset, fast_config):
    model = train_classifier(dataset, 'group', 'linear', fast_config)
    test = sample_population(spec, 2000, seed=12)
    assert roc_auc(predict_proba(model, test.features), test.groups) > 0.85


def test_disease_classifier_beats_chance(spec, dataset):
    model = train_classifier(dataset, 'observed_label', 'linear', TrainConfig(max_epochs=50, batch_size=64, seed=3))
    test = sample_population(spec, 2000, seed=12)
    accuracy = np.mean(predict(model, test.features) == test.true_labels)
    assert accuracy > 0.6


def test_single_class_target(make_dataset):
    dataset = make_dataset([0, 1] * 10, [0] * 20)
    with pytest.raises(DegenerateTargetError):
        train_classifier(dataset, 'observed_label', 'linear', TrainConfig())


def test_divergence_reports_epoch(make_dataset):
    dataset = make_dataset([0, 1] * 10, [0, 1] * 10, features=np.full((20, 2), 1e200))
    with pytest.raises(TrainingFailureError) as error:
        train_classifier(dataset, 'observed_label', 'linear', TrainConfig(seed=2))
    assert error.value.epoch == 1


def test_predict_thresholds_strictly():
    model = LinearModel(weights=[1.0, 0.0], bias=0.0)
    assert predict_proba(model, [0.0, 3.0]) == 0.5
    assert predict(model, [0.0, 3.0]) == 0
    assert predict(model, [0.0, 3.0], threshold=0.4) == 1
    assert predict(model, [[2.0, 0.0], [-2.0, 0.0]]).tolist() == [1, 0]


def test_scores_stay_inside_unit_interval():
    model = LinearModel(weights=[100.0, 0.0], bias=0.0)
    scores = predict_proba(model, [[50.0, 0.0], [-50.0, 0.0]])
    assert 0.0 < scores[1] < scores[0] < 1.0


def test_feature_dimension_is_checked():
    model = LinearModel(weights=[1.0, 0.0], bias=0.0)
    with pytest.raises(DomainError):
        predict(model, [1.0, 2.0, 3.0])


def test_representation_shapes():
    model = initialize_model('mlp', 2, TrainConfig(hidden_width=8))
    assert isinstance(model, MlpModel)
    assert representation(model, [0.1, 0.2]).shape == (8,)
    assert representation(model, np.zeros((5, 2))).shape == (5, 8)
    with pytest.raises(UnsupportedArchitectureError):
        representation(initialize_model('linear', 2, TrainConfig()), [0.1, 0.2])


def test_model_json_round_trip(tmp_path, dataset, fast_config):
    model = train_classifier(dataset, 'observed_label', 'mlp', fast_config)
    restored = load_model(save_model(model, tmp_path / 'model.json'))
    assert restored.arch is Architecture.MLP
    assert restored.fingerprint() == model.fingerprint()
    assert restored.train_config == fast_config
    assert np.array_equal(predict_proba(restored, dataset.features), predict_proba(model, dataset.features))


def test_model_json_rejects_foreign_parameters(tmp_path):
    path = save_model(LinearModel(weights=[1.0, 2.0], bias=0.5), tmp_path / 'model.json')
    document = json.loads(path.read_text(encoding='utf-8'))
    document['arch'] = 'mlp'
    path.write_text(json.dumps(document), encoding='utf-8')
    with pytest.raises(SchemaError) as error:
        load_model(path)
    assert error.value.column == 'parameters'


def test_split_probe_on_random_backbone(fast_config):
    inseparable = sample_population(PopulationSpec(), 10000, seed=3)
    backbone = initialize_model('mlp', 2, TrainConfig(seed=8))
    result = split_probe(backbone, inseparable, fast_config)
    assert result.split_auc == pytest.approx(0.5, abs=0.03)
    assert result.backbone_fingerprint == backbone.fingerprint()


def test_split_probe_recovers_separable_groups(fast_config):
    separable = sample_population(PopulationSpec.from_auc(0.98), 4000, seed=3)
    backbone = initialize_model('mlp', 2, TrainConfig(seed=8))
    assert split_probe(backbone, separable, fast_config).split_auc > 0.85


def test_split_probe_preconditions(dataset, fast_config, make_dataset):
    with pytest.raises(UnsupportedArchitectureError):
        split_probe(initialize_model('linear', 2, fast_config), dataset, fast_config)
    one_group = make_dataset([0] * 10, [0, 1] * 5)
    with pytest.raises(DegenerateTargetError):
        split_probe(initialize_model('mlp', 2, fast_config), one_group, fast_config)


def test_model_json_follows_published_schema(tmp_path, fast_config):
    model = MlpModel(hidden_weights=[[0.1, -0.2], [0.3, 0.4]], hidden_bias=[0.0, 0.1],
                     output_weights=[0.5, -0.5], output_bias=0.2, train_config=fast_config)
    path = save_model(model, tmp_path / 'model.json')
    document = json.loads(path.read_text(encoding='utf-8'))
    Draft202012Validator(MODEL_SCHEMA).validate(document)
    document['train_config']['batch_size'] = 'half'
    path.write_text(json.dumps(document), encoding='utf-8')
    with pytest.raises(SchemaError) as error:
        load_model(path)
    assert error.value.column == 'train_config.batch_size'
