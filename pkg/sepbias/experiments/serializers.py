import copy
import json
from pathlib import Path

import yaml
from rest_framework import serializers

from datagen.models import PopulationSpec, axes_at_angle
from datagen.presets import PRESETS_BY_NAME
from datagen.serializers import PopulationSpecSerializer
from experiments.models import ExperimentConfig, ExperimentKind
from learner.models import Architecture, TrainConfig
from learner.serializers import TrainConfigSerializer
from sepbias.exceptions import DomainError, SchemaError
from sepbias.serializers import DocumentSerializer
from sepbias.settings import (ABLATION_N_SEEDS, ABLATION_NOISE_RATES,
                              SCHEMA_VERSION)

KIND_DEFAULTS: dict[ExperimentKind, dict] = {
    ExperimentKind.AUDIT: {},
    ExperimentKind.DEGRADATION: {},
    ExperimentKind.ABLATION: {
        'n_seeds': ABLATION_N_SEEDS,
        'noise_rates': list(ABLATION_NOISE_RATES),
    },
    ExperimentKind.SPLIT: {},
}


class ExperimentConfigSerializer(DocumentSerializer):
    """config.json: the effective ExperimentConfig with its schema version."""

    schema_version = serializers.ChoiceField(choices=[SCHEMA_VERSION], required=False)
    separability_targets = serializers.ListField(child=serializers.FloatField(min_value=0.5), allow_empty=False,
                                                 required=False)
    noise_rates = serializers.ListField(child=serializers.FloatField(min_value=0, max_value=1), allow_empty=False,
                                        required=False)
    n_train = serializers.IntegerField(min_value=1, required=False)
    n_test = serializers.IntegerField(min_value=1, required=False)
    n_seeds = serializers.IntegerField(min_value=1, required=False)
    arch = serializers.ChoiceField(choices=[arch.value for arch in Architecture], required=False)
    train_config = TrainConfigSerializer(required=False)
    target_group = serializers.ChoiceField(choices=[0, 1], required=False)
    alpha = serializers.FloatField(required=False)
    threshold = serializers.FloatField(required=False)
    master_seed = serializers.IntegerField(min_value=0, required=False)
    presets = serializers.ListField(child=serializers.ChoiceField(choices=list(PRESETS_BY_NAME)), required=False)
    population = PopulationSpecSerializer(required=False)
    dataset_path = serializers.CharField(allow_null=True, required=False)
    output_dir = serializers.CharField(allow_null=True, required=False)
    jobs = serializers.IntegerField(min_value=1, required=False)

    def create(self, validated_data: dict) -> ExperimentConfig:
        data = {name: value for name, value in validated_data.items() if name != 'schema_version'}
        try:
            if 'train_config' in data:
                data['train_config'] = TrainConfig(**data['train_config'])
            if 'population' in data:
                data['population'] = PopulationSpec(**data['population'])
            return ExperimentConfig(**data)
        except DomainError as exc:
            raise SchemaError(f'ExperimentConfigSerializer: {exc}') from exc

    def to_representation(self, instance: ExperimentConfig) -> dict:
        return {'schema_version': SCHEMA_VERSION, **instance.to_dict()}


def load_config_file(path) -> dict:
    """Raw settings of a JSON or YAML experiment file."""
    path = Path(path)
    text = path.read_text(encoding='utf-8')
    if path.suffix.lower() in ('.yaml', '.yml'):
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            mark = getattr(exc, 'problem_mark', None)
            raise SchemaError(f'{path}: invalid YAML', line=None if mark is None else mark.line + 1) from exc
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f'{path}: invalid JSON: {exc.msg}', line=exc.lineno) from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise SchemaError(f'{path}: top level must be a mapping')
    return data


def parse_overrides(assignments) -> dict:
    """Nested settings from dotted key=value pairs; values parse as YAML scalars."""
    overrides: dict = {}
    for assignment in assignments:
        key, separator, raw = assignment.partition('=')
        if not separator or not key:
            raise DomainError(f'override must look like key=value, got {assignment!r}')
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError:
            raise DomainError(f'cannot parse value of override {key!r}: {raw!r}') from None
        *parents, leaf = key.split('.')
        node = overrides
        for part in parents:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise DomainError(f'override {key!r} conflicts with an earlier one')
        node[leaf] = value
    return overrides


def merge_settings(base: dict, layer: dict) -> dict:
    """Recursive update of base by layer; neither argument is modified."""
    merged = copy.deepcopy(base)
    for key, value in layer.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_settings(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _with_axes(layer: dict) -> dict:
    # A new dim without explicit axes gets the default orthogonal pair.
    population = layer.get('population')
    if not isinstance(population, dict) or 'dim' not in population:
        return layer
    if 'group_axis' in population or 'disease_axis' in population:
        return layer
    if isinstance(population['dim'], bool) or not isinstance(population['dim'], int) or population['dim'] < 2:
        return layer
    group_axis, disease_axis = axes_at_angle(population['dim'])
    population = {**population, 'group_axis': list(group_axis), 'disease_axis': list(disease_axis)}
    return {**layer, 'population': population}


def build_experiment_config(kind: ExperimentKind | str, file_data: dict | None = None,
                            overrides: dict | None = None) -> ExperimentConfig:
    """Effective configuration: built-in defaults < config file < command-line overrides."""
    kind = ExperimentKind.parse(kind)
    settings = dict(ExperimentConfigSerializer(ExperimentConfig(**KIND_DEFAULTS[kind])).data)
    for layer in (file_data or {}, overrides or {}):
        settings = merge_settings(settings, _with_axes(layer))
    return ExperimentConfigSerializer.parse(settings)


def load_experiment_config(path) -> ExperimentConfig:
    return ExperimentConfigSerializer.load(path)


def save_experiment_config(config: ExperimentConfig, path) -> Path:
    return ExperimentConfigSerializer.dump(config, path)
