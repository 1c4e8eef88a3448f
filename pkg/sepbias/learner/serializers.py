from pathlib import Path

from rest_framework import serializers

from learner.models import MODEL_CLASSES, Architecture, Model, TrainConfig
from sepbias.exceptions import DomainError, SchemaError
from sepbias.serializers import (BatchSizeField, DocumentSerializer,
                                 StrictSerializer)
from sepbias.settings import SCHEMA_VERSION


class TrainConfigSerializer(StrictSerializer):
    """Optimiser settings; absent keys take the TrainConfig defaults."""

    learning_rate = serializers.FloatField(required=False)
    max_epochs = serializers.IntegerField(min_value=1, required=False)
    patience = serializers.IntegerField(min_value=1, required=False)
    val_fraction = serializers.FloatField(required=False)
    batch_size = BatchSizeField(required=False)
    hidden_width = serializers.IntegerField(min_value=1, required=False)
    seed = serializers.IntegerField(min_value=0, required=False)

    def to_representation(self, instance: TrainConfig) -> dict:
        return instance.to_dict()


class ModelSerializer(DocumentSerializer):
    """Architecture tag, parameter arrays and the TrainConfig used."""

    schema_version = serializers.ChoiceField(choices=[SCHEMA_VERSION])
    arch = serializers.ChoiceField(choices=[arch.value for arch in Architecture])
    parameters = serializers.DictField(child=serializers.JSONField())
    train_config = TrainConfigSerializer(allow_null=True)

    def create(self, validated_data: dict) -> Model:
        model_class = MODEL_CLASSES[Architecture(validated_data['arch'])]
        parameters = validated_data['parameters']
        if set(parameters) != set(model_class.parameter_names):
            raise SchemaError(
                f'ModelSerializer: {validated_data["arch"]} parameters are '
                f'{", ".join(model_class.parameter_names)}, got {", ".join(sorted(parameters))}',
                column='parameters',
            )
        try:
            train_config = validated_data['train_config']
            if train_config is not None:
                train_config = TrainConfig(**train_config)
            return model_class.from_parameters(parameters, train_config)
        except (DomainError, ValueError, TypeError) as exc:
            raise SchemaError(f'ModelSerializer: {exc}') from exc

    def to_representation(self, instance: Model) -> dict:
        return {
            'schema_version': SCHEMA_VERSION,
            'arch': instance.arch.value,
            'parameters': {name: values.tolist() for name, values in instance.parameters().items()},
            'train_config': None if instance.train_config is None else instance.train_config.to_dict(),
        }


def load_model(path) -> Model:
    return ModelSerializer.load(path)


def save_model(model: Model, path) -> Path:
    return ModelSerializer.dump(model, path)
