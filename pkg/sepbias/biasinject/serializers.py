from pathlib import Path

from rest_framework import serializers

from biasinject.models import NoiseSpec
from sepbias.exceptions import DomainError, SchemaError
from sepbias.serializers import DocumentSerializer


class NoiseSpecSerializer(DocumentSerializer):
    """JSON document with fields target_group, rate, seed."""

    target_group = serializers.ChoiceField(choices=[0, 1])
    rate = serializers.FloatField(min_value=0, max_value=1)
    seed = serializers.IntegerField(min_value=0)

    def create(self, validated_data: dict) -> NoiseSpec:
        try:
            return NoiseSpec(**validated_data)
        except DomainError as exc:
            raise SchemaError(f'NoiseSpecSerializer: {exc}', column='rate') from exc

    def to_representation(self, instance: NoiseSpec) -> dict:
        return {'target_group': instance.target_group, 'rate': instance.rate, 'seed': instance.seed}


def load_noise_spec(path) -> NoiseSpec:
    return NoiseSpecSerializer.load(path)


def save_noise_spec(spec: NoiseSpec, path) -> Path:
    return NoiseSpecSerializer.dump(spec, path)
