import math
import re
from pathlib import Path

import numpy as np
import pandas as pd
from pandas.errors import EmptyDataError, ParserError
from rest_framework import serializers

from datagen.models import Dataset, PopulationSpec
from sepbias.exceptions import DomainError, SchemaError
from sepbias.serializers import DocumentSerializer
from sepbias.settings import FEATURE_COLUMN_PREFIX, LABEL_COLUMNS

FEATURE_COLUMN = re.compile(rf'^{FEATURE_COLUMN_PREFIX}(0|[1-9][0-9]*)$')

# Header is line 1, first data row line 2.
FIRST_DATA_LINE: int = 2


class PopulationSpecSerializer(DocumentSerializer):
    """JSON document with exactly the PopulationSpec field names."""

    dim = serializers.IntegerField(min_value=1)
    group_prior = serializers.FloatField()
    class_prior = serializers.ListField(child=serializers.FloatField(), min_length=2, max_length=2)
    group_separation = serializers.FloatField(min_value=0)
    disease_separation = serializers.FloatField(min_value=0)
    group_axis = serializers.ListField(child=serializers.FloatField(), min_length=1)
    disease_axis = serializers.ListField(child=serializers.FloatField(), min_length=1)
    noise_scale = serializers.FloatField()

    def create(self, validated_data: dict) -> PopulationSpec:
        try:
            return PopulationSpec(**validated_data)
        except DomainError as exc:
            raise SchemaError(f'PopulationSpecSerializer: {exc}') from exc

    def to_representation(self, instance: PopulationSpec) -> dict:
        return instance.to_dict()


def load_population_spec(path) -> PopulationSpec:
    return PopulationSpecSerializer.load(path)


def save_population_spec(spec: PopulationSpec, path) -> Path:
    return PopulationSpecSerializer.dump(spec, path)


class DatasetCsvSerializer:
    """Dataset CSV: feature_0..feature_{dim-1}, group, true_label, observed_label."""

    label_columns = LABEL_COLUMNS

    def to_frame(self, dataset: Dataset) -> pd.DataFrame:
        columns = {f'{FEATURE_COLUMN_PREFIX}{index}': dataset.features[:, index]
                   for index in range(dataset.dim)}
        columns['group'] = dataset.groups
        columns['true_label'] = dataset.true_labels
        columns['observed_label'] = dataset.observed_labels
        return pd.DataFrame(columns)

    def save(self, dataset: Dataset, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame = self.to_frame(dataset)
        text = frame.to_csv(index=False, lineterminator='\n', float_format=_format_float)
        path.write_text(text, encoding='utf-8', newline='\n')
        return path

    def load(self, path) -> Dataset:
        try:
            frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding='utf-8')
        except EmptyDataError as exc:
            raise SchemaError(f'{path}: empty file') from exc
        except ParserError as exc:
            raise SchemaError(f'{path}: malformed CSV: {exc}') from exc
        return self.validate(frame, source=path)

    def validate(self, frame: pd.DataFrame, source='<frame>') -> Dataset:
        feature_indices: dict[int, str] = {}
        for column in frame.columns:
            match = FEATURE_COLUMN.match(column)
            if match:
                feature_indices[int(match.group(1))] = column
            elif column not in self.label_columns:
                raise SchemaError(f'{source}: unexpected column', column=column)
        for column in self.label_columns:
            if column not in frame.columns:
                raise SchemaError(f'{source}: missing column', column=column)
        if not feature_indices:
            raise SchemaError(f'{source}: no feature columns', column=f'{FEATURE_COLUMN_PREFIX}0')
        for index in range(len(feature_indices)):
            if index not in feature_indices:
                raise SchemaError(f'{source}: missing column', column=f'{FEATURE_COLUMN_PREFIX}{index}')
        if frame.empty:
            raise SchemaError(f'{source}: no data rows')

        features = np.empty((len(frame), len(feature_indices)), dtype=np.float64)
        for index, column in sorted(feature_indices.items()):
            features[:, index] = [
                _parse_float(value, line, column, source)
                for line, value in enumerate(frame[column], start=FIRST_DATA_LINE)
            ]
        labels = {
            column: np.array([
                _parse_binary(value, line, column, source)
                for line, value in enumerate(frame[column], start=FIRST_DATA_LINE)
            ], dtype=np.int8)
            for column in self.label_columns
        }
        promoted = np.flatnonzero((labels['true_label'] == 0) & (labels['observed_label'] == 1))
        if promoted.size:
            raise SchemaError(f'{source}: observed_label 1 with true_label 0',
                              line=int(promoted[0]) + FIRST_DATA_LINE, column='observed_label')
        return Dataset(
            features=features,
            groups=labels['group'],
            true_labels=labels['true_label'],
            observed_labels=labels['observed_label'],
        )


def _format_float(value: float) -> str:
    return repr(float(value))


def _parse_float(value: str, line: int, column: str, source) -> float:
    try:
        number = float(value)
    except ValueError:
        raise SchemaError(f'{source}: non-numeric feature value {value!r}', line=line, column=column) from None
    if not math.isfinite(number):
        raise SchemaError(f'{source}: non-finite feature value {value!r}', line=line, column=column)
    return number


def _parse_binary(value: str, line: int, column: str, source) -> int:
    if value not in ('0', '1'):
        raise SchemaError(f'{source}: expected 0 or 1, got {value!r}', line=line, column=column)
    return int(value)


def load_dataset_csv(path) -> Dataset:
    return DatasetCsvSerializer().load(path)


def save_dataset_csv(dataset: Dataset, path) -> Path:
    return DatasetCsvSerializer().save(dataset, path)
