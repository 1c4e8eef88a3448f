import math
from dataclasses import asdict, dataclass
from typing import ClassVar, Iterator

import numpy as np

from sepbias.exceptions import DomainError
from sepbias.seeding import fingerprint
from sepbias.settings import (AXIS_NORM_TOLERANCE, DEFAULT_AXIS_ANGLE,
                              DEFAULT_CLASS_PRIOR, DEFAULT_DIM,
                              DEFAULT_DISEASE_SEPARATION, DEFAULT_GROUP_PRIOR,
                              DEFAULT_NOISE_SCALE)


def _check_probability(name: str, value: float) -> None:
    if not (math.isfinite(value) and 0.0 < value < 1.0):
        raise DomainError(f'{name} must lie strictly inside (0, 1), got {value!r}')


def axes_at_angle(dim: int = DEFAULT_DIM,
                  angle_degrees: float = DEFAULT_AXIS_ANGLE) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Group axis e0 and a disease axis at the given angle to it, in the e0-e1 plane."""
    if dim < 2:
        raise DomainError(f'two axes need dim >= 2, got {dim}')
    if not math.isfinite(angle_degrees):
        raise DomainError(f'angle must be finite, got {angle_degrees!r}')
    group_axis = [0.0] * dim
    group_axis[0] = 1.0
    disease_axis = [0.0] * dim
    if angle_degrees == 90.0:
        disease_axis[1] = 1.0
    else:
        radians = math.radians(angle_degrees)
        disease_axis[0] = math.cos(radians)
        disease_axis[1] = math.sin(radians)
    return tuple(group_axis), tuple(disease_axis)


_DEFAULT_AXES = axes_at_angle()


@dataclass(frozen=True)
class PopulationSpec:
    """Two-group, two-class Gaussian population with a calibrated separability knob."""

    dim: int = DEFAULT_DIM
    group_prior: float = DEFAULT_GROUP_PRIOR
    class_prior: tuple[float, float] = DEFAULT_CLASS_PRIOR
    group_separation: float = 0.0
    disease_separation: float = DEFAULT_DISEASE_SEPARATION
    group_axis: tuple[float, ...] = _DEFAULT_AXES[0]
    disease_axis: tuple[float, ...] = _DEFAULT_AXES[1]
    noise_scale: float = DEFAULT_NOISE_SCALE

    def __post_init__(self):
        object.__setattr__(self, 'class_prior', tuple(float(p) for p in self.class_prior))
        object.__setattr__(self, 'group_axis', tuple(float(v) for v in self.group_axis))
        object.__setattr__(self, 'disease_axis', tuple(float(v) for v in self.disease_axis))
        if isinstance(self.dim, bool) or not isinstance(self.dim, int) or self.dim < 1:
            raise DomainError(f'dim must be a positive integer, got {self.dim!r}')
        _check_probability('group_prior', self.group_prior)
        if len(self.class_prior) != 2:
            raise DomainError('class_prior needs one probability per group')
        for group, prior in enumerate(self.class_prior):
            _check_probability(f'class_prior[{group}]', prior)
        for name in ('group_separation', 'disease_separation'):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise DomainError(f'{name} must be finite and >= 0, got {value!r}')
        if not (math.isfinite(self.noise_scale) and self.noise_scale > 0.0):
            raise DomainError(f'noise_scale must be finite and > 0, got {self.noise_scale!r}')
        for name in ('group_axis', 'disease_axis'):
            axis = getattr(self, name)
            if len(axis) != self.dim:
                raise DomainError(f'{name} has length {len(axis)}, expected {self.dim}')
            norm = math.sqrt(math.fsum(v * v for v in axis))
            if abs(norm - 1.0) > AXIS_NORM_TOLERANCE:
                raise DomainError(f'{name} must have unit norm, got {norm!r}')

    @classmethod
    def from_auc(cls, target_auc: float, **fields) -> 'PopulationSpec':
        """Spec whose Bayes group AUC (orthogonal axes) equals target_auc."""
        from datagen.generators import separation_for_auc

        noise_scale = fields.get('noise_scale', DEFAULT_NOISE_SCALE)
        fields['group_separation'] = separation_for_auc(target_auc, noise_scale)
        return cls(**fields)

    def means(self, groups: np.ndarray, labels: np.ndarray) -> np.ndarray:
        """Class/group conditional means for each (group, label) pair."""
        group_shift = (np.asarray(groups, dtype=float) - 0.5) * self.group_separation
        label_shift = (np.asarray(labels, dtype=float) - 0.5) * self.disease_separation
        return (np.multiply.outer(group_shift, np.asarray(self.group_axis))
                + np.multiply.outer(label_shift, np.asarray(self.disease_axis)))

    def to_dict(self) -> dict:
        document = asdict(self)
        document['class_prior'] = list(self.class_prior)
        document['group_axis'] = list(self.group_axis)
        document['disease_axis'] = list(self.disease_axis)
        return document

    def fingerprint(self) -> str:
        return fingerprint(self.to_dict())


@dataclass(frozen=True)
class Sample:
    """One individual: features, group, true and observed labels."""

    features: tuple[float, ...]
    group: int
    true_label: int
    observed_label: int


def _frozen(values, dtype) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Dataset:
    """Ordered samples held column-wise."""

    features: np.ndarray
    groups: np.ndarray
    true_labels: np.ndarray
    observed_labels: np.ndarray
    spec_fingerprint: str | None = None
    seed: int | None = None
    _binary_columns: ClassVar[tuple[str, ...]] = ('groups', 'true_labels', 'observed_labels',)

    def __post_init__(self):
        features = _frozen(self.features, np.float64)
        if features.ndim != 2:
            raise DomainError(f'features must be a 2-D array, got shape {features.shape}')
        object.__setattr__(self, 'features', features)
        for name in self._binary_columns:
            column = _frozen(getattr(self, name), np.int8)
            if column.shape != (features.shape[0],):
                raise DomainError(f'{name} has shape {column.shape}, expected ({features.shape[0]},)')
            if column.size and not np.isin(column, (0, 1)).all():
                raise DomainError(f'{name} must be binary')
            object.__setattr__(self, name, column)
        if np.any((self.true_labels == 0) & (self.observed_labels == 1)):
            raise DomainError('observed_label may differ from true_label only by 1 -> 0 corruption')

    def __len__(self) -> int:
        return self.features.shape[0]

    def __getitem__(self, index: int) -> Sample:
        return Sample(
            features=tuple(float(v) for v in self.features[index]),
            group=int(self.groups[index]),
            true_label=int(self.true_labels[index]),
            observed_label=int(self.observed_labels[index]),
        )

    def __iter__(self) -> Iterator[Sample]:
        return (self[index] for index in range(len(self)))

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    @property
    def samples(self) -> list[Sample]:
        return list(self)

    def count(self, group: int, true_label: int) -> int:
        return int(np.count_nonzero((self.groups == group) & (self.true_labels == true_label)))

    def is_clean(self) -> bool:
        return bool(np.array_equal(self.observed_labels, self.true_labels))

    def subset(self, indices) -> 'Dataset':
        indices = np.asarray(indices, dtype=np.intp)
        return Dataset(
            features=self.features[indices],
            groups=self.groups[indices],
            true_labels=self.true_labels[indices],
            observed_labels=self.observed_labels[indices],
            spec_fingerprint=self.spec_fingerprint,
            seed=self.seed,
        )

    def with_observed_labels(self, observed_labels) -> 'Dataset':
        return Dataset(
            features=self.features,
            groups=self.groups,
            true_labels=self.true_labels,
            observed_labels=observed_labels,
            spec_fingerprint=self.spec_fingerprint,
            seed=self.seed,
        )

    def with_clean_labels(self) -> 'Dataset':
        return self.with_observed_labels(self.true_labels)

    def same_samples(self, other: 'Dataset') -> bool:
        """Sample-wise equality, ignoring generation metadata."""
        return (self.features.shape == other.features.shape
                and np.array_equal(self.features, other.features)
                and np.array_equal(self.groups, other.groups)
                and np.array_equal(self.true_labels, other.true_labels)
                and np.array_equal(self.observed_labels, other.observed_labels))
