import enum
import hashlib
import math
from dataclasses import asdict, dataclass
from typing import ClassVar

import numpy as np
from scipy.special import expit

from sepbias.exceptions import DomainError, UnsupportedArchitectureError
from sepbias.settings import (DEFAULT_BATCH_SIZE, DEFAULT_HIDDEN_WIDTH,
                              DEFAULT_LEARNING_RATE, DEFAULT_MAX_EPOCHS,
                              DEFAULT_PATIENCE, DEFAULT_VAL_FRACTION)

SCORE_EPSILON: float = float(np.finfo(np.float64).eps)


class Architecture(enum.StrEnum):
    LINEAR = 'linear'
    MLP = 'mlp'

    @classmethod
    def parse(cls, value) -> 'Architecture':
        try:
            return cls(value)
        except ValueError:
            raise DomainError(f'unknown architecture {value!r}') from None


class Target(enum.StrEnum):
    OBSERVED_LABEL = 'observed_label'
    GROUP = 'group'

    @classmethod
    def parse(cls, value) -> 'Target':
        try:
            return cls(value)
        except ValueError:
            raise DomainError(f'unknown training target {value!r}') from None


def _positive_int(name: str, value) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise DomainError(f'{name} must be a positive integer, got {value!r}')


@dataclass(frozen=True)
class TrainConfig:
    """Gradient-descent discipline: early stopping on validation loss."""

    learning_rate: float = DEFAULT_LEARNING_RATE
    max_epochs: int = DEFAULT_MAX_EPOCHS
    patience: int = DEFAULT_PATIENCE
    val_fraction: float = DEFAULT_VAL_FRACTION
    batch_size: int | str = DEFAULT_BATCH_SIZE
    hidden_width: int = DEFAULT_HIDDEN_WIDTH
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.learning_rate) and self.learning_rate > 0.0):
            raise DomainError(f'learning_rate must be > 0, got {self.learning_rate!r}')
        _positive_int('max_epochs', self.max_epochs)
        _positive_int('patience', self.patience)
        _positive_int('hidden_width', self.hidden_width)
        if not (0.0 < self.val_fraction < 1.0):
            raise DomainError(f'val_fraction must lie in (0, 1), got {self.val_fraction!r}')
        if self.batch_size != 'full':
            _positive_int('batch_size', self.batch_size)
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise DomainError(f'seed must be a nonnegative integer, got {self.seed!r}')

    def to_dict(self) -> dict:
        return asdict(self)


def _frozen(values) -> np.ndarray:
    array = np.array(values, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


class Model:
    """Common surface of trained classifiers."""

    arch: ClassVar[Architecture]
    parameter_names: ClassVar[tuple[str, ...]]

    train_config: TrainConfig | None

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def check_features(self, features) -> tuple[np.ndarray, bool]:
        points = np.asarray(features, dtype=np.float64)
        single = points.ndim == 1
        if single:
            points = points[np.newaxis, :]
        if points.ndim != 2 or points.shape[1] != self.dim:
            raise DomainError(f'features must have dimension {self.dim}, got shape {np.shape(features)}')
        return points, single

    def logits(self, features: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def score(self, features: np.ndarray) -> np.ndarray:
        """Strictly inside (0, 1)."""
        return np.clip(expit(self.logits(features)), SCORE_EPSILON, 1.0 - SCORE_EPSILON)

    def parameters(self) -> dict[str, np.ndarray]:
        return {name: np.array(getattr(self, name), dtype=np.float64) for name in self.parameter_names}

    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        for name, values in self.parameters().items():
            digest.update(name.encode('utf-8'))
            digest.update(np.ascontiguousarray(values).tobytes())
        return digest.hexdigest()

    @classmethod
    def from_parameters(cls, parameters: dict[str, np.ndarray], train_config: TrainConfig | None = None):
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class LinearModel(Model):
    """Logistic regression: sigmoid(w . x + b)."""

    arch: ClassVar[Architecture] = Architecture.LINEAR
    parameter_names: ClassVar[tuple[str, ...]] = ('weights', 'bias',)

    weights: np.ndarray
    bias: float
    train_config: TrainConfig | None = None

    def __post_init__(self):
        object.__setattr__(self, 'weights', _frozen(self.weights))
        object.__setattr__(self, 'bias', float(self.bias))
        if self.weights.ndim != 1:
            raise DomainError(f'weights must be a vector, got shape {self.weights.shape}')
        if not (np.all(np.isfinite(self.weights)) and math.isfinite(self.bias)):
            raise DomainError('model parameters must be finite')

    @property
    def dim(self) -> int:
        return self.weights.shape[0]

    def logits(self, features: np.ndarray) -> np.ndarray:
        return features @ self.weights + self.bias

    def representation(self, features):
        raise UnsupportedArchitectureError('a linear model has no internal representation; use arch=mlp')

    @classmethod
    def from_parameters(cls, parameters, train_config=None) -> 'LinearModel':
        return cls(weights=parameters['weights'], bias=float(parameters['bias']), train_config=train_config)


@dataclass(frozen=True, eq=False)
class MlpModel(Model):
    """One tanh hidden layer of width h followed by a logistic output unit."""

    arch: ClassVar[Architecture] = Architecture.MLP
    parameter_names: ClassVar[tuple[str, ...]] = ('hidden_weights', 'hidden_bias', 'output_weights', 'output_bias',)
    activation: ClassVar[str] = 'tanh'

    hidden_weights: np.ndarray
    hidden_bias: np.ndarray
    output_weights: np.ndarray
    output_bias: float
    train_config: TrainConfig | None = None

    def __post_init__(self):
        for name in ('hidden_weights', 'hidden_bias', 'output_weights'):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        object.__setattr__(self, 'output_bias', float(self.output_bias))
        width = self.hidden_bias.shape[0] if self.hidden_bias.ndim == 1 else -1
        if (self.hidden_weights.ndim != 2 or self.hidden_weights.shape[1] != width
                or self.output_weights.shape != (width,)):
            raise DomainError('inconsistent MLP parameter shapes')
        if not all(np.all(np.isfinite(values)) for values in self.parameters().values()):
            raise DomainError('model parameters must be finite')

    @property
    def dim(self) -> int:
        return self.hidden_weights.shape[0]

    @property
    def hidden_width(self) -> int:
        return self.hidden_bias.shape[0]

    def hidden(self, features: np.ndarray) -> np.ndarray:
        return np.tanh(features @ self.hidden_weights + self.hidden_bias)

    def logits(self, features: np.ndarray) -> np.ndarray:
        return self.hidden(features) @ self.output_weights + self.output_bias

    def representation(self, features) -> np.ndarray:
        """Hidden-layer activations, shape (h,) for one x or (n, h) for a batch."""
        points, single = self.check_features(features)
        hidden = self.hidden(points)
        return hidden[0] if single else hidden

    @classmethod
    def from_parameters(cls, parameters, train_config=None) -> 'MlpModel':
        return cls(
            hidden_weights=parameters['hidden_weights'],
            hidden_bias=parameters['hidden_bias'],
            output_weights=parameters['output_weights'],
            output_bias=float(parameters['output_bias']),
            train_config=train_config,
        )


MODEL_CLASSES: dict[Architecture, type[Model]] = {
    Architecture.LINEAR: LinearModel,
    Architecture.MLP: MlpModel,
}


@dataclass(frozen=True, eq=False)
class FitResult:
    """Trained model with its validation-loss history (one entry per epoch, index 0 before training)."""

    model: Model
    validation_losses: tuple[float, ...]
    best_epoch: int
    stopped_epoch: int


@dataclass(frozen=True, eq=False)
class ProbeResult:
    """Linear probe trained on a frozen backbone and its test-split AUC."""

    probe: LinearModel
    split_auc: float
    backbone_fingerprint: str
