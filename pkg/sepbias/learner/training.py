import logging
import math

import numpy as np
from scipy.special import expit

from datagen.models import Dataset
from learner.models import (MODEL_CLASSES, Architecture, FitResult, Model,
                            MlpModel, Target, TrainConfig)
from sepbias.exceptions import (DegenerateTargetError, DomainError,
                                TrainingFailureError,
                                UnsupportedArchitectureError)
from sepbias.settings import DEFAULT_THRESHOLD

logger = logging.getLogger(__name__)

Parameters = dict[str, np.ndarray]


def initialize_parameters(arch: Architecture | str, dim: int, config: TrainConfig) -> Parameters:
    """Seeded initial parameters; small Gaussian weights, zero biases."""
    arch = Architecture.parse(arch)
    rng = np.random.default_rng(config.seed)
    if arch is Architecture.LINEAR:
        return {
            'weights': 0.01 * rng.standard_normal(dim),
            'bias': np.array(0.0),
        }
    width = config.hidden_width
    return {
        'hidden_weights': rng.standard_normal((dim, width)) / math.sqrt(dim),
        'hidden_bias': np.zeros(width),
        'output_weights': rng.standard_normal(width) / math.sqrt(width),
        'output_bias': np.array(0.0),
    }


def initialize_model(arch: Architecture | str, dim: int, config: TrainConfig) -> Model:
    """Untrained model with seeded initial parameters."""
    arch = Architecture.parse(arch)
    return MODEL_CLASSES[arch].from_parameters(initialize_parameters(arch, dim, config), config)


def forward(arch: Architecture, parameters: Parameters, features: np.ndarray) -> tuple[np.ndarray, np.ndarray | None]:
    """Logits and, for the MLP, hidden activations."""
    if arch is Architecture.LINEAR:
        return features @ parameters['weights'] + parameters['bias'], None
    hidden = np.tanh(features @ parameters['hidden_weights'] + parameters['hidden_bias'])
    return hidden @ parameters['output_weights'] + parameters['output_bias'], hidden


def binary_cross_entropy(logits: np.ndarray, targets: np.ndarray) -> float:
    """Mean BCE computed from logits."""
    return float(np.mean(np.logaddexp(0.0, logits) - targets * logits))


def loss(arch: Architecture, parameters: Parameters, features: np.ndarray, targets: np.ndarray) -> float:
    logits, _ = forward(arch, parameters, features)
    return binary_cross_entropy(logits, targets)


def loss_and_gradients(arch: Architecture, parameters: Parameters, features: np.ndarray,
                       targets: np.ndarray) -> tuple[float, Parameters]:
    """Mean BCE and its gradient by backpropagation."""
    logits, hidden = forward(arch, parameters, features)
    d_logits = (expit(logits) - targets) / targets.size
    if arch is Architecture.LINEAR:
        gradients = {
            'weights': features.T @ d_logits,
            'bias': np.array(d_logits.sum()),
        }
    else:
        d_hidden = np.outer(d_logits, parameters['output_weights']) * (1.0 - hidden ** 2)
        gradients = {
            'hidden_weights': features.T @ d_hidden,
            'hidden_bias': d_hidden.sum(axis=0),
            'output_weights': hidden.T @ d_logits,
            'output_bias': np.array(d_logits.sum()),
        }
    return binary_cross_entropy(logits, targets), gradients


def gradient_step(parameters: Parameters, gradients: Parameters, learning_rate: float) -> Parameters:
    return {name: values - learning_rate * gradients[name] for name, values in parameters.items()}


def target_values(dataset: Dataset, target: Target | str) -> np.ndarray:
    target = Target.parse(target)
    labels = dataset.observed_labels if target is Target.OBSERVED_LABEL else dataset.groups
    return labels.astype(np.float64)


def validation_split(n: int, config: TrainConfig) -> tuple[np.ndarray, np.ndarray]:
    """Seeded (train, validation) index split."""
    n_val = max(1, int(round(config.val_fraction * n)))
    if n_val >= n:
        raise DomainError(f'cannot carve a validation split from {n} samples')
    order = np.random.default_rng(config.seed).permutation(n)
    return np.sort(order[n_val:]), np.sort(order[:n_val])


def _batches(indices: np.ndarray, batch_size: int | str, rng: np.random.Generator) -> list[np.ndarray]:
    if batch_size == 'full' or batch_size >= indices.size:
        return [indices]
    shuffled = rng.permutation(indices)
    return [shuffled[start:start + batch_size] for start in range(0, shuffled.size, batch_size)]


def fit_classifier(dataset: Dataset, target: Target | str, arch: Architecture | str,
                   config: TrainConfig) -> FitResult:
    """Gradient-descent ERM on binary cross-entropy with early stopping on validation loss."""
    arch = Architecture.parse(arch)
    targets = target_values(dataset, target)
    train_indices, val_indices = validation_split(len(dataset), config)
    if np.unique(targets[train_indices]).size < 2:
        raise DegenerateTargetError(f'training split of target {Target.parse(target).value!r} has a single class')
    train_features, train_targets = dataset.features[train_indices], targets[train_indices]
    val_features, val_targets = dataset.features[val_indices], targets[val_indices]

    parameters = initialize_parameters(arch, dataset.dim, config)
    shuffle_rng = np.random.default_rng([config.seed, 1])
    best_parameters = parameters
    best_loss = loss(arch, parameters, val_features, val_targets)
    history: list[float] = [best_loss]
    best_epoch = 0
    stale = 0
    epoch = 0
    for epoch in range(1, config.max_epochs + 1):
        for batch in _batches(np.arange(train_indices.size), config.batch_size, shuffle_rng):
            train_loss, gradients = loss_and_gradients(arch, parameters, train_features[batch], train_targets[batch])
            if not math.isfinite(train_loss):
                raise TrainingFailureError('non-finite training loss', epoch=epoch)
            parameters = gradient_step(parameters, gradients, config.learning_rate)
        val_loss = loss(arch, parameters, val_features, val_targets)
        if not math.isfinite(val_loss):
            raise TrainingFailureError('non-finite validation loss', epoch=epoch)
        history.append(val_loss)
        logger.debug('epoch %d: validation loss %.6f', epoch, val_loss)
        if val_loss < best_loss:
            best_loss, best_parameters, best_epoch, stale = val_loss, parameters, epoch, 0
        else:
            stale += 1
            if stale >= config.patience:
                break
    logger.info('Trained %s on %s: stopped at epoch %d, best epoch %d (validation loss %.4f)',
                arch.value, Target.parse(target).value, epoch, best_epoch, best_loss)
    return FitResult(
        model=MODEL_CLASSES[arch].from_parameters(best_parameters, config),
        validation_losses=tuple(history),
        best_epoch=best_epoch,
        stopped_epoch=epoch,
    )


def train_classifier(dataset: Dataset, target: Target | str, arch: Architecture | str,
                     config: TrainConfig) -> Model:
    """Best-validation-loss snapshot of gradient-descent training."""
    return fit_classifier(dataset, target, arch, config).model


def predict_proba(model: Model, x) -> float | np.ndarray:
    points, single = model.check_features(x)
    scores = model.score(points)
    return float(scores[0]) if single else scores


def predict(model: Model, x, threshold: float = DEFAULT_THRESHOLD) -> int | np.ndarray:
    """1 where the score strictly exceeds threshold."""
    scores = predict_proba(model, x)
    if np.ndim(scores) == 0:
        return int(scores > threshold)
    return (scores > threshold).astype(np.int8)


def representation(model: Model, x) -> np.ndarray:
    """Frozen-backbone features of an MLP."""
    if not isinstance(model, MlpModel):
        raise UnsupportedArchitectureError(f'representation needs arch=mlp, got {model.arch.value}')
    return model.representation(x)
