import logging
import math

import numpy as np
from scipy.stats import norm

from datagen.models import Dataset, PopulationSpec
from sepbias.exceptions import DegenerateDatasetError, DomainError
from sepbias.settings import DEFAULT_TEST_FRACTION

logger = logging.getLogger(__name__)


def auc_for_separation(delta: float, sigma: float) -> float:
    """Bayes AUC between two isotropic Gaussians whose means are delta apart."""
    if not (math.isfinite(delta) and math.isfinite(sigma)):
        raise DomainError(f'separation and noise scale must be finite, got {delta!r}, {sigma!r}')
    if delta < 0.0:
        raise DomainError(f'separation must be >= 0, got {delta!r}')
    if sigma <= 0.0:
        raise DomainError(f'noise scale must be > 0, got {sigma!r}')
    return float(norm.cdf(delta / (sigma * math.sqrt(2.0))))


def separation_for_auc(target_auc: float, sigma: float) -> float:
    """Inverse of auc_for_separation at fixed sigma."""
    if not (math.isfinite(target_auc) and 0.5 <= target_auc < 1.0):
        raise DomainError(f'target AUC must lie in [0.5, 1), got {target_auc!r}')
    if not (math.isfinite(sigma) and sigma > 0.0):
        raise DomainError(f'noise scale must be finite and > 0, got {sigma!r}')
    if target_auc == 0.5:
        return 0.0
    return float(sigma * math.sqrt(2.0) * norm.ppf(target_auc))


def sample_population(spec: PopulationSpec, n: int, seed: int) -> Dataset:
    """Draws n samples from the generative model of spec."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f'sample size must be a positive integer, got {n!r}')
    rng = np.random.default_rng(seed)
    groups = (rng.random(n) < spec.group_prior).astype(np.int8)
    class_prior = np.asarray(spec.class_prior)[groups]
    labels = (rng.random(n) < class_prior).astype(np.int8)
    noise = rng.standard_normal((n, spec.dim))
    features = spec.means(groups, labels) + spec.noise_scale * noise
    for group in (0, 1):
        for label in (0, 1):
            if not np.any((groups == group) & (labels == label)):
                raise DegenerateDatasetError(
                    f'no sample with group={group}, true_label={label} among n={n} (seed {seed})'
                )
    logger.debug('Sampled %d individuals from spec %s', n, spec.fingerprint()[:12])
    return Dataset(
        features=features,
        groups=groups,
        true_labels=labels,
        observed_labels=labels,
        spec_fingerprint=spec.fingerprint(),
        seed=seed,
    )


def split_dataset(dataset: Dataset, test_fraction: float = DEFAULT_TEST_FRACTION,
                  seed: int = 0) -> tuple[Dataset, Dataset]:
    """Seeded random train/test split."""
    if not (0.0 < test_fraction < 1.0):
        raise DomainError(f'test fraction must lie in (0, 1), got {test_fraction!r}')
    n_test = int(round(test_fraction * len(dataset)))
    if n_test < 1 or n_test >= len(dataset):
        raise DomainError(f'cannot split {len(dataset)} samples with test fraction {test_fraction}')
    order = np.random.default_rng(seed).permutation(len(dataset))
    return dataset.subset(np.sort(order[n_test:])), dataset.subset(np.sort(order[:n_test]))
