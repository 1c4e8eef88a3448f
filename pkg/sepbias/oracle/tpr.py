import logging
import math

import numpy as np

from biasinject.models import NoiseSpec
from datagen.generators import sample_population
from datagen.models import PopulationSpec
from metrics.classification import roc_auc
from oracle.models import Regime, TprEstimate
from oracle.posteriors import biased_posteriors, posteriors
from sepbias.exceptions import DomainError
from sepbias.settings import (DEFAULT_MC_SAMPLES, DEFAULT_THRESHOLD,
                              MIN_MC_SAMPLES)

logger = logging.getLogger(__name__)


def theoretical_tpr(spec: PopulationSpec, noise: NoiseSpec | None, regime: Regime | str, group: int,
                    threshold: float = DEFAULT_THRESHOLD, n_mc: int = DEFAULT_MC_SAMPLES,
                    seed: int = 0) -> TprEstimate:
    """TPR of the Bayes decision rule on truly positive members of group.

    separable thresholds the group-specific posterior P(y+|x, group); pooled
    thresholds the group-marginalised posterior P(y+|x). With noise the
    posteriors are those of the underdiagnosed training distribution.
    """
    regime = Regime.parse(regime)
    if group not in (0, 1):
        raise DomainError(f'group must be 0 or 1, got {group!r}')
    if not (0.0 < threshold < 1.0):
        raise DomainError(f'threshold must lie in (0, 1), got {threshold!r}')
    if n_mc < MIN_MC_SAMPLES:
        raise DomainError(f'n_mc must be >= {MIN_MC_SAMPLES}, got {n_mc}')
    rng = np.random.default_rng(seed)
    mean = spec.means(np.array([group]), np.array([1]))[0]
    points = mean + spec.noise_scale * rng.standard_normal((n_mc, spec.dim))
    bundle = posteriors(spec, points) if noise is None else biased_posteriors(spec, noise, points)
    if regime is Regime.SEPARABLE:
        scores = bundle.p_class_given_group[group]
    else:
        scores = bundle.p_class
    value = float(np.mean(scores > threshold))
    return TprEstimate(value=value, stderr=math.sqrt(value * (1.0 - value) / n_mc), n=n_mc)


def bayes_group_auc(spec: PopulationSpec, n_mc: int = DEFAULT_MC_SAMPLES, seed: int = 0) -> float:
    """AUC of the exact group posterior on a generated sample."""
    if n_mc < MIN_MC_SAMPLES:
        raise DomainError(f'n_mc must be >= {MIN_MC_SAMPLES}, got {n_mc}')
    dataset = sample_population(spec, n_mc, seed)
    return roc_auc(posteriors(spec, dataset.features).p_group, dataset.groups)
