import logging

import numpy as np

from biasinject.models import NoiseSpec
from datagen.models import Dataset
from sepbias.exceptions import DegenerateTargetError, DomainError

logger = logging.getLogger(__name__)


def underdiagnosis_flips(dataset: Dataset, spec: NoiseSpec) -> np.ndarray:
    """Sorted indices whose observed label the injection sets to 0.

    One seeded permutation of the eligible indices is drawn and a prefix of
    it taken, so flip sets for increasing rates are nested.
    """
    if len(dataset) == 0:
        raise DomainError('cannot inject noise into an empty dataset')
    eligible = np.flatnonzero((dataset.groups == spec.target_group) & (dataset.true_labels == 1))
    if eligible.size == 0:
        if spec.rate > 0.0:
            raise DegenerateTargetError(f'group {spec.target_group} has no truly positive samples')
        return eligible
    order = np.random.default_rng(spec.seed).permutation(eligible.size)
    return np.sort(eligible[order[:spec.flip_count(eligible.size)]])


def inject_underdiagnosis(dataset: Dataset, spec: NoiseSpec) -> Dataset:
    """Relabels round(rate * N+) true positives of the target group as negative."""
    flips = underdiagnosis_flips(dataset, spec)
    if flips.size == 0:
        return dataset
    observed = dataset.observed_labels.copy()
    observed[flips] = 0
    logger.info('Underdiagnosed %d positives of group %d (rate %.3f)', flips.size, spec.target_group, spec.rate)
    return dataset.with_observed_labels(observed)


def positive_label_rate(dataset: Dataset, group: int | None = None) -> float:
    """Fraction of truly positive samples whose observed label is positive."""
    mask = dataset.true_labels == 1
    if group is not None:
        mask &= dataset.groups == group
    positives = int(np.count_nonzero(mask))
    if positives == 0:
        raise DegenerateTargetError('no truly positive samples')
    return int(np.count_nonzero(dataset.observed_labels[mask] == 1)) / positives
