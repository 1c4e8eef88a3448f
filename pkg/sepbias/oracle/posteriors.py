import logging

import numpy as np
from scipy.special import expit, logsumexp

from biasinject.models import NoiseSpec
from datagen.models import PopulationSpec
from oracle.models import PosteriorBundle
from sepbias.exceptions import DomainError

logger = logging.getLogger(__name__)


def _as_batch(spec: PopulationSpec, x) -> tuple[np.ndarray, bool]:
    points = np.asarray(x, dtype=np.float64)
    single = points.ndim == 1
    if single:
        points = points[np.newaxis, :]
    if points.ndim != 2 or points.shape[1] != spec.dim:
        raise DomainError(f'x must have dimension {spec.dim}, got shape {np.shape(x)}')
    if not np.all(np.isfinite(points)):
        raise DomainError('x must be finite')
    return points, single


def log_joint(spec: PopulationSpec, points: np.ndarray) -> np.ndarray:
    """log P(x, a, y) up to a constant shared by all cells, shape (n, 2, 2) indexed [i, a, y]."""
    joint = np.empty((points.shape[0], 2, 2))
    group_prior = (1.0 - spec.group_prior, spec.group_prior)
    for group in (0, 1):
        class_prior = (1.0 - spec.class_prior[group], spec.class_prior[group])
        for label in (0, 1):
            mean = spec.means(np.array([group]), np.array([label]))[0]
            squared = np.sum((points - mean) ** 2, axis=1)
            joint[:, group, label] = (np.log(group_prior[group]) + np.log(class_prior[label])
                                      - squared / (2.0 * spec.noise_scale ** 2))
    return joint


def _bundle(p_group, p_class_given_group, p_class, single: bool) -> PosteriorBundle:
    if single:
        return PosteriorBundle(
            p_group=float(p_group[0]),
            p_class_given_group=(float(p_class_given_group[0][0]), float(p_class_given_group[1][0])),
            p_class=float(p_class[0]),
        )
    return PosteriorBundle(p_group=p_group, p_class_given_group=p_class_given_group, p_class=p_class)


def posteriors(spec: PopulationSpec, x) -> PosteriorBundle:
    """Exact Bayes posteriors at x (one vector or an (n, dim) batch)."""
    points, single = _as_batch(spec, x)
    joint = log_joint(spec, points)
    group_evidence = logsumexp(joint, axis=2)
    p_group = expit(group_evidence[:, 1] - group_evidence[:, 0])
    p_class_given_group = tuple(expit(joint[:, group, 1] - joint[:, group, 0]) for group in (0, 1))
    p_class = np.exp(logsumexp(joint[:, :, 1], axis=1) - logsumexp(joint, axis=(1, 2)))
    return _bundle(p_group, p_class_given_group, p_class, single)


def biased_posteriors(spec: PopulationSpec, noise: NoiseSpec, x) -> PosteriorBundle:
    """Posteriors of the training distribution after underdiagnosis of noise.target_group."""
    clean = posteriors(spec, x)
    scaled = list(clean.p_class_given_group)
    scaled[noise.target_group] = scaled[noise.target_group] * (1.0 - noise.rate)
    p_class = scaled[0] * (1.0 - clean.p_group) + scaled[1] * clean.p_group
    return PosteriorBundle(p_group=clean.p_group, p_class_given_group=tuple(scaled), p_class=p_class)
