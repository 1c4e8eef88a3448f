import numpy as np
import pytest
from scipy.stats import norm

from biasinject.models import NoiseSpec
from datagen.models import PopulationSpec
from oracle.models import Regime
from oracle.posteriors import biased_posteriors, posteriors
from oracle.tpr import theoretical_tpr
from sepbias.exceptions import DomainError


@pytest.fixture
def points(spec) -> np.ndarray:
    return np.random.default_rng(0).normal(scale=2.0, size=(200, spec.dim))


def test_posteriors_are_probabilities(spec, points):
    bundle = posteriors(spec, points)
    for values in (bundle.p_group, *bundle.p_class_given_group, bundle.p_class):
        assert values.shape == (200,)
        assert np.all((values >= 0.0) & (values <= 1.0))


def test_class_posterior_is_group_mixture(spec, points):
    bundle = posteriors(spec, points)
    assert np.allclose(bundle.mixture(), bundle.p_class, atol=1e-12)


def test_single_point_gives_floats(spec):
    bundle = posteriors(spec, [0.3, -0.2])
    assert isinstance(bundle.p_group, float)
    assert isinstance(bundle.p_class, float)


def test_posteriors_reject_bad_points(spec):
    with pytest.raises(DomainError):
        posteriors(spec, [0.0, 0.0, 0.0])
    with pytest.raises(DomainError):
        posteriors(spec, [np.nan, 0.0])


def test_inseparable_groups_have_prior_group_posterior(points):
    spec = PopulationSpec(group_prior=0.3)
    assert np.allclose(posteriors(spec, points).p_group, 0.3)


def test_biased_posteriors_scale_target_group(spec, points):
    clean = posteriors(spec, points)
    biased = biased_posteriors(spec, NoiseSpec(target_group=1, rate=0.4), points)
    assert np.allclose(biased.p_class_given_group[1], 0.6 * clean.p_class_given_group[1])
    assert np.array_equal(biased.p_class_given_group[0], clean.p_class_given_group[0])
    assert np.allclose(biased.p_class, biased.mixture())
    assert np.all(biased.p_class <= clean.p_class + 1e-12)


def test_separable_tpr_closed_form():
    spec = PopulationSpec(group_separation=5.0)
    estimate = theoretical_tpr(spec, None, Regime.SEPARABLE, group=1, n_mc=100_000, seed=1)
    assert estimate.value == pytest.approx(norm.cdf(0.5), abs=0.01)
    assert estimate.stderr < 0.005


def test_separable_tpr_ignores_other_group_noise(spec):
    clean = theoretical_tpr(spec, None, 'separable', group=0, n_mc=20_000, seed=4)
    noisy = theoretical_tpr(spec, NoiseSpec(target_group=1, rate=0.5), 'separable', group=0, n_mc=20_000, seed=4)
    assert noisy.value == clean.value


def test_pooled_regime_treats_inseparable_groups_alike():
    spec = PopulationSpec()
    noise = NoiseSpec(target_group=1, rate=0.3)
    tprs = [theoretical_tpr(spec, noise, Regime.POOLED, group=group, n_mc=20_000, seed=6).value
            for group in (0, 1)]
    assert tprs[0] == tprs[1]


def test_separable_noise_lowers_target_tpr_only(spec):
    noise = NoiseSpec(target_group=1, rate=0.5)
    clean = theoretical_tpr(spec, None, 'separable', group=1, n_mc=20_000, seed=2).value
    biased = theoretical_tpr(spec, noise, 'separable', group=1, n_mc=20_000, seed=2).value
    assert biased < clean - 0.1


def test_pooled_noise_spreads_to_other_group():
    spec = PopulationSpec()
    noise = NoiseSpec(target_group=1, rate=0.5)
    clean = theoretical_tpr(spec, None, 'pooled', group=0, n_mc=20_000, seed=2).value
    biased = theoretical_tpr(spec, noise, 'pooled', group=0, n_mc=20_000, seed=2).value
    assert biased < clean - 0.05


@pytest.mark.parametrize('arguments', [
    {'regime': 'mixed', 'group': 0},
    {'regime': 'pooled', 'group': 2},
    {'regime': 'pooled', 'group': 0, 'threshold': 1.0},
    {'regime': 'pooled', 'group': 0, 'n_mc': 10},
])
def test_theoretical_tpr_validation(spec, arguments):
    with pytest.raises(DomainError):
        theoretical_tpr(spec, None, **arguments)
