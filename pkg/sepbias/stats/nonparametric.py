import numpy as np
from scipy.stats import kendalltau, mannwhitneyu

from sepbias.exceptions import DomainError
from sepbias.settings import DEFAULT_ALPHA, EXACT_MW_MAX_TOTAL
from stats.models import Alternative, TestMethod, TestResult

# Alternative -> scipy's spelling
SCIPY_ALTERNATIVES: dict[Alternative, str] = {
    Alternative.LESS: 'less',
    Alternative.GREATER: 'greater',
    Alternative.TWO_SIDED: 'two-sided',
}

SCIPY_METHODS: dict[str, str] = {
    'exact': 'exact',
    'normal': 'asymptotic',
}


def _sample(name: str, values) -> np.ndarray:
    array = np.asarray(values, dtype=np.float64)
    if array.ndim != 1 or array.size == 0:
        raise DomainError(f'sample {name} must be a nonempty vector')
    if not np.all(np.isfinite(array)):
        raise DomainError(f'sample {name} must be finite')
    return array


def _parse_alternative(alternative) -> Alternative:
    try:
        return Alternative(alternative)
    except ValueError:
        raise DomainError(f'unknown alternative {alternative!r}') from None


def mann_whitney_u(a, b, alternative: Alternative | str = Alternative.TWO_SIDED, method: str = 'auto',
                   alpha: float = DEFAULT_ALPHA, comparison_id: str = '') -> TestResult:
    """Mann-Whitney U test of a against b; statistic is U_a.

    'less' tests whether a tends to be smaller than b. method 'auto' runs the
    exact null law for tie-free samples with n_a + n_b <= 16 and the
    tie- and continuity-corrected normal approximation otherwise.
    """
    a = _sample('a', a)
    b = _sample('b', b)
    alternative = _parse_alternative(alternative)
    pooled = np.concatenate([a, b])
    distinct = np.unique(pooled).size
    exact_allowed = distinct == pooled.size and pooled.size <= EXACT_MW_MAX_TOTAL
    if method == 'auto':
        method = 'exact' if exact_allowed else 'normal'
    if method not in SCIPY_METHODS:
        raise DomainError(f'unknown Mann-Whitney method {method!r}')
    if method == 'exact' and not exact_allowed:
        raise DomainError(f'exact Mann-Whitney needs tie-free samples with n_a + n_b <= {EXACT_MW_MAX_TOTAL}')
    result = mannwhitneyu(a, b, alternative=SCIPY_ALTERNATIVES[alternative],
                          method=SCIPY_METHODS[method], use_continuity=True)
    # A single distinct value leaves the normal law without variance.
    p_value = 1.0 if distinct == 1 else float(min(1.0, result.pvalue))
    return TestResult(
        statistic=float(result.statistic),
        p_value=p_value,
        method=TestMethod.MW_EXACT if method == 'exact' else TestMethod.MW_NORMAL,
        alpha=alpha,
        comparison_id=comparison_id,
    )


def kendall_tau(x, y, alpha: float = DEFAULT_ALPHA, comparison_id: str = '') -> TestResult:
    """Kendall tau-b with a two-sided normal-approximation p-value."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.size != y.size:
        raise DomainError(f'x and y must be equal-length vectors, got {x.shape} and {y.shape}')
    if x.size < 2:
        raise DomainError('Kendall tau needs at least two pairs')
    if np.unique(x).size < 2 or np.unique(y).size < 2:
        raise DomainError('Kendall tau is undefined for a constant input')
    result = kendalltau(x, y, variant='b', method='asymptotic')
    return TestResult(statistic=float(result.statistic), p_value=float(min(1.0, result.pvalue)),
                      method=TestMethod.KENDALL_NORMAL, alpha=alpha, comparison_id=comparison_id)
