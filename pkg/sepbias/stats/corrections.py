import math

import numpy as np
from statsmodels.stats.multitest import multipletests

from sepbias.exceptions import DomainError
from stats.models import TestResult


def holm_bonferroni(p_values) -> list[float]:
    """Holm step-down adjusted p-values, in input order."""
    p_values = [float(p) for p in p_values]
    for p_value in p_values:
        if not (math.isfinite(p_value) and 0.0 <= p_value <= 1.0):
            raise DomainError(f'p-values must lie in [0, 1], got {p_value!r}')
    if not p_values:
        return []
    _, adjusted, _, _ = multipletests(np.asarray(p_values), method='holm')
    return [min(1.0, float(p)) for p in adjusted]


def adjust_results(results: list[TestResult]) -> list[TestResult]:
    """Holm-adjusts a family of test results."""
    adjusted = holm_bonferroni([result.p_value for result in results])
    return [result.with_adjusted(p_value) for result, p_value in zip(results, adjusted)]
