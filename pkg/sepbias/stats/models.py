import enum
from dataclasses import dataclass, replace

from sepbias.settings import DEFAULT_ALPHA


class TestMethod(enum.StrEnum):
    __test__ = False

    MW_EXACT = 'mw_exact'
    MW_NORMAL = 'mw_normal'
    KENDALL_NORMAL = 'kendall_normal'


class Alternative(enum.StrEnum):
    LESS = 'less'
    GREATER = 'greater'
    TWO_SIDED = 'two_sided'


@dataclass(frozen=True)
class TestResult:
    """Statistic with raw and (optionally) multiplicity-adjusted p-values."""

    __test__ = False

    statistic: float
    p_value: float
    method: TestMethod
    adjusted_p: float | None = None
    alpha: float = DEFAULT_ALPHA
    comparison_id: str = ''

    @property
    def significant(self) -> bool:
        p_value = self.p_value if self.adjusted_p is None else self.adjusted_p
        return p_value < self.alpha

    def with_adjusted(self, adjusted_p: float) -> 'TestResult':
        return replace(self, adjusted_p=max(float(adjusted_p), self.p_value))
