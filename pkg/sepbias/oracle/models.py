import enum
from dataclasses import dataclass

import numpy as np

from sepbias.exceptions import DomainError


class Regime(enum.StrEnum):
    SEPARABLE = 'separable'
    POOLED = 'pooled'

    @classmethod
    def parse(cls, value) -> 'Regime':
        try:
            return cls(value)
        except ValueError:
            raise DomainError(f'unknown regime {value!r}; expected one of {[r.value for r in cls]}') from None


@dataclass(frozen=True, eq=False)
class PosteriorBundle:
    """P(a=1|x), P(y+|x,a) for a in {0, 1}, and P(y+|x).

    Entries are floats for a single x and arrays for a batch.
    """

    p_group: float | np.ndarray
    p_class_given_group: tuple[float | np.ndarray, float | np.ndarray]
    p_class: float | np.ndarray

    def mixture(self) -> float | np.ndarray:
        """Group-marginalised class posterior recombined from the parts."""
        return (self.p_class_given_group[0] * (1.0 - self.p_group)
                + self.p_class_given_group[1] * self.p_group)


@dataclass(frozen=True)
class TprEstimate:
    """Monte-Carlo TPR with its standard error."""

    value: float
    stderr: float
    n: int
