import math
from dataclasses import dataclass

from sepbias.exceptions import DomainError
from sepbias.settings import DEFAULT_NOISE_RATE, DEFAULT_TARGET_GROUP


@dataclass(frozen=True)
class NoiseSpec:
    """Underdiagnosis of one group: a fraction of its true positives relabelled negative."""

    target_group: int = DEFAULT_TARGET_GROUP
    rate: float = DEFAULT_NOISE_RATE
    seed: int = 0

    def __post_init__(self):
        if self.target_group not in (0, 1) or isinstance(self.target_group, bool):
            raise DomainError(f'target_group must be 0 or 1, got {self.target_group!r}')
        if not (math.isfinite(self.rate) and 0.0 <= self.rate <= 1.0):
            raise DomainError(f'rate must lie in [0, 1], got {self.rate!r}')
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise DomainError(f'seed must be a nonnegative integer, got {self.seed!r}')

    def flip_count(self, eligible: int) -> int:
        """round(rate * eligible), halves rounded up."""
        return min(eligible, int(math.floor(self.rate * eligible + 0.5)))
