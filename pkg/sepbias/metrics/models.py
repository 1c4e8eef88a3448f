from dataclasses import dataclass

from sepbias.settings import OVERALL_GROUP


@dataclass(frozen=True)
class GroupMetrics:
    """Exact counts for one group (or overall) and the rates derived from them."""

    n_pos: int
    n_neg: int
    true_positives: int
    correct: int
    auc: float | None

    @property
    def n(self) -> int:
        return self.n_pos + self.n_neg

    @property
    def tpr(self) -> float | None:
        """None when the group has no positives."""
        if self.n_pos == 0:
            return None
        return self.true_positives / self.n_pos

    @property
    def accuracy(self) -> float | None:
        if self.n == 0:
            return None
        return self.correct / self.n

    def metric(self, name: str) -> float | None:
        return getattr(self, name)


@dataclass(frozen=True)
class MetricsReport:
    """Group-wise and overall TPR, accuracy and AUC at one threshold."""

    groups: dict[int, GroupMetrics]
    overall: GroupMetrics
    threshold: float

    def get(self, group: int | str) -> GroupMetrics:
        if group == OVERALL_GROUP:
            return self.overall
        return self.groups[int(group)]

    def keys(self) -> list[int | str]:
        return [*sorted(self.groups), OVERALL_GROUP]

    def same_counts(self, other: 'MetricsReport') -> bool:
        if self.keys() != other.keys():
            return False
        return all(
            (self.get(key).n_pos, self.get(key).n_neg) == (other.get(key).n_pos, other.get(key).n_neg)
            for key in self.keys()
        )


@dataclass(frozen=True)
class DegradationReport:
    """Percentage-point deltas (biased minus clean), keyed by group then metric."""

    deltas: dict[int | str, dict[str, float | None]]

    def delta(self, group: int | str, metric: str) -> float | None:
        return self.deltas[group][metric]
