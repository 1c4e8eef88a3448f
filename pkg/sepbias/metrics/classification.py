import numpy as np
from scipy.stats import rankdata

from metrics.models import DegradationReport, GroupMetrics, MetricsReport
from sepbias.exceptions import (DegenerateLabelsError, DomainError,
                                IncompatibleReportsError)
from sepbias.settings import DEFAULT_THRESHOLD, METRIC_NAMES


def roc_auc(scores, labels) -> float:
    """P(random positive outscores random negative), ties counted one half."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise DomainError(f'scores and labels must be equal-length vectors, got {scores.shape} and {labels.shape}')
    positives = labels == 1
    n_pos = int(np.count_nonzero(positives))
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabelsError('AUC needs both classes among the labels')
    ranks = rankdata(scores, method='average')
    rank_sum = float(np.sum(ranks[positives]))
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def _group_metrics(predictions: np.ndarray, scores: np.ndarray, labels: np.ndarray) -> GroupMetrics:
    positives = labels == 1
    n_pos = int(np.count_nonzero(positives))
    n_neg = labels.size - n_pos
    auc = roc_auc(scores, labels) if n_pos and n_neg else None
    return GroupMetrics(
        n_pos=n_pos,
        n_neg=n_neg,
        true_positives=int(np.count_nonzero(predictions[positives] == 1)),
        correct=int(np.count_nonzero(predictions == labels)),
        auc=auc,
    )


def group_metrics(predictions, scores, true_labels, groups, threshold: float = DEFAULT_THRESHOLD) -> MetricsReport:
    """Per-group and overall TPR, accuracy and AUC."""
    predictions = np.asarray(predictions)
    scores = np.asarray(scores, dtype=np.float64)
    true_labels = np.asarray(true_labels)
    groups = np.asarray(groups)
    lengths = {predictions.shape, scores.shape, true_labels.shape, groups.shape}
    if len(lengths) != 1 or predictions.ndim != 1:
        raise DomainError(f'inputs must be equal-length vectors, got shapes {sorted(lengths)}')
    per_group = {
        int(group): _group_metrics(predictions[mask], scores[mask], true_labels[mask])
        for group in (0, 1)
        if np.any(mask := groups == group)
    }
    return MetricsReport(
        groups=per_group,
        overall=_group_metrics(predictions, scores, true_labels),
        threshold=float(threshold),
    )


def degradation(clean: MetricsReport, biased: MetricsReport) -> DegradationReport:
    """100 * (biased - clean) per metric and group; negative is degradation."""
    if not clean.same_counts(biased):
        raise IncompatibleReportsError('reports were computed on different test sets')
    deltas: dict[int | str, dict[str, float | None]] = {}
    for key in clean.keys():
        deltas[key] = {}
        for name in METRIC_NAMES:
            before = clean.get(key).metric(name)
            after = biased.get(key).metric(name)
            deltas[key][name] = None if before is None or after is None else 100.0 * (after - before)
    return DegradationReport(deltas=deltas)
