from metrics.models import GroupMetrics, MetricsReport
from sepbias.exceptions import SchemaError
from sepbias.settings import OVERALL_GROUP

REPORT_COLUMNS: tuple[str, ...] = (
    'run_id', 'seed', 'group', 'n_pos', 'n_neg', 'tpr', 'accuracy', 'auc', 'threshold',
)


def report_rows(report: MetricsReport, run_id: str, seed: int, **extra) -> list[dict]:
    """One row per group, then the overall row."""
    rows: list[dict] = []
    for key in report.keys():
        metrics = report.get(key)
        rows.append({
            'run_id': run_id,
            'seed': seed,
            'group': str(key),
            'n_pos': metrics.n_pos,
            'n_neg': metrics.n_neg,
            'tpr': metrics.tpr,
            'accuracy': metrics.accuracy,
            'auc': metrics.auc,
            'threshold': report.threshold,
            **extra,
        })
    return rows


def _count(rate: float | None, total: int) -> int:
    return 0 if rate is None else int(round(rate * total))


def report_from_rows(rows: list[dict]) -> MetricsReport:
    """Inverse of report_rows for parsed rows of one (run, arm)."""
    groups: dict[int, GroupMetrics] = {}
    overall: GroupMetrics | None = None
    thresholds = {row['threshold'] for row in rows}
    if len(thresholds) != 1:
        raise SchemaError(f'rows of one report carry thresholds {sorted(thresholds)}')
    for row in rows:
        n_pos, n_neg = int(row['n_pos']), int(row['n_neg'])
        metrics = GroupMetrics(
            n_pos=n_pos,
            n_neg=n_neg,
            true_positives=_count(row['tpr'], n_pos),
            correct=_count(row['accuracy'], n_pos + n_neg),
            auc=row['auc'],
        )
        if row['group'] == OVERALL_GROUP:
            overall = metrics
        else:
            groups[int(row['group'])] = metrics
    if overall is None:
        raise SchemaError('report rows lack the overall row', column='group')
    return MetricsReport(groups=groups, overall=overall, threshold=thresholds.pop())
