import pandas as pd

from experiments.models import ExperimentKind, ExperimentRun

TABLE_COLUMNS: dict[ExperimentKind, list[str]] = {
    ExperimentKind.AUDIT: ['level', 'separability', 'auc_mean', 'auc_sd', 'bayes_auc'],
    ExperimentKind.DEGRADATION: ['level', 'separability', 'rho', 'group', 'metric', 'clean_mean',
                                 'biased_mean', 'delta_mean', 'delta_sd', 'p_adj', 'significant'],
    ExperimentKind.ABLATION: ['level', 'separability', 'rho', 'group', 'metric', 'delta_mean', 'delta_sd'],
    ExperimentKind.SPLIT: ['level', 'separability', 'arm', 'rho', 'separability_auc_mean',
                           'split_auc_mean', 'split_auc_sd'],
}

ASSOCIATION_COLUMNS: list[str] = ['comparison_id', 'statistic', 'p', 'p_adj', 'significant']


def _format_float(value: float) -> str:
    return f'{value:.4f}'


def _frame(rows: list[dict], columns: list[str]) -> pd.DataFrame:
    frame = pd.DataFrame(rows, columns=columns)
    if 'significant' in frame:
        frame['significant'] = frame['significant'].map(lambda flag: '*' if flag else '')
    return frame


def render_report(run: ExperimentRun) -> str:
    """Aligned text table of a run summary, rows in ascending separability."""
    summary = run.summary
    lines: list[str] = [
        f'{run.kind.value} experiment: {len(run.records)} models, {len(run.tests)} tests, '
        f'config {summary["config_fingerprint"][:12]}',
        '',
        _frame(summary['table'], TABLE_COLUMNS[run.kind]).to_string(
            index=False, na_rep='-', float_format=_format_float,
        ),
    ]
    if summary.get('associations'):
        columns = ASSOCIATION_COLUMNS + (['expectation'] if run.kind is ExperimentKind.SPLIT else [])
        lines += [
            '',
            f'Associations (Holm family: {summary["holm_family"]})',
            _frame(summary['associations'], columns).to_string(
                index=False, na_rep='-', float_format=_format_float,
            ),
        ]
    ceiling = summary.get('ceiling')
    if ceiling is not None:
        probed = sum(record.split_auc is not None for record in run.records)
        lines += [
            '',
            f'SPLIT AUC above separability AUC + {ceiling["tolerance"]}: '
            f'{len(ceiling["violations"])} of {probed} probed models',
        ]
    return '\n'.join(lines) + '\n'
