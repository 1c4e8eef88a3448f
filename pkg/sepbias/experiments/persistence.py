import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd
from jsonschema import Draft202012Validator
from pandas.errors import EmptyDataError, ParserError

from experiments.models import Arm, ExperimentKind, ExperimentRun, RunRecord
from experiments.schemas import SUMMARY_SCHEMA
from experiments.serializers import (load_experiment_config,
                                     save_experiment_config)
from metrics.serializers import REPORT_COLUMNS, report_from_rows, report_rows
from sepbias.exceptions import DomainError, IntegrityError, SchemaError
from sepbias.serializers import dump_json
from sepbias.settings import RUN_FILES
from stats.models import TestMethod, TestResult

logger = logging.getLogger(__name__)

RESULT_COLUMNS: tuple[str, ...] = (
    *REPORT_COLUMNS, 'arm', 'level', 'separability', 'separability_auc', 'rho', 'split_auc',
)

TEST_COLUMNS: tuple[str, ...] = ('comparison_id', 'statistic', 'p', 'p_adj', 'method', 'significant',)

PLOT_COLUMNS: dict[str, tuple[str, ...]] = {
    'fig2_analogue': ('separability', 'group', 'delta_mean', 'delta_sd', 'p_adj', 'significant', 'metric', 'rho',),
    'fig3_analogue': ('separability', 'arm', 'split_auc', 'rho',),
    'figA1_analogue': ('separability', 'rho', 'group', 'delta_mean', 'metric',),
    'table1_analogue': ('separability', 'auc_mean', 'auc_sd',),
}

PLOT_FILES: dict[ExperimentKind, tuple[str, ...]] = {
    ExperimentKind.AUDIT: ('table1_analogue',),
    ExperimentKind.DEGRADATION: ('fig2_analogue',),
    ExperimentKind.ABLATION: ('figA1_analogue',),
    ExperimentKind.SPLIT: ('fig3_analogue',),
}


def format_cell(value) -> str:
    """Text of one CSV cell; floats keep their shortest round-tripping form."""
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_table(rows: list[dict], columns: tuple[str, ...], path: Path) -> Path:
    frame = pd.DataFrame(
        [[format_cell(row.get(column)) for column in columns] for row in rows],
        columns=list(columns),
        dtype=object,
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(frame.to_csv(index=False, lineterminator='\n'), encoding='utf-8', newline='\n')
    return path


def read_table(path: Path, columns: tuple[str, ...]) -> list[dict[str, str]]:
    if not path.is_file():
        raise IntegrityError('missing run file', path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding='utf-8')
    except (EmptyDataError, ParserError, UnicodeDecodeError) as exc:
        raise IntegrityError(f'corrupt run file ({exc})', path) from exc
    if tuple(frame.columns) != columns:
        raise IntegrityError(f'expected columns {", ".join(columns)}', path)
    return frame.to_dict('records')


def _optional_float(text: str) -> float | None:
    return None if text == '' else float(text)


def _parse_cell(text: str):
    if text == '':
        return None
    if text in ('true', 'false'):
        return text == 'true'
    for parse in (int, float):
        try:
            return parse(text)
        except ValueError:
            continue
    return text


def result_rows(run: ExperimentRun) -> list[dict]:
    rows: list[dict] = []
    for record in run.records:
        rows.extend(report_rows(
            record.report,
            record.run_id,
            record.seed,
            arm=record.arm.value,
            level=record.level,
            separability=record.separability,
            separability_auc=record.separability_auc,
            rho=record.rho,
            split_auc=record.split_auc,
        ))
    return rows


def comparison_rows(tests) -> list[dict]:
    return [
        {
            'comparison_id': test.comparison_id,
            'statistic': test.statistic,
            'p': test.p_value,
            'p_adj': test.adjusted_p,
            'method': test.method.value,
            'significant': test.significant,
        }
        for test in tests
    ]


def persist_run(run: ExperimentRun, directory=None) -> Path:
    """Writes the run directory and returns its path."""
    directory = directory if directory is not None else run.config.output_dir
    if directory is None:
        raise DomainError('no output directory given for the run')
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_experiment_config(run.config, directory / RUN_FILES['config'])
    write_table(result_rows(run), RESULT_COLUMNS, directory / RUN_FILES['results'])
    write_table(comparison_rows(run.tests), TEST_COLUMNS, directory / RUN_FILES['tests'])
    (directory / RUN_FILES['summary']).write_text(dump_json(run.summary), encoding='utf-8', newline='\n')
    for name in PLOT_FILES[run.kind]:
        write_table(run.plotdata.get(name, []), PLOT_COLUMNS[name],
                    directory / RUN_FILES['plotdata'] / f'{name}.csv')
    logger.info('Persisted %s run with %d records to %s', run.kind.value, len(run.records), directory)
    return directory


def _load_summary(path: Path) -> dict:
    if not path.is_file():
        raise IntegrityError('missing run file', path)
    try:
        summary = json.loads(path.read_text(encoding='utf-8'))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise IntegrityError(f'corrupt run file ({exc})', path) from exc
    errors = sorted(Draft202012Validator(SUMMARY_SCHEMA).iter_errors(summary), key=lambda e: list(e.path))
    if errors:
        raise IntegrityError(f'corrupt run file ({errors[0].message})', path)
    return summary


def _records(rows: list[dict[str, str]], summary: dict) -> list[RunRecord]:
    by_run: dict[str, list[dict[str, str]]] = {}
    for row in rows:
        by_run.setdefault(row['run_id'], []).append(row)
    records: list[RunRecord] = []
    for run_id, run_rows in by_run.items():
        parsed = [
            {
                **row,
                'tpr': _optional_float(row['tpr']),
                'accuracy': _optional_float(row['accuracy']),
                'auc': _optional_float(row['auc']),
                'threshold': float(row['threshold']),
            }
            for row in run_rows
        ]
        first = run_rows[0]
        records.append(RunRecord(
            run_id=run_id,
            level=int(first['level']),
            seed=int(first['seed']),
            arm=Arm(first['arm']),
            separability=_optional_float(first['separability']),
            rho=_optional_float(first['rho']),
            report=report_from_rows(parsed),
            separability_auc=_optional_float(first['separability_auc']),
            split_auc=_optional_float(first['split_auc']),
            duration=float(summary['durations'].get(run_id, 0.0)),
            config_fingerprint=summary['config_fingerprint'],
        ))
    return records


def _tests(rows: list[dict[str, str]], alpha: float, path: Path) -> list[TestResult]:
    tests: list[TestResult] = []
    for line, row in enumerate(rows, start=2):
        test = TestResult(
            statistic=float(row['statistic']),
            p_value=float(row['p']),
            method=TestMethod(row['method']),
            adjusted_p=_optional_float(row['p_adj']),
            alpha=alpha,
            comparison_id=row['comparison_id'],
        )
        if format_cell(test.significant) != row['significant']:
            raise IntegrityError(f'significance flag on line {line} disagrees with its p-value', path)
        tests.append(test)
    return tests


def load_run(path) -> ExperimentRun:
    """Reads a run directory back; any missing or inconsistent file is an IntegrityError."""
    directory = Path(path)
    if not directory.is_dir():
        raise IntegrityError('run directory not found', directory)
    config_path = directory / RUN_FILES['config']
    if not config_path.is_file():
        raise IntegrityError('missing run file', config_path)
    try:
        config = load_experiment_config(config_path)
    except SchemaError as exc:
        raise IntegrityError(f'corrupt run file ({exc})', config_path) from exc
    summary = _load_summary(directory / RUN_FILES['summary'])
    kind = ExperimentKind(summary['kind'])

    results_path = directory / RUN_FILES['results']
    result_table = read_table(results_path, RESULT_COLUMNS)
    if len(result_table) != summary['counts']['results']:
        raise IntegrityError(
            f'{len(result_table)} result rows, summary records {summary["counts"]["results"]}', results_path,
        )
    tests_path = directory / RUN_FILES['tests']
    test_table = read_table(tests_path, TEST_COLUMNS)
    if len(test_table) != summary['counts']['tests']:
        raise IntegrityError(f'{len(test_table)} test rows, summary records {summary["counts"]["tests"]}', tests_path)
    try:
        records = _records(result_table, summary)
    except (ValueError, KeyError, DomainError) as exc:
        raise IntegrityError(f'corrupt run file ({exc})', results_path) from exc
    try:
        tests = _tests(test_table, config.alpha, tests_path)
    except (ValueError, KeyError) as exc:
        raise IntegrityError(f'corrupt run file ({exc})', tests_path) from exc

    plotdata: dict[str, list[dict]] = {}
    for name in PLOT_FILES[kind]:
        rows = read_table(directory / RUN_FILES['plotdata'] / f'{name}.csv', PLOT_COLUMNS[name])
        plotdata[name] = [{column: _parse_cell(value) for column, value in row.items()} for row in rows]
    return ExperimentRun(kind=kind, config=config, records=tuple(records), tests=tuple(tests),
                         summary=summary, plotdata=plotdata)
