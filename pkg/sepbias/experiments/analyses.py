"""Per-kind analyses of experiment records: tables, tests and plot data."""
import logging
from collections import defaultdict

import numpy as np

from biasinject.models import NoiseSpec
from datagen.generators import auc_for_separation
from experiments.models import (Arm, ExperimentConfig, ExperimentKind, Level,
                                RunRecord)
from metrics.classification import degradation
from oracle.models import Regime
from oracle.tpr import theoretical_tpr
from sepbias.exceptions import DomainError
from sepbias.settings import (DEFAULT_ALTERNATIVE, DEFAULT_MC_SAMPLES,
                              DEGRADATION_METRICS, OVERALL_GROUP,
                              SPLIT_CEILING_TOLERANCE)
from stats.corrections import adjust_results
from stats.models import Alternative, TestResult
from stats.nonparametric import kendall_tau, mann_whitney_u

logger = logging.getLogger(__name__)

GROUP_KEYS: tuple[int | str, ...] = (0, 1, OVERALL_GROUP,)


def _mean_sd(values) -> tuple[float | None, float | None]:
    values = [value for value in values if value is not None]
    if not values:
        return None, None
    mean = float(np.mean(values))
    if len(values) < 2:
        return mean, None
    return mean, float(np.std(values, ddof=1))


def _by_arm(records) -> dict[tuple, list[RunRecord]]:
    """Records keyed by (level, arm, rho), each list ordered by seed."""
    index: dict[tuple, list[RunRecord]] = defaultdict(list)
    for record in records:
        index[(record.level, record.arm, record.rho)].append(record)
    return {key: sorted(value, key=lambda record: record.seed) for key, value in index.items()}


def _presentation_order(levels: list[Level]) -> list[Level]:
    return sorted(levels, key=lambda level: (level.separability is None, level.separability or 0.0, level.index))


def _values(records: list[RunRecord], group, metric: str) -> list[float | None]:
    return [record.report.get(group).metric(metric) for record in records]


def _test_fields(test: TestResult | None) -> dict:
    if test is None:
        return {'p': None, 'p_adj': None, 'significant': False}
    return {'p': test.p_value, 'p_adj': test.adjusted_p, 'significant': test.significant}


def _association_row(test: TestResult, **fields) -> dict:
    return {
        'comparison_id': test.comparison_id,
        'statistic': test.statistic,
        **_test_fields(test),
        **fields,
    }


def _oracle_rows(config: ExperimentConfig, level: Level, rate: float,
                 clean: list[RunRecord], biased: list[RunRecord]) -> list[dict]:
    """Bayes-rule TPRs next to the measured mean TPRs, per group."""
    noise = NoiseSpec(target_group=config.target_group, rate=rate, seed=0)
    rows: list[dict] = []
    for group in (0, 1):
        predictions = {
            'clean_separable': theoretical_tpr(level.spec, None, Regime.SEPARABLE, group,
                                               config.threshold, DEFAULT_MC_SAMPLES, config.master_seed),
            'biased_separable': theoretical_tpr(level.spec, noise, Regime.SEPARABLE, group,
                                                config.threshold, DEFAULT_MC_SAMPLES, config.master_seed),
            'biased_pooled': theoretical_tpr(level.spec, noise, Regime.POOLED, group,
                                             config.threshold, DEFAULT_MC_SAMPLES, config.master_seed),
        }
        rows.append({
            'separability': level.separability,
            'rho': rate,
            'group': group,
            **{name: estimate.value for name, estimate in predictions.items()},
            'measured_clean_tpr': _mean_sd(_values(clean, group, 'tpr'))[0],
            'measured_biased_tpr': _mean_sd(_values(biased, group, 'tpr'))[0],
        })
    return rows


def _degradation_analysis(config: ExperimentConfig, levels: list[Level], records) -> tuple[list, dict, dict]:
    index = _by_arm(records)
    tests: list[TestResult] = []
    rows: list[dict] = []
    oracle: list[dict] = []
    testable = config.n_seeds >= 2
    for level in _presentation_order(levels):
        clean = index[(level.index, Arm.CLEAN, None)]
        for rate in config.noise_rates:
            biased = index[(level.index, Arm.BIASED, rate)]
            deltas = [degradation(clean_record.report, biased_record.report)
                      for clean_record, biased_record in zip(clean, biased)]
            prefix = f'level={level.name}:rho={rate!r}'
            for metric in DEGRADATION_METRICS:
                for group in GROUP_KEYS:
                    clean_values = _values(clean, group, metric)
                    biased_values = _values(biased, group, metric)
                    comparison_id = f'{prefix}:group={group}:metric={metric}'
                    if testable and None not in clean_values + biased_values:
                        tests.append(mann_whitney_u(biased_values, clean_values, alternative=DEFAULT_ALTERNATIVE,
                                                    alpha=config.alpha, comparison_id=comparison_id))
                    delta_mean, delta_sd = _mean_sd(delta.delta(group, metric) for delta in deltas)
                    rows.append({
                        'comparison_id': comparison_id,
                        'level': level.name,
                        'separability': level.separability,
                        'rho': rate,
                        'group': str(group),
                        'metric': metric,
                        'clean_mean': _mean_sd(clean_values)[0],
                        'biased_mean': _mean_sd(biased_values)[0],
                        'delta_mean': delta_mean,
                        'delta_sd': delta_sd,
                    })
                target_deltas = [delta.delta(config.target_group, metric) for delta in deltas]
                other_deltas = [delta.delta(1 - config.target_group, metric) for delta in deltas]
                comparison_id = f'{prefix}:group_gap:metric={metric}'
                if testable and None not in target_deltas + other_deltas:
                    tests.append(mann_whitney_u(target_deltas, other_deltas, alternative=Alternative.TWO_SIDED,
                                                alpha=config.alpha, comparison_id=comparison_id))
                    gaps = [target - other for target, other in zip(target_deltas, other_deltas)]
                else:
                    gaps = []
                rows.append({
                    'comparison_id': comparison_id,
                    'level': level.name,
                    'separability': level.separability,
                    'rho': rate,
                    'group': f'{config.target_group}-{1 - config.target_group}',
                    'metric': metric,
                    'clean_mean': None,
                    'biased_mean': None,
                    'delta_mean': _mean_sd(gaps)[0],
                    'delta_sd': _mean_sd(gaps)[1],
                })
            if level.spec is not None:
                oracle.extend(_oracle_rows(config, level, rate, clean, biased))
    tests = adjust_results(tests)
    by_id = {test.comparison_id: test for test in tests}
    for row in rows:
        row.update(_test_fields(by_id.get(row['comparison_id'])))
    plotdata = {
        'fig2_analogue': [
            row for row in rows if row['group'] in ('0', '1', OVERALL_GROUP)
        ],
    }
    return tests, {'table': rows, 'oracle': oracle}, plotdata


def _ablation_analysis(config: ExperimentConfig, levels: list[Level], records) -> tuple[list, dict, dict]:
    index = _by_arm(records)
    rows: list[dict] = []
    ordered = _presentation_order(levels)
    for level in ordered:
        clean = index[(level.index, Arm.CLEAN, None)]
        for rate in config.noise_rates:
            biased = index[(level.index, Arm.BIASED, rate)]
            deltas = [degradation(clean_record.report, biased_record.report)
                      for clean_record, biased_record in zip(clean, biased)]
            for metric in DEGRADATION_METRICS:
                for group in GROUP_KEYS:
                    mean, sd = _mean_sd(delta.delta(group, metric) for delta in deltas)
                    rows.append({
                        'level': level.name,
                        'separability': level.separability,
                        'rho': rate,
                        'group': str(group),
                        'metric': metric,
                        'delta_mean': mean,
                        'delta_sd': sd,
                    })

    tests: list[TestResult] = []
    if len({level.separability for level in levels}) >= 2:
        for rate in config.noise_rates:
            if rate == 0.0:
                continue
            separability: list[float] = []
            target_deltas: list[float] = []
            for level in ordered:
                clean = index[(level.index, Arm.CLEAN, None)]
                biased = index[(level.index, Arm.BIASED, rate)]
                for clean_record, biased_record in zip(clean, biased):
                    separability.append(level.separability)
                    target_deltas.append(degradation(clean_record.report, biased_record.report)
                                         .delta(config.target_group, 'accuracy'))
            comparison_id = f'rho={rate!r}:kendall:group={config.target_group}:metric=accuracy'
            try:
                tests.append(kendall_tau(separability, target_deltas, alpha=config.alpha,
                                         comparison_id=comparison_id))
            except DomainError as exc:
                logger.warning('Skipped association %s: %s', comparison_id, exc)
        tests = adjust_results(tests)
    else:
        logger.warning('Noise ablation over a single separability level: no association tests')
    associations = [_association_row(test) for test in tests]
    plotdata = {
        'figA1_analogue': [row for row in rows if row['group'] in ('0', '1', OVERALL_GROUP)],
    }
    return tests, {'table': rows, 'associations': associations}, plotdata


def _split_analysis(config: ExperimentConfig, levels: list[Level], records) -> tuple[list, dict, dict]:
    index = _by_arm(records)
    rows: list[dict] = []
    arms: list[tuple[Arm, float | None]] = [(Arm.CLEAN, None), *((Arm.BIASED, rate) for rate in config.noise_rates)]
    for level in _presentation_order(levels):
        for arm, rate in arms:
            arm_records = index[(level.index, arm, rate)]
            split_mean, split_sd = _mean_sd(record.split_auc for record in arm_records)
            rows.append({
                'level': level.name,
                'separability': level.separability,
                'arm': arm.value,
                'rho': rate,
                'separability_auc_mean': _mean_sd(record.separability_auc for record in arm_records)[0],
                'split_auc_mean': split_mean,
                'split_auc_sd': split_sd,
            })

    tests: list[TestResult] = []
    expectations: dict[str, str] = {}
    for arm, rate in arms:
        arm_records = [record for record in records if record.arm is arm and record.rho == rate]
        comparison_id = f'split:arm={arm.value}' if rate is None else f'split:arm={arm.value}:rho={rate!r}'
        expectations[comparison_id] = ('no significant association' if arm is Arm.CLEAN or rate == 0.0
                                       else 'positive significant association')
        try:
            tests.append(kendall_tau([record.separability_auc for record in arm_records],
                                     [record.split_auc for record in arm_records],
                                     alpha=config.alpha, comparison_id=comparison_id))
        except DomainError as exc:
            logger.warning('Skipped association %s: %s', comparison_id, exc)
    tests = adjust_results(tests)

    probed = [record for record in records if record.split_auc is not None]
    excess = [record.split_auc - record.separability_auc for record in probed]
    ceiling = {
        'tolerance': SPLIT_CEILING_TOLERANCE,
        'max_excess': max(excess) if excess else None,
        'violations': [record.run_id for record, value in zip(probed, excess) if value > SPLIT_CEILING_TOLERANCE],
    }
    associations = [_association_row(test, expectation=expectations[test.comparison_id]) for test in tests]
    plotdata = {
        'fig3_analogue': [
            {'separability': record.separability_auc, 'arm': record.arm.value,
             'split_auc': record.split_auc, 'rho': record.rho}
            for record in probed
        ],
    }
    return tests, {'table': rows, 'associations': associations, 'ceiling': ceiling}, plotdata


def _audit_analysis(config: ExperimentConfig, levels: list[Level], records) -> tuple[list, dict, dict]:
    index = _by_arm(records)
    rows: list[dict] = []
    for level in levels:
        auc_mean, auc_sd = _mean_sd(record.separability_auc for record in index[(level.index, Arm.AUDIT, None)])
        rows.append({
            'level': level.name,
            'separability': level.separability,
            'auc_mean': auc_mean,
            'auc_sd': auc_sd,
            'bayes_auc': (None if level.spec is None
                          else auc_for_separation(level.spec.group_separation, level.spec.noise_scale)),
        })
    rows.sort(key=lambda row: row['auc_mean'])
    plotdata = {
        'table1_analogue': [
            {'separability': row['separability'], 'auc_mean': row['auc_mean'], 'auc_sd': row['auc_sd']}
            for row in rows
        ],
    }
    return [], {'table': rows}, plotdata


ANALYSES = {
    ExperimentKind.AUDIT: _audit_analysis,
    ExperimentKind.DEGRADATION: _degradation_analysis,
    ExperimentKind.ABLATION: _ablation_analysis,
    ExperimentKind.SPLIT: _split_analysis,
}
