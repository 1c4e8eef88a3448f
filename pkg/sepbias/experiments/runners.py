import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from functools import lru_cache
from itertools import repeat

from biasinject.injectors import inject_underdiagnosis
from biasinject.models import NoiseSpec
from datagen.generators import sample_population, split_dataset
from datagen.models import Dataset
from datagen.serializers import load_dataset_csv
from experiments.analyses import ANALYSES
from experiments.models import (Arm, ExperimentConfig, ExperimentKind,
                                ExperimentRun, Level, RunRecord)
from learner.models import Architecture, Model, Target, TrainConfig
from learner.probes import split_probe
from learner.training import predict, predict_proba, train_classifier
from metrics.classification import group_metrics
from metrics.models import MetricsReport
from sepbias.exceptions import (DomainError, ExperimentUnitError,
                                SepbiasError, UnsupportedArchitectureError)
from sepbias.seeding import derive_seed
from sepbias.settings import DEFAULT_ALTERNATIVE, SCHEMA_VERSION
from stats.models import Alternative

logger = logging.getLogger(__name__)

HOLM_FAMILIES: dict[ExperimentKind, str] = {
    ExperimentKind.AUDIT: 'none',
    ExperimentKind.DEGRADATION: 'every group-level Mann-Whitney comparison of this experiment',
    ExperimentKind.ABLATION: 'the Kendall associations of all nonzero noise rates',
    ExperimentKind.SPLIT: 'the Kendall associations of all arms',
}

MIN_ABLATION_RATES: int = 3


@lru_cache(maxsize=4)
def _load_dataset(path: str) -> Dataset:
    return load_dataset_csv(path).with_clean_labels()


def unit_data(config: ExperimentConfig, level: Level, seed_index: int) -> tuple[Dataset, Dataset]:
    """Fresh (train, test) pair of one unit; the test split is always clean."""
    data_seed = derive_seed(config.master_seed, level.index, seed_index, 'data')
    if level.spec is None:
        test_fraction = config.n_test / (config.n_train + config.n_test)
        return split_dataset(_load_dataset(config.dataset_path), test_fraction, data_seed)
    test_seed = derive_seed(config.master_seed, level.index, seed_index, 'test')
    return (sample_population(level.spec, config.n_train, data_seed),
            sample_population(level.spec, config.n_test, test_seed))


def _train_config(config: ExperimentConfig, level: Level, seed_index: int, tag: str) -> TrainConfig:
    return replace(config.train_config, seed=derive_seed(config.master_seed, level.index, seed_index, tag))


def evaluate(model: Model, test: Dataset, threshold: float) -> MetricsReport:
    if not test.is_clean():
        raise DomainError('evaluation split carries corrupted labels')
    return group_metrics(
        predict(model, test.features, threshold),
        predict_proba(model, test.features),
        test.true_labels,
        test.groups,
        threshold,
    )


def _record(config: ExperimentConfig, level: Level, seed_index: int, arm: Arm, report: MetricsReport,
            started: float, rho: float | None = None, **fields) -> RunRecord:
    return RunRecord(
        run_id=RunRecord.make_id(level.index, seed_index, arm, rho),
        level=level.index,
        seed=seed_index,
        arm=arm,
        separability=level.separability,
        rho=rho,
        report=report,
        duration=time.perf_counter() - started,
        config_fingerprint=config.fingerprint(),
        **fields,
    )


def _audit(config: ExperimentConfig, level: Level, seed_index: int,
           train: Dataset, test: Dataset) -> RunRecord:
    started = time.perf_counter()
    model = train_classifier(train, Target.GROUP, config.arch, _train_config(config, level, seed_index, 'audit'))
    report = group_metrics(
        predict(model, test.features, config.threshold),
        predict_proba(model, test.features),
        test.groups,
        test.groups,
        config.threshold,
    )
    return _record(config, level, seed_index, Arm.AUDIT, report, started, separability_auc=report.overall.auc)


def _disease_arms(config: ExperimentConfig, level: Level, seed_index: int,
                  train: Dataset, test: Dataset) -> list[tuple[RunRecord, Model]]:
    """Clean-arm model, then one biased-arm model per noise rate."""
    arms: list[tuple[RunRecord, Model]] = []
    started = time.perf_counter()
    model = train_classifier(train.with_clean_labels(), Target.OBSERVED_LABEL, config.arch,
                             _train_config(config, level, seed_index, 'clean'))
    arms.append((_record(config, level, seed_index, Arm.CLEAN, evaluate(model, test, config.threshold), started),
                 model))
    noise_seed = derive_seed(config.master_seed, level.index, seed_index, 'noise')
    for rate in config.noise_rates:
        started = time.perf_counter()
        biased = inject_underdiagnosis(train, NoiseSpec(target_group=config.target_group, rate=rate, seed=noise_seed))
        model = train_classifier(biased, Target.OBSERVED_LABEL, config.arch,
                                 _train_config(config, level, seed_index, f'biased@{rate!r}'))
        report = evaluate(model, test, config.threshold)
        arms.append((_record(config, level, seed_index, Arm.BIASED, report, started, rho=rate), model))
    return arms


def _split_records(config: ExperimentConfig, level: Level, seed_index: int,
                   train: Dataset, test: Dataset) -> list[RunRecord]:
    audit = _audit(config, level, seed_index, train, test)
    records: list[RunRecord] = [audit]
    probe_config = _train_config(config, level, seed_index, 'probe')
    for record, model in _disease_arms(config, level, seed_index, train, test):
        started = time.perf_counter()
        probe = split_probe(model, test, probe_config)
        records.append(replace(
            record,
            separability_auc=audit.separability_auc,
            split_auc=probe.split_auc,
            duration=record.duration + time.perf_counter() - started,
        ))
    return records


def run_unit(kind: ExperimentKind, config: ExperimentConfig, level: Level, seed_index: int) -> list[RunRecord]:
    """All models of one (level, seed) unit."""
    try:
        train, test = unit_data(config, level, seed_index)
        if kind is ExperimentKind.AUDIT:
            records = [_audit(config, level, seed_index, train, test)]
        elif kind is ExperimentKind.SPLIT:
            records = _split_records(config, level, seed_index, train, test)
        else:
            records = [record for record, _ in _disease_arms(config, level, seed_index, train, test)]
    except SepbiasError as exc:
        raise ExperimentUnitError(str(exc), level.separability, seed_index) from exc
    logger.info('Finished %s unit %s seed %d (%d models)', kind.value, level.name, seed_index, len(records))
    return records


def _check_preconditions(kind: ExperimentKind, config: ExperimentConfig) -> None:
    if kind is ExperimentKind.SPLIT and config.arch is not Architecture.MLP:
        raise UnsupportedArchitectureError(f'the split experiment needs arch=mlp, got {config.arch.value}')
    if kind is ExperimentKind.ABLATION and len(set(config.noise_rates)) < MIN_ABLATION_RATES:
        raise DomainError(f'the noise ablation needs at least {MIN_ABLATION_RATES} distinct noise rates')


def _run_units(kind: ExperimentKind, config: ExperimentConfig, levels: list[Level]) -> list[RunRecord]:
    units = [(level, seed_index) for level in levels for seed_index in range(config.n_seeds)]
    unit_levels = [level for level, _ in units]
    unit_seeds = [seed_index for _, seed_index in units]
    if config.jobs > 1 and len(units) > 1:
        with ProcessPoolExecutor(max_workers=min(config.jobs, len(units))) as executor:
            batches = list(executor.map(run_unit, repeat(kind), repeat(config), unit_levels, unit_seeds))
    else:
        batches = [run_unit(kind, config, level, seed_index) for level, seed_index in units]
    return [record for batch in batches for record in batch]


def run_experiment(kind: ExperimentKind | str, config: ExperimentConfig) -> ExperimentRun:
    """Runs every unit of one experiment and its analysis."""
    kind = ExperimentKind.parse(kind)
    _check_preconditions(kind, config)
    levels = config.levels()
    logger.info('Starting %s experiment: %d levels x %d seeds, %d jobs',
                kind.value, len(levels), config.n_seeds, config.jobs)
    records = _run_units(kind, config, levels)
    tests, sections, plotdata = ANALYSES[kind](config, levels, records)
    summary = {
        'schema_version': SCHEMA_VERSION,
        'kind': kind.value,
        'config_fingerprint': config.fingerprint(),
        'holm_family': HOLM_FAMILIES[kind],
        'alternative': (DEFAULT_ALTERNATIVE if kind is ExperimentKind.DEGRADATION
                        else Alternative.TWO_SIDED.value),
        'counts': {
            'results': sum(len(record.report.keys()) for record in records),
            'tests': len(tests),
        },
        'durations': {record.run_id: record.duration for record in records},
        **sections,
    }
    logger.info('Finished %s experiment: %d models, %d tests (%d significant)', kind.value, len(records),
                len(tests), sum(test.significant for test in tests))
    return ExperimentRun(kind=kind, config=config, records=tuple(records), tests=tuple(tests),
                         summary=summary, plotdata=plotdata)


def run_separability_audit(config: ExperimentConfig) -> ExperimentRun:
    return run_experiment(ExperimentKind.AUDIT, config)


def run_degradation_experiment(config: ExperimentConfig) -> ExperimentRun:
    return run_experiment(ExperimentKind.DEGRADATION, config)


def run_noise_ablation(config: ExperimentConfig) -> ExperimentRun:
    return run_experiment(ExperimentKind.ABLATION, config)


def run_split_experiment(config: ExperimentConfig) -> ExperimentRun:
    return run_experiment(ExperimentKind.SPLIT, config)
