import enum
import math
from dataclasses import asdict, dataclass, field, replace

from datagen.generators import separation_for_auc
from datagen.models import PopulationSpec
from datagen.presets import PRESETS_BY_NAME
from learner.models import Architecture, TrainConfig
from metrics.models import MetricsReport
from sepbias.exceptions import DomainError
from sepbias.seeding import fingerprint
from sepbias.settings import (DEFAULT_ALPHA, DEFAULT_EXPERIMENT_ARCH,
                              DEFAULT_JOBS, DEFAULT_MASTER_SEED,
                              DEFAULT_N_SEEDS, DEFAULT_N_TEST, DEFAULT_N_TRAIN,
                              DEFAULT_NOISE_RATES,
                              DEFAULT_SEPARABILITY_TARGETS,
                              DEFAULT_TARGET_GROUP, DEFAULT_THRESHOLD,
                              EXPERIMENT_BATCH_SIZE,
                              EXPERIMENT_DISEASE_SEPARATION,
                              EXPERIMENT_MAX_EPOCHS)
from stats.models import TestResult


class ExperimentKind(enum.StrEnum):
    AUDIT = 'audit'
    DEGRADATION = 'degradation'
    ABLATION = 'ablation'
    SPLIT = 'split'

    @classmethod
    def parse(cls, value) -> 'ExperimentKind':
        try:
            return cls(value)
        except ValueError:
            raise DomainError(f'unknown experiment {value!r}; expected one of {[k.value for k in cls]}') from None


class Arm(enum.StrEnum):
    AUDIT = 'audit'
    CLEAN = 'clean'
    BIASED = 'biased'


def experiment_train_config() -> TrainConfig:
    return TrainConfig(batch_size=EXPERIMENT_BATCH_SIZE, max_epochs=EXPERIMENT_MAX_EPOCHS)


def experiment_population() -> PopulationSpec:
    return PopulationSpec(disease_separation=EXPERIMENT_DISEASE_SEPARATION)


def _positive_int(name: str, value) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise DomainError(f'{name} must be a positive integer, got {value!r}')


@dataclass(frozen=True)
class Level:
    """One point of the separability sweep."""

    index: int
    name: str
    separability: float | None
    spec: PopulationSpec | None


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep, sample sizes, seeds and model settings of one experiment.

    population supplies every PopulationSpec field except group_separation,
    which each level sets from its separability target. presets, when given,
    replace separability_targets; dataset_path replaces both by one measured
    level.
    """

    separability_targets: tuple[float, ...] = DEFAULT_SEPARABILITY_TARGETS
    noise_rates: tuple[float, ...] = DEFAULT_NOISE_RATES
    n_train: int = DEFAULT_N_TRAIN
    n_test: int = DEFAULT_N_TEST
    n_seeds: int = DEFAULT_N_SEEDS
    arch: Architecture = Architecture(DEFAULT_EXPERIMENT_ARCH)
    train_config: TrainConfig = field(default_factory=experiment_train_config)
    target_group: int = DEFAULT_TARGET_GROUP
    alpha: float = DEFAULT_ALPHA
    threshold: float = DEFAULT_THRESHOLD
    master_seed: int = DEFAULT_MASTER_SEED
    presets: tuple[str, ...] = ()
    population: PopulationSpec = field(default_factory=experiment_population)
    dataset_path: str | None = None
    output_dir: str | None = None
    jobs: int = DEFAULT_JOBS

    # Excluded from the fingerprint: they do not change any result.
    execution_fields = ('output_dir', 'jobs',)

    def __post_init__(self):
        object.__setattr__(self, 'separability_targets', tuple(float(t) for t in self.separability_targets))
        object.__setattr__(self, 'noise_rates', tuple(float(r) for r in self.noise_rates))
        object.__setattr__(self, 'presets', tuple(self.presets))
        object.__setattr__(self, 'arch', Architecture.parse(self.arch))
        if not self.separability_targets:
            raise DomainError('separability_targets must not be empty')
        for target in self.separability_targets:
            if not (math.isfinite(target) and 0.5 <= target < 1.0):
                raise DomainError(f'separability targets must lie in [0.5, 1), got {target!r}')
        if not self.noise_rates:
            raise DomainError('noise_rates must not be empty')
        for rate in self.noise_rates:
            if not (math.isfinite(rate) and 0.0 <= rate <= 1.0):
                raise DomainError(f'noise rates must lie in [0, 1], got {rate!r}')
        for name in ('n_train', 'n_test', 'n_seeds', 'jobs'):
            _positive_int(name, getattr(self, name))
        if self.target_group not in (0, 1) or isinstance(self.target_group, bool):
            raise DomainError(f'target_group must be 0 or 1, got {self.target_group!r}')
        for name in ('alpha', 'threshold'):
            value = getattr(self, name)
            if not (math.isfinite(value) and 0.0 < value < 1.0):
                raise DomainError(f'{name} must lie in (0, 1), got {value!r}')
        if isinstance(self.master_seed, bool) or not isinstance(self.master_seed, int) or self.master_seed < 0:
            raise DomainError(f'master_seed must be a nonnegative integer, got {self.master_seed!r}')
        for name in self.presets:
            if name not in PRESETS_BY_NAME:
                raise DomainError(f'unknown preset {name!r}; choose from {", ".join(PRESETS_BY_NAME)}')

    def levels(self) -> list[Level]:
        if self.dataset_path is not None:
            return [Level(index=0, name='dataset', separability=None, spec=None)]
        base = self.population.to_dict()
        del base['group_separation'], base['group_prior'], base['class_prior']
        if self.presets:
            return [
                Level(index=index, name=name, separability=PRESETS_BY_NAME[name].separability_auc,
                      spec=PRESETS_BY_NAME[name].spec(**base))
                for index, name in enumerate(self.presets)
            ]
        return [
            Level(
                index=index,
                name=f'auc={target}',
                separability=target,
                spec=replace(self.population,
                             group_separation=separation_for_auc(target, self.population.noise_scale)),
            )
            for index, target in enumerate(self.separability_targets)
        ]

    def to_dict(self) -> dict:
        document = asdict(self)
        document['separability_targets'] = list(self.separability_targets)
        document['noise_rates'] = list(self.noise_rates)
        document['arch'] = self.arch.value
        document['train_config'] = self.train_config.to_dict()
        document['presets'] = list(self.presets)
        document['population'] = self.population.to_dict()
        return document

    def fingerprint(self) -> str:
        document = self.to_dict()
        for name in self.execution_fields:
            document.pop(name)
        return fingerprint(document)


@dataclass(frozen=True)
class RunRecord:
    """Clean-test metrics of one trained model of one (level, seed) unit."""

    run_id: str
    level: int
    seed: int
    arm: Arm
    separability: float | None
    rho: float | None
    report: MetricsReport
    separability_auc: float | None = None
    split_auc: float | None = None
    duration: float = 0.0
    config_fingerprint: str = ''

    @staticmethod
    def make_id(level: int, seed: int, arm: Arm, rho: float | None = None) -> str:
        run_id = f'L{level:02d}-S{seed:02d}-{arm.value}'
        return run_id if rho is None else f'{run_id}@{rho!r}'


@dataclass(frozen=True, eq=False)
class ExperimentRun:
    """Records, tests, summary and plot tables of one experiment invocation."""

    kind: ExperimentKind
    config: ExperimentConfig
    records: tuple[RunRecord, ...]
    tests: tuple[TestResult, ...]
    summary: dict
    plotdata: dict[str, list[dict]]
