import argparse
import logging
from pathlib import Path

from datagen.presets import PRESETS_BY_NAME
from experiments.models import ExperimentKind
from experiments.persistence import persist_run
from experiments.reports import render_report
from experiments.runners import run_experiment
from experiments.serializers import (build_experiment_config,
                                     load_config_file, merge_settings,
                                     parse_overrides)
from learner.models import Architecture
from sepbias.commands import LabCommand
from sepbias.settings import (ABLATION_N_SEEDS, DEFAULT_EXPERIMENT_ARCH,
                              DEFAULT_N_SEEDS, DEFAULT_N_TEST,
                              DEFAULT_N_TRAIN, DEFAULT_NOISE_RATES,
                              DEFAULT_SEPARABILITY_TARGETS, get_master_seed)

logger = logging.getLogger(__name__)

# option name -> ExperimentConfig field
OVERRIDE_FLAGS: dict[str, str] = {
    'targets': 'separability_targets',
    'rates': 'noise_rates',
    'n_train': 'n_train',
    'n_test': 'n_test',
    'n_seeds': 'n_seeds',
    'arch': 'arch',
    'presets': 'presets',
    'dataset': 'dataset_path',
    'jobs': 'jobs',
    'seed': 'master_seed',
}


class Command(LabCommand):
    help = 'Run one experiment and persist its run directory under --out.'

    def add_arguments(self, parser):
        parser.add_argument('kind', choices=[kind.value for kind in ExperimentKind])
        parser.add_argument('--out', type=Path, required=True, help='run directory')
        parser.add_argument('--config', type=Path, help='JSON or YAML experiment configuration')
        parser.add_argument('--set', dest='assignments', action='append', default=[], metavar='KEY=VALUE',
                            help='dotted override, e.g. train_config.learning_rate=0.05')
        flags = parser.add_argument_group('sweep (override the configuration file)')
        flags.add_argument('--targets', type=float, nargs='+', default=argparse.SUPPRESS,
                           help=f'separability targets (default: {" ".join(map(str, DEFAULT_SEPARABILITY_TARGETS))})')
        flags.add_argument('--rates', type=float, nargs='+', default=argparse.SUPPRESS,
                           help=f'noise rates (default: {" ".join(map(str, DEFAULT_NOISE_RATES))})')
        flags.add_argument('--presets', nargs='+', choices=list(PRESETS_BY_NAME), default=argparse.SUPPRESS,
                           help='dataset-attribute analogues replacing --targets')
        flags.add_argument('--dataset', type=str, default=argparse.SUPPRESS,
                           help='dataset CSV replacing the synthetic sweep')
        flags.add_argument('--n-train', type=int, default=argparse.SUPPRESS,
                           help=f'training samples per unit (default: {DEFAULT_N_TRAIN})')
        flags.add_argument('--n-test', type=int, default=argparse.SUPPRESS,
                           help=f'test samples per unit (default: {DEFAULT_N_TEST})')
        flags.add_argument('--n-seeds', type=int, default=argparse.SUPPRESS,
                           help=f'seeds per level (default: {DEFAULT_N_SEEDS}, {ABLATION_N_SEEDS} for ablation)')
        flags.add_argument('--arch', choices=[arch.value for arch in Architecture], default=argparse.SUPPRESS,
                           help=f'model architecture (default: {DEFAULT_EXPERIMENT_ARCH})')
        flags.add_argument('--jobs', type=int, default=argparse.SUPPRESS,
                           help='parallel worker processes (default: SEPBIAS_JOBS or 1)')
        flags.add_argument('--seed', type=int, default=argparse.SUPPRESS,
                           help='master seed (default: SEPBIAS_SEED or 0)')

    def handle(self, *args, **options):
        file_data = load_config_file(options['config']) if options['config'] else {}
        if 'master_seed' not in file_data:
            file_data = {**file_data, 'master_seed': get_master_seed()}
        flags = {field: options[name] for name, field in OVERRIDE_FLAGS.items() if name in options}
        flags['output_dir'] = str(options['out'])
        overrides = merge_settings(parse_overrides(options['assignments']), flags)
        config = build_experiment_config(options['kind'], file_data, overrides)
        run = run_experiment(options['kind'], config)
        path = persist_run(run, options['out'])
        self.stdout.write(render_report(run), ending='')
        logger.info('Run directory: %s', path)
