import argparse
import logging
from pathlib import Path

from datagen.generators import sample_population
from datagen.models import PopulationSpec, axes_at_angle
from datagen.presets import PRESETS_BY_NAME, get_preset
from datagen.serializers import (load_population_spec, save_dataset_csv,
                                 save_population_spec)
from sepbias.commands import LabCommand, add_seed_argument
from sepbias.settings import (DEFAULT_AXIS_ANGLE, DEFAULT_DIM,
                              get_master_seed)

logger = logging.getLogger(__name__)

SPEC_FLAGS: tuple[str, ...] = ('dim', 'group_prior', 'class_prior', 'disease_separation', 'noise_scale',)


class Command(LabCommand):
    help = 'Sample a synthetic dataset; writes data.csv and population.json under --out.'

    def add_arguments(self, parser):
        parser.add_argument('--n', type=int, default=1000, help='number of samples')
        parser.add_argument('--out', type=Path, required=True, help='output directory')
        add_seed_argument(parser)
        separability = parser.add_mutually_exclusive_group()
        separability.add_argument('--auc', type=float, help='target Bayes group AUC in [0.5, 1)')
        separability.add_argument('--group-separation', type=float, help='distance between group means')
        separability.add_argument('--preset', choices=list(PRESETS_BY_NAME),
                                  help='dataset-attribute analogue (sets AUC and priors)')
        parser.add_argument('--spec', type=Path, help='PopulationSpec JSON to start from')
        fields = parser.add_argument_group('population fields (override --spec and --preset)')
        fields.add_argument('--dim', type=int, default=argparse.SUPPRESS)
        fields.add_argument('--group-prior', type=float, default=argparse.SUPPRESS)
        fields.add_argument('--class-prior', type=float, nargs=2, metavar=('P0', 'P1'), default=argparse.SUPPRESS)
        fields.add_argument('--disease-separation', type=float, default=argparse.SUPPRESS)
        fields.add_argument('--noise-scale', type=float, default=argparse.SUPPRESS)
        fields.add_argument('--axis-angle', type=float, default=argparse.SUPPRESS,
                            help=f'angle between group and disease axes in degrees (default: {DEFAULT_AXIS_ANGLE})')

    def population_spec(self, options: dict) -> PopulationSpec:
        fields: dict = load_population_spec(options['spec']).to_dict() if options['spec'] else {}
        auc = options['auc']
        if options['preset']:
            preset = get_preset(options['preset'])
            fields.update(group_prior=preset.group_prior, class_prior=preset.class_prior)
            auc = preset.separability_auc
        fields.update({name: options[name] for name in SPEC_FLAGS if name in options})
        if 'dim' in options or 'axis_angle' in options:
            dim = fields.get('dim', DEFAULT_DIM)
            fields['group_axis'], fields['disease_axis'] = axes_at_angle(
                dim, options.get('axis_angle', DEFAULT_AXIS_ANGLE),
            )
        if auc is not None:
            fields.pop('group_separation', None)
            return PopulationSpec.from_auc(auc, **fields)
        if options['group_separation'] is not None:
            fields['group_separation'] = options['group_separation']
        return PopulationSpec(**fields)

    def handle(self, *args, **options):
        spec = self.population_spec(options)
        seed = get_master_seed(options['seed'])
        dataset = sample_population(spec, options['n'], seed)
        data_path = save_dataset_csv(dataset, options['out'] / 'data.csv')
        save_population_spec(spec, options['out'] / 'population.json')
        logger.info('Wrote %d samples to %s', len(dataset), data_path)
