import logging
from pathlib import Path

from biasinject.injectors import inject_underdiagnosis, underdiagnosis_flips
from biasinject.models import NoiseSpec
from biasinject.serializers import load_noise_spec
from datagen.serializers import load_dataset_csv, save_dataset_csv
from sepbias.commands import LabCommand, add_seed_argument
from sepbias.settings import (DEFAULT_NOISE_RATE, DEFAULT_TARGET_GROUP,
                              get_master_seed)

logger = logging.getLogger(__name__)


class Command(LabCommand):
    help = 'Underdiagnose one group of a dataset CSV and write the corrupted copy.'

    def add_arguments(self, parser):
        parser.add_argument('--in', dest='input', type=Path, required=True, help='dataset CSV')
        parser.add_argument('--out', type=Path, required=True, help='corrupted dataset CSV')
        parser.add_argument('--rate', type=float, default=DEFAULT_NOISE_RATE,
                            help='fraction of the group\'s true positives relabelled negative')
        parser.add_argument('--group', type=int, choices=(0, 1), default=DEFAULT_TARGET_GROUP,
                            help='underdiagnosed group')
        parser.add_argument('--noise-spec', type=Path, help='NoiseSpec JSON (replaces --rate, --group, --seed)')
        add_seed_argument(parser)

    def handle(self, *args, **options):
        if options['noise_spec']:
            spec = load_noise_spec(options['noise_spec'])
        else:
            spec = NoiseSpec(target_group=options['group'], rate=options['rate'],
                             seed=get_master_seed(options['seed']))
        dataset = load_dataset_csv(options['input'])
        flips = underdiagnosis_flips(dataset, spec)
        save_dataset_csv(inject_underdiagnosis(dataset, spec), options['out'])
        logger.info('Flipped %d labels of group %d; wrote %s', flips.size, spec.target_group, options['out'])
