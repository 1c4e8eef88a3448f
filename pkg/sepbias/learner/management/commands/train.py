import logging
from pathlib import Path

from datagen.serializers import load_dataset_csv
from learner.models import Architecture, Target
from learner.serializers import save_model
from learner.training import train_classifier
from sepbias.commands import (LabCommand, add_seed_argument,
                              add_train_arguments, train_config_from_options)
from sepbias.settings import DEFAULT_EXPERIMENT_ARCH

logger = logging.getLogger(__name__)


class Command(LabCommand):
    help = 'Train a classifier on a dataset CSV; writes model.json under --out.'

    def add_arguments(self, parser):
        parser.add_argument('--in', dest='input', type=Path, required=True, help='training dataset CSV')
        parser.add_argument('--out', type=Path, required=True, help='output directory for model.json')
        parser.add_argument('--target', choices=[target.value for target in Target], default=Target.OBSERVED_LABEL.value)
        parser.add_argument('--arch', choices=[arch.value for arch in Architecture], default=DEFAULT_EXPERIMENT_ARCH)
        add_seed_argument(parser)
        add_train_arguments(parser)

    def handle(self, *args, **options):
        model = train_classifier(load_dataset_csv(options['input']), options['target'], options['arch'],
                                 train_config_from_options(options))
        path = save_model(model, options['out'] / 'model.json')
        logger.info('Wrote %s model to %s', model.arch.value, path)
