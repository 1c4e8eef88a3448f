import logging
from pathlib import Path

from datagen.generators import split_dataset
from datagen.serializers import load_dataset_csv
from learner.models import Architecture, Target
from learner.training import predict_proba, train_classifier
from metrics.classification import roc_auc
from sepbias.commands import (LabCommand, add_seed_argument,
                              add_train_arguments, train_config_from_options)
from sepbias.serializers import dump_json
from sepbias.settings import DEFAULT_EXPERIMENT_ARCH, DEFAULT_TEST_FRACTION

logger = logging.getLogger(__name__)


class Command(LabCommand):
    help = 'Measure subgroup separability: test AUC of a classifier trained to predict the group.'

    def add_arguments(self, parser):
        parser.add_argument('--in', dest='input', type=Path, required=True, help='dataset CSV')
        parser.add_argument('--out', type=Path, required=True, help='output directory for audit.json')
        parser.add_argument('--arch', choices=[arch.value for arch in Architecture], default=DEFAULT_EXPERIMENT_ARCH)
        parser.add_argument('--test-fraction', type=float, default=DEFAULT_TEST_FRACTION)
        add_seed_argument(parser)
        add_train_arguments(parser)

    def handle(self, *args, **options):
        config = train_config_from_options(options)
        train, test = split_dataset(load_dataset_csv(options['input']), options['test_fraction'], config.seed)
        model = train_classifier(train, Target.GROUP, options['arch'], config)
        separability_auc = roc_auc(predict_proba(model, test.features), test.groups)
        out = options['out']
        out.mkdir(parents=True, exist_ok=True)
        document = {
            'separability_auc': separability_auc,
            'arch': options['arch'],
            'n_train': len(train),
            'n_test': len(test),
            'train_config': config.to_dict(),
        }
        (out / 'audit.json').write_text(dump_json(document), encoding='utf-8', newline='\n')
        logger.info('Separability AUC %.4f (%d test samples)', separability_auc, len(test))
        self.stdout.write(f'separability_auc {separability_auc:.4f}')
