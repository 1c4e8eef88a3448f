import logging
from pathlib import Path

from datagen.serializers import load_dataset_csv
from experiments.persistence import write_table
from learner.probes import split_probe
from learner.serializers import load_model
from learner.training import predict, predict_proba
from metrics.classification import group_metrics
from metrics.serializers import REPORT_COLUMNS, report_rows
from sepbias.commands import (LabCommand, add_seed_argument,
                              add_train_arguments, train_config_from_options)
from sepbias.serializers import dump_json
from sepbias.settings import DEFAULT_THRESHOLD, get_master_seed

logger = logging.getLogger(__name__)


class Command(LabCommand):
    help = 'Group-wise metrics of a saved model on a test CSV; --split also runs the SPLIT probe.'

    def add_arguments(self, parser):
        parser.add_argument('--model', type=Path, required=True, help='model.json written by train')
        parser.add_argument('--in', dest='input', type=Path, required=True, help='test dataset CSV')
        parser.add_argument('--out', type=Path, required=True, help='output directory')
        parser.add_argument('--threshold', type=float, default=DEFAULT_THRESHOLD)
        parser.add_argument('--split', action='store_true', help='train a linear probe for the group on the frozen backbone')
        add_seed_argument(parser)
        add_train_arguments(parser)

    def handle(self, *args, **options):
        model_path, out = options['model'], options['out']
        model = load_model(model_path)
        test = load_dataset_csv(options['input'])
        if not test.is_clean():
            logger.warning('%s carries corrupted labels; metrics use true_label', options['input'])
        threshold = options['threshold']
        report = group_metrics(
            predict(model, test.features, threshold),
            predict_proba(model, test.features),
            test.true_labels,
            test.groups,
            threshold,
        )
        seed = get_master_seed(options['seed'])
        write_table(report_rows(report, run_id=model_path.stem, seed=seed), REPORT_COLUMNS, out / 'metrics.csv')
        if options['split']:
            probe = split_probe(model, test, train_config_from_options(options))
            document = {'split_auc': probe.split_auc, 'backbone_fingerprint': probe.backbone_fingerprint}
            (out / 'split.json').write_text(dump_json(document), encoding='utf-8', newline='\n')
            self.stdout.write(f'split_auc {probe.split_auc:.4f}')
        logger.info('Wrote metrics of %s on %d samples to %s', model_path, len(test), out)
