import logging

import numpy as np

from datagen.generators import split_dataset
from datagen.models import Dataset
from learner.models import (Architecture, Model, MlpModel, ProbeResult,
                            Target, TrainConfig)
from learner.training import predict_proba, train_classifier
from metrics.classification import roc_auc
from sepbias.exceptions import (DegenerateTargetError,
                                UnsupportedArchitectureError)
from sepbias.settings import SPLIT_PROBE_TEST_FRACTION

logger = logging.getLogger(__name__)


def representation_dataset(model: MlpModel, dataset: Dataset) -> Dataset:
    """Hidden activations of the frozen backbone, labelled by group."""
    return Dataset(
        features=model.representation(dataset.features),
        groups=dataset.groups,
        true_labels=dataset.groups,
        observed_labels=dataset.groups,
        spec_fingerprint=dataset.spec_fingerprint,
        seed=dataset.seed,
    )


def split_probe(model: Model, dataset: Dataset, config: TrainConfig) -> ProbeResult:
    """Retrains only a linear output layer on the frozen representation to predict the group.

    The data is split in half (seeded by config.seed): the probe is fitted on
    one half and its group AUC read off the other.
    """
    if not isinstance(model, MlpModel):
        raise UnsupportedArchitectureError(f'SPLIT needs arch=mlp, got {model.arch.value}')
    if np.unique(dataset.groups).size < 2:
        raise DegenerateTargetError('SPLIT needs samples of both groups')
    backbone_fingerprint = model.fingerprint()
    probe_train, probe_test = split_dataset(
        representation_dataset(model, dataset), SPLIT_PROBE_TEST_FRACTION, seed=config.seed,
    )
    if np.unique(probe_test.groups).size < 2:
        raise DegenerateTargetError('probe test split holds a single group')
    probe = train_classifier(probe_train, Target.GROUP, Architecture.LINEAR, config)
    split_auc = roc_auc(predict_proba(probe, probe_test.features), probe_test.groups)
    if model.fingerprint() != backbone_fingerprint:
        raise RuntimeError('backbone parameters changed while probing')
    logger.info('SPLIT AUC %.4f on %d held-out samples', split_auc, len(probe_test))
    return ProbeResult(probe=probe, split_auc=split_auc, backbone_fingerprint=backbone_fingerprint)
