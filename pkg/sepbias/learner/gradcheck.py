import numpy as np

from datagen.models import Dataset
from learner.models import Architecture, Target, TrainConfig
from learner.training import (initialize_parameters, loss,
                              loss_and_gradients, target_values)
from sepbias.exceptions import DomainError
from sepbias.settings import (GRADCHECK_FLOOR, GRADCHECK_MAX_SAMPLES,
                              GRADCHECK_STEP)


def relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(abs(analytic) + abs(numeric), GRADCHECK_FLOOR)


def check_gradients(arch: Architecture | str, config: TrainConfig, dataset: Dataset,
                    target: Target | str = Target.OBSERVED_LABEL) -> float:
    """Max relative error between backpropagated and central-difference gradients.

    Evaluated at the seeded initial parameters of config, over every parameter.
    """
    arch = Architecture.parse(arch)
    if len(dataset) > GRADCHECK_MAX_SAMPLES:
        raise DomainError(f'gradient check takes at most {GRADCHECK_MAX_SAMPLES} samples, got {len(dataset)}')
    parameters = initialize_parameters(arch, dataset.dim, config)
    targets = target_values(dataset, target)
    _, gradients = loss_and_gradients(arch, parameters, dataset.features, targets)
    worst = 0.0
    for name, values in parameters.items():
        for index in np.ndindex(values.shape):
            shifted = {key: array.copy() for key, array in parameters.items()}
            shifted[name][index] = values[index] + GRADCHECK_STEP
            upper = loss(arch, shifted, dataset.features, targets)
            shifted[name][index] = values[index] - GRADCHECK_STEP
            lower = loss(arch, shifted, dataset.features, targets)
            numeric = (upper - lower) / (2.0 * GRADCHECK_STEP)
            worst = max(worst, relative_error(float(gradients[name][index]), numeric))
    return worst
