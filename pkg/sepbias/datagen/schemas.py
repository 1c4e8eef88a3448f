PROBABILITY: dict = {'type': 'number', 'exclusiveMinimum': 0, 'exclusiveMaximum': 1}

NONNEGATIVE: dict = {'type': 'number', 'minimum': 0}

AXIS: dict = {'type': 'array', 'items': {'type': 'number'}, 'minItems': 1}

POPULATION_SPEC_SCHEMA: dict = {
    'type': 'object',
    'properties': {
        'dim': {'type': 'integer', 'minimum': 1},
        'group_prior': PROBABILITY,
        'class_prior': {'type': 'array', 'items': PROBABILITY, 'minItems': 2, 'maxItems': 2},
        'group_separation': NONNEGATIVE,
        'disease_separation': NONNEGATIVE,
        'group_axis': AXIS,
        'disease_axis': AXIS,
        'noise_scale': {'type': 'number', 'exclusiveMinimum': 0},
    },
    'required': [
        'dim', 'group_prior', 'class_prior', 'group_separation',
        'disease_separation', 'group_axis', 'disease_axis', 'noise_scale',
    ],
    'additionalProperties': False,
}
