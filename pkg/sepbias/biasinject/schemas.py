NOISE_SPEC_SCHEMA: dict = {
    'type': 'object',
    'properties': {
        'target_group': {'enum': [0, 1]},
        'rate': {'type': 'number', 'minimum': 0, 'maximum': 1},
        'seed': {'type': 'integer', 'minimum': 0},
    },
    'required': ['target_group', 'rate', 'seed'],
    'additionalProperties': False,
}
