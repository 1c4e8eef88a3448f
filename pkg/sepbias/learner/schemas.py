from sepbias.settings import SCHEMA_VERSION

POSITIVE_INTEGER: dict = {'type': 'integer', 'minimum': 1}

TRAIN_CONFIG_SCHEMA: dict = {
    'type': 'object',
    'properties': {
        'learning_rate': {'type': 'number', 'exclusiveMinimum': 0},
        'max_epochs': POSITIVE_INTEGER,
        'patience': POSITIVE_INTEGER,
        'val_fraction': {'type': 'number', 'exclusiveMinimum': 0, 'exclusiveMaximum': 1},
        'batch_size': {'anyOf': [POSITIVE_INTEGER, {'const': 'full'}]},
        'hidden_width': POSITIVE_INTEGER,
        'seed': {'type': 'integer', 'minimum': 0},
    },
    'additionalProperties': False,
}

MODEL_SCHEMA: dict = {
    'type': 'object',
    '$defs': {
        'parameter': {
            'anyOf': [
                {'type': 'number'},
                {'type': 'array', 'items': {'$ref': '#/$defs/parameter'}},
            ],
        },
    },
    'properties': {
        'schema_version': {'const': SCHEMA_VERSION},
        'arch': {'enum': ['linear', 'mlp']},
        'parameters': {'type': 'object', 'additionalProperties': {'$ref': '#/$defs/parameter'}},
        'train_config': {'anyOf': [{'type': 'null'}, TRAIN_CONFIG_SCHEMA]},
    },
    'required': ['schema_version', 'arch', 'parameters', 'train_config'],
    'additionalProperties': False,
}
