from datagen.presets import PRESETS_BY_NAME
from datagen.schemas import POPULATION_SPEC_SCHEMA
from learner.schemas import TRAIN_CONFIG_SCHEMA
from sepbias.settings import SCHEMA_VERSION

POSITIVE_INTEGER: dict = {'type': 'integer', 'minimum': 1}

EXPERIMENT_CONFIG_SCHEMA: dict = {
    'type': 'object',
    'properties': {
        'schema_version': {'const': SCHEMA_VERSION},
        'separability_targets': {
            'type': 'array',
            'items': {'type': 'number', 'minimum': 0.5, 'exclusiveMaximum': 1},
            'minItems': 1,
        },
        'noise_rates': {
            'type': 'array',
            'items': {'type': 'number', 'minimum': 0, 'maximum': 1},
            'minItems': 1,
        },
        'n_train': POSITIVE_INTEGER,
        'n_test': POSITIVE_INTEGER,
        'n_seeds': POSITIVE_INTEGER,
        'arch': {'enum': ['linear', 'mlp']},
        'train_config': TRAIN_CONFIG_SCHEMA,
        'target_group': {'enum': [0, 1]},
        'alpha': {'type': 'number', 'exclusiveMinimum': 0, 'exclusiveMaximum': 1},
        'threshold': {'type': 'number', 'exclusiveMinimum': 0, 'exclusiveMaximum': 1},
        'master_seed': {'type': 'integer', 'minimum': 0},
        'presets': {'type': 'array', 'items': {'enum': list(PRESETS_BY_NAME)}},
        'population': POPULATION_SPEC_SCHEMA,
        'dataset_path': {'type': ['string', 'null']},
        'output_dir': {'type': ['string', 'null']},
        'jobs': POSITIVE_INTEGER,
    },
    'additionalProperties': False,
}

TEST_ROW: dict = {
    'type': 'object',
    'properties': {
        'comparison_id': {'type': 'string'},
        'statistic': {'type': 'number'},
        'p': {'type': 'number'},
        'p_adj': {'type': ['number', 'null']},
        'significant': {'type': 'boolean'},
    },
    'required': ['comparison_id', 'statistic', 'p', 'p_adj', 'significant'],
}

SUMMARY_SCHEMA: dict = {
    'type': 'object',
    'properties': {
        'schema_version': {'const': SCHEMA_VERSION},
        'kind': {'enum': ['audit', 'degradation', 'ablation', 'split']},
        'config_fingerprint': {'type': 'string'},
        'holm_family': {'type': 'string'},
        'alternative': {'type': 'string'},
        'counts': {
            'type': 'object',
            'properties': {
                'results': {'type': 'integer', 'minimum': 0},
                'tests': {'type': 'integer', 'minimum': 0},
            },
            'required': ['results', 'tests'],
        },
        'durations': {'type': 'object', 'additionalProperties': {'type': 'number', 'minimum': 0}},
        'table': {'type': 'array', 'items': {'type': 'object'}},
        'associations': {'type': 'array', 'items': TEST_ROW},
    },
    'required': ['schema_version', 'kind', 'config_fingerprint', 'counts', 'durations', 'table'],
}
