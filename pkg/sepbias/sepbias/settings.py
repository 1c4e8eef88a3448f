import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()


# APPLICATION SETTINGS:

BASE_DIR = Path(__file__).resolve().parent.parent

DEBUG = os.getenv('DEBUG')
if DEBUG == 'True':
    DEBUG = True
else:
    DEBUG = False

LOG_LEVEL: str = 'DEBUG' if DEBUG else os.getenv('LOG_LEVEL', default='INFO')

DEFAULT_MASTER_SEED: int = 0

DEFAULT_JOBS: int = int(os.getenv('SEPBIAS_JOBS', default='1'))

SCHEMA_VERSION: int = 1


def get_master_seed(flag_value: int | None = None) -> int:
    """Resolves the master seed: flag, then SEPBIAS_SEED, then the default."""
    if flag_value is not None:
        return flag_value
    env_value = os.getenv('SEPBIAS_SEED')
    if env_value is None or env_value == '':
        return DEFAULT_MASTER_SEED
    return int(env_value)


# DJANGO SETTINGS:

DATABASES: dict = {}

INSTALLED_APPS = [
    # Third-party apps:
    'rest_framework',
    # Local apps:
    'datagen',
    'biasinject',
    'oracle',
    'learner',
    'metrics',
    'stats',
    'experiments',
]

SECRET_KEY = os.getenv('SECRET_KEY', default='sepbias-local')

USE_TZ = True


# LOGGING SETTINGS:

LOGGING: dict = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'console': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'console',
            'stream': 'ext://sys.stderr',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': LOG_LEVEL,
    },
}


# DATAGEN SETTINGS:

AXIS_NORM_TOLERANCE: float = 1e-12

DEFAULT_AXIS_ANGLE: float = 90.0

DEFAULT_CLASS_PRIOR: tuple[float, float] = (0.5, 0.5)

DEFAULT_DIM: int = 2

DEFAULT_DISEASE_SEPARATION: float = 1.0

DEFAULT_GROUP_PRIOR: float = 0.5

DEFAULT_NOISE_SCALE: float = 1.0

DEFAULT_TEST_FRACTION: float = 0.3

FEATURE_COLUMN_PREFIX: str = 'feature_'

LABEL_COLUMNS: tuple[str, ...] = ('group', 'true_label', 'observed_label',)


# BIASINJECT SETTINGS:

DEFAULT_NOISE_RATE: float = 0.25

DEFAULT_TARGET_GROUP: int = 1


# ORACLE SETTINGS:

DEFAULT_MC_SAMPLES: int = 100_000

DEFAULT_THRESHOLD: float = 0.5

MIN_MC_SAMPLES: int = 1000


# LEARNER SETTINGS:

DEFAULT_BATCH_SIZE: int | str = 'full'

DEFAULT_HIDDEN_WIDTH: int = 16

DEFAULT_LEARNING_RATE: float = 0.1

DEFAULT_MAX_EPOCHS: int = 500

DEFAULT_PATIENCE: int = 5

DEFAULT_VAL_FRACTION: float = 0.1

GRADCHECK_FLOOR: float = 1e-5

GRADCHECK_MAX_SAMPLES: int = 64

GRADCHECK_STEP: float = 1e-5

SPLIT_PROBE_TEST_FRACTION: float = 0.5


# METRICS SETTINGS:

METRIC_NAMES: tuple[str, ...] = ('tpr', 'accuracy', 'auc',)

DEGRADATION_METRICS: tuple[str, ...] = ('accuracy', 'tpr',)

OVERALL_GROUP: str = 'all'


# STATS SETTINGS:

DEFAULT_ALPHA: float = 0.05

DEFAULT_ALTERNATIVE: str = 'less'

EXACT_MW_MAX_TOTAL: int = 16


# EXPERIMENT SETTINGS:

ABLATION_N_SEEDS: int = 3

ABLATION_NOISE_RATES: tuple[float, ...] = (0.0, 0.1, 0.2, 0.25, 0.3, 0.4, 0.5,)

DEFAULT_EXPERIMENT_ARCH: str = 'mlp'

DEFAULT_N_SEEDS: int = 10

DEFAULT_N_TEST: int = 10_000

DEFAULT_N_TRAIN: int = 20_000

DEFAULT_NOISE_RATES: tuple[float, ...] = (DEFAULT_NOISE_RATE,)

DEFAULT_SEPARABILITY_TARGETS: tuple[float, ...] = (0.55, 0.65, 0.75, 0.85, 0.92, 0.98,)

EXPERIMENT_BATCH_SIZE: int = 256

# Experiment populations only; generate keeps DEFAULT_DISEASE_SEPARATION.
EXPERIMENT_DISEASE_SEPARATION: float = 0.5

EXPERIMENT_MAX_EPOCHS: int = 50

SPLIT_CEILING_TOLERANCE: float = 0.03

RUN_FILES: dict[str, str] = {
    'config': 'config.json',
    'results': 'results.csv',
    'tests': 'tests.csv',
    'summary': 'summary.json',
    'plotdata': 'plotdata',
}
