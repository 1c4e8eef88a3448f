import argparse

from django.core.management.base import BaseCommand, CommandError

from learner.models import TrainConfig
from sepbias.exceptions import IntegrityError, SepbiasError
from sepbias.settings import (DEFAULT_BATCH_SIZE, DEFAULT_HIDDEN_WIDTH,
                              DEFAULT_LEARNING_RATE, DEFAULT_MAX_EPOCHS,
                              DEFAULT_PATIENCE, DEFAULT_VAL_FRACTION,
                              get_master_seed)

EXIT_DOMAIN: int = 1
EXIT_IO: int = 2


class LabCommand(BaseCommand):
    """Management command that reports laboratory errors as CommandError.

    Domain errors exit with status 1, missing or corrupt files with status 2.
    """

    requires_system_checks = []

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except (IntegrityError, OSError) as exc:
            raise CommandError(_one_line(exc), returncode=EXIT_IO) from exc
        except SepbiasError as exc:
            raise CommandError(_one_line(exc), returncode=EXIT_DOMAIN) from exc


def _one_line(exc: Exception) -> str:
    return ' '.join(str(exc).split())


def batch_size(value: str) -> int | str:
    if value == 'full':
        return value
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'full', got {value!r}") from None


def add_seed_argument(parser) -> None:
    parser.add_argument('--seed', type=int, default=None,
                        help='master seed; falls back to SEPBIAS_SEED, then 0')


def add_train_arguments(parser) -> None:
    group = parser.add_argument_group('training')
    group.add_argument('--learning-rate', type=float, default=DEFAULT_LEARNING_RATE)
    group.add_argument('--max-epochs', type=int, default=DEFAULT_MAX_EPOCHS)
    group.add_argument('--patience', type=int, default=DEFAULT_PATIENCE)
    group.add_argument('--val-fraction', type=float, default=DEFAULT_VAL_FRACTION)
    group.add_argument('--batch-size', type=batch_size, default=DEFAULT_BATCH_SIZE)
    group.add_argument('--hidden-width', type=int, default=DEFAULT_HIDDEN_WIDTH)


def train_config_from_options(options: dict) -> TrainConfig:
    return TrainConfig(
        learning_rate=options['learning_rate'],
        max_epochs=options['max_epochs'],
        patience=options['patience'],
        val_fraction=options['val_fraction'],
        batch_size=options['batch_size'],
        hidden_width=options['hidden_width'],
        seed=get_master_seed(options['seed']),
    )
