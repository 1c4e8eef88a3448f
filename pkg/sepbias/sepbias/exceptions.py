class SepbiasError(Exception):
    """Base class of every error raised by the laboratory."""


class DomainError(SepbiasError, ValueError):
    """Argument outside the domain of an operation."""


class SchemaError(DomainError):
    """Document or CSV file that violates its schema."""

    def __init__(self, message: str, line: int | None = None, column: str | None = None):
        self.line = line
        self.column = column
        location: list[str] = []
        if line is not None:
            location.append(f'line {line}')
        if column is not None:
            location.append(f'column {column!r}')
        if location:
            message = f'{message} ({", ".join(location)})'
        super().__init__(message)


class DegenerateDatasetError(DomainError):
    """Generated dataset misses a (group, class) cell."""


class DegenerateTargetError(DomainError):
    """Target with fewer than two classes, or no eligible samples."""


class DegenerateLabelsError(DomainError):
    """Labels with a single class where both are required."""


class TrainingFailureError(DomainError):
    """Training diverged."""

    def __init__(self, message: str, epoch: int):
        self.epoch = epoch
        super().__init__(f'{message} at epoch {epoch}')


class UnsupportedArchitectureError(DomainError):
    """Operation not available for the model architecture."""


class IncompatibleReportsError(DomainError):
    """Metrics reports computed on different test sets."""


class ExperimentUnitError(DomainError):
    """Failure inside one experiment unit, annotated with its provenance."""

    def __init__(self, message: str, separability: float | None, seed_index: int):
        self.detail = message
        self.separability = separability
        self.seed_index = seed_index
        super().__init__(f'{message} (separability={separability}, seed={seed_index})')

    def __reduce__(self):
        return type(self), (self.detail, self.separability, self.seed_index)


class IntegrityError(SepbiasError):
    """Persisted run file missing or corrupt."""

    def __init__(self, message: str, path):
        self.path = path
        super().__init__(f'{message}: {path}')