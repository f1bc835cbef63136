"""Exception types raised across the package."""


class SltBetaError(Exception):
    """Base class for package errors. ``code`` is a stable machine-readable tag."""

    code = "error"


class DomainError(SltBetaError, ValueError):
    """An argument lies outside the mathematical domain of a function."""

    code = "domain"


class ConfigError(SltBetaError, ValueError):
    """Invalid configuration (SLT constants, config file entries, ...)."""

    code = "config"

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BoundaryValueError(DomainError):
    """An observation equals exactly 0 or 1, which the plain beta density cannot score."""

    code = "boundary_value"

    def __init__(self, delay, value, subject_id=None):
        self.delay = delay
        self.value = value
        self.subject_id = subject_id
        who = "" if subject_id is None else f"subject {subject_id!r}: "
        super().__init__(
            f"{who}indifference point {value!r} at delay {delay!r} lies on the "
            "boundary of [0, 1]; standard beta regression needs values in (0, 1)"
        )


class DataError(SltBetaError, ValueError):
    """Malformed or out-of-range input data."""

    code = "data"

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class EmptyDatasetError(DataError):
    code = "empty_dataset"


class NotConvergedError(SltBetaError, RuntimeError):
    code = "not_converged"
