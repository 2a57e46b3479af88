class QcorrError(Exception):
    """Base class for library errors."""


class DimensionError(QcorrError, ValueError):
    pass


class ValidityError(QcorrError, ValueError):
    """An object fails one of its defining invariants (Hermiticity, trace, PSD, ...)."""


class ConstraintError(ValidityError):
    pass


class NotCompletelyPositiveError(ValidityError):
    """The map is positive but its Choi matrix has a negative eigenvalue."""


class SamplerError(QcorrError, RuntimeError):
    pass


class ConfigError(QcorrError, ValueError):
    pass
