"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`ChaplyginError`; the CLI maps the subclasses onto exit codes.
"""


class ChaplyginError(Exception):
    """Base class for all package errors."""


class DomainError(ChaplyginError, ValueError):
    """An argument lies outside the domain of the operation."""


class InadmissibleStateError(DomainError):
    """A primitive state is outside the physical region n > 0, rho > 1/c, |v| < c."""

    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = tuple(failed)


class NonInvertibleError(DomainError):
    """Conserved densities with no admissible primitive preimage."""


class InversionOutOfRegionError(DomainError):
    """The recovered primitive state left the physical region."""


class OffCurveError(DomainError):
    """The requested point on a contact curve would violate |v| < c."""


class RegimeError(ChaplyginError):
    """Data handed to a solver that does not cover its wave regime."""


class NoRealSpeedError(ChaplyginError):
    """The delta-shock speed quadratic has a negative discriminant."""


class EntropyViolationError(ChaplyginError):
    """No (or more than one) delta-shock speed satisfies b <= sigma <= a."""


class InternalInconsistencyError(ChaplyginError):
    """A solver produced a result violating its own post-conditions."""


class QuadratureError(ChaplyginError):
    """Quadrature did not reach the requested refinement.

    The best-effort report is attached as ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class RecoveryError(ChaplyginError):
    """Primitive recovery failed inside a finite-volume step."""

    def __init__(self, message, cell=None, time=None):
        super().__init__(message)
        self.cell = cell
        self.time = time


class ConfigError(ChaplyginError):
    """Malformed or incomplete problem configuration."""
