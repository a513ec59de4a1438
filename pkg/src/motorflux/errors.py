"""Exception types shared across the package."""


class MotorfluxError(Exception):
    """Base class for all motorflux errors.

    The evolver sets ``time`` on exceptions that surface mid-trajectory so
    callers can see when a run failed.
    """

    def __init__(self, message: str):
        super().__init__(message)
        self.time: float | None = None


class ConfigError(MotorfluxError):
    """Bad configuration: unparseable file, unknown key, or hypothesis violation."""


class OutOfDomainError(MotorfluxError):
    """Evaluation requested outside the admissible domain of a function."""


class UnsupportedConfigurationError(MotorfluxError):
    """The requested operation does not apply to this problem configuration."""


class ScalingError(MotorfluxError):
    """Gauge factor exp(psi/sigma) would overflow double precision."""


class StepSizeError(MotorfluxError):
    """Time step exceeds the positivity bound; carries the admissible dt_max."""

    def __init__(self, message: str, dt_max: float):
        super().__init__(message)
        self.dt_max = dt_max


class SolverError(MotorfluxError):
    """Linear solve failed to reach its tolerance; carries the last residual."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class NonConvergenceError(SolverError):
    """Iteration cap exceeded before the convergence criterion was met."""


class IrreducibilityError(MotorfluxError):
    """Inverse iteration produced a sign change; configuration is not irreducible."""


class DegenerateDataError(MotorfluxError):
    """Input data carries no information for the requested operation (e.g. zero mass)."""


class OracleScopeError(MotorfluxError):
    """Problem exceeds the size cap of the dense reference computation."""


class InvariantViolationError(MotorfluxError):
    """Internal invariant broken; indicates a bug, not bad user data."""
