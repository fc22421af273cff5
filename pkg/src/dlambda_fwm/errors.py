"""Exception types shared across the package.

Everything raised on purpose derives from FwmError so callers can catch
one base class at the CLI boundary and map it to an exit code.
"""


class FwmError(Exception):
    """Base class for all errors raised by dlambda_fwm."""


class ConfigError(FwmError):
    """Bad configuration document: unknown/missing key, malformed value."""


class DomainError(FwmError):
    """Argument outside the mathematical domain of an operation."""


class RegimeError(FwmError):
    """Operation called outside its physical validity regime."""


class SingularSystemError(FwmError):
    """The steady-state coherence system is (numerically) singular."""


class BoundarySolveError(FwmError):
    """Two-point boundary solve is singular (perfect-reflection resonance)."""


class NearSingularError(FwmError):
    """Closed form evaluated at its removable singularity (beta ~ 0)."""


class ConvergenceError(FwmError):
    """Implicit time step failed to converge."""


class GridError(FwmError):
    """Time/space grid violates a resolution or coverage precondition."""


class ScanRangeError(FwmError):
    """A scan never reached the feature it was asked to measure."""
