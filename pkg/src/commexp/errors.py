"""Exception types shared across the package."""


class CommexpError(Exception):
    """Base class for all library-specific failures."""


class DimensionError(CommexpError, ValueError):
    """Matrix dimensions are incompatible or outside the supported range."""


class IllConditionedError(CommexpError):
    """Spectral path rejected: eigenvector basis condition estimate too large."""


class SnapUnavailableError(CommexpError):
    """Exact exponential requested but the spectrum is not an integer
    multiple of i*pi, or the matrix is defective."""


class CongruenceViolationError(CommexpError):
    """Two eigenvalues differ by a nonzero integer multiple of 2*i*pi."""


class DeflationError(CommexpError):
    """Trace criterion says triangularizable but no common eigenvector was
    found within tolerance; signals a tolerance inconsistency."""


class ComplexRootsError(CommexpError, ValueError):
    """A construction that requires real roots hit a negative discriminant."""


class ConstraintError(CommexpError, ValueError):
    """Parameter record violates one of its side conditions."""


class RankError(CommexpError):
    """No square-root sign assignment achieves the required rank."""


class InvalidUError(CommexpError, ValueError):
    """Claimed root of e^u = 1 + u fails the residual bound."""


class NoConvergenceError(CommexpError):
    """Newton iteration did not reach the residual target."""


class ZeroRootError(CommexpError):
    """Iteration converged to the excluded trivial root u = 0."""
