"""Exception and warning types shared across the package."""


class WcospecError(Exception):
    """Base class for all package-specific errors."""


# -- series ------------------------------------------------------------------

class DivergentComposition(WcospecError):
    """Composition f(phi) requested with |phi(0)| >= 1."""


class LogAtZero(WcospecError):
    """Series logarithm requested for a series vanishing at the origin."""


class IllConditioned(WcospecError):
    """A computation produced coefficients too large to be trustworthy."""


# -- mobius ------------------------------------------------------------------

class InvalidFixedPoints(WcospecError):
    """Fixed points not on the unit circle, or coincident."""


class InvalidMultiplier(WcospecError):
    """Derivative at the attractive fixed point outside (0, 1)."""


class NotAutomorphism(WcospecError):
    """The Moebius map does not preserve the unit disk."""


class NotHyperbolic(WcospecError):
    """Operation requires a hyperbolic automorphism."""


# -- symbolparse -------------------------------------------------------------

class SymbolSyntaxError(WcospecError):
    """Weight expression failed to parse; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ArityError(WcospecError):
    """Function call in a weight expression has the wrong number of arguments."""


class NotInvertible(WcospecError):
    """Weight symbol is not bounded away from zero on the disk."""


class ZeroOnCircle(WcospecError):
    """Winding-number check hit a near-zero of the symbol on the sample circle."""


# -- spaces ------------------------------------------------------------------

class UnsupportedExponent(WcospecError):
    """Coefficient-based norms are only available at p = 2."""


# -- spectra -----------------------------------------------------------------

class SeriesDiverging(WcospecError):
    """Resolvent partial sums grow monotonically; lambda outside validity."""


class EigSolverFailure(WcospecError):
    """Dense eigenvalue solver did not converge."""


# -- universality ------------------------------------------------------------

class NoEigenvectorFound(WcospecError):
    """Base eigenvector search failed for the requested eigenvalue."""


class ProbeFailed(WcospecError):
    """Surjectivity probe could not reach the requested residual."""

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class BranchUndefined(WcospecError):
    """No single-valued branch available (degenerate fixed-point data)."""


# -- warnings ----------------------------------------------------------------

class TruncationSuspectWarning(UserWarning):
    """Tail coefficients carry enough mass that the value may be truncated."""


class SlowConvergenceWarning(UserWarning):
    """Series converging at a geometric rate close to 1."""
