"""Exception types raised by the solver.

Everything derives from :class:`CGLError` so callers can catch solver
failures without masking ordinary Python bugs.
"""


class CGLError(Exception):
    """Base class for all solver errors."""


# --- state algebra ---------------------------------------------------------

class NonPositiveDensity(CGLError):
    """Density is zero or negative where a positive value is required."""


class NonPositivePressure(CGLError):
    """A directional pressure is zero or negative."""


class DegenerateField(CGLError):
    """|B|^2 fell below the floor where a field direction is needed."""


class DegenerateEntropyState(CGLError):
    """Entropy-variable vector does not correspond to an admissible state."""


class ComplexSpeed(CGLError):
    """Characteristic speed radicand is negative beyond the clamp tolerance."""


# --- two-point fluxes ------------------------------------------------------

class NonPositiveInput(CGLError):
    """Logarithmic mean needs strictly positive arguments."""


class LogMeanDomain(NonPositiveInput):
    """Alias kept separate so flux callers can distinguish the source."""


# --- non-conservative products / derivatives -------------------------------

class InsufficientGhostWidth(CGLError):
    """Padded array is too narrow for the requested stencil."""


# --- eigensystem -----------------------------------------------------------

class SqrtBranch(CGLError):
    """Matrix square root of the scaling block has no real branch."""


# --- reconstruction --------------------------------------------------------

class SingularScaling(CGLError):
    """Scaled eigenvector matrix is numerically singular (cond > 1e12)."""


# --- semi-discrete scheme --------------------------------------------------

class InadmissibleState(CGLError):
    """A stage state left the admissible set; payload carries cell indices."""

    def __init__(self, message, indices=None):
        super().__init__(message)
        self.indices = indices


# --- time integration ------------------------------------------------------

class ImplicitSolveFailure(CGLError):
    """Implicit relaxation stage did not produce a usable root."""


class NonPositiveResult(ImplicitSolveFailure):
    """Implicit stage produced a non-positive pressure."""


# --- cases / diagnostics ---------------------------------------------------

class DimensionMismatch(CGLError):
    """Case dimensionality does not match the supplied grid."""


class ShapeMismatch(CGLError):
    """Field arrays disagree in shape."""


class NonPositiveError(CGLError):
    """Convergence-order input contains a non-positive error value."""
