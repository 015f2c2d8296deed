"""Exception hierarchy for treeharm."""


class TreeHarmError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(TreeHarmError, ValueError):
    """Tree parameters or operation arguments violate a precondition."""


class BudgetExceededError(TreeHarmError):
    """A ball enumeration or Gram matrix would exceed the vertex budget."""


class VertexOutsideBallError(TreeHarmError, ValueError):
    pass


class NotRefinedError(TreeHarmError, ValueError):
    """Cylinder is shallower than the vertex, so the horocycle index is not constant on it."""


class BallTooSmallError(TreeHarmError, ValueError):
    pass


class ParameterMismatchError(TreeHarmError, ValueError):
    pass


class SingularParameterError(TreeHarmError, ArithmeticError):
    """The two-term decomposition of the spherical function degenerates at this z."""


class KernelUndefinedError(TreeHarmError, ValueError):
    pass


class NonRadialError(TreeHarmError, AssertionError):
    """Brute-force convolution produced different values on one sphere."""


class ClassificationUnavailableError(TreeHarmError):
    """Spectrum formulas need Tits' independence property, and the flag is unset."""


class MonotonicityError(TreeHarmError, AssertionError):
    """Spectra failed to nest; this indicates an implementation bug."""


class ConsistencyError(TreeHarmError, AssertionError):
    """Two independent evaluation routes disagree beyond tolerance."""
