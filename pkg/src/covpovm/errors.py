"""Shared exception types.

The CLI maps these onto exit codes: precondition/domain failures exit with
code 2, I/O failures with code 3.
"""


class CovPovmError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(CovPovmError, ValueError):
    """Operands have incompatible or non-square shapes."""


class DomainError(CovPovmError, ValueError):
    """An input value lies outside the operation's domain."""


class PreconditionError(DomainError):
    """A named construction precondition is violated.

    ``condition`` carries the short machine-readable name of the violated
    condition (e.g. ``"cond:1"``).
    """

    def __init__(self, condition: str, message: str):
        super().__init__(f"{condition}: {message}")
        self.condition = condition


class NotAProjectiveRepError(DomainError):
    """The supplied matrices do not form a projective unitary representation."""


class NotAnObservableError(DomainError):
    """A covariant family fails the normalization (sum != identity).

    ``deficit`` carries the operator sum minus the identity.
    """

    def __init__(self, message: str, deficit=None):
        super().__init__(message)
        self.deficit = deficit


class InconsistencyError(CovPovmError, RuntimeError):
    """Two independent computations that must agree do not."""


class ConstructionError(CovPovmError, RuntimeError):
    """A randomized construction exhausted its retry budget."""


class UnknownDimensionError(CovPovmError, KeyError):
    """The dimension is outside the embedded minimal-outcome tables.

    ``bound`` carries the general (low, high) bracket for the minimum.
    """

    def __init__(self, dim: int, bound: tuple):
        super().__init__(f"dimension {dim} not tabulated; general bound {bound}")
        self.dim = dim
        self.bound = bound
