"""Exception types shared across the package.

Solvers raise NonConvergence-style errors instead of returning junk; the CLI
maps QmlabError subclasses onto exit codes (invalid input -> 2, numerical
failure -> 3).
"""


class QmlabError(Exception):
    """Base class for all qmlab errors."""


class InvalidParam(QmlabError):
    """A parameter is outside the mathematical domain of the operation."""


class InvalidExponent(InvalidParam):
    """Power-function exponent outside the admissible range."""


class DomainViolation(QmlabError):
    """Requested interval is not contained in the function's domain."""


class DomainMismatch(QmlabError):
    """Two functions that must share a domain do not."""


class NoSignChange(QmlabError):
    """Root bracketing failed: f(lo) * f(hi) >= 0."""


class NonConvergence(QmlabError):
    """An iterative solver exceeded its iteration budget."""


class SingularMatrix(QmlabError):
    """Pivot too small during Gaussian elimination."""


class Infeasible(QmlabError):
    """Linear program has no feasible point."""


class Unbounded(QmlabError):
    """Linear program objective is unbounded below."""


class NotQuasiminimizer(QmlabError):
    """Energy ratio is +inf: some subinterval has zero comparison energy."""


class DiscontinuousPaste(QmlabError):
    """Pasted function would jump at a boundary point of the inner set."""


class InvalidFunctionFile(QmlabError):
    """JSON function file is malformed or violates the PWL invariants."""
