"""Exception types shared across the package.

Collected here so callers can catch numerical failures without importing
the module that raised them.  Exceptions that abort with a partial result
carry it as an attribute (``NonConvergence.partial``,
``QuadratureNotConverged.best``).
"""


class DimensionMismatch(ValueError):
    """Operands have incompatible matrix dimensions."""


class SingularMatrix(ArithmeticError):
    """A pivot fell below the singularity threshold during elimination."""


class NonConvergence(ArithmeticError):
    """An iteration hit its cap before reaching the requested accuracy.

    Attributes:
        partial: best result computed so far (may be None).
    """

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


class ClusterTooCoarse(ValueError):
    """A single-linkage group has diameter far above the clustering tolerance."""


class DivisionByZeroPoly(ZeroDivisionError):
    """Polynomial division by the zero polynomial."""


class IllConditionedGcd(ArithmeticError):
    """A Euclid step lost its leading coefficient (near-common-root ambiguity)."""


class NotCoprime(ValueError):
    """Polynomial parts share a nonconstant common divisor."""


class NotAnnihilated(ValueError):
    """The product polynomial does not vanish on the operator.

    Attributes:
        residual: norm of the product evaluated at the operator.
        bound: threshold the residual was compared against.
    """

    def __init__(self, msg, residual=None, bound=None):
        super().__init__(msg)
        self.residual = residual
        self.bound = bound


class DuplicateLambdas(ValueError):
    """Interpolation points are not pairwise distinct."""


class QuadratureNotConverged(ArithmeticError):
    """Contour quadrature hit the node cap before the idempotency target.

    Attributes:
        best: the last computed projection candidate.
        residual: its idempotency defect.
    """

    def __init__(self, msg, best=None, residual=None):
        super().__init__(msg)
        self.best = best
        self.residual = residual


class ResolventSingular(ArithmeticError):
    """A quadrature node landed on (or nearly on) the spectrum."""


class NotDpb(ValueError):
    """The element failed the doubly power-bounded decision."""


class LambdaNotInSpectrum(ValueError):
    """The requested point does not belong to the computed spectrum."""


class NotPeriodic(ValueError):
    """a^m is not the identity within tolerance."""


class NotInvertible(ValueError):
    """Element has no inverse in its algebra."""


class IndexOutOfRange(ValueError):
    """Character index outside the dual group."""
