"""Exception hierarchy.

Domain errors (mathematical infeasibility) derive from :class:`DomainError`;
malformed input files raise :class:`SchemaError`.  The CLI maps the first
family to exit status 2 and the second to exit status 3.
"""


class BCWError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BCWError, ValueError):
    """The requested operation is mathematically impossible for the input."""


class SchemaError(BCWError, ValueError):
    """An input document does not match the expected JSON/CSV layout."""


class ShapeMismatch(DomainError):
    pass


class OddDimension(DomainError):
    pass


class ZeroDivisor(DomainError, ZeroDivisionError):
    """A bicomplex number (or matrix channel) is not invertible."""


class NotSharpSymmetric(DomainError):
    pass


class SingularY(DomainError):
    pass


class NotInvertibleOnBoundary(DomainError):
    """A channel value is singular at some point of the sampling grid."""

    def __init__(self, channel: int, theta: float, sigma_min: float):
        self.channel = channel
        self.theta = theta
        self.sigma_min = sigma_min
        super().__init__(
            f"channel {channel} is singular at theta={theta!r} "
            f"(smallest singular value {sigma_min:.3e})"
        )


class NotPositive(DomainError):
    """A channel value fails to be Hermitian positive definite."""

    def __init__(self, channel: int, theta: float, detail: str = ""):
        self.channel = channel
        self.theta = theta
        msg = f"channel {channel} is not positive definite at theta={theta!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class NoConvergence(DomainError):
    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"no convergence after {iterations} iterations (residual {residual:.3e})"
        )


class NotRelated(DomainError):
    pass


class SingularResolvent(DomainError):
    pass


class EigenvalueOnCircle(DomainError):
    pass


class UnstableA(DomainError):
    pass


class SingularA(DomainError):
    pass


class SingularD(DomainError):
    pass


class NotStable(DomainError):
    pass


class DuplicatePole(DomainError):
    pass


class NormalizationUnavailable(DomainError):
    """The ``f_+(1) = I`` normalization needs ``f(1) = I``."""
