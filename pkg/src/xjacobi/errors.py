"""Exception hierarchy for the package."""


class XJacobiError(Exception):
    """Base class for all package errors."""


class ModeMismatch(XJacobiError, TypeError):
    """Exact and float polynomials were combined."""


class ParameterError(XJacobiError, ValueError):
    """A parameter triple (alpha, beta, m) was rejected.

    ``clause`` names the violated condition.
    """

    clause = "parameters"


class RangeViolation(ParameterError):
    clause = "range"


class ForbiddenDifference(ParameterError):
    clause = "forbidden-difference"


class SignMismatch(ParameterError):
    clause = "sign"


class SingularWeight(ParameterError):
    """The denominator polynomial vanishes on [-1, 1] or has repeated roots."""

    clause = "denominator-roots"


class DegenerateDegree(XJacobiError):
    """A constructed polynomial came out with lower degree than required."""


class DomainError(XJacobiError, ValueError):
    """Evaluation point outside the open interval (-1, 1)."""


class NotInvariant(XJacobiError):
    """The operator does not map the given polynomial to a polynomial."""


class NonConvergent(XJacobiError):
    """A limit estimate or quadrature refinement failed to stabilize."""
