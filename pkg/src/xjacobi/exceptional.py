"""Parameters, denominator, weight, exceptional polynomials and eigenvalues."""
from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (DegenerateDegree, DomainError, ForbiddenDifference,
                     RangeViolation, SignMismatch, SingularWeight)
from .jacobi import DegreeDropWarning, JacobiParams, jacobi_poly
from .polyalg import EXACT, FLOAT, Polynomial, poly_derivative, poly_eval, poly_roots

def as_rational(value) -> Fraction:
    """Parse a parameter exactly.

    Floats are read through their shortest decimal repr, so ``-0.25`` becomes
    ``Fraction(-1, 4)`` and ``0.1`` becomes ``Fraction(1, 10)``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite parameter {value!r}")
        return Fraction(repr(value))
    return Fraction(value)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


@dataclass(frozen=True)
class XParams:
    """The triple (alpha, beta, m).  Build through :func:`validate_params`.

    Direct construction skips validation; that is only meant for probing
    parameter sets the conditions exclude.
    """

    alpha: Fraction
    beta: Fraction
    m: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_rational(self.alpha))
        object.__setattr__(self, "beta", as_rational(self.beta))
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))

    @property
    def denom_params(self) -> JacobiParams:
        return JacobiParams(-self.alpha - 1, self.beta - 1)

    def as_floats(self) -> tuple[float, float]:
        return float(self.alpha), float(self.beta)


def parameter_clauses(alpha, beta, m: int) -> dict[str, bool]:
    """Truth value of each admissibility clause, keyed by clause name."""
    a, b = as_rational(alpha), as_rational(beta)
    diff = a + 1 - m - b
    sa, sb = _sign(a + 1 - m), _sign(b)
    return {
        "range": a > -1 and b > -1,
        "forbidden-difference": not (diff.denominator == 1 and 0 <= diff <= m - 1),
        # sign zero is rejected outright
        "sign": sa != 0 and sb != 0 and sa == sb,
    }


def validate_params(alpha, beta, m: int, check_denominator: bool = True) -> XParams:
    """Return validated :class:`XParams` or raise the first violated clause.

    Beyond the three admissibility clauses, the denominator is checked for
    roots on [-1, 1] (:class:`SingularWeight`); the clauses alone do not
    exclude them when beta < 0 and m >= 2.

    >>> validate_params(2, 1, 1)
    XParams(alpha=Fraction(2, 1), beta=Fraction(1, 1), m=1)
    """
    if int(m) != m or m < 1:
        raise RangeViolation(f"m must be a positive integer, got {m!r}")
    clauses = parameter_clauses(alpha, beta, int(m))
    a, b = as_rational(alpha), as_rational(beta)
    if not clauses["range"]:
        raise RangeViolation(f"need alpha, beta > -1; got alpha={a}, beta={b}")
    if not clauses["forbidden-difference"]:
        raise ForbiddenDifference(
            f"alpha+1-m-beta = {a + 1 - m - b} lies in {{0, ..., {m - 1}}}")
    if not clauses["sign"]:
        raise SignMismatch(
            f"sgn(alpha+1-m) = {_sign(a + 1 - m)} but sgn(beta) = {_sign(b)}")
    params = XParams(a, b, int(m))
    if check_denominator:
        family(params)
    return params


def denominator_poly(params: XParams, mode: str = EXACT) -> Polynomial:
    """P_m^{(-alpha-1, beta-1)}."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegreeDropWarning)
        return jacobi_poly(params.m, params.denom_params, mode)


class ExceptionalFamily:
    """Denominator, its roots, and a cache of exceptional polynomials.

    With ``check=True`` (default) the denominator must have degree m and
    simple roots, none on [-1, 1].
    """

    def __init__(self, params: XParams, check: bool = True):
        self.params = params
        self.denom = denominator_poly(params)
        self.denom_deriv = poly_derivative(self.denom)
        self.denom_float = self.denom.to_float()
        self.denom_roots = poly_roots(self.denom)
        self.check = check
        self._cache: dict[int, Polynomial] = {}
        self._lock = threading.Lock()
        if check:
            self._check_denominator()

    def _check_denominator(self) -> None:
        # exact: Sturm counting on [-1, 1] and gcd(d, d') for repeated roots
        import sympy

        m = self.params.m
        if self.denom.degree != m:
            raise DegenerateDegree(
                f"denominator has degree {self.denom.degree}, expected {m}")
        x = sympy.Symbol("x")
        d = sympy.Poly([sympy.Rational(c.numerator, c.denominator)
                        for c in reversed(self.denom.coeffs)], x)
        if d.count_roots(-1, 1):
            r = self.denom_roots
            near = r[np.abs(r.real) <= 1 + 1e-6]
            raise SingularWeight(f"denominator root(s) in [-1,1]: {near}")
        if sympy.gcd(d, d.diff(x)).degree() > 0:
            raise SingularWeight("denominator has a repeated root")

    @property
    def m(self) -> int:
        return self.params.m

    def exceptional_poly(self, n: int) -> Polynomial:
        """P_{m,n}^{(alpha,beta)} for n >= m, exact rational coefficients."""
        m = self.params.m
        if n < m:
            raise ValueError(f"exceptional polynomials start at degree m={m}; got n={n}")
        with self._lock:
            hit = self._cache.get(n)
        if hit is not None:
            return hit
        p = _exceptional_poly(self.params, n)
        if p.degree != n:
            msg = f"P_{{{m},{n}}} has degree {p.degree}"
            if self.check:
                raise DegenerateDegree(msg)
            warnings.warn(msg, DegreeDropWarning, stacklevel=2)
        with self._lock:
            self._cache.setdefault(n, p)
        return p

    def eigenvalue(self, n: int) -> Fraction:
        return eigenvalue(self.params, n)

    def weight(self, x):
        return weight(self.params, x, self)

    def min_abs_denominator(self, npts: int = 10_001) -> float:
        grid = np.linspace(-1.0, 1.0, npts)
        return float(np.min(np.abs(poly_eval(self.denom_float, grid))))


def _exceptional_poly(params: XParams, n: int) -> Polynomial:
    a, b, m = params.alpha, params.beta, params.m
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegreeDropWarning)
        first = (Polynomial((-1, 1)) * jacobi_poly(m, JacobiParams(-a - 1, b - 1))
                 * jacobi_poly(n - m - 1, JacobiParams(a + 2, b)))
        second = (jacobi_poly(m, JacobiParams(-a - 2, b))
                  * jacobi_poly(n - m, JacobiParams(a + 1, b - 1)))
    bracket = first.scale((a + b + n - m + 1) / 2) + second.scale(a - m + 1)
    return bracket.scale(Fraction((-1) ** m) / (a + 1 + n - m))


@lru_cache(maxsize=64)
def family(params: XParams) -> ExceptionalFamily:
    """Shared, validated family for ``params``."""
    return ExceptionalFamily(params)


def exceptional_poly(params: XParams, n: int) -> Polynomial:
    return family(params).exceptional_poly(n)


def eigenvalue(params: XParams, n: int) -> Fraction:
    """lambda_n = -(n-m)(1+alpha+beta+n-m)."""
    if n < params.m:
        raise ValueError(f"n={n} below m={params.m}")
    k = n - params.m
    return -k * (1 + params.alpha + params.beta + k)


def weight(params: XParams, x, fam: ExceptionalFamily | None = None):
    """(1-x)^alpha (1+x)^beta / denom(x)^2 on the open interval."""
    x_arr = np.asarray(x, dtype=float)
    if np.any((x_arr <= -1) | (x_arr >= 1)):
        raise DomainError("weight is defined on (-1, 1) only")
    fam = fam or family(params)
    a, b = params.as_floats()
    d = poly_eval(fam.denom_float, x_arr)
    out = (1 - x_arr) ** a * (1 + x_arr) ** b / d**2
    return float(out) if out.ndim == 0 else out
