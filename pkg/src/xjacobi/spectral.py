"""Endpoint analysis: indicial roots, limit-point/limit-circle verdicts,
deficiency indices, boundary conditions, and the degree-gap certificate.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptional import ExceptionalFamily, XParams, family
from .jacobi import JacobiParams, gauss_jacobi_rule
from .operator import (OperatorCoefficients, _to_sympy_matrix, apply_T_polynomial,
                       f_space_basis)
from .polyalg import Polynomial, poly_eval

ENDPOINTS = (-1, 1)


class EndpointClass(str, enum.Enum):
    LIMIT_POINT = "LP"
    LIMIT_CIRCLE = "LC"


@dataclass(frozen=True)
class IndicialData:
    endpoint: int
    roots: tuple
    weight_exponent: Fraction

    @property
    def asymptotic_exponents(self) -> tuple:
        # solutions ~ (1 -+ x)^r
        return self.roots


@dataclass(frozen=True)
class DeficiencyIndex:
    n_plus: int
    n_minus: int

    def as_tuple(self) -> tuple[int, int]:
        return (self.n_plus, self.n_minus)


@dataclass(frozen=True)
class BoundaryCase:
    case_id: str
    endpoints: tuple[int, ...]

    @property
    def functionals(self) -> list[str]:
        out = []
        if -1 in self.endpoints:
            out.append("lim_{x->-1+} (1+x)^(beta+1) f'(x) = 0")
        if 1 in self.endpoints:
            out.append("lim_{x->1-} (1-x)^(alpha+1) f'(x) = 0")
        return out

    @property
    def domain(self) -> str:
        if not self.endpoints:
            return "maximal domain (no boundary conditions)"
        return "{f in maximal domain : " + "; ".join(self.functionals) + "}"


def indicial_roots(params: XParams, endpoint: int, lam=0,
                   fam: ExceptionalFamily | None = None) -> IndicialData:
    """Roots of the indicial equation of T[y] - lam*y = 0 at ``endpoint``.

    With 1 - x^2 = -(x - e)(x + e), the normalized coefficients are
    p(e) = -P1(e)/(2e) and q(e) = 0, where P1 is the full y' coefficient;
    the equation is r(r-1) + p(e) r + q(e) = 0.
    """
    if endpoint not in ENDPOINTS:
        raise ValueError("endpoint must be -1 or +1")
    fam = fam or family(params)
    co = OperatorCoefficients.of(params, fam)
    e = Fraction(endpoint)
    p_e = -co.y1_coefficient(e) / (2 * e)
    # (P0(x) - lam) (x-e)^2 / (1-x^2) vanishes at x = e: P0 is finite there
    q_e = Fraction(0)
    b = p_e - 1
    disc = b * b - 4 * q_e
    sq = _rational_sqrt(disc)
    if sq is not None:
        roots = tuple(sorted(((-b + sq) / 2, (-b - sq) / 2), reverse=True))
    else:
        s = math.sqrt(float(disc))
        roots = tuple(sorted(((-float(b) + s) / 2, (-float(b) - s) / 2), reverse=True))
    w = params.alpha if endpoint == 1 else params.beta
    return IndicialData(endpoint, roots, w)


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def sq_integrable_exponent(r, weight_exponent) -> bool:
    """Is |t^r|^2 t^w integrable at t = 0+?  True iff 2r + w > -1."""
    return 2 * r + weight_exponent > -1


def classify_endpoint(params: XParams, endpoint: int,
                      fam: ExceptionalFamily | None = None) -> EndpointClass:
    """Limit-circle iff every Frobenius solution is square integrable there."""
    data = indicial_roots(params, endpoint, fam=fam)
    if all(sq_integrable_exponent(r, data.weight_exponent) for r in data.roots):
        return EndpointClass.LIMIT_CIRCLE
    return EndpointClass.LIMIT_POINT


def limit_circle_endpoints(params: XParams, fam: ExceptionalFamily | None = None) -> tuple[int, ...]:
    return tuple(e for e in ENDPOINTS
                 if classify_endpoint(params, e, fam) is EndpointClass.LIMIT_CIRCLE)


def deficiency_index(params: XParams, fam: ExceptionalFamily | None = None) -> DeficiencyIndex:
    k = len(limit_circle_endpoints(params, fam))
    return DeficiencyIndex(k, k)


_CASE_IDS = {
    (): "both-LP",
    (-1,): "LC-at-minus1",
    (1,): "LC-at-plus1",
    (-1, 1): "LC-both",
}


def boundary_case(params: XParams, fam: ExceptionalFamily | None = None) -> BoundaryCase:
    """Which endpoint functionals a self-adjoint domain must annihilate.

    A condition is imposed exactly at the limit-circle endpoints.
    """
    lc = limit_circle_endpoints(params, fam)
    return BoundaryCase(_CASE_IDS[lc], lc)


def tail_integrals(params: XParams, endpoint: int, exponent, kmin: int = 4,
                   kmax: int = 20, order: int = 24,
                   fam: ExceptionalFamily | None = None) -> np.ndarray:
    """Integrals of |1 -+ x|^(2*exponent) * W over dyadic shells
    [1 - 2^-k, 1 - 2^-(k+1)] (mirrored at -1), k = kmin..kmax.

    Each shell is integrated by Gauss-Legendre in the local variable
    t = 1 -+ x; the singular factor is smooth on each shell.
    """
    fam = fam or family(params)
    a, b = params.as_floats()
    w_exp = a if endpoint == 1 else b
    other = b if endpoint == 1 else a
    rule = gauss_jacobi_rule(JacobiParams(0, 0), order)
    out = []
    for k in range(kmin, kmax + 1):
        lo, hi = 2.0 ** -(k + 1), 2.0 ** -k
        t = 0.5 * (hi - lo) * rule.nodes + 0.5 * (hi + lo)
        x = endpoint * (1 - t)
        d = poly_eval(fam.denom_float, x)
        vals = t ** (2 * float(exponent) + w_exp) * (2 - t) ** other / d**2
        out.append(0.5 * (hi - lo) * rule.integrate(vals))
    return np.array(out)


def tail_integrability(params: XParams, endpoint: int, exponent,
                       fam: ExceptionalFamily | None = None) -> tuple[bool, float]:
    """Numerical verdict on square integrability of (1 -+ x)^exponent near
    ``endpoint``.  Returns (converges, fitted shell decay rate).

    Shell integrals behave like 2^(-k*s); the tail converges iff s > 0.
    """
    shells = tail_integrals(params, endpoint, exponent, fam=fam)
    ks = np.arange(len(shells))
    s = -np.polyfit(ks[-8:], np.log2(shells[-8:]), 1)[0]
    return bool(s > 1e-3), float(s)


def gap_certificate(params: XParams, d: int, fam: ExceptionalFamily | None = None) -> bool:
    """True iff no nonzero polynomial y with deg y <= d satisfies both the
    root conditions and T[y] = lam*y for some scalar lam.

    The root-condition subspace is computed exactly; candidate lam are the
    eigenvalues of T restricted to it, and each is confirmed by an exact
    nullspace computation.
    """
    import sympy

    fam = fam or family(params)
    basis = f_space_basis(params, d, fam)
    if not basis:
        return True
    images = [apply_T_polynomial(params, q, fam) for q in basis]
    Bm = _to_sympy_matrix([[q.coeff(i) for q in basis] for i in range(d + 1)])
    TB = _to_sympy_matrix([[t.coeff(i) for t in images] for i in range(d + 1)])
    # restricted map M with B M = T B (least-squares solve, exact)
    M = (Bm.T * Bm).inv() * Bm.T * TB
    lam = sympy.Symbol("lam")
    for ev in set(sympy.Poly(M.charpoly(lam).as_expr(), lam).all_roots()):
        if (TB - ev * Bm).nullspace(simplify=True):
            return False
    return True
