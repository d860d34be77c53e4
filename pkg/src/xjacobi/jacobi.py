"""Classical Jacobi polynomials for arbitrary real parameters and
Gauss-Jacobi quadrature for the classical range a, b > -1.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .polyalg import EXACT, FLOAT, Polynomial, poly_derivative, poly_eval, to_scalar


class DegreeDropWarning(UserWarning):
    """Leading coefficient of P_n^{(a,b)} vanished for these parameters."""


@dataclass(frozen=True)
class JacobiParams:
    a: object
    b: object

    def classical(self) -> bool:
        return self.a > -1 and self.b > -1


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    params: JacobiParams
    order: int

    def integrate(self, values) -> float:
        # fixed ascending-node accumulation order
        return float(math.fsum(np.asarray(values, dtype=float) * self.weights))


def gen_binomial(z, j: int):
    """Generalized binomial coefficient C(z, j) for real or rational ``z``."""
    out = Fraction(1) if isinstance(z, (int, Fraction)) else 1.0
    for i in range(1, j + 1):
        out = out * (z - i + 1) / i
    return out


def _coerce(p: JacobiParams, mode: str) -> tuple:
    return to_scalar(p.a, mode), to_scalar(p.b, mode)


def jacobi_poly(n: int, p: JacobiParams, mode: str = EXACT) -> Polynomial:
    """P_n^{(a,b)} from the finite binomial sum

        2^{-n} sum_k C(n+a, n-k) C(n+b, k) (x-1)^k (x+1)^{n-k},

    which has no poles in (a, b).  A negative ``n`` gives the zero
    polynomial.  Emits :class:`DegreeDropWarning` when the leading
    coefficient vanishes.
    """
    if n < 0:
        return Polynomial.zero(mode)
    a, b = _coerce(p, mode)
    xm1 = Polynomial((-1, 1), mode)
    xp1 = Polynomial((1, 1), mode)
    minus_pows = [Polynomial.constant(1, mode)]
    plus_pows = [Polynomial.constant(1, mode)]
    for _ in range(n):
        minus_pows.append(minus_pows[-1] * xm1)
        plus_pows.append(plus_pows[-1] * xp1)
    total = Polynomial.zero(mode)
    for k in range(n + 1):
        c = gen_binomial(n + a, n - k) * gen_binomial(n + b, k)
        if c == 0:
            continue
        total = total + (minus_pows[k] * plus_pows[n - k]).scale(c)
    total = total.scale(to_scalar(Fraction(1, 2**n), mode))
    if total.degree < n:
        warnings.warn(
            f"P_{n}^({p.a},{p.b}) has degree {total.degree} < {n}",
            DegreeDropWarning, stacklevel=2,
        )
    return total


def jacobi_eval(n: int, p: JacobiParams, x, mode: str | None = None):
    if mode is None:
        exact = isinstance(x, (int, Fraction)) and all(
            isinstance(v, (int, Fraction)) for v in (p.a, p.b))
        mode = EXACT if exact else FLOAT
    return poly_eval(jacobi_poly(n, p, mode), x)


def jacobi_value_at_one(n: int, a):
    """P_n^{(a,b)}(1) = C(n+a, n), independent of b."""
    return gen_binomial(n + a, n)


def jacobi_recurrence_poly(n: int, p: JacobiParams, mode: str = FLOAT) -> Polynomial:
    """P_n^{(a,b)} by the three-term recurrence; classical parameters only.

    Used as an independent cross-check of :func:`jacobi_poly`.
    """
    if not p.classical():
        raise ValueError("recurrence requires a, b > -1")
    a, b = _coerce(p, mode)
    x = Polynomial.x(mode)
    prev = Polynomial.constant(1, mode)
    if n == 0:
        return prev
    cur = Polynomial(((a - b) / 2, (a + b + 2) / 2), mode)
    for k in range(2, n + 1):
        s = 2 * k + a + b
        c1 = 2 * k * (k + a + b) * (s - 2)
        c2 = (s - 1) * (a * a - b * b)
        c3 = (s - 1) * s * (s - 2)
        c4 = 2 * (k + a - 1) * (k + b - 1) * s
        nxt = cur.scale(c2) + (x * cur).scale(c3) - prev.scale(c4)
        prev, cur = cur, nxt.scale(1 / c1)
    return cur


def jacobi_derivative_identity_check(n: int, p: JacobiParams) -> float:
    """Max coefficient gap in d/dx P_n^{(a,b)} = (n+a+b+1)/2 P_{n-1}^{(a+1,b+1)}.

    Computed in exact mode; the parameters are converted to rationals.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    a, b = Fraction(p.a), Fraction(p.b)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegreeDropWarning)
        lhs = poly_derivative(jacobi_poly(n, JacobiParams(a, b), EXACT))
        rhs = jacobi_poly(n - 1, JacobiParams(a + 1, b + 1), EXACT).scale((n + a + b + 1) / 2)
    diff = lhs - rhs
    return float(max((abs(c) for c in diff.coeffs), default=0))


def zeroth_moment(a: float, b: float) -> float:
    """Integral of (1-x)^a (1+x)^b over (-1, 1)."""
    return math.exp((a + b + 1) * math.log(2.0) + math.lgamma(a + 1)
                    + math.lgamma(b + 1) - math.lgamma(a + b + 2))


def recurrence_coefficients(a: float, b: float, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the monic Jacobi matrix (size N)."""
    n = np.arange(N, dtype=float)
    diag = np.empty(N)
    diag[0] = (b - a) / (a + b + 2)
    s = 2 * n[1:] + a + b
    diag[1:] = (b * b - a * a) / (s * (s + 2))
    off2 = np.empty(max(N - 1, 0))
    if N > 1:
        off2[0] = 4 * (a + 1) * (b + 1) / ((a + b + 2) ** 2 * (a + b + 3))
        k = n[2:]
        s = 2 * k + a + b
        off2[1:] = 4 * k * (k + a) * (k + b) * (k + a + b) / (s**2 * (s + 1) * (s - 1))
    return diag, np.sqrt(off2)


@lru_cache(maxsize=256)
def _rule(a: float, b: float, N: int) -> tuple[np.ndarray, np.ndarray]:
    diag, off = recurrence_coefficients(a, b, N)
    nodes, vecs = eigh_tridiagonal(diag, off)
    weights = zeroth_moment(a, b) * vecs[0, :] ** 2
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_jacobi_rule(p: JacobiParams, N: int) -> QuadratureRule:
    """N-point Gauss-Jacobi rule (Golub-Welsch) for (1-x)^a (1+x)^b."""
    if N < 1:
        raise ValueError("N must be >= 1")
    a, b = float(p.a), float(p.b)
    if not (a > -1 and b > -1):
        raise ValueError(f"quadrature needs a, b > -1, got ({a}, {b})")
    nodes, weights = _rule(a, b, int(N))
    return QuadratureRule(nodes, weights, JacobiParams(p.a, p.b), int(N))
