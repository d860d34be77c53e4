"""Inner products in L^2((-1,1); W), Gram matrices and eigenfunction
expansions.

Every integral against the exceptional weight is rewritten as an integral
of (f/d)(g/d) against the classical weight (1-x)^alpha (1+x)^beta, with d
the denominator polynomial.  Gauss-Jacobi then takes care of the endpoint
singularities and the remaining integrand is analytic on [-1, 1].
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import eval_jacobi

from .errors import NonConvergent
from .exceptional import ExceptionalFamily, XParams, family
from .jacobi import JacobiParams, gauss_jacobi_rule
from .polyalg import Polynomial, poly_eval, poly_eval_rounded

DEFAULT_START = 32
DEFAULT_CAP = 2048
CONV_RTOL = 1e-12


def quad_cap() -> int:
    """Quadrature order cap; ``XJACOBI_QUAD_CAP`` overrides the default."""
    raw = os.environ.get("XJACOBI_QUAD_CAP")
    return int(raw) if raw else DEFAULT_CAP


def as_callable(f) -> Callable:
    if isinstance(f, Polynomial):
        return lambda x: poly_eval_rounded(f, x)
    return f


def _rule_values(params: XParams, fam: ExceptionalFamily, N: int):
    a, b = params.as_floats()
    rule = gauss_jacobi_rule(JacobiParams(a, b), N)
    d = poly_eval(fam.denom_float, rule.nodes)
    return rule, rule.weights / d**2


def converged_order(params: XParams, funcs: Sequence[Callable], start: int = DEFAULT_START,
                    cap: int | None = None, fam: ExceptionalFamily | None = None) -> int:
    """Smallest doubling of ``start`` at which every <f_i, f_i> has settled
    to 1e-12 relative.  Entries <f_i, f_j> are bounded by these norms, so
    the same order serves the whole Gram/projection computation.
    """
    fam = fam or family(params)
    cap = cap or quad_cap()

    def norms(N):
        rule, w = _rule_values(params, fam, N)
        return np.array([math.fsum(w * np.abs(np.asarray(f(rule.nodes))) ** 2) for f in funcs])

    N = start
    prev = norms(N)
    while True:
        if 2 * N > cap:
            raise NonConvergent(f"quadrature unconverged at cap N={cap}")
        cur = norms(2 * N)
        if np.all(np.abs(cur - prev) <= CONV_RTOL * np.maximum(np.abs(cur), 1e-300)):
            return 2 * N
        N, prev = 2 * N, cur


def inner_product(params: XParams, f, g, N: int | None = None,
                  fam: ExceptionalFamily | None = None) -> float:
    """<f, g> in L^2((-1,1); W_{alpha,beta,m}) for real-valued f, g.

    If ``N`` is None the order doubles from 32 until the value moves by less
    than 1e-12 relative to the absolute-value integral (cap 2048 or
    ``XJACOBI_QUAD_CAP``).
    """
    fam = fam or family(params)
    f, g = as_callable(f), as_callable(g)

    def at(n):
        rule, w = _rule_values(params, fam, n)
        prod = np.asarray(f(rule.nodes)) * np.asarray(g(rule.nodes))
        return math.fsum(w * prod), math.fsum(w * np.abs(prod))

    if N is not None:
        return at(N)[0]
    cap = quad_cap()
    n = DEFAULT_START
    prev, _ = at(n)
    while True:
        if 2 * n > cap:
            raise NonConvergent(f"inner product unconverged at cap N={cap}")
        cur, scale = at(2 * n)
        if abs(cur - prev) <= CONV_RTOL * max(scale, 1e-300):
            return cur
        n, prev = 2 * n, cur


def norm(params: XParams, f, fam: ExceptionalFamily | None = None) -> float:
    return math.sqrt(max(inner_product(params, f, f, fam=fam), 0.0))


def classical_inner_product(a: float, b: float, f, g, N: int = 64) -> float:
    """<f, g> against (1-x)^a (1+x)^b with a fixed Gauss-Jacobi order."""
    f, g = as_callable(f), as_callable(g)
    rule = gauss_jacobi_rule(JacobiParams(a, b), N)
    return rule.integrate(np.asarray(f(rule.nodes)) * np.asarray(g(rule.nodes)))


@dataclass(frozen=True)
class GramMatrix:
    degrees: tuple[int, ...]
    matrix: np.ndarray

    def normalized(self) -> np.ndarray:
        dg = np.sqrt(np.diag(self.matrix))
        return self.matrix / np.outer(dg, dg)

    def max_offdiag(self) -> float:
        g = np.abs(self.normalized())
        np.fill_diagonal(g, 0.0)
        return float(g.max()) if g.size else 0.0


def _basis_values(params: XParams, fam: ExceptionalFamily, degrees, x) -> np.ndarray:
    return np.array([poly_eval_rounded(fam.exceptional_poly(n), x) for n in degrees])


def gram_matrix(params: XParams, M: int, fam: ExceptionalFamily | None = None) -> GramMatrix:
    """G[n,k] = <P_{m,n}, P_{m,k}> for n, k = m..M."""
    fam = fam or family(params)
    if M < params.m:
        raise ValueError("M must be >= m")
    degrees = tuple(range(params.m, M + 1))
    funcs = [as_callable(fam.exceptional_poly(n)) for n in degrees]
    N = converged_order(params, funcs, fam=fam)
    rule, w = _rule_values(params, fam, N)
    V = _basis_values(params, fam, degrees, rule.nodes)
    K = len(degrees)
    G = np.empty((K, K))
    for i in range(K):
        for j in range(i, K):
            G[i, j] = G[j, i] = math.fsum(w * V[i] * V[j])
    return GramMatrix(degrees, G)


@dataclass
class ExpansionReport:
    degrees: list[int]
    coefficients: list[float]
    residual_norms: list[float]
    f_norm: float
    quad_order: int
    converged: bool = True
    extra: dict = field(default_factory=dict)

    def monotone(self, slack: float = 1e-9) -> bool:
        r = self.residual_norms
        return all(r[i + 1] <= r[i] + slack for i in range(len(r) - 1))

    def strictly_decreasing(self) -> bool:
        r = self.residual_norms
        return all(r[i + 1] < r[i] for i in range(len(r) - 1))

    def to_dict(self) -> dict:
        return {
            "degrees": self.degrees,
            "coefficients": self.coefficients,
            "residual_norms": self.residual_norms,
            "f_norm": self.f_norm,
            "quad_order": self.quad_order,
            "converged": self.converged,
        }


def expand(params: XParams, f, M: int, fam: ExceptionalFamily | None = None,
           dps: int | None = None) -> ExpansionReport:
    """Project ``f`` onto span{P_{m,m}, ..., P_{m,M}}.

    ``residual_norms[i]`` is ||f - sum_{n <= m+i} c_n P_{m,n}||, computed by
    quadrature of the squared difference (not by Parseval).  With ``dps``
    set, everything runs in mpmath at that many digits, which resolves
    residuals far below double precision; ``f`` must then accept mpf input.
    """
    fam = fam or family(params)
    if M < params.m:
        raise ValueError("M must be >= m")
    if dps is not None:
        from .highprec import expand_mp

        return expand_mp(params, f, M, dps, fam)
    f = as_callable(f)
    degrees = list(range(params.m, M + 1))
    funcs = [f] + [as_callable(fam.exceptional_poly(n)) for n in degrees]
    N = converged_order(params, funcs, fam=fam)
    rule, w = _rule_values(params, fam, N)
    fx = np.asarray(f(rule.nodes), dtype=float)
    V = _basis_values(params, fam, degrees, rule.nodes)
    coeffs = []
    residuals = []
    partial = np.zeros_like(fx)
    for row in V:
        c = math.fsum(w * fx * row) / math.fsum(w * row * row)
        coeffs.append(c)
        partial = partial + c * row
        residuals.append(math.sqrt(math.fsum(w * (fx - partial) ** 2)))
    f_norm = math.sqrt(math.fsum(w * fx * fx))
    return ExpansionReport(degrees, coeffs, residuals, f_norm, N)


def bessel_gap(report: ExpansionReport, params: XParams,
               fam: ExceptionalFamily | None = None) -> float:
    """| ||f||^2 - sum c_n^2 ||P_n||^2 - residual^2 | relative to ||f||^2."""
    fam = fam or family(params)
    g = gram_matrix(params, report.degrees[-1], fam).matrix
    energy = math.fsum(c * c * g[i, i] for i, c in enumerate(report.coefficients))
    f2 = report.f_norm**2
    return abs(f2 - energy - report.residual_norms[-1] ** 2) / f2


def density_demo(params: XParams, f, N: int, fam: ExceptionalFamily | None = None,
                 quad_order: int | None = None) -> float:
    """Best L^2(W_{alpha,beta}) error approximating f/d by d*p, deg p <= N.

    The problem is solved as an orthogonal projection of f/d^2 onto
    polynomials in L^2 with weight d^2 (1-x)^alpha (1+x)^beta, using the
    classical Jacobi basis multiplied through: span{d * P_k^{(alpha,beta)}}
    is orthonormalized by a QR factorization of the weighted basis values,
    which avoids monomial normal equations.
    """
    fam = fam or family(params)
    f = as_callable(f)
    a, b = params.as_floats()
    order = quad_order or max(4 * (N + params.m) + 64, 128)
    rule = gauss_jacobi_rule(JacobiParams(a, b), order)
    x = rule.nodes
    sw = np.sqrt(rule.weights)
    d = poly_eval(fam.denom_float, x)
    target = sw * np.asarray(f(x), dtype=float) / d
    # weighted columns d * P_k^{(a,b)}(x); classical basis keeps the columns well separated
    cols = np.array([d * eval_jacobi(k, a, b, x) for k in range(N + 1)]).T
    Q, _ = np.linalg.qr(sw[:, None] * cols)
    resid = target - Q @ (Q.T @ target)
    return float(np.linalg.norm(resid))
