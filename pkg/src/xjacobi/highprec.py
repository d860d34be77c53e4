"""Arbitrary-precision Gauss-Jacobi rules and expansions (mpmath).

Double precision bottoms out around 1e-14 for expansion residuals; this
module lets the residual curve be followed much further down.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .errors import NonConvergent
from .exceptional import ExceptionalFamily, XParams
from .expansion import ExpansionReport
from .jacobi import JacobiParams, gauss_jacobi_rule
from .polyalg import Polynomial


@dataclass(frozen=True)
class MpRule:
    nodes: tuple
    weights: tuple
    dps: int


def _recurrence(a, b, N):
    """Orthonormal recurrence (diagonal, off-diagonal, mu0) in mpmath."""
    diag, off = [], []
    for k in range(N):
        s = 2 * k + a + b
        if k == 0:
            diag.append((b - a) / (a + b + 2))
        else:
            diag.append((b * b - a * a) / (s * (s + 2)))
    for k in range(1, N + 1):
        s = 2 * k + a + b
        if k == 1:
            v = 4 * (a + 1) * (b + 1) / ((a + b + 2) ** 2 * (a + b + 3))
        else:
            v = 4 * k * (k + a) * (k + b) * (k + a + b) / (s**2 * (s + 1) * (s - 1))
        off.append(mpmath.sqrt(v))
    mu0 = (mpmath.mpf(2) ** (a + b + 1) * mpmath.gamma(a + 1) * mpmath.gamma(b + 1)
           / mpmath.gamma(a + b + 2))
    return diag, off, mu0


def _eval_orthonormal(x, diag, off, mu0, N):
    """p_N(x), p_N'(x) and sum_{k<N} p_k(x)^2 for the orthonormal family."""
    p_prev, p = mpmath.mpf(0), 1 / mpmath.sqrt(mu0)
    dp_prev, dp = mpmath.mpf(0), mpmath.mpf(0)
    christoffel = p * p
    for k in range(N):
        bk = off[k - 1] if k else mpmath.mpf(0)
        p_next = ((x - diag[k]) * p - bk * p_prev) / off[k]
        dp_next = (p + (x - diag[k]) * dp - bk * dp_prev) / off[k]
        p_prev, p = p, p_next
        dp_prev, dp = dp, dp_next
        if k < N - 1:
            christoffel += p * p
    return p, dp, christoffel


@lru_cache(maxsize=32)
def mp_gauss_jacobi(a, b, N: int, dps: int) -> MpRule:
    """N-point Gauss-Jacobi rule to ``dps`` digits.

    Float Golub-Welsch nodes seed a Newton iteration on the orthonormal
    polynomial of degree N; weights are reciprocal Christoffel sums.
    """
    seed = gauss_jacobi_rule(JacobiParams(float(a), float(b)), N).nodes
    with mpmath.workdps(dps + 10):
        am = mpmath.mpf(a.numerator) / a.denominator if hasattr(a, "numerator") else mpmath.mpf(a)
        bm = mpmath.mpf(b.numerator) / b.denominator if hasattr(b, "numerator") else mpmath.mpf(b)
        diag, off, mu0 = _recurrence(am, bm, N)
        tol = mpmath.mpf(10) ** (-dps - 2)
        nodes, weights = [], []
        for x0 in seed:
            x = mpmath.mpf(float(x0))
            for _ in range(60):
                p, dp, _ = _eval_orthonormal(x, diag, off, mu0, N)
                step = p / dp
                x -= step
                if abs(step) < tol:
                    break
            else:
                raise NonConvergent(f"Newton refinement of node {x0} stalled")
            _, _, chr_sum = _eval_orthonormal(x, diag, off, mu0, N)
            nodes.append(+x)
            weights.append(1 / chr_sum)
    return MpRule(tuple(nodes), tuple(weights), dps)


def _mp_poly(p: Polynomial):
    cs = [mpmath.mpf(c.numerator) / c.denominator for c in p.coeffs]

    def ev(x):
        acc = mpmath.mpf(0)
        for c in reversed(cs):
            acc = acc * x + c
        return acc
    return ev


def _weighted(params: XParams, fam: ExceptionalFamily, N: int, dps: int):
    rule = mp_gauss_jacobi(params.alpha, params.beta, N, dps)
    d = _mp_poly(fam.denom)
    return rule.nodes, [w / d(x) ** 2 for x, w in zip(rule.nodes, rule.weights)]


def expand_mp(params: XParams, f, M: int, dps: int, fam: ExceptionalFamily,
              start: int = 32, cap: int = 1024) -> ExpansionReport:
    """High-precision counterpart of :func:`xjacobi.expansion.expand`."""
    degrees = list(range(params.m, M + 1))
    with mpmath.workdps(dps):
        basis = [_mp_poly(fam.exceptional_poly(n)) for n in degrees]
        rtol = mpmath.mpf(10) ** (-(dps - 10))

        # the top-degree member is the hardest integrand among the basis
        def norms(N):
            xs, ws = _weighted(params, fam, N, dps)
            return [mpmath.fsum(w * g(x) ** 2 for x, w in zip(xs, ws)) for g in (f, basis[-1])]

        N = start
        prev = norms(N)
        while True:
            if 2 * N > cap:
                raise NonConvergent(f"high-precision quadrature unconverged at N={cap}")
            cur = norms(2 * N)
            N *= 2
            if all(abs(c - p) <= rtol * abs(c) for c, p in zip(cur, prev)):
                break
            prev = cur
        xs, ws = _weighted(params, fam, N, dps)
        fx = [f(x) for x in xs]
        partial = [mpmath.mpf(0)] * len(xs)
        coeffs, residuals = [], []
        for b in basis:
            bx = [b(x) for x in xs]
            c = (mpmath.fsum(w * u * v for w, u, v in zip(ws, fx, bx))
                 / mpmath.fsum(w * v * v for w, v in zip(ws, bx)))
            coeffs.append(c)
            partial = [s + c * v for s, v in zip(partial, bx)]
            residuals.append(mpmath.sqrt(mpmath.fsum(
                w * (u - s) ** 2 for w, u, s in zip(ws, fx, partial))))
        f_norm = mpmath.sqrt(mpmath.fsum(w * u * u for w, u in zip(ws, fx)))
        report = ExpansionReport(degrees, [float(c) for c in coeffs],
                                 [float(r) for r in residuals], float(f_norm), N)
        report.extra["residual_norms_mp"] = [mpmath.nstr(r, 20) for r in residuals]
        report.extra["dps"] = dps
    return report
