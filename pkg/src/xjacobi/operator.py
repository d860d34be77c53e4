"""The exceptional differential expression, its boundary form and the
polynomial subspace it leaves invariant.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import NonConvergent, NotInvariant
from .exceptional import ExceptionalFamily, XParams, family
from .jacobi import JacobiParams, gauss_jacobi_rule
from .polyalg import EXACT, Polynomial, poly_derivative, poly_divrem, poly_eval

# (value, first derivative, second derivative)
Bundle = tuple[Callable, Callable, Callable]


@dataclass(frozen=True)
class OperatorCoefficients:
    """Pieces of T:  A y'' + B y' + c y - 2(1-x) (d'/d) [(1+x) y' + beta y].

    Written out, the last term contributes ``-2(1-x^2) d'/d`` to the y'
    coefficient and ``-2 beta (1-x) d'/d`` to the y coefficient.
    """

    A: Polynomial
    B: Polynomial
    c: Fraction
    denom: Polynomial
    denom_deriv: Polynomial
    beta: Fraction

    @classmethod
    def of(cls, params: XParams, fam: ExceptionalFamily | None = None):
        fam = fam or family(params)
        a, b, m = params.alpha, params.beta, params.m
        return cls(
            A=Polynomial((1, 0, -1)),
            B=Polynomial((b - a, -(a + b + 2))),
            c=m * (a - b - m + 1),
            denom=fam.denom,
            denom_deriv=fam.denom_deriv,
            beta=b,
        )

    def y1_coefficient(self, x):
        """Coefficient of y' exactly as displayed in the expression."""
        logd = poly_eval(self.denom_deriv, x) / poly_eval(self.denom, x)
        return poly_eval(self.B, x) - 2 * (1 - x * x) * logd

    def y0_coefficient(self, x):
        logd = poly_eval(self.denom_deriv, x) / poly_eval(self.denom, x)
        return self.c - 2 * self.beta * (1 - x) * logd


@dataclass(frozen=True)
class BoundaryVerdict:
    endpoint: int
    functional_value: float
    required_zero: bool

    @property
    def vanishes(self) -> bool:
        return abs(self.functional_value) < 1e-8


def _fam(params, fam):
    return fam if fam is not None else family(params)


def apply_T_pointwise(params: XParams, f, df, d2f, x, fam: ExceptionalFamily | None = None):
    """T[f](x) from callables for f, f', f''.  Works elementwise on arrays."""
    coeffs = OperatorCoefficients.of(params, _fam(params, fam))
    b, c = float(coeffs.beta), float(coeffs.c)
    d = poly_eval(coeffs.denom, x)
    dd = poly_eval(coeffs.denom_deriv, x)
    logd = dd / d
    bx = poly_eval(coeffs.B, x)
    return ((1 - x * x) * d2f(x)
            + (bx - 2 * (1 - x * x) * logd) * df(x)
            + (c - 2 * b * (1 - x) * logd) * f(x))


def exceptional_term_numerator(params: XParams, y: Polynomial) -> Polynomial:
    """(1+x) y' + beta y, the bracket multiplying the log-derivative."""
    return Polynomial((1, 1)) * poly_derivative(y) + y.scale(params.beta)


def apply_T_polynomial(params: XParams, y: Polynomial,
                       fam: ExceptionalFamily | None = None) -> Polynomial:
    """T[y] as an exact polynomial.

    Raises :class:`NotInvariant` when the denominator does not divide the
    exceptional term, i.e. T[y] is not a polynomial.
    """
    fam = _fam(params, fam)
    if y.mode != EXACT:
        y = y.to_exact()
    co = OperatorCoefficients.of(params, fam)
    dy = poly_derivative(y)
    regular = co.A * poly_derivative(dy) + co.B * dy + y.scale(co.c)
    bracket = exceptional_term_numerator(params, y)
    quot, rem = poly_divrem(co.denom_deriv * bracket, co.denom)
    if not rem.is_zero():
        raise NotInvariant("denominator does not divide the exceptional term")
    return regular - Polynomial((1, -1)) * quot.scale(2)


def f_space_remainder(params: XParams, q: Polynomial,
                      fam: ExceptionalFamily | None = None) -> Polynomial:
    """Remainder of (1+x) q' + beta q modulo the denominator.

    With simple roots x_i, it vanishes iff (1+x_i) q'(x_i) + beta q(x_i) = 0
    at every root.
    """
    fam = _fam(params, fam)
    return poly_divrem(exceptional_term_numerator(params, q.to_exact()), fam.denom)[1]


def root_condition_residuals(params: XParams, q: Polynomial,
                             fam: ExceptionalFamily | None = None) -> np.ndarray:
    """|(1+x_i) q'(x_i) + beta q(x_i)| at the numerical denominator roots,
    scaled by max(1, sup of |q| on the roots)."""
    fam = _fam(params, fam)
    roots = fam.denom_roots
    qf = q.to_float()
    vals = (1 + roots) * poly_eval(poly_derivative(qf), roots) + float(params.beta) * poly_eval(qf, roots)
    scale = max(1.0, float(np.max(np.abs(poly_eval(qf, roots)), initial=0.0)),
                float(np.max(np.abs(poly_eval(poly_derivative(qf), roots)), initial=0.0)))
    return np.abs(vals) / scale


def in_F_space(params: XParams, q: Polynomial, fam: ExceptionalFamily | None = None,
               exact: bool = True, tol: float = 1e-10) -> bool:
    if exact:
        return f_space_remainder(params, q, fam).is_zero()
    return bool(np.all(root_condition_residuals(params, q, fam) < tol))


def sesquilinear_form(params: XParams, f, df, g, dg, x, fam: ExceptionalFamily | None = None):
    """[f,g](x) = (1-x)^(a+1) (1+x)^(b+1) / d(x)^2 * (f' conj(g) - f conj(g'))."""
    fam = _fam(params, fam)
    a, b = params.as_floats()
    d = poly_eval(fam.denom_float, x)
    p = (1 - x) ** (a + 1) * (1 + x) ** (b + 1) / d**2
    return p * (df(x) * np.conj(g(x)) - f(x) * np.conj(dg(x)))


def endpoint_limit(func: Callable[[float], float], endpoint: int,
                   k_range: tuple[int, int] = (10, 40), rtol: float = 1e-8,
                   atol: float = 1e-12) -> float:
    """Limit of ``func`` as x -> endpoint along x = endpoint*(1 - 2^-k).

    The last three estimates, or failing that their Aitken extrapolants,
    must agree to ``rtol``; otherwise :class:`NonConvergent` is raised.
    """
    if endpoint not in (-1, 1):
        raise ValueError("endpoint must be -1 or +1")
    ks = range(k_range[0], k_range[1] + 1)
    vals = np.array([func(endpoint * (1.0 - 2.0**-k)) for k in ks], dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise NonConvergent("non-finite values on the approach sequence")
    last = vals[-3:]
    scale = max(float(np.max(np.abs(last))), atol)
    spread = float(np.max(np.abs(last - last[-1])))
    if spread <= rtol * scale or spread <= atol:
        v = last[-1]
    else:
        steps = np.abs(np.diff(vals[-4:]))
        if not np.all(steps[1:] < steps[:-1]):
            raise NonConvergent(f"estimates do not contract near x={endpoint}")
        # Aitken delta-squared: exact for L + c*r^k, whatever the rate r
        d2 = vals[2:] - 2 * vals[1:-1] + vals[:-2]
        safe = np.abs(d2) > 1e-300
        acc = np.where(safe, vals[2:] - (vals[2:] - vals[1:-1]) ** 2 / np.where(safe, d2, 1),
                       vals[2:])
        tail = acc[-3:]
        spread = float(np.max(np.abs(tail - tail[-1])))
        if spread > max(rtol * max(float(np.max(np.abs(tail))), atol), atol):
            raise NonConvergent(f"estimates do not stabilize near x={endpoint}")
        v = tail[-1]
    return float(v.real) if abs(v.imag) <= atol else v


def boundary_functional(params: XParams, df: Callable, endpoint: int) -> BoundaryVerdict:
    """lim (1-x)^(a+1) f'(x) at +1, or lim (1+x)^(b+1) f'(x) at -1."""
    from .spectral import boundary_case

    a, b = params.as_floats()
    if endpoint == 1:
        func = lambda x: (1 - x) ** (a + 1) * df(x)  # noqa: E731
    elif endpoint == -1:
        func = lambda x: (1 + x) ** (b + 1) * df(x)  # noqa: E731
    else:
        raise ValueError("endpoint must be -1 or +1")
    value = endpoint_limit(func, endpoint)
    required = endpoint in boundary_case(params).endpoints
    return BoundaryVerdict(endpoint, value, required)


def polynomial_bundle(p: Polynomial) -> Bundle:
    pf = p.to_float()
    d1 = poly_derivative(pf)
    d2 = poly_derivative(d1)
    return (lambda x: poly_eval(pf, x), lambda x: poly_eval(d1, x), lambda x: poly_eval(d2, x))


def _greens_sides(params, fam, f: Bundle, g: Bundle, N: int) -> tuple[float, float]:
    a, b = params.as_floats()
    rule = gauss_jacobi_rule(JacobiParams(a, b), N)
    x = rule.nodes
    d2 = poly_eval(fam.denom_float, x) ** 2
    gbar = np.conj(g[0](x))
    lhs = rule.integrate((apply_T_pointwise(params, *f, x, fam=fam) * gbar / d2).real)
    tg = np.conj(apply_T_pointwise(params, g[0], g[1], g[2], x, fam=fam))
    rhs_int = rule.integrate((f[0](x) * tg / d2).real)
    return lhs, rhs_int


def greens_residual(params: XParams, f: Bundle, g: Bundle, N: int = 40,
                    cap: int = 2048, fam: ExceptionalFamily | None = None) -> float:
    """|int T[f] conj(g) W - [f,g]|_{-1}^{1} - int f T[conj g] W|.

    Both integrals use Gauss-Jacobi with weight (1-x)^a (1+x)^b, which
    absorbs the endpoint behaviour; the order doubles until successive
    values agree to 1e-12 relative.
    """
    fam = _fam(params, fam)
    if N < 10:
        raise ValueError("N must be >= 10")
    prev = _greens_sides(params, fam, f, g, N)
    while True:
        N2 = 2 * N
        if N2 > cap:
            raise NonConvergent(f"Green's formula integrals unconverged at N={N}")
        cur = _greens_sides(params, fam, f, g, N2)
        scale = max(1.0, abs(cur[0]), abs(cur[1]))
        if max(abs(cur[0] - prev[0]), abs(cur[1] - prev[1])) <= 1e-12 * scale:
            break
        N, prev = N2, cur
    form = lambda x: sesquilinear_form(params, f[0], f[1], g[0], g[1], x, fam)  # noqa: E731
    boundary = endpoint_limit(form, 1) - endpoint_limit(form, -1)
    return float(abs(cur[0] - boundary - cur[1]))


def _to_sympy_matrix(rows):
    import sympy

    return sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in rows])


def root_condition_matrix(params: XParams, degree: int, fam: ExceptionalFamily | None = None):
    """Exact matrix of q -> ((1+x) q' + beta q) mod denom on the monomial
    basis of polynomials of degree <= ``degree``.  Shape (deg denom, degree+1).
    """
    fam = _fam(params, fam)
    k = fam.denom.degree
    cols = []
    for j in range(degree + 1):
        rem = f_space_remainder(params, Polynomial([0] * j + [1]), fam)
        cols.append([rem.coeff(i) for i in range(k)])
    rows = [[cols[j][i] for j in range(degree + 1)] for i in range(k)]
    return _to_sympy_matrix(rows) if k else _to_sympy_matrix([[0] * (degree + 1)])


def f_space_basis(params: XParams, degree: int,
                  fam: ExceptionalFamily | None = None) -> list[Polynomial]:
    """Exact basis of {q : deg q <= degree, q satisfies the root conditions}."""
    mat = root_condition_matrix(params, degree, fam)
    basis = []
    for vec in mat.nullspace():
        basis.append(Polynomial(Fraction(int(v.p), int(v.q)) for v in vec))
    return basis


def f_space_dimension(params: XParams, degree: int, fam: ExceptionalFamily | None = None) -> int:
    mat = root_condition_matrix(params, degree, fam)
    return degree + 1 - mat.rank()


def smooth_battery(params: XParams, fam: ExceptionalFamily | None = None) -> dict[str, Bundle]:
    """Six (f, f', f'') bundles smooth on [-1, 1]; every boundary functional
    vanishes on them."""
    fam = _fam(params, fam)
    return {
        "one": polynomial_bundle(Polynomial((1,))),
        "x^2-x": polynomial_bundle(Polynomial((0, -1, 1))),
        "exp": (np.exp, np.exp, np.exp),
        "sin(2x)": (lambda x: np.sin(2 * x), lambda x: 2 * np.cos(2 * x),
                    lambda x: -4 * np.sin(2 * x)),
        "1/(3+x)": (lambda x: 1 / (3 + x), lambda x: -1 / (3 + x) ** 2,
                    lambda x: 2 / (3 + x) ** 3),
        "P_m,m+1": polynomial_bundle(fam.exceptional_poly(params.m + 1)),
    }
