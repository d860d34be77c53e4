"""Dense univariate polynomials over exact rationals or doubles.

Coefficients are stored low-to-high.  Every polynomial carries a ``mode``
(``"exact"`` or ``"float"``); arithmetic between modes is refused so that
conversion points stay explicit.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

from .errors import ModeMismatch

Scalar = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"
MODES = (EXACT, FLOAT)

REL_TOL = 1e-12
ABS_TOL = 1e-14


def to_scalar(value, mode: str) -> Scalar:
    """Coerce ``value`` to the scalar type of ``mode``.

    Strings such as ``"7/2"`` or ``"0.25"`` are parsed exactly in exact mode.
    Floats are converted by their exact binary value.
    """
    if mode == EXACT:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, Rational, str)):
            return Fraction(value)
        if isinstance(value, float):
            return Fraction(value)
        raise TypeError(f"cannot use {value!r} as an exact scalar")
    if mode == FLOAT:
        return float(value)
    raise ValueError(f"unknown mode {mode!r}")


def scalars_close(a, b, rel: float = REL_TOL, abs_: float = ABS_TOL) -> bool:
    """Float comparison used throughout float mode."""
    return math.isclose(float(a), float(b), rel_tol=rel, abs_tol=abs_)


class Polynomial:
    """Immutable dense polynomial ``sum(coeffs[k] * x**k)``."""

    __slots__ = ("coeffs", "mode")

    def __init__(self, coeffs: Iterable = (), mode: str = EXACT):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        cs = [to_scalar(c, mode) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "mode", mode)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # constructors
    @classmethod
    def zero(cls, mode: str = EXACT) -> "Polynomial":
        return cls((), mode)

    @classmethod
    def constant(cls, c, mode: str = EXACT) -> "Polynomial":
        return cls((c,), mode)

    @classmethod
    def x(cls, mode: str = EXACT) -> "Polynomial":
        return cls((0, 1), mode)

    @classmethod
    def from_roots(cls, roots: Sequence, mode: str = EXACT) -> "Polynomial":
        p = cls.constant(1, mode)
        for r in roots:
            p = poly_mul(p, cls((-to_scalar(r, mode), 1), mode))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else to_scalar(0, self.mode)

    def coeff(self, k: int) -> Scalar:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return to_scalar(0, self.mode)

    def to_float(self) -> "Polynomial":
        return Polynomial((float(c) for c in self.coeffs), FLOAT)

    def to_exact(self) -> "Polynomial":
        return Polynomial(self.coeffs, EXACT)

    def scale(self, c) -> "Polynomial":
        c = to_scalar(c, self.mode)
        return Polynomial((c * a for a in self.coeffs), self.mode)

    def __call__(self, x):
        return poly_eval(self, x)

    def __add__(self, other):
        return poly_add(self, _lift(other, self.mode))

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return poly_add(self, -_lift(other, self.mode))

    def __rsub__(self, other):
        return poly_add(_lift(other, self.mode), -self)

    def __mul__(self, other):
        return poly_mul(self, _lift(other, self.mode))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.constant(1, self.mode)
        for _ in range(k):
            out = poly_mul(out, self)
        return out

    def __divmod__(self, other):
        return poly_divrem(self, other)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.mode == other.mode and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.mode, self.coeffs))

    def almost_equal(self, other: "Polynomial", rel: float = REL_TOL,
                     abs_: float = ABS_TOL) -> bool:
        """Coefficientwise comparison with the float-mode tolerance."""
        n = max(len(self.coeffs), len(other.coeffs))
        scale = max((abs(float(c)) for c in self.coeffs + other.coeffs), default=0.0)
        return all(
            math.isclose(float(self.coeff(k)), float(other.coeff(k)),
                         rel_tol=rel, abs_tol=max(abs_, rel * scale))
            for k in range(n)
        )

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coeffs]}, mode={self.mode!r})"


def _lift(value, mode: str) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(value, mode)


def _check_modes(a: Polynomial, b: Polynomial) -> None:
    if a.mode != b.mode:
        raise ModeMismatch(f"cannot combine {a.mode} and {b.mode} polynomials")


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    _check_modes(a, b)
    n = max(len(a.coeffs), len(b.coeffs))
    return Polynomial((a.coeff(k) + b.coeff(k) for k in range(n)), a.mode)


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    _check_modes(a, b)
    if a.is_zero() or b.is_zero():
        return Polynomial.zero(a.mode)
    out = [to_scalar(0, a.mode)] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, ai in enumerate(a.coeffs):
        if ai == 0:
            continue
        for j, bj in enumerate(b.coeffs):
            out[i + j] += ai * bj
    return Polynomial(out, a.mode)


def poly_derivative(a: Polynomial) -> Polynomial:
    return Polynomial((k * c for k, c in enumerate(a.coeffs) if k), a.mode)


def poly_divrem(a: Polynomial, b: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Euclidean division ``a = q*b + r`` with ``deg r < deg b``."""
    _check_modes(a, b)
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero polynomial")
    rem = list(a.coeffs)
    db = b.degree
    lead = b.coeffs[-1]
    if len(rem) <= db:
        return Polynomial.zero(a.mode), a
    quot = [to_scalar(0, a.mode)] * (len(rem) - db)
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k] / lead
        quot[k - db] = c
        if c == 0:
            continue
        for j, bj in enumerate(b.coeffs):
            rem[k - db + j] -= c * bj
        rem[k] = to_scalar(0, a.mode)
    return Polynomial(quot, a.mode), Polynomial(rem[:db], a.mode)


def poly_eval(a: Polynomial, x):
    """Horner evaluation.  Exact for Fraction input in exact mode.

    Non-exact arguments (float, complex, numpy arrays) are evaluated with
    float coefficients.
    """
    if a.mode == EXACT and isinstance(x, (int, Fraction)):
        acc = Fraction(0)
        for c in reversed(a.coeffs):
            acc = acc * x + c
        return acc
    cs = [float(c) for c in a.coeffs] if a.mode == EXACT else a.coeffs
    acc = 0.0 * x
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def poly_roots(a: Polynomial, polish_steps: int = 3):
    """Complex roots via companion-matrix eigenvalues plus Newton polishing."""
    import numpy as np

    if a.degree < 1:
        return np.array([], dtype=complex)
    cs = np.array([float(c) for c in a.coeffs])
    n = a.degree
    comp = np.zeros((n, n))
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -cs[:-1] / cs[-1]
    roots = np.linalg.eigvals(comp).astype(complex)
    da = poly_derivative(a)
    for _ in range(polish_steps):
        f = poly_eval(a, roots)
        df = poly_eval(da, roots)
        step = np.where(df != 0, f / np.where(df != 0, df, 1), 0)
        roots = roots - step
    return np.sort_complex(roots)


def poly_eval_rounded(a: Polynomial, xs) -> "np.ndarray":
    """Evaluate an exact polynomial at float points, correctly rounded.

    Each point is converted to its exact binary fraction and the polynomial
    is evaluated in integer arithmetic, so monomial-basis cancellation at
    high degree costs nothing.  Float-mode input falls back to Horner.
    """
    import numpy as np

    xs = np.asarray(xs, dtype=float)
    if a.mode != EXACT:
        return np.asarray(poly_eval(a, xs), dtype=float)
    if a.is_zero():
        return np.zeros_like(xs)
    den = 1
    for c in a.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in a.coeffs]
    n = a.degree
    out = np.empty(xs.size)
    for i, xv in enumerate(xs.ravel()):
        p, q = float(xv).as_integer_ratio()
        acc = ints[n]
        qk = 1
        for k in range(n - 1, -1, -1):
            qk *= q
            acc = acc * p + ints[k] * qk
        out[i] = acc / (den * qk) if n else acc / den
    return out.reshape(xs.shape)
