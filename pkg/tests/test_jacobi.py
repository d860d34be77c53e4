import math
import warnings
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import eval_jacobi, roots_jacobi

from xjacobi.jacobi import (DegreeDropWarning, JacobiParams, gauss_jacobi_rule,
                            gen_binomial, jacobi_derivative_identity_check, jacobi_poly,
                            jacobi_recurrence_poly, jacobi_value_at_one, zeroth_moment)
from xjacobi.polyalg import FLOAT, Polynomial, poly_eval

classical = st.fractions(min_value=Fraction(-3, 4), max_value=4, max_denominator=8)
anyparam = st.fractions(min_value=-6, max_value=6, max_denominator=6)


def test_low_degrees():
    p = JacobiParams(Fraction(2), Fraction(1))
    assert jacobi_poly(0, p) == Polynomial([1])
    # (a-b)/2 + (a+b+2)/2 x
    assert jacobi_poly(1, p) == Polynomial([Fraction(1, 2), Fraction(5, 2)])
    assert jacobi_poly(-1, p).is_zero()


def test_denominator_example_value_at_one():
    # P_2^{(-4,0)}(1) = C(-2, 2) = 3
    with pytest.warns(DegreeDropWarning):
        p = jacobi_poly(2, JacobiParams(-4, 0))
    assert poly_eval(p, Fraction(1)) == 3


def test_degree_drop_warns():
    # leading coefficient is proportional to (n+a+b+1)_n; a+b = -2 kills it at n=1
    with pytest.warns(DegreeDropWarning):
        jacobi_poly(1, JacobiParams(-1, -1))


@given(st.integers(0, 8), anyparam, anyparam)
def test_value_at_one(n, a, b):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegreeDropWarning)
        p = jacobi_poly(n, JacobiParams(a, b))
    assert poly_eval(p, Fraction(1)) == jacobi_value_at_one(n, a)


@given(st.integers(0, 8), anyparam, anyparam)
def test_symmetry(n, a, b):
    # P_n^{(a,b)}(-x) = (-1)^n P_n^{(b,a)}(x)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegreeDropWarning)
        p = jacobi_poly(n, JacobiParams(a, b))
        q = jacobi_poly(n, JacobiParams(b, a))
    flipped = Polynomial([c * (-1) ** k for k, c in enumerate(p.coeffs)])
    assert flipped == q.scale((-1) ** n)


@given(st.integers(1, 8), anyparam, anyparam)
def test_derivative_identity(n, a, b):
    assert jacobi_derivative_identity_check(n, JacobiParams(a, b)) == 0


@given(st.integers(0, 10), classical, classical)
def test_binomial_sum_matches_recurrence(n, a, b):
    p = JacobiParams(a, b)
    assert jacobi_poly(n, p).to_float().almost_equal(
        jacobi_recurrence_poly(n, p, FLOAT), rel=1e-10, abs_=1e-12)


@given(st.integers(0, 12), st.floats(-0.9, 3), st.floats(-0.9, 3), st.floats(-1, 1))
def test_matches_scipy(n, a, b, x):
    got = poly_eval(jacobi_poly(n, JacobiParams(a, b), FLOAT), x)
    assert got == pytest.approx(eval_jacobi(n, a, b, x), rel=1e-9, abs=1e-9)


def test_gen_binomial_negative_top():
    assert gen_binomial(Fraction(-2), 2) == 3
    assert gen_binomial(Fraction(1, 2), 0) == 1


def beta_moment(a, b, k):
    """Integral of (1-x)^a (1+x)^b x^k by expanding x = (1+x) - 1.

    The alternating sum cancels heavily, so it runs at 50 digits.
    """
    with mpmath.workdps(50):
        a, b = mpmath.mpf(a), mpmath.mpf(b)
        tot = mpmath.fsum(
            math.comb(k, j) * (-1) ** (k - j) * 2 ** (a + b + j + 1) * mpmath.beta(a + 1, b + j + 1)
            for j in range(k + 1))
        return float(tot)


@pytest.mark.parametrize("a,b", [(0, 0), (2, 1), (-0.5, 0.5), (-0.75, 3.5), (1.5, -0.25)])
@pytest.mark.parametrize("N", [1, 4, 9])
def test_quadrature_exact_on_monomials(a, b, N):
    rule = gauss_jacobi_rule(JacobiParams(a, b), N)
    for k in range(2 * N):
        want = beta_moment(a, b, k)
        assert rule.integrate(rule.nodes**k) == pytest.approx(want, rel=1e-11, abs=1e-12)


@pytest.mark.parametrize("a,b", [(2, 1), (-0.5, 0.5), (0.3, 2.7)])
def test_quadrature_against_scipy(a, b):
    rule = gauss_jacobi_rule(JacobiParams(a, b), 20)
    x, w = roots_jacobi(20, a, b)
    assert np.allclose(rule.nodes, x, atol=1e-13)
    assert np.allclose(rule.weights, w, rtol=1e-11)


def test_quadrature_rejects_nonclassical():
    with pytest.raises(ValueError):
        gauss_jacobi_rule(JacobiParams(-1.5, 0), 5)


def test_gram_diagonal():
    a, b = 2.0, 1.0
    rule = gauss_jacobi_rule(JacobiParams(a, b), 30)
    vals = [eval_jacobi(n, a, b, rule.nodes) for n in range(6)]
    for n in range(6):
        hn = (2 ** (a + b + 1) / (2 * n + a + b + 1) * math.gamma(n + a + 1) * math.gamma(n + b + 1)
              / (math.gamma(n + a + b + 1) * math.factorial(n)))
        assert rule.integrate(vals[n] ** 2) == pytest.approx(hn, rel=1e-12)
        for k in range(n):
            assert abs(rule.integrate(vals[n] * vals[k])) < 1e-13
