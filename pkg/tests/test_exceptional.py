import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from xjacobi.errors import (DegenerateDegree, DomainError, ForbiddenDifference,
                            ParameterError, RangeViolation, SignMismatch, SingularWeight)
from xjacobi.exceptional import (ExceptionalFamily, XParams, as_rational, denominator_poly,
                                 eigenvalue, exceptional_poly, parameter_clauses,
                                 validate_params, weight)
from xjacobi.jacobi import DegreeDropWarning
from xjacobi.polyalg import Polynomial, poly_eval

F = Fraction


def test_first_member_example(p211):
    assert exceptional_poly(p211, 1) == Polynomial([F(5, 3), F(1, 3)])


def test_m1_table(p211):
    assert exceptional_poly(p211, 2) == Polynomial([F(15, 16), F(33, 8), F(15, 16)])
    assert exceptional_poly(p211, 3) == Polynomial([F(-11, 10), F(23, 10), F(87, 10), F(21, 10)])
    assert [eigenvalue(p211, n) for n in (1, 2, 3)] == [0, -5, -12]


def test_denominator_m1(p211):
    # P_1^{(-3,0)} = (a-b)/2 + (a+b+2)/2 x with a=-3, b=0
    assert denominator_poly(p211) == Polynomial([F(-3, 2), F(-1, 2)])


@pytest.mark.parametrize("args,err,clause", [
    ((-1, 1, 1), RangeViolation, "range"),
    ((2, -3, 1), RangeViolation, "range"),
    ((2, 2, 1), ForbiddenDifference, "forbidden-difference"),
    ((3, 1, 2), ForbiddenDifference, "forbidden-difference"),
    ((F(1, 2), F(-1, 4), 1), SignMismatch, "sign"),
    ((1, F(1, 2), 2), SignMismatch, "sign"),  # alpha+1-m = 0
    ((2, 0, 1), SignMismatch, "sign"),
    ((F(-1, 2), F(-1, 3), 2), SingularWeight, "denominator-roots"),
    # double root of the denominator exactly at x = 1
    ((1, F(-1, 2), 3), SingularWeight, "denominator-roots"),
])
def test_rejections(args, err, clause):
    with pytest.raises(err) as info:
        validate_params(*args)
    assert info.value.clause == clause
    assert isinstance(info.value, ParameterError)


def test_float_inputs_read_as_decimals():
    assert as_rational(-0.25) == F(-1, 4)
    assert as_rational(0.1) == F(1, 10)
    assert validate_params(-0.5, -0.25, 1).beta == F(-1, 4)


def test_m_must_be_positive_integer():
    with pytest.raises(RangeViolation):
        validate_params(2, 1, 0)


def test_degree_drop_when_unvalidated():
    fam = ExceptionalFamily(XParams(3, 1, 2), check=False)
    assert fam.denom.degree == 1
    with pytest.warns(DegreeDropWarning):
        p = fam.exceptional_poly(3)
    assert p.degree == 2
    with pytest.raises(DegenerateDegree):
        ExceptionalFamily(XParams(3, 1, 2))


def test_below_m_rejected(p_m2):
    with pytest.raises(ValueError):
        exceptional_poly(p_m2, 1)


def test_weight(p211):
    x = np.array([-0.5, 0.0, 0.5])
    want = (1 - x) ** 2 * (1 + x) / ((-1.5 - 0.5 * x) ** 2)
    assert np.allclose(weight(p211, x), want, rtol=1e-14)
    for bad in (-1.0, 1.0, 2.0):
        with pytest.raises(DomainError):
            weight(p211, bad)


def test_denominator_value_at_one():
    # P_m^{(-a-1,b-1)}(1) = prod_{j<m}(j - a)/m!
    for a, b, m in [(2, 1, 1), (3, F(1, 2), 2), (4, F(1, 2), 3)]:
        p = validate_params(a, b, m)
        want = F(1)
        for j in range(m):
            want *= (j - p.alpha) / (j + 1)
        assert poly_eval(denominator_poly(p), F(1)) == want != 0


# random rational triples; invalid ones are discarded
params_st = st.tuples(
    st.fractions(min_value=F(-3, 4), max_value=6, max_denominator=4),
    st.fractions(min_value=F(-3, 4), max_value=4, max_denominator=4),
    st.integers(1, 3),
)


@given(params_st)
def test_validated_family_is_well_formed(t):
    try:
        p = validate_params(*t)
    except ParameterError:
        assume(False)
    fam = ExceptionalFamily(p)
    assert fam.denom.degree == p.m
    assert fam.min_abs_denominator(2001) > 0
    for n in range(p.m, p.m + 4):
        assert fam.exceptional_poly(n).degree == n


@given(params_st)
def test_clauses_agree_with_validation(t):
    ok = all(parameter_clauses(*t).values())
    try:
        validate_params(*t, check_denominator=False)
        raised = False
    except ParameterError:
        raised = True
    assert raised == (not ok)


def test_cache_is_stable(p_m2):
    fam = ExceptionalFamily(p_m2)
    assert fam.exceptional_poly(5) is fam.exceptional_poly(5)
