from fractions import Fraction

import pytest

from xjacobi.exceptional import ExceptionalFamily, XParams, validate_params
from xjacobi.spectral import (EndpointClass, boundary_case, classify_endpoint, deficiency_index,
                              gap_certificate, indicial_roots, sq_integrable_exponent,
                              tail_integrability)

F = Fraction
LP, LC = EndpointClass.LIMIT_POINT, EndpointClass.LIMIT_CIRCLE


def test_indicial_examples(p211):
    assert set(indicial_roots(p211, 1).roots) == {0, -2}
    assert set(indicial_roots(p211, -1).roots) == {0, -1}


@pytest.mark.parametrize("t", [(2, 1, 1), (3, F(1, 2), 2), (4, F(1, 2), 3),
                               (F(-1, 2), F(-1, 4), 1), (F(3, 2), F(-1, 4), 3)])
def test_indicial_roots_general(t):
    p = validate_params(*t)
    assert set(indicial_roots(p, 1).roots) == {0, -p.alpha}
    assert set(indicial_roots(p, -1).roots) == {0, -p.beta}
    # a generic spectral parameter does not move the roots
    assert indicial_roots(p, 1, lam=F(7, 3)).roots == indicial_roots(p, 1).roots


def test_sq_integrable_exponent():
    for a in (F(-1, 2), F(1, 2), F(99, 100)):
        assert sq_integrable_exponent(-a, a)
    for a in (F(1), F(3, 2), F(4)):
        assert not sq_integrable_exponent(-a, a)
    assert sq_integrable_exponent(0, F(-9, 10))


def test_classify_examples():
    assert classify_endpoint(validate_params(2, F(3, 2), 1), -1) is LP
    assert classify_endpoint(validate_params(F(1, 2), F(3, 2), 1), 1) is LC
    one_one = XParams(1, 1, 1)  # never admissible; classification only reads alpha, beta
    fam = ExceptionalFamily(one_one, check=False)
    assert classify_endpoint(one_one, 1, fam) is LP
    assert classify_endpoint(one_one, -1, fam) is LP


def test_deficiency_examples():
    assert deficiency_index(validate_params(2, F(3, 2), 1)).as_tuple() == (0, 0)
    assert deficiency_index(validate_params(F(3, 2), F(1, 2), 1)).as_tuple() == (1, 1)
    assert deficiency_index(validate_params(F(-1, 2), F(-1, 4), 1)).as_tuple() == (2, 2)


def test_boundary_examples():
    assert boundary_case(validate_params(2, F(3, 2), 1)).endpoints == ()
    assert boundary_case(validate_params(F(3, 2), F(1, 2), 1)).endpoints == (-1,)
    bc = boundary_case(validate_params(F(-1, 2), F(-1, 4), 1))
    assert bc.case_id == "LC-both" and len(bc.functionals) == 2


def test_large_m_negative_beta_counts_one_condition():
    p = validate_params(F(3, 2), F(-1, 4), 3)
    assert boundary_case(p).case_id == "LC-at-minus1"
    assert deficiency_index(p).as_tuple() == (1, 1)


@pytest.mark.parametrize("t,expect", [((F(1, 2), F(3, 2), 1), (True, False)),
                                      ((2, F(1, 2), 1), (False, True)),
                                      ((F(3, 2), F(3, 2), 2), (False, False))])
def test_tail_trend(t, expect):
    p = validate_params(*t)
    got_plus, _ = tail_integrability(p, 1, -p.alpha)
    got_minus, _ = tail_integrability(p, -1, -p.beta)
    assert (got_plus, got_minus) == expect
    # the regular solution is always square integrable
    assert tail_integrability(p, 1, 0)[0] and tail_integrability(p, -1, 0)[0]


@pytest.mark.parametrize("t", [(2, 1, 1), (3, F(1, 2), 2), (4, F(1, 2), 3)])
def test_gap_certificate(t):
    p = validate_params(*t)
    assert all(gap_certificate(p, d) for d in range(p.m))
    assert not gap_certificate(p, p.m)
