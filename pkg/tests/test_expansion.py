import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from xjacobi.errors import NonConvergent
from xjacobi.exceptional import family, validate_params
from xjacobi.expansion import (bessel_gap, density_demo, expand, gram_matrix, inner_product,
                               norm)
from xjacobi.polyalg import Polynomial

F = Fraction


def test_inner_product_against_direct_quadrature(p211):
    # oracle: adaptive mpmath quadrature of f g W on (-1, 1)
    f = lambda x: np.exp(x)  # noqa: E731
    with mpmath.workdps(30):
        w = lambda x: (1 - x) ** 2 * (1 + x) / (-mpmath.mpf(3) / 2 - x / 2) ** 2  # noqa: E731
        want = float(mpmath.quad(lambda x: mpmath.exp(2 * x) * w(x), [-1, 1]))
    assert inner_product(p211, f, f) == pytest.approx(want, rel=1e-12)
    assert norm(p211, f) == pytest.approx(math.sqrt(want), rel=1e-12)


@pytest.mark.parametrize("t", [(2, 1, 1), (3, F(1, 2), 2), (F(-1, 2), F(-1, 4), 1)])
def test_gram_is_diagonal(t):
    p = validate_params(*t)
    g = gram_matrix(p, p.m + 6)
    assert g.max_offdiag() < 1e-10
    assert np.all(np.diag(g.matrix) > 0)


def test_member_is_reproduced(p211):
    fam = family(p211)
    target = fam.exceptional_poly(4)
    rep = expand(p211, target, 7)
    assert rep.coefficients[3] == pytest.approx(1.0, abs=1e-12)
    assert max(abs(c) for i, c in enumerate(rep.coefficients) if i != 3) < 1e-12
    assert rep.residual_norms[3] < 1e-10 * rep.f_norm


def test_exp_residuals_and_bessel(p211):
    rep = expand(p211, np.exp, 20)
    assert rep.monotone()
    assert rep.residual_norms[-1] < 1e-10
    assert bessel_gap(rep, p211) < 1e-10


def test_high_precision_path_strictly_decreases(p211):
    rep = expand(p211, mpmath.exp, 16, dps=40)
    assert rep.strictly_decreasing()
    float_rep = expand(p211, np.exp, 10)
    assert np.allclose(rep.residual_norms[:9], float_rep.residual_norms[:9], rtol=1e-6, atol=1e-13)


def test_representable_target_m2(p_m2):
    fam = family(p_m2)
    target = fam.denom * fam.denom * Polynomial.x()
    rep = expand(p_m2, target, 2 * p_m2.m + 2)
    assert rep.residual_norms[-1] < 1e-9 * rep.f_norm


def test_density_demo_decreases(p211):
    errs = [density_demo(p211, np.exp, n) for n in (2, 5, 10)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-8


def test_M_below_m(p_m2):
    with pytest.raises(ValueError):
        expand(p_m2, np.exp, 1)


def test_quad_cap_env(monkeypatch, p211):
    monkeypatch.setenv("XJACOBI_QUAD_CAP", "32")
    with pytest.raises(NonConvergent):
        inner_product(p211, np.exp, np.exp)
