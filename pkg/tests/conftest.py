import os
from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def p211():
    from xjacobi.exceptional import validate_params
    return validate_params(2, 1, 1)


@pytest.fixture
def p_m2():
    from xjacobi.exceptional import validate_params
    return validate_params(3, Fraction(1, 2), 2)
