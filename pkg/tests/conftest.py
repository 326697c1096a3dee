import math

import pytest

import filmflow as ff

ALPHA4 = math.pi / 4


@pytest.fixture
def params_I():
    return ff.validate_params(R=0.25, W=1.0, alpha=ALPHA4, delta=0.1, regime="I")


@pytest.fixture
def params_III():
    return ff.validate_params(R=0.25, W=1.0, alpha=ALPHA4, delta=0.1, regime="III")


@pytest.fixture
def cos_state():
    return ff.initial_profile("cos", 64, amplitude=0.1)
