from fractions import Fraction as F

import pytest

import exclusion as ex

# rate set used throughout the acceptance suite
RATES = dict(alpha=F(1), beta=F(1), gamma=F(1, 2), delta=F(1, 3))


@pytest.fixture(scope="session")
def asep_model():
    return ex.asep(F(2), **RATES)


@pytest.fixture(scope="session")
def tasep_model():
    return ex.tasep(F(1), F(1))


@pytest.fixture(scope="session")
def ssep_model():
    return ex.ssep(**RATES)


@pytest.fixture(scope="session")
def rd_model():
    return ex.rd(F(3), **RATES)


@pytest.fixture(scope="session")
def all_models(asep_model, tasep_model, ssep_model, rd_model):
    return [asep_model, tasep_model, ssep_model, rd_model]
