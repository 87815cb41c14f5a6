import pytest

from shock_evans.gas_model import ModelParams, v_star
from shock_evans.shock_profile import solve_profile

MONATOMIC = 2.0 / 3.0


@pytest.fixture(scope='session')
def moderate_params():
    return ModelParams(gruneisen=MONATOMIC, nu=1.0, v_plus=0.5)


@pytest.fixture(scope='session')
def strong_params():
    return ModelParams(gruneisen=MONATOMIC, nu=1.0).with_v_plus(v_star(MONATOMIC))


@pytest.fixture(scope='session')
def moderate_profile(moderate_params):
    return solve_profile(moderate_params)


@pytest.fixture(scope='session')
def strong_profile(strong_params):
    return solve_profile(strong_params)
