import math

import numpy as np
import pytest

from shock_evans.errors import DegeneracyError, DomainError, PhysicalityError
from shock_evans.gas_model import (AIR, ModelParams, air_defaults, eucken_nu_over_mu, gruneisen_from_atoms,
                                   mach_number, nu_over_mu_from_prandtl, prandtl_number, rankine_hugoniot,
                                   v_plus_for_mach, v_star)


def test_v_star():
    assert v_star(2.0 / 3.0) == pytest.approx(0.25, abs=1e-15)
    assert v_star(0.4) == pytest.approx(1.0 / 6.0, abs=1e-15)
    with pytest.raises(DomainError):
        v_star(0.0)


def test_rankine_hugoniot_monatomic():
    endstates = rankine_hugoniot(ModelParams(gruneisen=2.0 / 3.0, nu=1.0, v_plus=0.5))
    assert endstates.e_minus == pytest.approx(0.3, abs=1e-14)
    assert endstates.e_plus == pytest.approx(0.525, abs=1e-14)
    assert endstates.u_plus == pytest.approx(-0.5, abs=1e-15)
    assert endstates.minus == (1.0, endstates.e_minus)


def test_rankine_hugoniot_diatomic():
    endstates = rankine_hugoniot(ModelParams(gruneisen=0.4, nu=1.47, v_plus=0.3))
    assert endstates.e_minus == pytest.approx(0.32 / 1.12, abs=1e-14)
    assert endstates.e_plus == pytest.approx(0.684 / 1.12, abs=1e-14)


def test_strong_shock_endstates():
    params = ModelParams(gruneisen=2.0 / 3.0, nu=1.0).with_v_plus(v_star(2.0 / 3.0))
    endstates = rankine_hugoniot(params)
    assert params.is_strong_shock
    assert endstates.e_minus == 0.0
    assert endstates.e_plus == pytest.approx(9.0 / 32.0, abs=1e-14)
    assert math.isinf(endstates.energy_ratio)


def test_jump_residuals_vanish():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        gruneisen = rng.uniform(0.05, 2.0)
        v_plus = rng.uniform(v_star(gruneisen), 1.0)
        endstates = rankine_hugoniot(ModelParams(gruneisen=gruneisen, nu=1.0, v_plus=v_plus))
        assert max(abs(r) for r in endstates.jump_residuals()) <= 1e-12


def test_weak_shock_limit():
    endstates = rankine_hugoniot(ModelParams(gruneisen=0.4, nu=1.0, v_plus=1.0))
    assert endstates.u_plus == 0.0
    assert endstates.e_plus == pytest.approx(endstates.e_minus, abs=1e-14)


def test_mach_number():
    assert mach_number(ModelParams(gruneisen=2.0 / 3.0, nu=1.0, v_plus=1.0)) == 1.0
    assert mach_number(ModelParams(gruneisen=2.0 / 3.0, nu=1.0, v_plus=0.4)) == pytest.approx(math.sqrt(5.0))
    assert mach_number(ModelParams(gruneisen=2.0 / 3.0, nu=1.0, v_plus=0.25 + 1e-6)) == pytest.approx(866.03, rel=1e-4)
    assert math.isinf(mach_number(ModelParams(gruneisen=0.4, nu=1.0).with_v_plus(v_star(0.4))))


def test_v_plus_for_mach():
    assert v_plus_for_mach(2.0 / 3.0, 2.0) == pytest.approx(0.4375, abs=1e-14)
    assert v_plus_for_mach(0.4, 1.0) == pytest.approx(1.0, abs=1e-14)
    assert v_plus_for_mach(0.4, math.inf) == v_star(0.4)
    for mach in (1.2, 2.0, 7.5):
        params = ModelParams(gruneisen=0.4, nu=1.0, v_plus=v_plus_for_mach(0.4, mach))
        assert mach_number(params) == pytest.approx(mach, rel=1e-12)
    with pytest.raises(DomainError):
        v_plus_for_mach(0.4, 0.9)


def test_eucken():
    assert eucken_nu_over_mu(5.0 / 3.0) == pytest.approx(1.875, abs=1e-14)
    assert eucken_nu_over_mu(1.4) == pytest.approx(1.425, abs=1e-14)
    assert eucken_nu_over_mu(1.0) == pytest.approx(0.75, abs=1e-15)
    assert prandtl_number(5.0 / 3.0) == pytest.approx(2.0 / 3.0, abs=1e-14)
    for gamma in (1.1, 1.4, 5.0 / 3.0):
        assert nu_over_mu_from_prandtl(gamma, prandtl_number(gamma)) == pytest.approx(eucken_nu_over_mu(gamma))
    with pytest.raises(DomainError):
        eucken_nu_over_mu(0.99)
    with pytest.raises(DomainError):
        nu_over_mu_from_prandtl(1.4, 0.0)


def test_gruneisen_from_atoms():
    assert gruneisen_from_atoms(1) == pytest.approx(2.0 / 3.0)
    assert gruneisen_from_atoms(2) == pytest.approx(0.4)
    with pytest.raises(DomainError):
        gruneisen_from_atoms(0)


def test_air():
    assert AIR.gruneisen == pytest.approx(0.4, rel=1e-2)
    assert AIR.nu_over_mu == pytest.approx(1.47, abs=1e-2)
    params = air_defaults()
    assert (params.gruneisen, params.nu, params.mu) == (0.4, 1.47, 1.0)
    assert params.v_plus is None
    with pytest.raises(DomainError):
        params.require_v_plus()


def test_model_params_validation():
    with pytest.raises(DomainError):
        ModelParams(gruneisen=0.0, nu=1.0)
    with pytest.raises(DomainError):
        ModelParams(gruneisen=0.4, nu=-1.0)
    with pytest.raises(DomainError):
        ModelParams(gruneisen=0.4, nu=1.0, mu=0.0)
    with pytest.raises(DomainError):
        ModelParams(gruneisen=0.4, nu=1.0, v_plus=1.5)
    with pytest.raises(PhysicalityError):
        ModelParams(gruneisen=0.4, nu=1.0, v_plus=0.1)
    with pytest.raises(DegeneracyError):
        ModelParams(gruneisen=0.4, nu=1.0, v_plus=1.0).require_noncharacteristic()


def test_normalized():
    params = ModelParams(gruneisen=0.4, nu=2.0, mu=4.0, v_plus=0.5)
    normalized = params.normalized()
    assert (normalized.nu, normalized.mu, normalized.v_plus) == (0.5, 1.0, 0.5)
    assert normalized.normalized() is normalized


def test_key_is_exact():
    params = ModelParams(gruneisen=2.0 / 3.0, nu=1.0, v_plus=0.5)
    assert params.key() == ModelParams(gruneisen=2.0 / 3.0, nu=1.0, v_plus=0.5).key()
    assert params.key() != params.with_v_plus(0.5 + 1e-15).key()
