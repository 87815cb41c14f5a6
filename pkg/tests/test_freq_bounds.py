import math
from types import SimpleNamespace

import numpy as np
import pytest

from shock_evans.eigensystem import _assemble_parts, coefficients
from shock_evans.errors import DomainError, FitError
from shock_evans.freq_bounds import (CoordinateChain, HFApproximant, LaurentMatrix, T_map, closed_form_matrices,
                                     compute_alpha, hf_fit, practical_radius, ricatti_margin, standard_matrix,
                                     tracking_bound, tracking_matrices)
from shock_evans.gas_model import ModelParams, rankine_hugoniot, v_star

PARAMS = ModelParams(gruneisen=0.4, nu=1.47, v_plus=0.5)
E_MINUS = rankine_hugoniot(PARAMS).e_minus
STATES = SimpleNamespace(v=np.array([0.95, 0.7, 0.55]), e=np.array([0.6, 0.55, 0.5]),
                         v_x=np.array([-0.02, -0.12, -0.04]), e_x=np.array([-0.01, -0.05, -0.02]),
                         u_xx=np.array([-0.01, 0.03, 0.02]))


def _recombination(lam):
    p = np.zeros((5, 5), dtype=complex)
    p[0, 3] = p[1, 2] = p[2, 0] = p[3, 4] = p[4, 1] = 1.0
    p[3, 3] = lam
    return p


def test_laurent_arithmetic():
    rng = np.random.default_rng(0)
    a, b, c = (rng.normal(size=(3, 3)) for _ in range(3))
    left = LaurentMatrix({1: a, 0: b})
    right = LaurentMatrix({-1: c})
    s = 1.3 - 0.4j
    np.testing.assert_allclose((left @ right)(s), left(s) @ right(s), atol=1e-12)
    np.testing.assert_allclose((left + np.eye(3))(s), left(s) + np.eye(3), atol=1e-12)
    np.testing.assert_allclose((np.eye(3) - left)(s), np.eye(3) - left(s), atol=1e-12)
    np.testing.assert_allclose((np.eye(3) @ right)(s), right(s), atol=1e-12)
    assert (left @ right).powers == (-1, 0)
    assert left.principal().powers == (1,)
    assert left.remainder().powers == (0,)
    assert (left - left).trimmed().powers == ()
    np.testing.assert_array_equal(right.coefficient(4), np.zeros((3, 3)))


@pytest.mark.parametrize('lam', [2.0, 0.7 + 3.0j, -0.5j, 40.0 + 1.0j])
def test_standard_matrix_is_a_recombination(lam):
    a0, a1 = _assemble_parts(STATES, PARAMS, E_MINUS)
    a = lam * a1 + a0
    b = standard_matrix(STATES, PARAMS, E_MINUS)(np.sqrt(complex(lam)))
    p = _recombination(lam)
    np.testing.assert_allclose(b @ p, p @ a, atol=1e-12 * max(1.0, abs(lam)))


def test_chain_principal_part():
    chain = CoordinateChain(STATES, PARAMS, E_MINUS)
    v = STATES.v
    second = np.zeros((3, 5, 5))
    second[:, 0, 0] = -1.0
    first = np.zeros((3, 5, 5))
    first[:, 1, 1] = -np.sqrt(v)
    first[:, 2, 2] = -np.sqrt(v / PARAMS.nu)
    first[:, 3, 3] = np.sqrt(v)
    first[:, 4, 4] = np.sqrt(v / PARAMS.nu)
    principal = chain.principal_part
    assert principal.powers == (1, 2)
    np.testing.assert_allclose(principal.coefficient(2), second, atol=1e-12)
    np.testing.assert_allclose(principal.coefficient(1), first, atol=1e-12)
    assert max(chain.tracking_part.powers) <= 0


@pytest.mark.parametrize('lam', [0.5, 2.0j, 3.0 + 4.0j])
def test_chain_reconstructs_b(lam):
    chain = CoordinateChain(STATES, PARAMS, E_MINUS)
    s = np.sqrt(complex(lam))
    b = chain.b(s)
    np.testing.assert_allclose(chain.reconstruct_b()(s), b, rtol=1e-11, atol=1e-11 * np.abs(b).max())


def test_closed_forms_match_chain():
    chain = CoordinateChain(STATES, PARAMS, E_MINUS, coupling_sign=-1.0)
    tracking = chain.tracking_part
    closed = closed_form_matrices(STATES, PARAMS, E_MINUS)
    assert sorted(closed) == [0, 1, 2, 3, 4]
    for i, matrix in closed.items():
        assert matrix.shape == (3, 5, 5)
        np.testing.assert_allclose(tracking.coefficient(-i), matrix, atol=1e-12)
    for power in tracking.powers:
        if power < -4:
            np.testing.assert_allclose(tracking.coefficient(power), 0.0, atol=1e-12)


def test_closed_forms_for_a_constant_state():
    v = np.array([0.8])
    rest = SimpleNamespace(v=v, e=np.array([0.5]), v_x=np.zeros(1), e_x=np.zeros(1), u_xx=np.zeros(1))
    f, _, _ = coefficients(rest, PARAMS, E_MINUS)
    closed = closed_form_matrices(rest, PARAMS, E_MINUS)
    np.testing.assert_allclose(closed[0][0, 1:3, 1:3], -closed[0][0, 1:3, 3:5], atol=1e-15)
    assert closed[1][0, 2, 1] == pytest.approx(-closed[1][0, 4, 3])
    assert closed[2][0, 0, 1] == pytest.approx(-v[0] * (v[0] - f[0]))
    assert closed[4][0, 0, 1] == pytest.approx(-v[0] * closed[2][0, 0, 0])


def test_hf_fit_recovers_exponent():
    approximant = hf_fit(lambda lam: 3.0 * np.exp(0.7 * np.sqrt(lam)), 100.0)
    assert approximant.C == pytest.approx(3.0, rel=1e-10)
    assert approximant.alpha == pytest.approx(0.7, rel=1e-10)
    assert approximant.fit_residual <= 1e-10
    assert approximant.valid_radius == 25.0
    assert complex(approximant(16.0)) == pytest.approx(3.0 * np.exp(2.8))


def test_hf_fit_negative_and_beta():
    approximant = hf_fit(lambda lam: -2.0 * np.exp(0.5 * np.sqrt(lam) + 0.01 * lam), 64.0, with_beta=True)
    assert approximant.C == pytest.approx(-2.0, rel=1e-9)
    assert approximant.alpha == pytest.approx(0.5, rel=1e-8)
    assert approximant.beta == pytest.approx(0.01, rel=1e-7)


def test_hf_fit_rejects_sign_change():
    with pytest.raises(FitError):
        hf_fit(lambda lam: lam - 50.0, 100.0)


def test_practical_radius_search():
    limit = HFApproximant(C=2.0, alpha=0.6, fit_residual=0.0, valid_radius=25.0)

    def evans(lam):
        lam = np.asarray(lam, dtype=complex)
        return limit(lam) * (1.0 + 1.0 / lam)

    found = practical_radius(evans, limit, tol1=0.15)
    assert found.converged and found.nonrigorous
    assert 1.0 / 0.15 <= found.radius <= 7.0
    assert found.max_error <= 0.15

    capped = practical_radius(evans, limit, tol1=0.15, tracking_radius=4.0)
    assert not capped.converged
    assert capped.radius == 4.0


def test_practical_radius_gives_up():
    limit = HFApproximant(C=1.0, alpha=0.5, fit_residual=0.0, valid_radius=1.0)
    found = practical_radius(lambda lam: 2.0 * limit(lam), limit, max_doublings=3)
    assert not found.converged
    assert found.radius == 40.0


def test_t_map_is_antitone(moderate_profile):
    values = [T_map(radius, moderate_profile) for radius in (25.0, 50.0, 100.0, 200.0)]
    assert all(a >= b for a, b in zip(values, values[1:]))
    with pytest.raises(DomainError):
        T_map(-1.0, moderate_profile)


def test_tracking_fixed_point(moderate_profile):
    bound = tracking_bound(moderate_profile)
    assert bound.converged
    assert bound.norm_used == 'l2'
    assert bound.iterations == len(bound.iterates) - 1
    assert T_map(bound.Lambda_star, moderate_profile) == pytest.approx(bound.Lambda_star, rel=1e-4)
    # at the fixed point the Ricatti left side is sqrt(Lambda/2)
    margin = ricatti_margin(moderate_profile, Lambda=bound.Lambda_star)
    assert margin == pytest.approx(math.sqrt(bound.Lambda_star) * (1.0 - math.sqrt(0.5)), rel=1e-4)
    with pytest.raises(DomainError):
        tracking_bound(moderate_profile, norm='l3')


def test_tracking_matrices(moderate_profile):
    matrices = tracking_matrices([-3.0, 0.0, 4.0], moderate_profile)
    assert matrices.orders[0] == 0
    norms = matrices.block_norms('linf')
    assert norms['-+'].shape == (len(matrices.orders), 3)
    weighted = matrices.weighted(100.0)
    assert weighted['++'].shape == (3,)
    with pytest.raises(DomainError):
        matrices.weighted()


@pytest.mark.slow
@pytest.mark.parametrize('gruneisen, nu, expected', [
    (2.0 / 3.0, 1.0, 100.4),
    (1.0, 1.0, 73.7),
    (2.0 / 3.0, 5.0, 391.3),
    (0.2, 5.0, 1755.6),
])
def test_tracking_radius_known_values(gruneisen, nu, expected):
    from shock_evans.shock_profile import solve_profile

    params = ModelParams(gruneisen=gruneisen, nu=nu).with_v_plus(v_star(gruneisen))
    profile = solve_profile(params)
    radii = [tracking_bound(profile, norm=norm).Lambda_star for norm in ('l1', 'l2', 'linf')]
    assert min(abs(radius - expected) / expected for radius in radii) <= 0.1


@pytest.mark.slow
def test_alpha_quadrature_matches_fit(strong_profile):
    from shock_evans.eigensystem import SpectralMatrix
    from shock_evans.evans import EvansEvaluator, prepare_profile

    profile, lengths = prepare_profile(strong_profile.params, 100.0, strong_profile)
    evaluator = EvansEvaluator(SpectralMatrix(profile), *lengths, reference=100.0, polar=False)
    approximant = hf_fit(evaluator, 100.0)
    assert approximant.alpha == pytest.approx(compute_alpha(profile), rel=0.03)
    assert practical_radius(evaluator, approximant, tracking_radius=100.4).radius <= 10.0

