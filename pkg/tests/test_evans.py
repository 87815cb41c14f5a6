import math

import numpy as np
import pytest

from shock_evans.eigensystem import ConstantCoefficientSystem, SpectralMatrix
from shock_evans.errors import UnresolvedWindingError, ZeroOnContourError
from shock_evans.evans import (ContourSpec, EvansContour, EvansEvaluator, EvansSample, cauchy_riemann_residual,
                               evans_contour, evans_exterior, flattening_ratio, initial_basis, kato_basis,
                               prepare_profile, stability_verdict, strong_shock_deviation, winding_number)
from shock_evans.gas_model import ModelParams

MODERATE = ModelParams(gruneisen=2.0 / 3.0, nu=1.0, v_plus=0.5)


def _constant_evaluator(**kwargs):
    system = ConstantCoefficientSystem.from_endstate(MODERATE, 'minus', half_length=5.0)
    return EvansEvaluator(system, 5.0, 5.0, reference=2.0, polar=False, **kwargs)


def test_contour_spec_points():
    spec = ContourSpec(radius=10.0, n_points=180)
    points = spec.points()
    assert points.size == 180
    assert points[0] == points[-1] == 10.0
    assert np.all(points.real >= 0.0)
    assert np.abs(points).min() == pytest.approx(spec.min_modulus)
    assert spec.min_modulus == pytest.approx(10.0 / 45 ** 2)
    np.testing.assert_array_equal(points[::-1], np.conj(points))


def test_contour_spec_validation():
    with pytest.raises(ValueError):
        ContourSpec(radius=0.0)
    with pytest.raises(ValueError):
        ContourSpec(radius=1.0, n_points=4)


def test_winding_of_synthetic_functions():
    spec = ContourSpec(radius=10.0, n_points=180)
    assert evans_contour(lambda lam: lam - 5.0, spec).winding == 1
    assert evans_contour(lambda lam: (lam - 4.0) ** 2 + 4.0, spec).winding == 2
    assert evans_contour(lambda lam: lam + 5.0, spec).winding == 0
    assert evans_contour(lambda lam: 1.0 + 0.0 * lam, spec).winding == 0


def test_contour_refines_fast_phase():
    contour = evans_contour(lambda lam: np.exp(0.5 * lam), ContourSpec(radius=10.0, n_points=16))
    assert contour.refinement_depth > 0
    assert contour.max_arg_step <= math.pi / 8.0
    assert contour.winding == 0


def test_zero_on_contour():
    with pytest.raises(ZeroOnContourError):
        evans_contour(lambda lam: lam - 10.0, ContourSpec(radius=10.0, n_points=180))


def test_unresolved_winding():
    values = [1.0, 1.0j, -1.0, -1.0j, 1.0]
    samples = tuple(EvansSample(complex(k), complex(v)) for k, v in enumerate(values))
    contour = EvansContour(spec=ContourSpec(1.0), samples=samples, winding=0, max_arg_step=math.pi / 2,
                           refinement_depth=0)
    with pytest.raises(UnresolvedWindingError):
        winding_number(contour)
    angles = np.linspace(0.0, 2.0 * math.pi, 33)
    fine = tuple(EvansSample(complex(k), complex(np.exp(1j * a))) for k, a in enumerate(angles))
    contour = EvansContour(spec=ContourSpec(1.0), samples=fine, winding=0, max_arg_step=0.2, refinement_depth=0)
    assert winding_number(contour) == 1


def test_initial_basis_real_on_real_axis():
    for side in ('minus', 'plus'):
        basis = initial_basis(3.0, side, MODERATE)
        assert np.all(basis.vectors.imag == 0.0)
        gram = basis.vectors.conj().T @ basis.vectors
        np.testing.assert_allclose(gram, np.eye(basis.dimension), atol=1e-12)


def test_kato_bases_stay_in_subspace():
    path = 2.0 * np.exp(0.5j * np.pi * np.linspace(0.0, 1.0, 6))
    for side in ('minus', 'plus'):
        for basis in kato_basis(path, side, MODERATE):
            np.testing.assert_allclose(basis.projector @ basis.vectors, basis.vectors, atol=1e-10)


def test_kato_path_independence():
    arc = 2.0 * np.exp(0.5j * np.pi * np.linspace(0.0, 1.0, 11))
    for side in ('minus', 'plus'):
        direct = kato_basis([2.0, 2.0j], side, MODERATE)[-1].vectors
        halves = kato_basis([2.0, 2.0 * np.exp(0.25j * np.pi), 2.0j], side, MODERATE)[-1].vectors
        refined = kato_basis(arc, side, MODERATE)[-1].vectors
        np.testing.assert_allclose(halves, direct, atol=1e-8)
        np.testing.assert_allclose(refined, direct, atol=1e-8)


def test_kato_real_path_stays_real():
    for basis in kato_basis([2.0, 3.5, 6.0], 'plus', MODERATE):
        assert np.all(basis.vectors.imag == 0.0)


@pytest.mark.parametrize('pairing', ['adjoint', 'wedge'])
def test_constant_coefficient_evans_is_constant(pairing):
    evaluator = _constant_evaluator(pairing=pairing)
    reference = evaluator.sample(2.0).d_exterior
    assert abs(reference) > 0
    for lam in (2.0j, 1.0 + 1.0j, 0.5j, 4.0, 3.0 - 2.0j):
        assert abs(evaluator.sample(lam).d_exterior - reference) <= 1e-8 * abs(reference)


def test_constant_coefficient_polar_matches():
    system = ConstantCoefficientSystem.from_endstate(MODERATE, 'minus', half_length=5.0)
    evaluator = EvansEvaluator(system, 5.0, 5.0, reference=2.0, polar=True)
    for lam in (2.0, 1.0 + 1.0j):
        sample = evaluator.sample(lam)
        assert abs(sample.d_polar - sample.d_exterior) <= 1e-6 * abs(sample.d_exterior)


def test_evans_real_on_real_axis():
    evaluator = _constant_evaluator()
    for lam in (2.0, 3.0, 0.5):
        assert evaluator.sample(lam).d_exterior.imag == 0.0


def test_conjugate_symmetry(moderate_profile):
    profile, lengths = prepare_profile(moderate_profile.params, 10.0, moderate_profile)
    system = SpectralMatrix(profile)
    evaluator = EvansEvaluator(system, *lengths, reference=10.0, polar=False)
    lam = 1.5 + 2.0j
    # continue the bases below the real axis instead of reflecting
    bases = tuple(kato_basis([10.0, np.conj(lam)], side, system, initial=initial_basis(10.0, side, system))[-1]
                  for side in ('minus', 'plus'))
    direct = evans_exterior(np.conj(lam), system, bases, *lengths)
    expected = np.conj(evaluator.sample(lam).d_exterior)
    assert abs(direct - expected) <= 1e-10 * abs(expected)
    assert evaluator.sample(np.conj(lam)).d_exterior == expected


def test_cauchy_riemann_residual_of_analytic_function():
    residual = cauchy_riemann_residual(lambda lam: np.atleast_1d(np.exp(np.sqrt(lam))), 2.0 + 1.0j, 1e-4)
    assert residual <= 1e-6


def test_contour_export(tmp_path):
    contour = evans_contour(lambda lam: lam - 5.0, ContourSpec(radius=10.0, n_points=40))
    path = contour.export(tmp_path / 'contour.txt')
    lines = path.read_text().splitlines()
    assert lines[0] == 're_lambda im_lambda re_D im_D method'
    assert len(lines) == len(contour.samples) + 1


@pytest.mark.slow
def test_backends_agree_on_profile(moderate_profile):
    profile, lengths = prepare_profile(moderate_profile.params, 10.0, moderate_profile)
    adjoint = EvansEvaluator(SpectralMatrix(profile), *lengths, reference=10.0, polar=True)
    wedge = EvansEvaluator(SpectralMatrix(profile), *lengths, reference=10.0, polar=False, pairing='wedge')
    for lam in (10.0, 4.0 + 6.0j, 0.5j):
        sample = adjoint.sample(lam)
        assert abs(sample.d_polar - sample.d_exterior) <= 1e-4 * abs(sample.d_exterior)
        assert abs(wedge.sample(lam).d_exterior - sample.d_exterior) <= 1e-4 * abs(sample.d_exterior)
    assert cauchy_riemann_residual(adjoint, 3.0 + 2.0j, 1e-3) <= 1e-3


@pytest.mark.slow
def test_moderate_shock_is_stable():
    report = stability_verdict(MODERATE, radius_policy=10.0, n_points=120)
    assert report.winding == 0
    assert report.exit_code == 0
    assert report.max_arg_step <= math.pi / 8.0
    assert report.method_agreement <= 1e-4
    assert report.radius_used == 10.0


@pytest.mark.slow
def test_strong_shock_is_stable_with_practical_radius(strong_params, monkeypatch):
    import shock_evans.evans as evans

    radii = []

    def recording_prepare(params, radius, profile=None):
        radii.append(radius)
        return prepare_profile(params, radius, profile)

    monkeypatch.setattr(evans, 'prepare_profile', recording_prepare)
    report = stability_verdict(strong_params, radius_policy='practical', n_points=120, polar=False)
    assert report.winding == 0
    assert report.radius_used <= report.tracking.Lambda_star
    assert math.isnan(report.method_agreement)
    # the radius search runs on lengths sized for Lambda*, the contour on lengths for the radius it uses
    assert radii == [report.tracking.Lambda_star, report.radius_used]


@pytest.mark.slow
def test_strong_shock_continuity(strong_params):
    assert strong_shock_deviation(strong_params, radius=10.0, offset=1e-3, n_points=120) <= 0.05


@pytest.mark.slow
def test_small_amplitude_flattening():
    params = ModelParams(gruneisen=2.0 / 3.0, nu=1.0)
    ratios = [flattening_ratio(params.with_v_plus(v_plus), radius=10.0, n_points=80) for v_plus in (0.7, 0.8, 0.9)]
    assert ratios[0] > ratios[1] > ratios[2] >= 1.0
