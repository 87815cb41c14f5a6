# coding=utf-8

"""
Evans function along contours and the winding-number stability count.

D(lambda) pairs the manifold of solutions decaying at -infinity (unstable subspace of A-, dimension 2)
with the one decaying at +infinity (stable subspace of A+, dimension 3) at x = 0.  The bases at the
endstates vary analytically in lambda through Kato's ODE V' = (P'P - PP')V, initialized with a real
orthonormal basis at a real reference point, so D(conj lambda) = conj D(lambda) and D is real on the
real axis.

Two backends compute D:

* exterior products: the wedge of the decaying solutions evolves under the lifted matrix A^(k),
  rescaled by the endstate growth rate.  The +infinity side uses the adjoint 2-vector form by default.
* polar coordinates: an orthonormal frame evolves by continuous orthogonalization and a scalar radius
  carries the determinant.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp
from scipy.linalg import orth

from shock_evans.eigensystem import (SUBSPACE_DIMENSIONS, SYSTEM_SIZE, SpectralMatrix, SubspaceBasis,
                                     complement_dual, endstate_splitting, hodge_pair, kato_generator, lift,
                                     wedge)
from shock_evans.errors import (IntegrationError, LadderExhaustedError, SplittingError, UnresolvedWindingError,
                                ZeroOnContourError)
from shock_evans.gas_model import Endstates, ModelParams, mach_number

__docformat__ = 'restructuredtext en'
__all__ = ('ContourSpec', 'EvansSample', 'EvansContour', 'EvansEvaluator', 'StabilityReport', 'initial_basis',
           'kato_basis', 'evans_exterior', 'evans_polar', 'evans_contour', 'winding_number', 'stability_verdict',
           'prepare_profile', 'strong_shock_deviation', 'flattening_ratio', 'cauchy_riemann_residual')

RTOL = 1e-8
ATOL = 1e-6
MAX_ARG_STEP = math.pi / 8.0
MAX_REFINEMENT_DEPTH = 8
ZERO_TOL = 1e-12
KATO_RTOL = 1e-10
KATO_ATOL = 1e-12
ORTHONORMALITY_TOL = 1e-8
POLAR_CHUNK = 10.0
PROFILE_REGROWTHS = 3

EXIT_STABLE = 0
EXIT_UNSTABLE = 10


@dataclass(frozen=True)
class ContourSpec:
    """
    Counterclockwise boundary of {Re lambda >= 0, |lambda| <= radius}.  The upper half is parametrized by
    t in [0, 2): t <= 1 walks the arc from radius to i radius at uniform angle, t > 1 walks down the imaginary
    axis with modulus radius (2 - t)^2, quadratic toward the origin.  The lower half is the mirror image.
    """
    radius: float
    n_points: int = 180

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"contour radius must be positive, got {self.radius}")
        if self.n_points < 8:
            raise ValueError(f"a contour needs at least 8 points, got {self.n_points}")

    @property
    def leg_points(self) -> int:
        return max(self.n_points // 4, 2)

    @property
    def origin_parameter(self) -> float:
        return 2.0

    def point(self, t: float) -> complex:
        if t <= 1.0:
            return complex(self.radius * np.exp(0.5j * np.pi * t)) if 0.0 < t < 1.0 else \
                (complex(self.radius, 0.0) if t == 0.0 else complex(0.0, self.radius))
        return complex(0.0, self.radius * (2.0 - t) ** 2)

    def upper_parameters(self) -> np.ndarray:
        n = self.leg_points
        arc = np.arange(n + 1) / n
        axis = 1.0 + np.arange(1, n) / n
        return np.concatenate([arc, axis])

    def points(self) -> np.ndarray:
        """The closed contour, first and last points both at lambda = radius."""
        upper = np.array([self.point(t) for t in self.upper_parameters()])
        return np.concatenate([upper, np.conj(upper[::-1])])

    @property
    def min_modulus(self) -> float:
        return self.radius / self.leg_points ** 2


@dataclass(frozen=True)
class EvansSample:
    lam: complex
    d_exterior: complex
    d_polar: Optional[complex] = None

    def conjugate(self) -> 'EvansSample':
        polar = None if self.d_polar is None else self.d_polar.conjugate()
        return EvansSample(self.lam.conjugate(), self.d_exterior.conjugate(), polar)


@dataclass(frozen=True)
class EvansContour:
    spec: ContourSpec
    samples: Tuple[EvansSample, ...]
    winding: int
    max_arg_step: float
    refinement_depth: int

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([sample.lam for sample in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([sample.d_exterior for sample in self.samples])

    @property
    def polar_values(self) -> Optional[np.ndarray]:
        if any(sample.d_polar is None for sample in self.samples):
            return None
        return np.array([sample.d_polar for sample in self.samples])

    @property
    def method_agreement(self) -> float:
        """Largest relative difference between the exterior and polar backends (nan without polar)."""
        polar = self.polar_values
        if polar is None:
            return math.nan
        values = self.values
        return float(np.max(np.abs(values - polar) / np.abs(values)))

    def normalized(self) -> np.ndarray:
        """D divided by its value at the largest real contour point."""
        return self.values / self.values[0]

    def export(self, path: Union[str, Path]) -> Path:
        """Columnar text: Re lambda, Im lambda, Re D, Im D, method."""
        rows = []
        for sample in self.samples:
            rows.append((sample.lam.real, sample.lam.imag, sample.d_exterior.real, sample.d_exterior.imag,
                         'exterior'))
            if sample.d_polar is not None:
                rows.append((sample.lam.real, sample.lam.imag, sample.d_polar.real, sample.d_polar.imag, 'polar'))
        frame = pd.DataFrame(rows, columns=['re_lambda', 'im_lambda', 're_D', 'im_D', 'method'])
        path = Path(path)
        frame.to_csv(path, sep=' ', index=False, float_format='%.17g')
        return path


def _fix_phase(vectors: np.ndarray) -> np.ndarray:
    """Scale each column so its largest entry is real positive."""
    vectors = np.array(vectors, dtype=complex)
    for column in range(vectors.shape[1]):
        pivot = vectors[np.argmax(np.abs(vectors[:, column])), column]
        vectors[:, column] *= abs(pivot) / pivot
    return vectors


def initial_basis(lam: complex, side: str, source) -> SubspaceBasis:
    """
    Orthonormal basis of the endstate subspace at lambda, real when lambda is real.
    """
    split = endstate_splitting(lam, side, source)
    if complex(lam).imag == 0.0:
        vectors = orth(split.projector.real)
        if vectors.shape[1] != SUBSPACE_DIMENSIONS[side]:
            raise SplittingError(f"{side} projector at {lam} has rank {vectors.shape[1]}")
        for column in range(vectors.shape[1]):
            if vectors[np.argmax(np.abs(vectors[:, column])), column] < 0:
                vectors[:, column] = -vectors[:, column]
        return split.with_vectors(vectors.astype(complex))
    return split.with_vectors(_fix_phase(split.vectors))


def _kato_segment(basis: SubspaceBasis, target: complex, side: str, source) -> SubspaceBasis:
    """
    Integrate V' = (P'P - PP')V along the chord from basis.lam to target, then project onto the subspace
    at target.
    """
    start = basis.lam
    chord = complex(target) - start
    real_path = start.imag == 0.0 and chord.imag == 0.0
    shape = basis.vectors.shape

    def rhs(tau, y):
        generator = kato_generator(start + tau * chord, side, source)
        if real_path:
            generator = generator.real
        return chord * (generator @ y.reshape(shape)).ravel()

    result = solve_ivp(rhs, (0.0, 1.0), np.asarray(basis.vectors, dtype=complex).ravel(), method='DOP853',
                       rtol=KATO_RTOL, atol=KATO_ATOL, t_eval=[1.0])
    if not result.success:
        raise IntegrationError(f"Kato transport from {start} to {target} failed: {result.message}",
                               trace=[('side', side), ('nfev', result.nfev)])
    final = endstate_splitting(target, side, source)
    return final.with_vectors(final.projector @ result.y[:, -1].reshape(shape))


def kato_basis(lambda_path: Sequence[complex], side: str, source,
               initial: Optional[SubspaceBasis] = None) -> List[SubspaceBasis]:
    """
    Analytic bases of the endstate subspace along an ordered lambda path.

    :param lambda_path: ordered points in Re lambda >= 0, lambda != 0
    :param side: 'minus' (unstable subspace of A-) or 'plus' (stable subspace of A+)
    :param source: ModelParams or a system with ``limit_parts(side)``
    :param initial: basis at the first path point; orthonormal (real on the real axis) when omitted
    :return: one SubspaceBasis per path point
    """
    path = [complex(lam) for lam in lambda_path]
    current = initial if initial is not None else initial_basis(path[0], side, source)
    bases = [current]
    for target in path[1:]:
        current = _kato_segment(current, target, side, source)
        bases.append(current)
    return bases


def _integrate(rhs: Callable, span: Tuple[float, float], start: np.ndarray, rtol: float, atol: float,
               label: str) -> np.ndarray:
    result = solve_ivp(rhs, span, np.asarray(start, dtype=complex), method='RK45', rtol=rtol, atol=atol,
                       t_eval=[span[1]])
    if not result.success:
        raise IntegrationError(f"{label} integration failed: {result.message}",
                               trace=[('x_reached', float(result.t[-1]) if result.t.size else span[0]),
                                      ('nfev', result.nfev), ('span', span)])
    return result.y[:, -1]


def _growth(basis: SubspaceBasis) -> complex:
    growth = basis.growth
    return complex(growth.real, 0.0) if basis.lam.imag == 0.0 else growth


def evans_exterior(lam: complex, system, bases: Tuple[SubspaceBasis, SubspaceBasis], L_minus: float,
                   L_plus: float, pairing: str = 'adjoint', rtol: float = RTOL, atol: float = ATOL) -> complex:
    """
    Evans function by exterior products.

    :param system: SpectralMatrix-like object with ``matrix(x, lam)``
    :param bases: (unstable basis at -infinity, stable basis at +infinity) at lambda
    :param pairing: 'adjoint' pairs the dual 2-vector of the stable side; 'wedge' evolves the 3-vector
    :return: D(lambda) = W+ ^ W- at x = 0
    """
    minus, plus = bases
    growth_minus, growth_plus = _growth(minus), _growth(plus)

    def unstable_rhs(x, y):
        return lift(system.matrix(x, lam), 2) @ y - growth_minus * y

    w_minus = _integrate(unstable_rhs, (-L_minus, 0.0), wedge(minus.vectors), rtol, atol, f"unstable wedge at {lam}")

    if pairing == 'adjoint':
        def adjoint_rhs(x, y):
            a = system.matrix(x, lam)
            return (np.trace(a) - growth_plus) * y - lift(a, 2).T @ y

        start = complement_dual(wedge(plus.vectors))
        w_plus = _integrate(adjoint_rhs, (L_plus, 0.0), start, rtol, atol, f"adjoint stable wedge at {lam}")
        return complex(w_plus @ w_minus)
    if pairing == 'wedge':
        def stable_rhs(x, y):
            return lift(system.matrix(x, lam), 3) @ y - growth_plus * y

        w_plus = _integrate(stable_rhs, (L_plus, 0.0), wedge(plus.vectors), rtol, atol, f"stable wedge at {lam}")
        return hodge_pair(w_plus, w_minus)
    raise ValueError(f"pairing must be 'adjoint' or 'wedge', got {pairing}")


def _polar_side(lam: complex, system, basis: SubspaceBasis, x_start: float, rtol: float,
                atol: float) -> Tuple[np.ndarray, complex]:
    """
    Omega' = (I - Omega Omega*) A Omega, (log gamma)' = tr(Omega* A Omega) - growth, integrated from x_start
    to 0 in chunks with re-orthonormalization when the frame drifts.
    """
    k = basis.dimension
    growth = _growth(basis)
    frame, triangle = np.linalg.qr(basis.vectors)
    log_gamma = complex(np.log(complex(np.linalg.det(triangle))))

    def rhs(x, y):
        omega = y[:-1].reshape(SYSTEM_SIZE, k)
        a_omega = system.matrix(x, lam) @ omega
        small = omega.conj().T @ a_omega
        return np.concatenate([(a_omega - omega @ small).ravel(), [np.trace(small) - growth]])

    chunks = max(int(math.ceil(abs(x_start) / POLAR_CHUNK)), 1)
    edges = np.linspace(x_start, 0.0, chunks + 1)
    for a, b in zip(edges[:-1], edges[1:]):
        y = _integrate(rhs, (a, b), np.concatenate([frame.ravel(), [log_gamma]]), rtol, atol,
                       f"polar frame at {lam}")
        frame = y[:-1].reshape(SYSTEM_SIZE, k)
        log_gamma = complex(y[-1])
        drift = np.abs(frame.conj().T @ frame - np.eye(k)).max()
        if drift > ORTHONORMALITY_TOL:
            logging.debug(f"re-orthonormalizing polar frame at lambda={lam}, x={b:.3g}, drift={drift:.2e}")
            frame, triangle = np.linalg.qr(frame)
            log_gamma += complex(np.log(complex(np.linalg.det(triangle))))
            if np.abs(frame.conj().T @ frame - np.eye(k)).max() > ORTHONORMALITY_TOL:
                raise IntegrationError(f"polar frame lost orthonormality at lambda={lam}, x={b}")
    return frame, log_gamma


def evans_polar(lam: complex, system, bases: Tuple[SubspaceBasis, SubspaceBasis], L_minus: float, L_plus: float,
                rtol: float = RTOL, atol: float = ATOL) -> complex:
    """
    Evans function by polar coordinates: gamma+ gamma- det(Omega+, Omega-) at x = 0.
    """
    minus, plus = bases
    frame_minus, log_minus = _polar_side(lam, system, minus, -L_minus, rtol, atol)
    frame_plus, log_plus = _polar_side(lam, system, plus, L_plus, rtol, atol)
    return complex(np.exp(log_plus + log_minus) * np.linalg.det(np.hstack([frame_plus, frame_minus])))


class EvansEvaluator(object):
    """
    D(lambda) with Kato bases continued from a real reference point.  Bases are cached and every new point
    continues from the nearest cached one along a chord in Re lambda >= 0; points below the real axis are
    reflected.

    Usage::

        evaluator = EvansEvaluator(SpectralMatrix(profile), L_minus, L_plus, reference=10.0)
        d = evaluator([10.0, 10j, 1j])
    """

    def __init__(self, system, L_minus: float, L_plus: float, reference: Optional[float] = None,
                 pairing: str = 'adjoint', polar: bool = True, rtol: float = RTOL, atol: float = ATOL):
        self.system = system
        self.L_minus = L_minus
        self.L_plus = L_plus
        self.reference = reference
        self.pairing = pairing
        self.polar = polar
        self.rtol = rtol
        self.atol = atol
        self._bases: Dict[complex, Tuple[SubspaceBasis, SubspaceBasis]] = {}
        self._samples: Dict[complex, EvansSample] = {}

    def bases(self, lam: complex) -> Tuple[SubspaceBasis, SubspaceBasis]:
        lam = complex(lam)
        if lam in self._bases:
            return self._bases[lam]
        if not self._bases:
            if self.reference is None:
                self.reference = abs(lam)
            reference = complex(self.reference)
            self._bases[reference] = (initial_basis(reference, 'minus', self.system),
                                      initial_basis(reference, 'plus', self.system))
            if lam == reference:
                return self._bases[reference]
        nearest = min(self._bases, key=lambda known: abs(known - lam))
        minus, plus = self._bases[nearest]
        pair = (kato_basis([nearest, lam], 'minus', self.system, initial=minus)[-1],
                kato_basis([nearest, lam], 'plus', self.system, initial=plus)[-1])
        self._bases[lam] = pair
        return pair

    def sample(self, lam: complex) -> EvansSample:
        lam = complex(lam)
        if lam.imag < 0.0:
            return self.sample(lam.conjugate()).conjugate()
        if lam in self._samples:
            return self._samples[lam]
        bases = self.bases(lam)
        d_exterior = evans_exterior(lam, self.system, bases, self.L_minus, self.L_plus, self.pairing,
                                    self.rtol, self.atol)
        d_polar = None
        if self.polar:
            d_polar = evans_polar(lam, self.system, bases, self.L_minus, self.L_plus, self.rtol, self.atol)
        sample = EvansSample(lam, d_exterior, d_polar)
        self._samples[lam] = sample
        return sample

    def __call__(self, lambdas) -> np.ndarray:
        return np.array([self.sample(lam).d_exterior for lam in np.atleast_1d(lambdas)])


def _sampler(evaluator) -> Callable[[complex], EvansSample]:
    if hasattr(evaluator, 'sample'):
        return evaluator.sample

    def sample(lam: complex) -> EvansSample:
        if lam.imag < 0.0:
            return sample(lam.conjugate()).conjugate()
        return EvansSample(lam, complex(np.asarray(evaluator(lam)).ravel()[0]))
    return sample


def _check_nonzero(values: np.ndarray, lambdas: np.ndarray) -> None:
    scale = max(float(np.abs(values).max()), 1.0)
    small = np.abs(values) < ZERO_TOL * scale
    if np.any(small):
        raise ZeroOnContourError(f"Evans function vanishes on the contour near lambda={lambdas[np.argmax(small)]}")


def _arg_step(a: complex, b: complex) -> float:
    return abs(float(np.angle(b / a)))


def evans_contour(evaluator, spec: ContourSpec, max_arg_step: float = MAX_ARG_STEP,
                  max_depth: int = MAX_REFINEMENT_DEPTH) -> EvansContour:
    """
    Sample D on the closed contour, bisecting any segment whose argument step exceeds max_arg_step.

    :param evaluator: an EvansEvaluator, or any callable lambda -> D with D(conj lambda) = conj D(lambda)
    """
    sample = _sampler(evaluator)
    entries = [[t, 0, sample(spec.point(t))] for t in spec.upper_parameters()]
    deepest = 0
    changed = True
    while changed:
        changed = False
        index = 0
        while index < len(entries) - 1:
            left, right = entries[index], entries[index + 1]
            _check_nonzero(np.array([left[2].d_exterior, right[2].d_exterior]), np.array([left[2].lam, right[2].lam]))
            if _arg_step(left[2].d_exterior, right[2].d_exterior) > max_arg_step:
                depth = max(left[1], right[1]) + 1
                if depth > max_depth:
                    raise UnresolvedWindingError(f"argument step still above {max_arg_step:.3f} between "
                                                 f"{left[2].lam} and {right[2].lam} after {max_depth} bisections")
                t = 0.5 * (left[0] + right[0])
                entries.insert(index + 1, [t, depth, sample(spec.point(t))])
                deepest = max(deepest, depth)
                changed = True
            else:
                index += 1
        # segment through the origin joins D(i r) to its conjugate
        last = entries[-1]
        if _arg_step(last[2].d_exterior, last[2].d_exterior.conjugate()) > max_arg_step:
            depth = last[1] + 1
            if depth > max_depth:
                raise UnresolvedWindingError(f"argument step across the origin unresolved after {max_depth} bisections")
            t = 0.5 * (last[0] + spec.origin_parameter)
            entries.append([t, depth, sample(spec.point(t))])
            deepest = max(deepest, depth)
            changed = True
        if changed:
            logging.debug(f"contour refined to {len(entries)} upper points (depth {deepest})")

    upper = [entry[2] for entry in entries]
    samples = tuple(upper + [s.conjugate() for s in reversed(upper[1:])] + [upper[0]])
    values = np.array([s.d_exterior for s in samples])
    _check_nonzero(values, np.array([s.lam for s in samples]))
    steps = np.abs(np.angle(values[1:] / values[:-1]))
    contour = EvansContour(spec=spec, samples=samples, winding=0, max_arg_step=float(steps.max()),
                           refinement_depth=deepest)
    return EvansContour(spec=spec, samples=samples, winding=winding_number(contour),
                        max_arg_step=contour.max_arg_step, refinement_depth=deepest)


def winding_number(contour: EvansContour, max_arg_step: float = MAX_ARG_STEP) -> int:
    """
    (1/2 pi) times the total argument increment of D around the closed contour.

    :raises ZeroOnContourError: D vanishes (relative to its scale) at a sample
    :raises UnresolvedWindingError: a step exceeds max_arg_step
    """
    values = contour.values
    _check_nonzero(values, contour.lambdas)
    steps = np.angle(values[1:] / values[:-1])
    if np.abs(steps).max() > max_arg_step:
        raise UnresolvedWindingError(f"argument step {np.abs(steps).max():.3f} exceeds {max_arg_step:.3f}")
    return int(round(steps.sum() / (2.0 * math.pi)))


def cauchy_riemann_residual(evaluator, center: complex, step: float) -> float:
    """
    Relative mismatch of the real- and imaginary-direction centered differences of D at center.
    """
    center = complex(center)
    d_real = (evaluator(center + step)[0] - evaluator(center - step)[0]) / (2.0 * step)
    d_imag = (evaluator(center + 1j * step)[0] - evaluator(center - 1j * step)[0]) / (2j * step)
    return float(abs(d_real - d_imag) / max(abs(d_real), abs(d_imag)))


def prepare_profile(params: ModelParams, radius: float, profile=None):
    """
    Profile and truncation lengths for a contour radius, re-solving on a larger domain when the truncation
    ladder runs out.

    :return: (profile, (L_minus, L_plus))
    """
    from shock_evans.shock_profile import solve_profile, truncation_lengths

    params = params.normalized()
    profile = profile if profile is not None else solve_profile(params)
    for attempt in range(PROFILE_REGROWTHS + 1):
        try:
            return profile, truncation_lengths(params, profile, radius)
        except LadderExhaustedError as ex:
            if attempt == PROFILE_REGROWTHS:
                raise
            domain = (1.5 * profile.L_minus, 1.5 * profile.L_plus)
            logging.info(f"{ex}; re-solving the profile on {domain}")
            profile = solve_profile(params, domain=domain)


@dataclass(frozen=True)
class StabilityReport:
    params: ModelParams
    endstates: Endstates
    mach: float
    theta_minus: float
    theta_plus: float
    L_minus: float
    L_plus: float
    tracking: object
    practical: object
    approximant: object
    radius_used: float
    contour: EvansContour = field(repr=False)
    wall_ms: float

    @property
    def winding(self) -> int:
        return self.contour.winding

    @property
    def max_arg_step(self) -> float:
        return self.contour.max_arg_step

    @property
    def method_agreement(self) -> float:
        return self.contour.method_agreement

    @property
    def exit_code(self) -> int:
        return EXIT_STABLE if self.winding == 0 else EXIT_UNSTABLE


def stability_verdict(params: ModelParams, radius_policy: Union[str, float] = 'practical', n_points: int = 180,
                      polar: bool = True, hf_lambda_max: float = 100.0) -> StabilityReport:
    """
    Profile, radius, truncation, contour and winding for one parameter point.

    :param radius_policy: 'tracking', 'practical' (tracking radius when the search does not converge),
                          or a fixed radius
    :param n_points: contour points
    :param polar: also run the polar backend for the method-agreement metric
    :param hf_lambda_max: upper end of the real-axis interval for the high-frequency fit
    """
    from shock_evans.freq_bounds import hf_fit, practical_radius, tracking_bound
    from shock_evans.shock_profile import solve_profile

    started = time.perf_counter()
    original = params
    params = params.normalized()
    profile = solve_profile(params)
    tracking = tracking_bound(profile, params)
    practical = None
    approximant = None
    if isinstance(radius_policy, (int, float)) and not isinstance(radius_policy, bool):
        radius = float(radius_policy)
    elif radius_policy == 'tracking':
        radius = tracking.Lambda_star
    elif radius_policy == 'practical':
        lambda_max = min(tracking.Lambda_star, hf_lambda_max)
        # the search may climb to Lambda*
        profile, lengths = prepare_profile(params, tracking.Lambda_star, profile)
        fit_evaluator = EvansEvaluator(SpectralMatrix(profile), *lengths, reference=lambda_max, polar=False)
        approximant = hf_fit(fit_evaluator, lambda_max)
        practical = practical_radius(fit_evaluator, approximant, tracking_radius=tracking.Lambda_star)
        radius = practical.radius if practical.converged else tracking.Lambda_star
    else:
        raise ValueError(f"unknown radius policy {radius_policy!r}")

    profile, (L_minus, L_plus) = prepare_profile(params, radius, profile)
    evaluator = EvansEvaluator(SpectralMatrix(profile), L_minus, L_plus, reference=radius, polar=polar)
    contour = evans_contour(evaluator, ContourSpec(radius, n_points))
    wall_ms = 1000.0 * (time.perf_counter() - started)
    logging.info(f"{original}: radius {radius:.4g}, winding {contour.winding}, "
                 f"max arg step {contour.max_arg_step:.3f}, {wall_ms:.0f} ms")
    return StabilityReport(params=original, endstates=profile.endstates, mach=mach_number(params),
                           theta_minus=profile.theta_minus, theta_plus=profile.theta_plus, L_minus=L_minus,
                           L_plus=L_plus, tracking=tracking, practical=practical, approximant=approximant,
                           radius_used=radius, contour=contour, wall_ms=wall_ms)


def _contour_for(params: ModelParams, radius: float, n_points: int) -> EvansContour:
    profile, lengths = prepare_profile(params, radius)
    evaluator = EvansEvaluator(SpectralMatrix(profile), *lengths, reference=radius, polar=False)
    return evans_contour(evaluator, ContourSpec(radius, n_points))


def strong_shock_deviation(params: ModelParams, radius: float = 10.0, offset: float = 1e-3,
                           n_points: int = 180) -> float:
    """
    sup |D(v* + offset) - D(v*)| / max |D(v*)| over a contour, both normalized at the largest real point.
    """
    limit = _contour_for(params.with_v_plus(params.v_star), radius, n_points)
    nearby = _contour_for(params.with_v_plus(params.v_star + offset), radius, n_points)
    limit_values = limit.normalized()
    nearby_values = nearby.normalized()
    if limit_values.size != nearby_values.size or not np.allclose(limit.lambdas, nearby.lambdas):
        # refinement differs; compare at the shared parameter positions
        positions = np.linspace(0.0, 1.0, limit_values.size)
        source = np.linspace(0.0, 1.0, nearby_values.size)
        nearby_values = (np.interp(positions, source, nearby_values.real)
                         + 1j * np.interp(positions, source, nearby_values.imag))
    return float(np.abs(nearby_values - limit_values).max() / np.abs(limit_values).max())


def flattening_ratio(params: ModelParams, radius: float = 10.0, n_points: int = 180) -> float:
    """max |D| / min |D| over the contour; tends to 1 in the small-amplitude limit."""
    values = np.abs(_contour_for(params, radius, n_points).values)
    return float(values.max() / values.min())
