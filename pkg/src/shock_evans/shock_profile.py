# coding=utf-8

"""
Rescaled traveling-wave profile of the viscous shock.

The profile (v, e) solves

    v' = (1/mu) [v(v-1) + Gamma (e - v e-)]
    e' = (v/nu) [-(v-1)^2/2 + (e - e-) + (v-1) Gamma e-]

connecting U- = (1, e-) at -infinity to U+ = (v+, e+) at +infinity, with u = v - 1 recovered from the
integrated mass equation.  U- is an unstable node and U+ a saddle, so the profile is the one-dimensional
stable manifold of U+.

The primary solver is collocation (scipy's solve_bvp) on [-L-, 0] and [0, L+] glued at x = 0, where the
phase condition v(0) = (1+v+)/2 holds; the projective condition at +L+ removes the unstable direction of
U+.  :func:`shoot_profile` integrates that stable manifold backward from U+ as an independent check.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
from scipy.integrate import solve_bvp, solve_ivp
from scipy.interpolate import CubicHermiteSpline

from shock_evans.errors import DomainError, LadderExhaustedError, ProfileSolverError, SplittingError
from shock_evans.gas_model import Endstates, ModelParams, rankine_hugoniot

__docformat__ = 'restructuredtext en'
__all__ = ('ProfileState', 'EquilibriumLinearization', 'ShockProfile', 'ShootingSolution', 'profile_rhs',
           'equilibrium_jacobian', 'decay_rates', 'rule_of_thumb_lengths', 'solve_profile', 'shoot_profile',
           'truncation_lengths', 'lens_bounds')

ArrayLike = Union[float, np.ndarray]

ENDPOINT_TOL = 1e-3
LENGTH_RULE = 17.0
DOMAIN_PAD = 10.0
DOMAIN_GROWTH = 1.5
MAX_DOMAIN_GROWTHS = 4
INITIAL_NODES = 201


def profile_rhs(v: ArrayLike, e: ArrayLike, params: ModelParams,
                e_minus: Optional[float] = None) -> Tuple[ArrayLike, ArrayLike]:
    """
    Right-hand sides of the profile equations.  Works elementwise on arrays.

    :param v: specific volume
    :param e: internal energy
    :param params: parameter point (v_plus is needed only when e_minus is not given)
    :param e_minus: left internal energy, computed from params when omitted
    :return: (dv/dx, de/dx)
    """
    if e_minus is None:
        e_minus = rankine_hugoniot(params).e_minus
    g = params.gruneisen
    dv = (v * (v - 1.0) + g * (e - v * e_minus)) / params.mu
    de = (v / params.nu) * (-(v - 1.0) ** 2 / 2.0 + (e - e_minus) + (v - 1.0) * g * e_minus)
    return dv, de


def _rhs_jacobian(v: np.ndarray, e: np.ndarray, params: ModelParams, e_minus: float) -> np.ndarray:
    """d(v', e')/d(v, e), shape (2, 2) + v.shape."""
    g = params.gruneisen
    bracket = -(v - 1.0) ** 2 / 2.0 + (e - e_minus) + (v - 1.0) * g * e_minus
    return np.array([
        [(2.0 * v - 1.0 - g * e_minus) / params.mu, np.full_like(v, g / params.mu)],
        [bracket / params.nu + (v / params.nu) * (1.0 - v + g * e_minus), v / params.nu],
    ])


def lens_bounds(v: ArrayLike, params: ModelParams, e_minus: float) -> Tuple[ArrayLike, ArrayLike]:
    """
    Energies on the isoclines v' = 0 and e' = 0 at volume v.  Inside the profile's invariant region the
    profile energy lies between them.
    """
    g = params.gruneisen
    on_v_isocline = v * e_minus + v * (1.0 - v) / g
    on_e_isocline = e_minus + (1.0 - v) ** 2 / 2.0 + (1.0 - v) * g * e_minus
    return np.minimum(on_v_isocline, on_e_isocline), np.maximum(on_v_isocline, on_e_isocline)


@dataclass(frozen=True)
class EquilibriumLinearization:
    volume: float
    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix))

    def direction(self, sign: int) -> Tuple[complex, np.ndarray, np.ndarray]:
        """
        The eigenvalue of the requested sign (the slowest one when there are two), its right eigenvector and
        the matching left eigenvector row normalized so that left @ right = 1.

        :param sign: +1 for unstable, -1 for stable
        """
        real = self.eigenvalues.real
        candidates = [index for index in range(2) if sign * real[index] > 0]
        if not candidates:
            raise SplittingError(f"no eigenvalue of sign {sign} at v={self.volume}")
        index = min(candidates, key=lambda i: abs(real[i]))
        left = np.linalg.inv(self.eigenvectors)[index]
        return self.eigenvalues[index], self.eigenvectors[:, index], left


def equilibrium_jacobian(v: float, params: ModelParams) -> EquilibriumLinearization:
    """
    Linearization of the profile equations about U- (v = 1) or U+ (v = v+).

    :param v: 1 or params.v_plus
    :param params: noncharacteristic parameter point
    """
    v_plus = params.require_noncharacteristic()
    if v != 1.0 and v != v_plus:
        raise DomainError(f"equilibria are at v=1 and v=v_plus={v_plus}, got {v}")
    e_minus = rankine_hugoniot(params).e_minus
    g = params.gruneisen
    matrix = np.diag([1.0 / params.mu, v / params.nu]) @ np.array([[2.0 * v - 1.0 - g * e_minus, g],
                                                                   [1.0 - v + g * e_minus, 1.0]])
    eigenvalues, eigenvectors = np.linalg.eig(matrix)
    return EquilibriumLinearization(volume=v, matrix=matrix, eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def decay_rates(params: ModelParams) -> Tuple[float, float]:
    """
    Exponential rates at which the profile approaches its endstates.

    :return: (theta_minus, theta_plus); theta_minus is the slowest unstable rate of the node U-,
             theta_plus the stable rate of the saddle U+
    """
    params.require_noncharacteristic()
    minus = equilibrium_jacobian(1.0, params)
    plus = equilibrium_jacobian(params.v_plus, params)
    unstable = minus.eigenvalues.real[minus.eigenvalues.real > 0]
    stable = plus.eigenvalues.real[plus.eigenvalues.real < 0]
    if unstable.size == 0 or stable.size == 0:
        raise SplittingError(f"endstates are not hyperbolic for {params}")
    return float(unstable.min()), float(np.abs(stable).min())


def rule_of_thumb_lengths(params: ModelParams) -> Tuple[float, float]:
    theta_minus, theta_plus = decay_rates(params)
    return LENGTH_RULE / theta_minus, LENGTH_RULE / theta_plus


@dataclass(frozen=True)
class ProfileState:
    v: ArrayLike
    u: ArrayLike
    e: ArrayLike
    v_x: ArrayLike
    e_x: ArrayLike
    u_xx: ArrayLike

    @property
    def u_x(self) -> ArrayLike:
        return self.v_x


@dataclass(frozen=True)
class ShockProfile:
    params: ModelParams
    endstates: Endstates
    L_minus: float
    L_plus: float
    mesh: np.ndarray
    values: np.ndarray
    theta_minus: float
    theta_plus: float
    iterations: int = 0
    _spline: CubicHermiteSpline = field(default=None, repr=False, compare=False)

    @classmethod
    def from_mesh(cls, params: ModelParams, endstates: Endstates, mesh: np.ndarray, values: np.ndarray,
                  theta_minus: float, theta_plus: float, iterations: int = 0) -> 'ShockProfile':
        """
        :param mesh: increasing abscissae from -L_minus to L_plus
        :param values: (v, e) at the mesh, shape (2, n)
        """
        slopes = np.array(profile_rhs(values[0], values[1], params, endstates.e_minus))
        spline = CubicHermiteSpline(mesh, values.T, slopes.T, axis=0)
        return cls(params=params, endstates=endstates, L_minus=float(-mesh[0]), L_plus=float(mesh[-1]),
                   mesh=mesh, values=values, theta_minus=theta_minus, theta_plus=theta_plus,
                   iterations=iterations, _spline=spline)

    def contains(self, x: ArrayLike) -> bool:
        x = np.asarray(x)
        slack = 1e-9 * max(self.L_minus, self.L_plus)
        return bool(np.all(x >= -self.L_minus - slack) and np.all(x <= self.L_plus + slack))

    def state(self, x: ArrayLike) -> ProfileState:
        """
        Dense evaluation.  Derivatives come from the profile equations, never from differencing.

        :param x: abscissa or array of abscissae inside [-L_minus, L_plus]
        """
        if not self.contains(x):
            raise DomainError(f"x outside the profile domain [{-self.L_minus}, {self.L_plus}]")
        ve = self._spline(x)
        v, e = ve[..., 0], ve[..., 1]
        g = self.params.gruneisen
        e_minus = self.endstates.e_minus
        v_x, e_x = profile_rhs(v, e, self.params, e_minus)
        u_xx = ((2.0 * v - 1.0 - g * e_minus) * v_x + g * e_x) / self.params.mu
        return ProfileState(v=v, u=v - 1.0, e=e, v_x=v_x, e_x=e_x, u_xx=u_xx)

    def endpoint_errors(self) -> Tuple[float, float]:
        left = np.abs(self.values[:, 0] - np.array(self.endstates.minus)).max()
        right = np.abs(self.values[:, -1] - np.array(self.endstates.plus)).max()
        return float(left), float(right)

    def midpoint_residual(self) -> float:
        """Sup norm of the profile-equation residual of the dense interpolant at mesh midpoints."""
        midpoints = 0.5 * (self.mesh[1:] + self.mesh[:-1])
        derivative = self._spline(midpoints, 1)
        ve = self._spline(midpoints)
        rhs = np.array(profile_rhs(ve[:, 0], ve[:, 1], self.params, self.endstates.e_minus)).T
        return float(np.abs(derivative - rhs).max())

    def refined_mesh(self, factor: int = 4) -> np.ndarray:
        """The mesh with factor-1 equally spaced points inserted in every interval."""
        fractions = np.arange(factor) / factor
        steps = np.diff(self.mesh)
        inner = (self.mesh[:-1, None] + steps[:, None] * fractions[None, :]).ravel()
        return np.append(inner, self.mesh[-1])

    def export(self, path: Union[str, Path]) -> Path:
        """Columnar text: x, v, u, e, v_x, e_x, u_xx."""
        path = Path(path)
        s = self.state(self.mesh)
        p = self.params
        header = (f"gruneisen={p.gruneisen:.17g} nu={p.nu:.17g} mu={p.mu:.17g} v_plus={p.v_plus:.17g}\n"
                  "x v u e v_x e_x u_xx")
        np.savetxt(path, np.column_stack([self.mesh, s.v, s.u, s.e, s.v_x, s.e_x, s.u_xx]),
                   header=header, fmt='%.17g')
        return path


def _initial_guess(s: np.ndarray, params: ModelParams, endstates: Endstates, theta: Tuple[float, float],
                   lengths: Tuple[float, float]) -> np.ndarray:
    """tanh profile in v with e on the v' = 0 isocline, which passes through both endstates."""
    v_plus = endstates.v_plus

    def guess(x, rate):
        v = v_plus + (1.0 - v_plus) * (1.0 - np.tanh(rate * x)) / 2.0
        e = v * endstates.e_minus + v * (1.0 - v) / params.gruneisen
        return v, e

    v_left, e_left = guess(-lengths[0] * (1.0 - s), theta[0] / 2.0)
    v_right, e_right = guess(lengths[1] * s, theta[1] / 2.0)
    return np.vstack([v_left, e_left, v_right, e_right])


def _collocate(params: ModelParams, endstates: Endstates, theta: Tuple[float, float],
               lengths: Tuple[float, float], tol: float, max_nodes: int,
               guess: Optional[np.ndarray] = None) -> ShockProfile:
    e_minus = endstates.e_minus
    L_minus, L_plus = lengths
    v_mid = (1.0 + endstates.v_plus) / 2.0
    u_plus = np.array(endstates.plus)
    _, _, unstable_left = equilibrium_jacobian(endstates.v_plus, params).direction(+1)
    unstable_left = unstable_left.real

    def fun(s, y):
        dv_left, de_left = profile_rhs(y[0], y[1], params, e_minus)
        dv_right, de_right = profile_rhs(y[2], y[3], params, e_minus)
        return np.vstack([L_minus * dv_left, L_minus * de_left, L_plus * dv_right, L_plus * de_right])

    def fun_jac(s, y):
        jac = np.zeros((4, 4, s.size))
        jac[0:2, 0:2] = L_minus * _rhs_jacobian(y[0], y[1], params, e_minus)
        jac[2:4, 2:4] = L_plus * _rhs_jacobian(y[2], y[3], params, e_minus)
        return jac

    def bc(ya, yb):
        return np.array([yb[0] - ya[2],
                         yb[1] - ya[3],
                         ya[2] - v_mid,
                         unstable_left @ (yb[2:4] - u_plus)])

    s = np.linspace(0.0, 1.0, INITIAL_NODES)
    if guess is None:
        guess = _initial_guess(s, params, endstates, theta, lengths)
    result = solve_bvp(fun, bc, s, guess, fun_jac=fun_jac, tol=tol, max_nodes=max_nodes, bc_tol=1e-10)
    if not result.success:
        raise ProfileSolverError(f"collocation failed for {params}: {result.message}",
                                 trace=[('niter', result.niter), ('nodes', result.x.size),
                                        ('max_rms_residual', float(np.max(result.rms_residuals)))])
    mesh = np.concatenate([-L_minus * (1.0 - result.x), L_plus * result.x[1:]])
    values = np.hstack([result.y[0:2], result.y[2:4, 1:]])
    logging.debug(f"collocation converged in {result.niter} iterations on {mesh.size} nodes")
    return ShockProfile.from_mesh(params, endstates, mesh, values, theta[0], theta[1], iterations=result.niter)


def solve_profile(params: ModelParams, tol: float = 1e-7, domain: Optional[Tuple[float, float]] = None,
                  max_nodes: int = 100000) -> ShockProfile:
    """
    Solve the profile by collocation.  The domain starts at (17/theta + 10) on each side unless given and
    grows by half whenever an endpoint misses its endstate by more than 1e-3.

    :param params: parameter point with v* <= v_plus < 1
    :param tol: collocation residual tolerance
    :param domain: optional (L_minus, L_plus)
    :param max_nodes: collocation node budget
    :return: the solved profile
    """
    params.require_noncharacteristic()
    endstates = rankine_hugoniot(params)
    theta = decay_rates(params)
    if domain is None:
        domain = (LENGTH_RULE / theta[0] + DOMAIN_PAD, LENGTH_RULE / theta[1] + DOMAIN_PAD)
    lengths = tuple(float(length) for length in domain)

    for attempt in range(MAX_DOMAIN_GROWTHS + 1):
        try:
            profile = _collocate(params, endstates, theta, lengths, tol, max_nodes)
        except ProfileSolverError as ex:
            logging.warning(f"{ex}; retrying from the shooting solution")
            shot = shoot_profile(params)
            s = np.linspace(0.0, 1.0, INITIAL_NODES)
            left = shot(np.maximum(-lengths[0] * (1.0 - s), shot.x_min))
            right = shot(np.minimum(lengths[1] * s, shot.x_max))
            profile = _collocate(params, endstates, theta, lengths, tol, max_nodes, guess=np.vstack([left, right]))
        errors = profile.endpoint_errors()
        if max(errors) <= ENDPOINT_TOL:
            return profile
        lengths = tuple(length * DOMAIN_GROWTH if error > ENDPOINT_TOL else length
                        for length, error in zip(lengths, errors))
        logging.info(f"profile endpoint errors {errors} exceed {ENDPOINT_TOL}; growing domain to {lengths}")
    raise ProfileSolverError(f"profile endpoints did not reach their endstates for {params}",
                             trace=[('domain', lengths), ('endpoint_errors', errors)])


@dataclass(frozen=True)
class ShootingSolution:
    """Phase-aligned shooting profile; call with x to get (v, e)."""
    x_min: float
    x_max: float
    landing_error: float
    _solution: object = field(repr=False, compare=False)
    _shift: float = 0.0

    def __call__(self, x: ArrayLike) -> np.ndarray:
        return self._solution(np.asarray(x) + self._shift)


def shoot_profile(params: ModelParams, delta: float = 1e-8) -> ShootingSolution:
    """
    Integrate backward from U+ + delta r, with r the stable eigenvector of the saddle U+ pointing toward
    larger v, until the orbit settles on U-.  The abscissa is shifted so v(0) = (1+v+)/2.
    """
    params.require_noncharacteristic()
    endstates = rankine_hugoniot(params)
    theta_minus, theta_plus = decay_rates(params)
    _, direction, _ = equilibrium_jacobian(endstates.v_plus, params).direction(-1)
    direction = direction.real / np.linalg.norm(direction.real)
    if direction[0] < 0:
        direction = -direction
    v_mid = (1.0 + endstates.v_plus) / 2.0
    span = 25.0 / theta_plus + 25.0 / theta_minus + 20.0

    def rhs(x, y):
        return np.array(profile_rhs(y[0], y[1], params, endstates.e_minus))

    def midpoint(x, y):
        return y[0] - v_mid

    start = np.array(endstates.plus) + delta * direction
    result = solve_ivp(rhs, (0.0, -span), start, method='DOP853', rtol=1e-12, atol=1e-14,
                       events=midpoint, dense_output=True)
    if not result.success or result.t_events[0].size == 0:
        raise ProfileSolverError(f"shooting failed for {params}: {result.message}")
    shift = float(result.t_events[0][0])
    landing = float(np.abs(result.y[:, -1] - np.array(endstates.minus)).max())
    return ShootingSolution(x_min=-span - shift, x_max=-shift, landing_error=landing,
                            _solution=result.sol, _shift=shift)


def truncation_lengths(params: ModelParams, profile: ShockProfile, Lambda: float, c_star: float = 100.0,
                       k: int = 2, tol: float = 1e-3, step: float = 5.0,
                       start: Optional[float] = None) -> Tuple[float, float]:
    """
    Smallest lengths on the ladder start, start+step, ... at which the coefficient matrix is close enough to
    its limit for the contour radius Lambda:

        |A(x,0) - A(0)| + |A(x,Lambda) - A(Lambda) - (A(x,0) - A(0))| <= theta tol / (c_star k)

    :param Lambda: contour radius
    :param start: first ladder rung, default step
    :return: (L_minus, L_plus)
    """
    from shock_evans.eigensystem import SpectralMatrix

    system = SpectralMatrix(profile)
    start = step if start is None else start
    lengths = []
    for side, theta, limit in (('minus', profile.theta_minus, profile.L_minus),
                               ('plus', profile.theta_plus, profile.L_plus)):
        sign = -1.0 if side == 'minus' else 1.0
        threshold = theta * tol / (c_star * k)
        a0_end, a1_end = system.limit_parts(side)
        length = start
        chosen = None
        while length <= limit + 1e-9:
            a0, a1 = system.parts(sign * length)
            lhs = np.linalg.norm(a0 - a0_end, 2) + Lambda * np.linalg.norm(a1 - a1_end, 2)
            if lhs <= threshold:
                chosen = length
                break
            length += step
        if chosen is None:
            raise LadderExhaustedError(f"no {side} truncation length up to {limit:.1f} meets {threshold:.3g}; "
                                       f"re-solve the profile on a larger domain")
        lengths.append(chosen)
    logging.info(f"truncation lengths L-={lengths[0]} L+={lengths[1]} for radius {Lambda}")
    return lengths[0], lengths[1]
