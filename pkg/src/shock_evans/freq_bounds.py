# coding=utf-8

"""
High-frequency eigenvalue radii.

The rigorous radius comes from tracking: the eigenvalue system is rewritten in the coordinates
Z = (v, u, eps, u', eps') as Z' = B Z, then carried through the chain

    T (block-diagonalize the lambda term), Q (remove the O(1) coupling of the hyperbolic mode),
    V = diag(1, 1, 1, s, s) (balance the parabolic block), S (diagonalize the principal part)

with s = lambda^(1/2), giving X' = (F + calF) X where F = diag(M-, M+) and calF is a Laurent polynomial in
1/s.  The bound is evaluated on the closed forms of calF_0 .. calF_-2 (see :func:`closed_form_matrices`),
which the chain reproduces when the (u', v) entry of B is taken as lambda (f - v).  Eigenvalues with
Re lambda >= 0 are confined to |lambda| <= Lambda* where Lambda* is the fixed point of the antitone map T_map.

The practical radius is the smallest semicircle on which D agrees with its high-frequency limit
C exp(alpha lambda^(1/2)) to a relative tolerance.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Optional, Tuple

import numpy as np
from scipy.integrate import simpson

from shock_evans.eigensystem import SYSTEM_SIZE, coefficients
from shock_evans.errors import DomainError, FitError
from shock_evans.gas_model import ModelParams, rankine_hugoniot

__docformat__ = 'restructuredtext en'
__all__ = ('NORMS', 'BLOCKS', 'LaurentMatrix', 'CoordinateChain', 'TrackingMatrices', 'TrackingBound',
           'HFApproximant', 'PracticalRadius', 'standard_matrix', 'closed_form_matrices', 'tracking_matrices', 'T_map', 'tracking_bound',
           'ricatti_margin', 'compute_alpha', 'hf_fit', 'practical_radius')

NORMS = {'l1': 1, 'l2': 2, 'linf': np.inf}
BLOCKS = ('--', '-+', '+-', '++')
# X- = (X0, X1, X2), X+ = (X3, X4)
_SPLIT = 3
MESH_REFINEMENT = 4
FIXED_POINT_TOL = 1e-6
MAX_ITERATIONS = 200
ALPHA_NODES = 1601


class LaurentMatrix(object):
    """
    Matrix-valued Laurent polynomial sum_p M_p s^p, the coefficients stacked over a mesh as (..., n, n).

    Plain ndarrays mix in as constant (s^0) terms.
    """

    __array_ufunc__ = None

    def __init__(self, coefficients: Mapping[int, np.ndarray]):
        self.coefficients: Dict[int, np.ndarray] = {int(p): np.asarray(c) for p, c in coefficients.items()}

    @classmethod
    def constant(cls, matrix: np.ndarray, power: int = 0) -> 'LaurentMatrix':
        return cls({power: matrix})

    @staticmethod
    def _coerce(other) -> 'LaurentMatrix':
        return other if isinstance(other, LaurentMatrix) else LaurentMatrix({0: np.asarray(other)})

    @property
    def powers(self) -> Tuple[int, ...]:
        return tuple(sorted(self.coefficients))

    def coefficient(self, power: int) -> np.ndarray:
        if power in self.coefficients:
            return self.coefficients[power]
        sample = next(iter(self.coefficients.values()))
        return np.zeros_like(sample)

    def __add__(self, other) -> 'LaurentMatrix':
        other = self._coerce(other)
        result = dict(self.coefficients)
        for power, matrix in other.coefficients.items():
            result[power] = result[power] + matrix if power in result else matrix
        return LaurentMatrix(result)

    __radd__ = __add__

    def __neg__(self) -> 'LaurentMatrix':
        return LaurentMatrix({p: -c for p, c in self.coefficients.items()})

    def __sub__(self, other) -> 'LaurentMatrix':
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> 'LaurentMatrix':
        return self._coerce(other) - self

    def __matmul__(self, other) -> 'LaurentMatrix':
        other = self._coerce(other)
        result: Dict[int, np.ndarray] = {}
        for p, left in self.coefficients.items():
            for q, right in other.coefficients.items():
                product = left @ right
                result[p + q] = result[p + q] + product if p + q in result else product
        return LaurentMatrix(result)

    def __rmatmul__(self, other) -> 'LaurentMatrix':
        return self._coerce(other) @ self

    def __call__(self, s: complex) -> np.ndarray:
        """Evaluate at s = lambda^(1/2)."""
        return sum(c * complex(s) ** p for p, c in self.coefficients.items())

    def trimmed(self) -> 'LaurentMatrix':
        """Drop coefficients that are identically zero."""
        return LaurentMatrix({p: c for p, c in self.coefficients.items() if np.any(c != 0)})

    def principal(self) -> 'LaurentMatrix':
        """Terms with positive powers of s."""
        return LaurentMatrix({p: c for p, c in self.coefficients.items() if p > 0})

    def remainder(self) -> 'LaurentMatrix':
        """Terms with nonpositive powers of s."""
        return LaurentMatrix({p: c for p, c in self.coefficients.items() if p <= 0})


def _eye(shape: Tuple[int, ...], n: int = SYSTEM_SIZE) -> np.ndarray:
    return np.broadcast_to(np.eye(n), shape + (n, n)).copy()


def standard_matrix(state, params: ModelParams, e_minus: Optional[float] = None,
                    coupling_sign: float = 1.0) -> LaurentMatrix:
    """
    B(x, lambda) = lambda B1 + B0 in the coordinates Z = (v, u, eps, u', eps') as a Laurent polynomial in s.

    Z is a lambda-dependent but x-independent recombination of the integrated variables of A, so B and A
    share eigenvalues pointwise.

    :param coupling_sign: +1 gives the (u', v) entry lambda (v - f), the recombination of A.  -1 gives
                          lambda (f - v), the convention the closed-form tracking matrices are built on.
    """
    f, g, h = coefficients(state, params, e_minus)
    v = np.asarray(state.v, dtype=float)
    u_x = np.asarray(state.v_x, dtype=float)
    n = v / params.nu * u_x - np.asarray(state.u_xx, dtype=float)
    gam, nu = params.gruneisen, params.nu
    b1 = np.zeros(v.shape + (5, 5))
    b0 = np.zeros(v.shape + (5, 5))
    b1[..., 0, 0] = -1.0
    b1[..., 3, 0] = coupling_sign * (v - f)
    b1[..., 3, 1] = v
    b1[..., 4, 0] = h
    b1[..., 4, 2] = v / nu
    b0[..., 0, 3] = 1.0
    b0[..., 1, 3] = 1.0
    b0[..., 2, 4] = 1.0
    b0[..., 3, 1] = gam * u_x
    b0[..., 3, 3] = f
    b0[..., 3, 4] = gam
    b0[..., 4, 1] = n
    b0[..., 4, 3] = g - h
    b0[..., 4, 4] = v / nu
    return LaurentMatrix({2: b1, 0: b0})


class CoordinateChain(object):
    """
    The transformations taking B to F + calF, each with its inverse and logarithmic derivative M^-1 M_x.

    Usage::

        chain = CoordinateChain(profile.state(mesh), params)
        chain.tracking_part.coefficient(-1)[..., :3, 3:]
    """

    def __init__(self, state, params: ModelParams, e_minus: Optional[float] = None, coupling_sign: float = 1.0):
        if e_minus is None:
            e_minus = rankine_hugoniot(params).e_minus
        self.params = params
        self.b = standard_matrix(state, params, e_minus, coupling_sign)
        f, g, h = coefficients(state, params, e_minus)
        v = np.asarray(state.v, dtype=float)
        v_x = np.asarray(state.v_x, dtype=float)
        e_x = np.asarray(state.e_x, dtype=float)
        nu, gam = params.nu, params.gruneisen
        shape = v.shape
        self.v = v

        # T: Z = T calX
        h_x = -(-(v - 1.0) * v_x + e_x + gam * e_minus * v_x) / nu
        t = _eye(shape)
        t[..., 3, 0] = coupling_sign * (f - v)
        t[..., 4, 0] = -h
        t_inv = _eye(shape)
        t_inv[..., 3, 0] = -coupling_sign * (f - v)
        t_inv[..., 4, 0] = h
        t_log = np.zeros(shape + (5, 5))
        t_log[..., 3, 0] = coupling_sign * v_x
        t_log[..., 4, 0] = -h_x
        self.t, self.t_inv, self.t_log = (LaurentMatrix.constant(t), LaurentMatrix.constant(t_inv),
                                          LaurentMatrix.constant(t_log))
        self.c = (self.t_inv @ self.b @ self.t - self.t_log).trimmed()

        # Q: calX = Q Y with Q = [[1, beta], [0, I]], beta = lambda^-1 c (I + alpha)^-1
        coupling = self.c.coefficient(0)[..., 0, 1:]
        alpha = self.c.coefficient(2)[..., 1:, 1:]
        alpha_x = np.zeros(shape + (4, 4))
        alpha_x[..., 2, 0] = v_x
        alpha_x[..., 3, 1] = v_x / nu
        resolvent = np.linalg.inv(_eye(shape, 4) + alpha)
        beta = np.einsum('...i,...ij->...j', coupling, resolvent)
        beta_x = -np.einsum('...i,...ij,...jk,...kl->...l', coupling, resolvent, alpha_x, resolvent)
        q_part = np.zeros(shape + (5, 5))
        q_part[..., 0, 1:] = beta
        q_log = np.zeros(shape + (5, 5))
        q_log[..., 0, 1:] = beta_x
        identity = _eye(shape)
        self.q = LaurentMatrix({0: identity, -2: q_part})
        self.q_inv = LaurentMatrix({0: identity, -2: -q_part})
        self.q_log = LaurentMatrix({-2: q_log})
        self.d = (self.q_inv @ self.c @ self.q - self.q_log).trimmed()

        # V: Y = V calZ
        hyperbolic = np.diag([1.0, 1.0, 1.0, 0.0, 0.0])
        parabolic = np.diag([0.0, 0.0, 0.0, 1.0, 1.0])
        self.v_balance = LaurentMatrix({0: hyperbolic, 1: parabolic})
        self.v_balance_inv = LaurentMatrix({0: hyperbolic, -1: parabolic})
        self.e = (self.v_balance_inv @ self.d @ self.v_balance).trimmed()

        # S: calZ = S X
        root = np.sqrt(v)
        root_nu = np.sqrt(v / nu)
        s_tilde = _eye(shape)
        s_tilde[..., 1, 3] = 1.0
        s_tilde[..., 2, 4] = 1.0
        s_tilde[..., 3, 1] = -root
        s_tilde[..., 3, 3] = root
        s_tilde[..., 4, 2] = -root_nu
        s_tilde[..., 4, 4] = root_nu
        s_tilde_x = np.zeros(shape + (5, 5))
        s_tilde_x[..., 3, 1] = -v_x / (2.0 * root)
        s_tilde_x[..., 3, 3] = v_x / (2.0 * root)
        s_tilde_x[..., 4, 2] = -v_x / (2.0 * nu * root_nu)
        s_tilde_x[..., 4, 4] = v_x / (2.0 * nu * root_nu)
        s_tilde_inv = np.linalg.inv(s_tilde)
        self.s_tilde = LaurentMatrix.constant(s_tilde)
        self.s_tilde_inv = LaurentMatrix.constant(s_tilde_inv)
        self.s_log = LaurentMatrix.constant(s_tilde_inv @ s_tilde_x)
        self.full = (self.s_tilde_inv @ self.e @ self.s_tilde - self.s_log).trimmed()

    @property
    def principal_part(self) -> LaurentMatrix:
        """F = diag(M-, M+)."""
        return self.full.principal()

    @property
    def tracking_part(self) -> LaurentMatrix:
        """calF, powers s^0 down to s^-4 and below."""
        return self.full.remainder()

    def reconstruct_b(self) -> LaurentMatrix:
        """Undo S, V, Q and T in turn."""
        e = self.s_tilde @ (self.full + self.s_log) @ self.s_tilde_inv
        d = self.v_balance @ e @ self.v_balance_inv
        c = self.q @ (d + self.q_log) @ self.q_inv
        return self.t @ (c + self.t_log) @ self.t_inv


def closed_form_matrices(state, params: ModelParams, e_minus: Optional[float] = None) -> Dict[int, np.ndarray]:
    """
    calF_{-i/2} for i = 0..4 from the profile scalars

        w = v - f,  n = v u_x / nu - u_xx,  j = ((Gamma e- - (v - 1)) v_x + e_x) / nu,
        k = (2f - v) w - Gamma h + v_x,  l = g w - v h / nu - j,  m = v w - k,  q = -v w - Gamma u_x + v_x.

    These are the tracking part of ``CoordinateChain(state, params, e_minus, coupling_sign=-1)``.

    :return: i -> array of shape state.v.shape + (5, 5)
    """
    if e_minus is None:
        e_minus = rankine_hugoniot(params).e_minus
    f, g, h = coefficients(state, params, e_minus)
    v = np.asarray(state.v, dtype=float)
    v_x = np.asarray(state.v_x, dtype=float)
    e_x = np.asarray(state.e_x, dtype=float)
    u_x = v_x
    u_xx = np.asarray(state.u_xx, dtype=float)
    gam, nu = params.gruneisen, params.nu

    w = v - f
    n = v * u_x / nu - u_xx
    j = ((gam * e_minus - (v - 1.0)) * v_x + e_x) / nu
    k = (2.0 * f - v) * w - gam * h + v_x
    ell = g * w - v * h / nu - j
    m = v * w - k
    q = -v * w - gam * u_x + v_x
    a1 = np.sqrt(v)
    a2 = np.sqrt(v / nu)
    rn = math.sqrt(nu)
    matrices = {i: np.zeros(v.shape + (5, 5)) for i in range(5)}

    f0 = matrices[0]
    f0[..., 0, 0] = w
    f0[..., 1, 0] = f0[..., 3, 0] = w / 2.0
    f0[..., 2, 0] = f0[..., 4, 0] = -h / 2.0
    parabolic = np.zeros(v.shape + (2, 2))
    parabolic[..., 0, 0] = 2.0 * f - v
    parabolic[..., 0, 1] = gam / rn
    parabolic[..., 1, 0] = g * rn
    parabolic[..., 1, 1] = v / nu
    drift = (v_x / (4.0 * v))[..., None, None] * np.eye(2)
    f0[..., 1:3, 1:3] = f0[..., 3:5, 3:5] = parabolic / 2.0 - drift
    f0[..., 1:3, 3:5] = f0[..., 3:5, 1:3] = drift - parabolic / 2.0

    f1 = matrices[1]
    f1[..., 0, 1] = -3.0 * w * a1
    f1[..., 0, 2] = gam * a2
    f1[..., 0, 3] = 3.0 * w * a1
    f1[..., 0, 4] = -gam * a2
    f1[..., 1, 0] = -k / (2.0 * a1)
    f1[..., 2, 0] = -ell / (2.0 * a2)
    f1[..., 3, 0] = k / (2.0 * a1)
    f1[..., 4, 0] = ell / (2.0 * a2)
    f1[..., 1, 1] = -gam * u_x / (2.0 * a1) - a1 * w / 2.0
    f1[..., 1, 3] = -gam * u_x / (2.0 * a1) + a1 * w / 2.0
    f1[..., 2, 1] = -n / (2.0 * a2) + h * a1 / 2.0
    f1[..., 2, 3] = -n / (2.0 * a2) - h * a1 / 2.0
    f1[..., 3, 1] = gam * u_x / (2.0 * a1) - a1 * w / 2.0
    f1[..., 3, 3] = gam * u_x / (2.0 * a1) + a1 * w / 2.0
    f1[..., 4, 1] = n / (2.0 * a2) + h * a1 / 2.0
    f1[..., 4, 3] = n / (2.0 * a2) - h * a1 / 2.0

    f2 = matrices[2]
    f2[..., 0, 0] = m
    f2[..., 0, 1] = f2[..., 0, 3] = q
    f2[..., 1, 1] = f2[..., 3, 3] = (k - v * w) / 2.0
    f2[..., 1, 3] = f2[..., 3, 1] = -(k + v * w) / 2.0
    f2[..., 2, 1] = f2[..., 4, 3] = (v * h + ell * rn) / 2.0
    f2[..., 2, 3] = f2[..., 4, 1] = (v * h - ell * rn) / 2.0

    f3 = matrices[3]
    f3[..., 0, 1] = -a1 * m
    f3[..., 0, 3] = a1 * m
    f3[..., 1, 1] = f3[..., 1, 3] = a1 * k / 2.0
    f3[..., 2, 1] = f3[..., 2, 3] = a1 * rn * ell / 2.0
    f3[..., 3, 1] = f3[..., 3, 3] = -a1 * k / 2.0
    f3[..., 4, 1] = f3[..., 4, 3] = -a1 * rn * ell / 2.0

    f4 = matrices[4]
    f4[..., 0, 1] = f4[..., 0, 3] = -v * m
    return matrices


def _blocks(matrix: np.ndarray) -> Dict[str, np.ndarray]:
    return {'--': matrix[..., :_SPLIT, :_SPLIT], '-+': matrix[..., :_SPLIT, _SPLIT:],
            '+-': matrix[..., _SPLIT:, :_SPLIT], '++': matrix[..., _SPLIT:, _SPLIT:]}


def _norm_order(norm: str):
    if norm not in NORMS:
        raise DomainError(f"norm must be one of {tuple(NORMS)}, got {norm}")
    return NORMS[norm]


@dataclass(frozen=True)
class TrackingMatrices:
    """
    calF_{-i/2} split into the 3+2 blocks, over a set of abscissae.  ``blocks[i][kl]`` has shape
    (len(x), rows, cols).
    """
    x: np.ndarray
    v: np.ndarray
    nu: float
    blocks: Dict[int, Dict[str, np.ndarray]] = field(repr=False)
    lambda_magnitude: Optional[float] = None

    @property
    def orders(self) -> Tuple[int, ...]:
        return tuple(sorted(self.blocks))

    def block_norms(self, norm: str = 'l2') -> Dict[str, np.ndarray]:
        """Operator norms |calF_{-i/2,kl}| as arrays of shape (len(orders), len(x))."""
        order = _norm_order(norm)
        return {kl: np.array([np.linalg.norm(self.blocks[i][kl], ord=order, axis=(-2, -1)) for i in self.orders])
                for kl in BLOCKS}

    def weighted(self, Lambda: Optional[float] = None, norm: str = 'l2',
                 norms: Optional[Dict[str, np.ndarray]] = None) -> Dict[str, np.ndarray]:
        """|calF*_kl|(x, Lambda) = sum_i |calF_{-i/2,kl}|(x) / Lambda^(i/2)."""
        Lambda = self.lambda_magnitude if Lambda is None else Lambda
        if Lambda is None or not Lambda > 0:
            raise DomainError(f"Lambda must be positive, got {Lambda}")
        norms = self.block_norms(norm) if norms is None else norms
        weights = np.array([Lambda ** (-0.5 * i) for i in self.orders])
        return {kl: weights @ norms[kl] for kl in BLOCKS}

    def condition(self, Lambda: Optional[float] = None, norm: str = 'l2',
                  norms: Optional[Dict[str, np.ndarray]] = None) -> np.ndarray:
        """(|F--| + |F++| + 2 sqrt(|F-+| |F+-|)) / v^(1/2) along x."""
        star = self.weighted(Lambda, norm, norms)
        return (star['--'] + star['++'] + 2.0 * np.sqrt(star['-+'] * star['+-'])) / np.sqrt(self.v)


def tracking_matrices(x, profile, params: Optional[ModelParams] = None,
                      lambda_magnitude: Optional[float] = None) -> TrackingMatrices:
    """
    :param x: abscissa or array of abscissae in the profile domain
    :param profile: solved ShockProfile (mu = 1)
    :param params: defaults to the profile parameters
    :param lambda_magnitude: optional default Lambda for :meth:`TrackingMatrices.weighted`
    """
    params = profile.params if params is None else params
    x = np.atleast_1d(np.asarray(x, dtype=float))
    state = profile.state(x)
    matrices = closed_form_matrices(state, params, profile.endstates.e_minus)
    blocks = {i: _blocks(matrix) for i, matrix in matrices.items()}
    return TrackingMatrices(x=x, v=np.asarray(state.v), nu=params.nu, blocks=blocks,
                            lambda_magnitude=lambda_magnitude)


def _mesh_matrices(profile, params: Optional[ModelParams]) -> TrackingMatrices:
    return tracking_matrices(profile.refined_mesh(MESH_REFINEMENT), profile, params)


def T_map(Lambda: float, profile, params: Optional[ModelParams] = None, norm: str = 'l2',
          matrices: Optional[TrackingMatrices] = None, norms: Optional[Dict[str, np.ndarray]] = None) -> float:
    """
    2 max(1, nu) max_x ((|F--| + |F++| + 2 sqrt(|F-+| |F+-|)) / v^(1/2))^2 with the calF* weights at Lambda,
    the max taken over the profile mesh refined 4x.
    """
    if not Lambda > 0:
        raise DomainError(f"Lambda must be positive, got {Lambda}")
    matrices = _mesh_matrices(profile, params) if matrices is None else matrices
    worst = float(matrices.condition(Lambda, norm, norms).max())
    return 2.0 * max(1.0, matrices.nu) * worst ** 2


@dataclass(frozen=True)
class TrackingBound:
    Lambda_star: float
    iterates: Tuple[float, ...]
    converged: bool
    norm_used: str

    @property
    def iterations(self) -> int:
        return len(self.iterates) - 1


def tracking_bound(profile, params: Optional[ModelParams] = None, init_Lambda: float = 100.0, norm: str = 'l2',
                   tol: float = FIXED_POINT_TOL, max_iterations: int = MAX_ITERATIONS) -> TrackingBound:
    """
    Fixed point of Lambda_{j+1} = T_map(Lambda_j).

    :return: the fixed point; after max_iterations without convergence the larger of the last two iterates,
             still a bound since T_map is antitone
    """
    matrices = _mesh_matrices(profile, params)
    norms = matrices.block_norms(norm)
    iterates = [float(init_Lambda)]
    for _ in range(max_iterations):
        current = T_map(iterates[-1], profile, params, norm, matrices, norms)
        iterates.append(current)
        if abs(current - iterates[-2]) <= tol * abs(current):
            logging.info(f"tracking radius {current:.6g} ({norm}) after {len(iterates) - 1} iterations")
            return TrackingBound(Lambda_star=current, iterates=tuple(iterates), converged=True, norm_used=norm)
    bound = max(iterates[-1], iterates[-2])
    logging.warning(f"tracking iteration did not settle in {max_iterations} steps; using {bound:.6g}")
    return TrackingBound(Lambda_star=bound, iterates=tuple(iterates), converged=False, norm_used=norm)


def ricatti_margin(profile, params: Optional[ModelParams] = None, Lambda: float = 100.0,
                   norm: str = 'l2') -> float:
    """
    Re lambda^(1/2) minus the worst left side of the Ricatti condition
    max(1, nu^(1/2)) (|F--| + |F++| + 2 sqrt(|F-+| |F+-|)) / v^(1/2), at lambda = Lambda on the real axis.
    Positive when the condition holds at every mesh point.
    """
    matrices = _mesh_matrices(profile, params)
    worst = float(matrices.condition(Lambda, norm).max())
    return math.sqrt(Lambda) - max(1.0, math.sqrt(matrices.nu)) * worst


def compute_alpha(profile, params: Optional[ModelParams] = None) -> float:
    """
    alpha = (1 + nu^(-1/2)) (int_{-inf}^0 (v^(1/2) - v-^(1/2)) + int_0^inf (v^(1/2) - v+^(1/2))).

    Simpson quadrature on the refined mesh; the tails beyond the domain decay like exp(-theta |x|) and are
    added in closed form.
    """
    params = profile.params if params is None else params
    v_minus, v_plus = profile.endstates.v_minus, profile.endstates.v_plus
    left = np.linspace(-profile.L_minus, 0.0, ALPHA_NODES)
    right = np.linspace(0.0, profile.L_plus, ALPHA_NODES)
    left_values = np.sqrt(profile.state(left).v) - math.sqrt(v_minus)
    right_values = np.sqrt(profile.state(right).v) - math.sqrt(v_plus)
    total = simpson(left_values, x=left) + simpson(right_values, x=right)
    total += left_values[0] / profile.theta_minus + right_values[-1] / profile.theta_plus
    return float((1.0 + params.nu ** -0.5) * total)


@dataclass(frozen=True)
class HFApproximant:
    """C exp(alpha lambda^(1/2) + beta lambda); beta is zero unless fitted."""
    C: float
    alpha: float
    fit_residual: float
    valid_radius: float
    beta: float = 0.0

    def __call__(self, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=complex)
        return self.C * np.exp(self.alpha * np.sqrt(lam) + self.beta * lam)


def hf_fit(evans_evaluator: Callable, lambda_max: float, n_samples: int = 16,
           with_beta: bool = False) -> HFApproximant:
    """
    Least-squares fit of log D = log C + alpha lambda^(1/2) (+ beta lambda) on real lambda in
    [lambda_max/4, lambda_max].

    :param evans_evaluator: callable mapping an array of lambdas to D
    :raises FitError: D changes sign or vanishes on the interval, which signals a real root
    """
    lambdas = np.linspace(lambda_max / 4.0, lambda_max, n_samples)
    values = np.real(np.asarray(evans_evaluator(lambdas)))
    sign = 1.0 if values[-1] > 0 else -1.0
    if np.any(sign * values <= 0):
        crossing = lambdas[np.argmax(sign * values <= 0)]
        raise FitError(f"Evans function changes sign on the real axis near lambda={crossing:.6g}",
                       trace=list(zip(lambdas.tolist(), values.tolist())))
    columns = [np.ones_like(lambdas), np.sqrt(lambdas)]
    if with_beta:
        columns.append(lambdas)
    design = np.column_stack(columns)
    target = np.log(sign * values)
    solution, *_ = np.linalg.lstsq(design, target, rcond=None)
    residual = float(np.abs(design @ solution - target).max())
    beta = float(solution[2]) if with_beta else 0.0
    approximant = HFApproximant(C=float(sign * np.exp(solution[0])), alpha=float(solution[1]),
                                fit_residual=residual, valid_radius=lambda_max / 4.0, beta=beta)
    logging.info(f"high-frequency fit on [{lambda_max / 4.0:.4g}, {lambda_max:.4g}]: C={approximant.C:.6g} "
                 f"alpha={approximant.alpha:.6g} residual={residual:.2e}")
    return approximant


@dataclass(frozen=True)
class PracticalRadius:
    """Smallest radius where D matches its high-frequency limit.  Never rigorous."""
    radius: float
    converged: bool
    max_error: float
    nonrigorous: bool = True


def _semicircle_error(evans_evaluator: Callable, approximant: HFApproximant, radius: float, n_arc: int) -> float:
    # lower quarter follows by conjugate symmetry
    lambdas = radius * np.exp(0.5j * np.pi * np.linspace(0.0, 1.0, n_arc))
    values = np.asarray(evans_evaluator(lambdas))
    limit = approximant(lambdas)
    return float(np.max(np.abs(values - limit) / np.abs(limit)))


def practical_radius(evans_evaluator: Callable, approximant: HFApproximant, tol1: float = 0.1,
                     tracking_radius: float = math.inf, start: float = 5.0, n_arc: int = 16,
                     bisections: int = 4, max_doublings: int = 12) -> PracticalRadius:
    """
    Doubling search from ``start`` followed by bisection for the smallest semicircle radius on which
    |D - C exp(alpha lambda^(1/2))| / |C exp(alpha lambda^(1/2))| <= tol1.  Capped at the tracking radius.
    """
    low, high = None, start
    error = math.inf
    for doubling in range(max_doublings + 1):
        high = min(high, tracking_radius)
        error = _semicircle_error(evans_evaluator, approximant, high, n_arc)
        logging.debug(f"practical radius trial {high:.4g}: relative error {error:.3g}")
        if error <= tol1:
            break
        if high >= tracking_radius or doubling == max_doublings:
            logging.warning(f"no agreement within {tol1} up to radius {high:.4g}")
            return PracticalRadius(radius=high, converged=False, max_error=error)
        low, high = high, 2.0 * high
    if low is not None:
        for _ in range(bisections):
            middle = 0.5 * (low + high)
            middle_error = _semicircle_error(evans_evaluator, approximant, middle, n_arc)
            if middle_error <= tol1:
                high, error = middle, middle_error
            else:
                low = middle
    return PracticalRadius(radius=high, converged=True, max_error=error)
