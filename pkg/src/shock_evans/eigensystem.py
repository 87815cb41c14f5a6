# coding=utf-8

"""
First-order eigenvalue system W' = A(x, lambda) W for the integrated perturbation W = (eps, eps', u, v, v'),
its endstate limits, invariant subspaces at the endstates, and exterior powers.

A is affine in lambda, A = lambda A1(x) + A0(x), with

    row 0: (0, 1, 0, 0, 0)
    row 1: (lambda v/nu, v/nu, v u_x/nu - u_xx, lambda g, g - h)
    row 2: (0, 0, 0, lambda, 1)
    row 3: (0, 0, 0, 0, 1)
    row 4: (0, Gamma, lambda v + Gamma u_x, lambda v, f - lambda)

where f, g, h are the profile coefficients of :func:`coefficients`.  The system is written for mu = 1;
use ModelParams.normalized() first.

Exterior powers use the lexicographic basis e_J = e_{j1} ^ ... ^ e_{jk}, j1 < ... < jk, of
itertools.combinations(range(n), k).
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy.linalg import schur, solve_sylvester

from shock_evans.errors import DomainError, SplittingError
from shock_evans.gas_model import ModelParams, rankine_hugoniot

__docformat__ = 'restructuredtext en'
__all__ = ('SIDES', 'SUBSPACE_DIMENSIONS', 'SpectralMatrix', 'ConstantCoefficientSystem', 'SubspaceBasis',
           'coefficients', 'assemble_A', 'endstate_matrix', 'endstate_splitting', 'split_subspace', 'lift',
           'lifted_norm_check', 'wedge', 'complement_dual', 'hodge_pair', 'kato_generator')

SIDES = ('minus', 'plus')
# unstable subspace at -infinity, stable subspace at +infinity
SUBSPACE_DIMENSIONS = {'minus': 2, 'plus': 3}
SYSTEM_SIZE = 5
SPLIT_GAP = 1e-10


def coefficients(state, params: ModelParams, e_minus: Optional[float] = None):
    """
    Profile coefficients of the eigenvalue system.

    :param state: a ProfileState-like object with v, e (arrays or scalars)
    :param params: parameter point
    :param e_minus: left internal energy, from params when omitted
    :return: (f, g, h)
    """
    if e_minus is None:
        e_minus = rankine_hugoniot(params).e_minus
    gam, nu = params.gruneisen, params.nu
    v, e = state.v, state.e
    f = 2.0 * v - 1.0 - gam * e_minus
    g = gam * e / nu - ((nu + 1.0) / nu) * (v * (v - 1.0) + gam * (e - v * e_minus))
    h = -(-(v - 1.0) ** 2 / 2.0 + (e - e_minus) + (v - 1.0) * gam * e_minus) / nu
    return f, g, h


def _assemble_parts(state, params: ModelParams, e_minus: float) -> Tuple[np.ndarray, np.ndarray]:
    """(A0, A1) with shape state.v.shape + (5, 5)."""
    f, g, h = coefficients(state, params, e_minus)
    v = np.asarray(state.v, dtype=float)
    u_x = np.asarray(state.v_x, dtype=float)
    u_xx = np.asarray(state.u_xx, dtype=float)
    gam, nu = params.gruneisen, params.nu
    a0 = np.zeros(v.shape + (5, 5))
    a1 = np.zeros(v.shape + (5, 5))
    a0[..., 0, 1] = 1.0
    a0[..., 1, 1] = v / nu
    a0[..., 1, 2] = v * u_x / nu - u_xx
    a0[..., 1, 4] = g - h
    a0[..., 2, 4] = 1.0
    a0[..., 3, 4] = 1.0
    a0[..., 4, 1] = gam
    a0[..., 4, 2] = gam * u_x
    a0[..., 4, 4] = f
    a1[..., 1, 0] = v / nu
    a1[..., 1, 3] = g
    a1[..., 2, 3] = 1.0
    a1[..., 4, 2] = v
    a1[..., 4, 3] = v
    a1[..., 4, 4] = -1.0
    return a0, a1


@dataclass(frozen=True)
class _EquilibriumState:
    v: float
    e: float
    v_x: float = 0.0
    e_x: float = 0.0
    u_xx: float = 0.0

    @property
    def u(self) -> float:
        return self.v - 1.0


def _endstate(side: str, params: ModelParams) -> _EquilibriumState:
    endstates = rankine_hugoniot(params)
    v, e = endstates.minus if side == 'minus' else endstates.plus
    return _EquilibriumState(v=v, e=e)


def endstate_matrix(lam: complex, side: str, params: ModelParams) -> np.ndarray:
    """A-(lambda) or A+(lambda) built directly from the endstates."""
    if side not in SIDES:
        raise DomainError(f"side must be one of {SIDES}, got {side}")
    a0, a1 = _assemble_parts(_endstate(side, params), params, rankine_hugoniot(params).e_minus)
    return lam * a1 + a0


class SpectralMatrix(object):
    """
    A(x, lambda) along a solved profile.  Holds only the immutable profile, so one instance can serve
    concurrent evaluations at distinct lambda.
    """

    def __init__(self, profile):
        """
        :param profile: a solved ShockProfile with mu = 1
        """
        if profile.params.mu != 1.0:
            raise DomainError("the eigenvalue system is written for mu = 1; solve the profile with "
                              "params.normalized()")
        self.profile = profile
        self.params = profile.params
        self._e_minus = profile.endstates.e_minus
        self._limits = {side: _assemble_parts(_endstate(side, self.params), self.params, self._e_minus)
                        for side in SIDES}

    @property
    def domain(self) -> Tuple[float, float]:
        return -self.profile.L_minus, self.profile.L_plus

    def parts(self, x) -> Tuple[np.ndarray, np.ndarray]:
        """(A0(x), A1(x)); x may be an array."""
        return _assemble_parts(self.profile.state(x), self.params, self._e_minus)

    def matrix(self, x, lam: complex) -> np.ndarray:
        a0, a1 = self.parts(x)
        return lam * a1 + a0

    def limit_parts(self, side: str) -> Tuple[np.ndarray, np.ndarray]:
        return self._limits[side]

    def limit(self, side: str, lam: complex) -> np.ndarray:
        a0, a1 = self._limits[side]
        return lam * a1 + a0

    def export(self, path: Union[str, Path], xs, lam: complex) -> Path:
        """Columnar text: x, row, col, Re A, Im A."""
        path = Path(path)
        rows = []
        for x in np.atleast_1d(xs):
            m = self.matrix(float(x), lam)
            for i in range(SYSTEM_SIZE):
                for j in range(SYSTEM_SIZE):
                    rows.append((x, i, j, m[i, j].real, m[i, j].imag))
        np.savetxt(path, np.array(rows), header=f"lambda={lam!r}\nx row col re im", fmt='%.17g')
        return path


def assemble_A(x: float, lam: complex, profile, params: Optional[ModelParams] = None) -> np.ndarray:
    """
    A(x, lambda) for a solved profile.

    :raises DomainError: x outside the profile domain
    """
    if params is not None and params != profile.params:
        raise DomainError("params do not match the profile's parameters")
    return SpectralMatrix(profile).matrix(x, lam)


class ConstantCoefficientSystem(object):
    """
    A(x, lambda) = A(lambda) everywhere.  The Evans function of such a system built from Kato bases is
    constant in lambda, which makes it the reference system for the Kato and Evans machinery.
    """

    def __init__(self, a0: np.ndarray, a1: np.ndarray, half_length: float = 10.0):
        self._parts = (np.asarray(a0, dtype=float), np.asarray(a1, dtype=float))
        self._half_length = half_length

    @classmethod
    def from_endstate(cls, params: ModelParams, side: str = 'minus', half_length: float = 10.0):
        a0, a1 = _assemble_parts(_endstate(side, params), params, rankine_hugoniot(params).e_minus)
        return cls(a0, a1, half_length)

    @property
    def domain(self) -> Tuple[float, float]:
        return -self._half_length, self._half_length

    def parts(self, x) -> Tuple[np.ndarray, np.ndarray]:
        return self._parts

    def matrix(self, x, lam: complex) -> np.ndarray:
        return lam * self._parts[1] + self._parts[0]

    def limit_parts(self, side: str) -> Tuple[np.ndarray, np.ndarray]:
        return self._parts

    def limit(self, side: str, lam: complex) -> np.ndarray:
        return self.matrix(0.0, lam)


@dataclass(frozen=True)
class SubspaceBasis:
    lam: complex
    side: str
    vectors: np.ndarray
    projector: np.ndarray
    eigenvalues: np.ndarray

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    @property
    def growth(self) -> complex:
        """Sum of the eigenvalues carried by the subspace, the growth rate of its wedge."""
        return complex(np.sum(self.eigenvalues))

    def with_vectors(self, vectors: np.ndarray) -> 'SubspaceBasis':
        return SubspaceBasis(self.lam, self.side, vectors, self.projector, self.eigenvalues)

    def invariance_residual(self, matrix: np.ndarray) -> float:
        complement = np.eye(SYSTEM_SIZE) - self.projector
        return float(np.abs(complement @ matrix @ self.vectors).max())


def _selector(side: str, eigenvalues: np.ndarray) -> Callable[[complex], bool]:
    dim = SUBSPACE_DIMENSIONS[side]
    real = np.sort(eigenvalues.real)
    if side == 'minus':
        upper, lower = real[-dim], real[-dim - 1]
    else:
        lower, upper = real[dim - 1], real[dim]
    if upper - lower < SPLIT_GAP:
        raise SplittingError(f"no spectral gap for the {side} subspace: eigenvalues {eigenvalues}")
    cut = 0.5 * (upper + lower)
    if side == 'minus':
        return lambda z: z.real > cut
    return lambda z: z.real < cut


def _schur_frame(matrix: np.ndarray, side: str):
    dim = SUBSPACE_DIMENSIONS[side]
    eigenvalues = np.linalg.eigvals(matrix)
    select = _selector(side, eigenvalues)
    _, vectors, sdim = schur(matrix, output='complex', sort=select)
    _, others, other_dim = schur(matrix, output='complex', sort=lambda z: not select(z))
    if sdim != dim or other_dim != SYSTEM_SIZE - dim:
        raise SplittingError(f"{side} subspace has dimension {sdim}, expected {dim}")
    frame = np.hstack([vectors[:, :dim], others[:, :SYSTEM_SIZE - dim]])
    coordinates = np.linalg.solve(frame, np.eye(SYSTEM_SIZE))
    chosen = np.array([z for z in eigenvalues if select(z)])
    return frame, coordinates, chosen


def split_subspace(matrix: np.ndarray, side: str, lam: complex = 0j) -> SubspaceBasis:
    """
    Invariant subspace of the endstate matrix: the two eigenvalues of largest real part at -infinity, the
    three of smallest real part at +infinity.  Bases come from a reordered complex Schur form and the spectral
    projector from the complementary Schur form.
    """
    dim = SUBSPACE_DIMENSIONS[side]
    frame, coordinates, chosen = _schur_frame(np.asarray(matrix, dtype=complex), side)
    projector = frame[:, :dim] @ coordinates[:dim]
    if np.imag(lam) == 0.0:
        # real matrix: the projector is real up to rounding
        projector = projector.real.astype(complex)
    return SubspaceBasis(lam=complex(lam), side=side, vectors=frame[:, :dim], projector=projector,
                         eigenvalues=chosen)


def _limit_parts(side: str, source) -> Tuple[np.ndarray, np.ndarray]:
    if side not in SIDES:
        raise DomainError(f"side must be one of {SIDES}, got {side}")
    if isinstance(source, ModelParams):
        return _assemble_parts(_endstate(side, source), source, rankine_hugoniot(source).e_minus)
    return source.limit_parts(side)


def endstate_splitting(lam: complex, side: str, source) -> SubspaceBasis:
    """
    Stable (+) or unstable (-) subspace of the endstate matrix at lambda.

    :param source: a ModelParams, or any system with a ``limit_parts(side)`` method
    """
    a0, a1 = _limit_parts(side, source)
    return split_subspace(lam * a1 + a0, side, lam)


def kato_generator(lam: complex, side: str, source) -> np.ndarray:
    """
    P'P - PP' for the spectral projector P(lambda) of the endstate subspace.

    In the Schur frame [V, V_c] of the subspace and its complement A is block diagonal, diag(T1, T2), and
    P' has only off-diagonal blocks X12, X21 with

        T1 X12 - X12 T2 = B12,    T2 X21 - X21 T1 = -B21

    where B is dA/dlambda in the same frame.
    """
    dim = SUBSPACE_DIMENSIONS[side]
    a0, a1 = _limit_parts(side, source)
    matrix = np.asarray(lam * a1 + a0, dtype=complex)
    frame, coordinates, _ = _schur_frame(matrix, side)
    reduced = coordinates @ matrix @ frame
    derivative = coordinates @ a1 @ frame
    t1, t2 = reduced[:dim, :dim], reduced[dim:, dim:]
    x12 = solve_sylvester(t1, -t2, derivative[:dim, dim:])
    x21 = solve_sylvester(t2, -t1, -derivative[dim:, :dim])
    block = np.zeros((SYSTEM_SIZE, SYSTEM_SIZE), dtype=complex)
    block[:dim, dim:] = -x12
    block[dim:, :dim] = x21
    return frame @ block @ coordinates


def _permutation_sign(sequence) -> int:
    sign = 1
    items = list(sequence)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def _subsets(n: int, k: int):
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def _lift_structure(n: int, k: int):
    subsets = _subsets(n, k)
    index = {subset: position for position, subset in enumerate(subsets)}
    rows, cols, source_rows, source_cols, signs = [], [], [], [], []
    for col, subset in enumerate(subsets):
        for p, j in enumerate(subset):
            for i in range(n):
                if i != j and i in subset:
                    continue
                replaced = subset[:p] + (i,) + subset[p + 1:]
                rows.append(index[tuple(sorted(replaced))])
                cols.append(col)
                source_rows.append(i)
                source_cols.append(j)
                signs.append(_permutation_sign(replaced))
    return (np.array(rows), np.array(cols), np.array(source_rows), np.array(source_cols),
            np.array(signs, dtype=float))


def lift(matrix: np.ndarray, k: int) -> np.ndarray:
    """
    k-th additive compound: the action of M on k-vectors,
    M^(k) (w1 ^ ... ^ wk) = sum_p w1 ^ ... ^ M wp ^ ... ^ wk.

    :param matrix: n x n
    :param k: 1 <= k <= n
    :return: C(n,k) x C(n,k) in the lexicographic basis
    """
    matrix = np.asarray(matrix)
    n = matrix.shape[0]
    if not 1 <= k <= n:
        raise DomainError(f"lift order must be in [1, {n}], got {k}")
    rows, cols, source_rows, source_cols, signs = _lift_structure(n, k)
    size = comb(n, k)
    lifted = np.zeros((size, size), dtype=np.result_type(matrix.dtype, float))
    np.add.at(lifted, (rows, cols), signs * matrix[source_rows, source_cols])
    return lifted


def lifted_norm_check(matrix: np.ndarray, k: int, p=1) -> bool:
    """|M^(k)|_p <= k |M|_p for p in {1, inf}."""
    if p not in (1, np.inf):
        raise DomainError(f"p must be 1 or inf, got {p}")
    lhs = np.linalg.norm(lift(matrix, k), p)
    rhs = k * np.linalg.norm(matrix, p)
    return bool(lhs <= rhs * (1.0 + 1e-12) + 1e-300)


def wedge(vectors: np.ndarray) -> np.ndarray:
    """
    Coordinates of v1 ^ ... ^ vk: the k x k minors of the n x k matrix of columns, lexicographically.
    """
    vectors = np.asarray(vectors)
    n, k = vectors.shape
    subsets = np.array(_subsets(n, k))
    return np.linalg.det(vectors[subsets])


@lru_cache(maxsize=None)
def _dual_structure(n: int, k: int):
    """For every (n-k)-subset I: position of its complement J in the k-subsets and the sign of e_J ^ e_I."""
    k_index = {subset: position for position, subset in enumerate(_subsets(n, k))}
    positions, signs = [], []
    for subset in _subsets(n, n - k):
        complement = tuple(i for i in range(n) if i not in subset)
        positions.append(k_index[complement])
        signs.append(_permutation_sign(complement + subset))
    return np.array(positions), np.array(signs, dtype=float)


def complement_dual(k_vector: np.ndarray, n: int = SYSTEM_SIZE, k: int = 3) -> np.ndarray:
    """
    The (n-k)-vector w~ with w~ . z = (w ^ z) / (e_1 ^ ... ^ e_n) for every (n-k)-vector z.
    """
    positions, signs = _dual_structure(n, k)
    return signs * np.asarray(k_vector)[..., positions]


def hodge_pair(k_vector: np.ndarray, other: np.ndarray, n: int = SYSTEM_SIZE, k: int = 3) -> complex:
    """Scalar w ^ z for a k-vector w and an (n-k)-vector z."""
    return complex(complement_dual(k_vector, n, k) @ np.asarray(other))

