"""Grids, space-time fields and the tridiagonal solver shared by all modules.

A space-time field is stored as a plain ``numpy`` array of shape
``(n_t, n_x)``: one contiguous block of spatial values per time step,
so per-block operations (and block-Jacobi sweeps) work on contiguous rows.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class CoarseningStrategy(enum.Enum):
    """Tagged coarsening choices used across the smoother, LFA and cycles."""

    TIME2 = "time2"          # semi-coarsening in time, factor 2
    TIME4 = "time4"          # semi-coarsening in time, factor 4
    SPACE = "space"          # semi-coarsening in space, factor 2
    FULL = "full"            # simultaneous factor-2 coarsening in time and space
    NEW = "new"              # direct factor-4 time / factor-2 space coarsening
    ORIGINAL = "original"    # three-level: full coarsening then time semi-coarsening


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class SpaceTimeGrid:
    """Discretization geometry for one level of the space-time hierarchy.

    ``n_x`` counts interior spatial unknowns on (0, 1) with homogeneous
    Dirichlet ends (not stored), so ``h = 1/(n_x + 1)``.  ``n_t`` counts
    time steps on (0, T]; the initial time carries the known initial
    condition and is not an unknown, so ``tau = T/n_t``.
    """

    n_x: int
    n_t: int
    horizon: float

    def __post_init__(self):
        if self.n_x < 3 or not _is_pow2(self.n_x + 1):
            raise ValueError(f"n_x must be 2**k - 1 with k >= 2, got {self.n_x}")
        if self.n_t < 4 or not _is_pow2(self.n_t):
            raise ValueError(f"n_t must be 2**m with m >= 2, got {self.n_t}")
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")

    @property
    def h(self) -> float:
        return 1.0 / (self.n_x + 1)

    @property
    def tau(self) -> float:
        return self.horizon / self.n_t

    @property
    def sigma(self) -> float:
        """Anisotropy ratio tau/h**2, always recomputed from the steps."""
        return self.tau / self.h**2

    @property
    def x(self) -> np.ndarray:
        """Interior spatial nodes x_j = j*h, j = 1..n_x."""
        return np.arange(1, self.n_x + 1) * self.h

    @property
    def t(self) -> np.ndarray:
        """Time points t_n = n*tau, n = 1..n_t."""
        return np.arange(1, self.n_t + 1) * self.tau


def coarsen_grid(g: SpaceTimeGrid, mt: int, mx: int) -> SpaceTimeGrid:
    """Coarsen by factor ``mt`` in time and ``mx`` in space.

    The coarse grid keeps the horizon, so tau_c = mt*tau and
    h_c = mx*h, giving sigma_c = (mt/mx**2)*sigma.
    """
    if mt not in (1, 2, 4):
        raise ValueError(f"time factor must be 1, 2 or 4, got {mt}")
    if mx not in (1, 2):
        raise ValueError(f"space factor must be 1 or 2, got {mx}")
    if g.n_t % mt != 0:
        raise ValueError(f"n_t={g.n_t} not divisible by time factor {mt}")
    if (g.n_x + 1) % mx != 0:
        raise ValueError(f"n_x+1={g.n_x + 1} not divisible by space factor {mx}")
    return SpaceTimeGrid(n_x=(g.n_x + 1) // mx - 1, n_t=g.n_t // mt, horizon=g.horizon)


def zero_field(g: SpaceTimeGrid) -> np.ndarray:
    return np.zeros((g.n_t, g.n_x))


def random_field(g: SpaceTimeGrid, rng: np.random.Generator) -> np.ndarray:
    """Uniform[0, 1) field, one value per space-time unknown."""
    return rng.random((g.n_t, g.n_x))


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Real tridiagonal matrix given by its three diagonals.

    ``sub`` and ``sup`` have length n-1, ``diag`` has length n.  The
    matrix is symmetric exactly when ``sub == sup``.
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray

    def __post_init__(self):
        n = len(self.diag)
        if len(self.sub) != n - 1 or len(self.sup) != n - 1:
            raise ValueError("off-diagonals must have length n-1")

    @property
    def n(self) -> int:
        return len(self.diag)

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Matrix-vector product along the last axis of ``v``."""
        v = np.asarray(v)
        if v.shape[-1] != self.n:
            raise ValueError(f"expected last axis {self.n}, got {v.shape[-1]}")
        out = self.diag * v
        out[..., :-1] += self.sup * v[..., 1:]
        out[..., 1:] += self.sub * v[..., :-1]
        return out

    def dense(self) -> np.ndarray:
        return (np.diag(self.diag)
                + np.diag(self.sup, 1)
                + np.diag(self.sub, -1))


def thomas_solve(m: TridiagonalMatrix, rhs: np.ndarray) -> np.ndarray:
    """Solve ``m @ x = rhs`` by the Thomas algorithm.

    ``rhs`` may carry leading batch axes; the system is solved along the
    last axis for every batch row with a single factorization.  The input
    is left untouched.  Requires a diagonally dominant (or otherwise
    LU-stable) matrix, which holds for I - tau*A_h.
    """
    n = m.n
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[-1] != n:
        raise ValueError(f"rhs last axis {rhs.shape[-1]} does not match n={n}")
    # forward elimination of the subdiagonal; multipliers depend on m only
    dd = np.empty(n)
    w = np.empty(max(n - 1, 0))
    dd[0] = m.diag[0]
    for i in range(1, n):
        w[i - 1] = m.sub[i - 1] / dd[i - 1]
        dd[i] = m.diag[i] - w[i - 1] * m.sup[i - 1]
    x = rhs.copy()
    for i in range(1, n):
        x[..., i] -= w[i - 1] * x[..., i - 1]
    x[..., n - 1] /= dd[n - 1]
    for i in range(n - 2, -1, -1):
        x[..., i] = (x[..., i] - m.sup[i] * x[..., i + 1]) / dd[i]
    return x
