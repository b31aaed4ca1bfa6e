"""Backward Euler / centered difference discretization of the 1D heat equation.

Assembles the all-at-once lower block bidiagonal system, its right-hand
side, the sequential time-stepping solve used as reference, and the
discrete L_inf(0,T; L2) error norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import SpaceTimeGrid, TridiagonalMatrix, thomas_solve


@dataclass(frozen=True)
class ProblemData:
    """Source term f(x, t) and initial value u0(x) on (0,1) x (0, T]."""

    horizon: float
    source: Callable[[np.ndarray, float], np.ndarray]
    initial: Callable[[np.ndarray], np.ndarray]


def heat_benchmark_problem(horizon: float = 0.1) -> ProblemData:
    """The forced heat problem used by the experiment CLI.

    f(x, t) = x^4 (1-x)^4 + 10 sin(8t), u0 = 0.
    """

    def source(x, t):
        return x**4 * (1.0 - x) ** 4 + 10.0 * np.sin(8.0 * t)

    def initial(x):
        return np.zeros_like(x)

    return ProblemData(horizon=horizon, source=source, initial=initial)


@dataclass(frozen=True)
class HeatOperator:
    """All-at-once operator: row n is Q u_n - B u_{n-1} with B = I.

    Q = I - tau*A_h is tridiagonal with diagonal 1 + 2*sigma and
    off-diagonals -sigma (Dirichlet rows drop the outside neighbor).
    """

    grid: SpaceTimeGrid
    q: TridiagonalMatrix

    @property
    def sigma(self) -> float:
        return self.grid.sigma


def assemble_operator(g: SpaceTimeGrid) -> HeatOperator:
    s = g.sigma
    q = TridiagonalMatrix(
        sub=np.full(g.n_x - 1, -s),
        diag=np.full(g.n_x, 1.0 + 2.0 * s),
        sup=np.full(g.n_x - 1, -s),
    )
    return HeatOperator(grid=g, q=q)


def assemble_rhs(g: SpaceTimeGrid, p: ProblemData) -> np.ndarray:
    """Sample the data into the block right-hand side.

    Block n holds tau*f(., t_n); block 1 additionally carries the initial
    value (B = I).  The tau factor matches Q = I - tau*A_h, i.e. the
    standard Backward Euler step u_{n+1} = u_n + tau*(A u_{n+1} + f_{n+1}).
    """
    x = g.x
    rhs = g.tau * p.source(x[None, :], g.t[:, None])
    rhs = np.ascontiguousarray(np.broadcast_to(rhs, (g.n_t, g.n_x)).copy())
    rhs[0] += p.initial(x)
    return rhs


def apply_operator(op: HeatOperator, u: np.ndarray) -> np.ndarray:
    """Return L u for a field of shape (n_t, n_x)."""
    g = op.grid
    if u.shape != (g.n_t, g.n_x):
        raise ValueError(f"field shape {u.shape} does not match grid ({g.n_t}, {g.n_x})")
    out = op.q.apply(u)
    out[1:] -= u[:-1]
    return out


def direct_solve(op: HeatOperator, rhs: np.ndarray) -> np.ndarray:
    """Sequential block forward substitution u_n = Q^{-1}(rhs_n + u_{n-1}).

    This is the classical time-stepping loop; it is exact up to roundoff
    and serves as the reference solution for iteration errors.
    """
    g = op.grid
    if rhs.shape != (g.n_t, g.n_x):
        raise ValueError(f"rhs shape {rhs.shape} does not match grid ({g.n_t}, {g.n_x})")
    u = np.empty_like(rhs, dtype=float)
    prev = np.zeros(g.n_x)
    for n in range(g.n_t):
        prev = thomas_solve(op.q, rhs[n] + prev)
        u[n] = prev
    return u


def error_norm(u: np.ndarray, ref: np.ndarray, g: SpaceTimeGrid) -> float:
    """Discrete L_inf in time of the L2 norm in space of u - ref."""
    if u.shape != ref.shape:
        raise ValueError("field shapes differ")
    d = u - ref
    return float(np.sqrt(g.h * np.sum(d * d, axis=1)).max())
