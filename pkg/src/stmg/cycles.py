"""Multigrid cycles for the two coarsening strategies and the solve driver.

The direct strategy coarsens (4 in time, 2 in space) in one step and is a
two-level method per stage; the original strategy does a full space-time
coarsening followed by a time semi-coarsening, a three-level method per
stage, with its own smoothing sweeps on the intermediate level.  Deeper
hierarchies repeat the stage on the coarsest grid of the previous one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CoarseningStrategy, SpaceTimeGrid, coarsen_grid, random_field
from .heat import HeatOperator, apply_operator, assemble_operator, direct_solve, error_norm
from .smoother import SmootherConfig, jacobi_sweep
from .transfer import prolong, restrict


@dataclass
class CostCounter:
    """Counted work: spatial tridiagonal block solves and transfer stencil blocks."""

    block_solves: int = 0
    transfer_blocks: int = 0

    def total(self) -> int:
        return self.block_solves + self.transfer_blocks


@dataclass(frozen=True)
class CyclePlan:
    """Sweep counts, damping and hierarchy depth for one cycle type.

    ``depth`` counts coarsening stages: each stage is one (4,2) step for
    the direct strategy or one (2,2)+(2,1) pair for the original one.
    Recursion stops early once another stage would shrink the grid below
    ``min_nt``/``min_nx``, and the coarsest system is solved by sequential
    forward substitution.
    """

    strategy: CoarseningStrategy
    omega: float = 0.5
    nu1: int = 3
    nu2: int = 3
    eta1: int = 0
    eta2: int = 0
    depth: int = 1
    min_nt: int = 4
    min_nx: int = 3

    def __post_init__(self):
        if self.strategy not in (CoarseningStrategy.NEW, CoarseningStrategy.ORIGINAL):
            raise ValueError("cycle strategy must be NEW or ORIGINAL")
        if not 0.0 < self.omega <= 1.0:
            raise ValueError("omega must lie in (0, 1]")
        if min(self.nu1, self.nu2) < 0 or self.depth < 1:
            raise ValueError("sweep counts and depth must be nonnegative")
        if self.strategy is CoarseningStrategy.NEW and (self.eta1 or self.eta2):
            raise ValueError("the direct strategy has no intermediate level; "
                             "eta sweep counts must be zero")
        if min(self.eta1, self.eta2) < 0:
            raise ValueError("eta sweep counts must be nonnegative")


def _check_cycle_grid(g: SpaceTimeGrid):
    if g.n_t % 4 != 0:
        raise ValueError(f"cycle needs n_t divisible by 4, got {g.n_t}")
    if g.n_x < 3 or (g.n_x + 1) % 2 != 0:
        raise ValueError(f"cycle needs n_x = 2**k - 1 >= 3, got {g.n_x}")


def _smooth(op: HeatOperator, u, rhs, omega, sweeps, counter: CostCounter | None):
    if sweeps == 0:
        return u
    if counter is not None:
        counter.block_solves += sweeps * op.grid.n_t
    return jacobi_sweep(op, u, rhs, SmootherConfig(omega=omega, sweeps=sweeps))


def _restrict_counted(fine, mt, mx, counter: CostCounter | None):
    if counter is not None:
        n_t = fine.shape[0]
        blocks = 0
        if mt >= 2:
            blocks += n_t // 2
        if mt == 4:
            blocks += n_t // 4
        blocks += (n_t // mt) if mx == 2 else 0
        counter.transfer_blocks += blocks
    return restrict(fine, mt, mx)


def _prolong_counted(coarse, mt, mx, counter: CostCounter | None):
    if counter is not None:
        n_tc = coarse.shape[0]
        blocks = n_tc if mx == 2 else 0
        if mt >= 2:
            blocks += 2 * n_tc
        if mt == 4:
            blocks += 4 * n_tc
        counter.transfer_blocks += blocks
    return prolong(coarse, mt, mx)


def _coarse_solve_new(cop: HeatOperator, rhs, plan: CyclePlan, stages_left: int,
                      counter: CostCounter | None):
    g = cop.grid
    deeper = (stages_left > 0 and g.n_t % 4 == 0 and g.n_t > plan.min_nt
              and g.n_x > plan.min_nx)
    if deeper:
        return _cycle_new(cop, np.zeros_like(rhs), rhs, plan, stages_left, counter)
    if counter is not None:
        counter.block_solves += g.n_t
    return direct_solve(cop, rhs)


def _cycle_new(op: HeatOperator, u, rhs, plan: CyclePlan, stages_left: int,
               counter: CostCounter | None):
    _check_cycle_grid(op.grid)
    cop = assemble_operator(coarsen_grid(op.grid, 4, 2))
    u = _smooth(op, u, rhs, plan.omega, plan.nu1, counter)
    r = rhs - apply_operator(op, u)
    rc = _restrict_counted(r, 4, 2, counter)
    ec = _coarse_solve_new(cop, rc, plan, stages_left - 1, counter)
    u = u + _prolong_counted(ec, 4, 2, counter)
    return _smooth(op, u, rhs, plan.omega, plan.nu2, counter)


def _coarse_solve_original(cop: HeatOperator, rhs, plan: CyclePlan, stages_left: int,
                           counter: CostCounter | None):
    g = cop.grid
    deeper = (stages_left > 0 and g.n_t % 4 == 0 and g.n_t > plan.min_nt
              and g.n_x > plan.min_nx)
    if deeper:
        return _cycle_original(cop, np.zeros_like(rhs), rhs, plan, stages_left, counter)
    if counter is not None:
        counter.block_solves += g.n_t
    return direct_solve(cop, rhs)


def _cycle_original(op: HeatOperator, u, rhs, plan: CyclePlan, stages_left: int,
                    counter: CostCounter | None):
    _check_cycle_grid(op.grid)
    mop = assemble_operator(coarsen_grid(op.grid, 2, 2))
    u = _smooth(op, u, rhs, plan.omega, plan.nu1, counter)
    r = rhs - apply_operator(op, u)
    r_mid = _restrict_counted(r, 2, 2, counter)
    # approximate middle-level solve: one V from zero initial approximation
    e_mid = _smooth(mop, np.zeros_like(r_mid), r_mid, plan.omega, plan.eta1, counter)
    r_low = _restrict_counted(r_mid - apply_operator(mop, e_mid), 2, 1, counter)
    cop = assemble_operator(coarsen_grid(mop.grid, 2, 1))
    e_low = _coarse_solve_original(cop, r_low, plan, stages_left - 1, counter)
    e_mid = e_mid + _prolong_counted(e_low, 2, 1, counter)
    e_mid = _smooth(mop, e_mid, r_mid, plan.omega, plan.eta2, counter)
    u = u + _prolong_counted(e_mid, 2, 2, counter)
    return _smooth(op, u, rhs, plan.omega, plan.nu2, counter)


def cycle_new(op: HeatOperator, u, rhs, plan: CyclePlan,
              counter: CostCounter | None = None):
    """One iteration of the direct (4,2) strategy; returns the new field."""
    return _cycle_new(op, u, rhs, plan, plan.depth, counter)


def cycle_original(op: HeatOperator, u, rhs, plan: CyclePlan,
                   counter: CostCounter | None = None):
    """One iteration of the full-then-time three-level strategy."""
    return _cycle_original(op, u, rhs, plan, plan.depth, counter)


def run_cycle(op: HeatOperator, u, rhs, plan: CyclePlan,
              counter: CostCounter | None = None):
    if plan.strategy is CoarseningStrategy.NEW:
        return cycle_new(op, u, rhs, plan, counter)
    return cycle_original(op, u, rhs, plan, counter)


@dataclass(frozen=True)
class RunResult:
    """Iteration history of one solve run.

    Histories have one entry per completed iteration plus the initial
    state; costs are per-iteration increments.
    """

    solution: np.ndarray
    error_history: np.ndarray
    residual_history: np.ndarray
    block_solves: np.ndarray
    transfer_blocks: np.ndarray
    seed: int

    @property
    def iterations(self) -> int:
        return len(self.error_history) - 1


def solve(op: HeatOperator, rhs: np.ndarray, plan: CyclePlan, max_iters: int,
          tol: float, seed: int) -> RunResult:
    """Iterate the chosen cycle from a seeded uniform[0,1) initial guess.

    The error is the L_inf(L2) distance to the sequential direct solution
    (the quantity the convergence factors predict); the residual history
    is recorded for diagnostics.  Non-convergence is reported through the
    history, never as an error.
    """
    g = op.grid
    reference = direct_solve(op, rhs)  # precomputation, not counted
    rng = np.random.default_rng(seed)
    u = random_field(g, rng)
    errors = [error_norm(u, reference, g)]
    residuals = [float(np.abs(rhs - apply_operator(op, u)).max())]
    solves, transfers = [], []
    for _ in range(max_iters):
        if errors[-1] <= tol:
            break
        counter = CostCounter()
        u = run_cycle(op, u, rhs, plan, counter)
        errors.append(error_norm(u, reference, g))
        residuals.append(float(np.abs(rhs - apply_operator(op, u)).max()))
        solves.append(counter.block_solves)
        transfers.append(counter.transfer_blocks)
    return RunResult(
        solution=u,
        error_history=np.array(errors),
        residual_history=np.array(residuals),
        block_solves=np.array(solves, dtype=int),
        transfer_blocks=np.array(transfers, dtype=int),
        seed=seed,
    )
