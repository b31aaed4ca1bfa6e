"""Restriction and prolongation in time and space, and strategy composites.

Per direction the restriction is full weighting (1/4, 1/2, 1/4) and the
prolongation is linear interpolation, the transposed stencil scaled by 2.
Coarse nodes sit at even fine indices (vertex-centered): spatial coarse
node j is fine node 2j, coarse time point k is fine time t_{2k}.

Composite correction transfers for the multigrid strategies scale the
composed interpolation by 1/mx.  This keeps P equal to mt times the
transposed composite restriction: the rediscretized coarse rows carry an
extra time-step factor mt relative to the fine rows, and the correction
stays consistent only if the prolongation returns it.
"""

from __future__ import annotations

import numpy as np


# ---------------------------------------------------------------------------
# single-direction stencils
# ---------------------------------------------------------------------------

def restrict_space(fine: np.ndarray) -> np.ndarray:
    """Full weighting along the last axis, n_x = 2*n_c + 1 interior points.

    coarse_j = 1/4 fine_{2j-1} + 1/2 fine_{2j} + 1/4 fine_{2j+1} in 1-based
    interior indexing; Dirichlet values beyond the ends are zero.
    """
    n = fine.shape[-1]
    if n % 2 != 1 or n < 3:
        raise ValueError(f"spatial size must be odd >= 3, got {n}")
    return (0.25 * fine[..., 0:-1:2]
            + 0.5 * fine[..., 1::2]
            + 0.25 * fine[..., 2::2])


def prolong_space(coarse: np.ndarray) -> np.ndarray:
    """Linear interpolation along the last axis; adjoint of restrict_space times 2."""
    nc = coarse.shape[-1]
    n = 2 * nc + 1
    fine = np.zeros(coarse.shape[:-1] + (n,))
    fine[..., 1::2] = coarse
    fine[..., 0:-1:2] += 0.5 * coarse
    fine[..., 2::2] += 0.5 * coarse
    return fine


def restrict_time(fine: np.ndarray) -> np.ndarray:
    """Full weighting along the first (time-block) axis, factor 2.

    Coarse block k lives at fine time t_{2k}.  The block before t_1 is the
    known initial value (zero in correction space) and blocks beyond t_Nt
    are zero-padded, so the final coarse block only sees two terms.
    """
    nt = fine.shape[0]
    if nt % 2 != 0:
        raise ValueError(f"time block count must be even, got {nt}")
    coarse = 0.25 * fine[0:nt:2] + 0.5 * fine[1:nt:2]
    coarse[:-1] += 0.25 * fine[2:nt:2]
    return coarse


def prolong_time(coarse: np.ndarray) -> np.ndarray:
    """Linear interpolation in time; adjoint of restrict_time times 2."""
    nc = coarse.shape[0]
    fine = np.zeros((2 * nc,) + coarse.shape[1:])
    fine[1::2] = coarse
    fine[0] = 0.5 * coarse[0]
    fine[2::2] = 0.5 * (coarse[:-1] + coarse[1:])
    return fine


# ---------------------------------------------------------------------------
# strategy composites
# ---------------------------------------------------------------------------

def restrict(fine: np.ndarray, mt: int, mx: int) -> np.ndarray:
    """Composite full-weighting restriction by factors (mt, mx)."""
    out = fine
    if mt == 2:
        out = restrict_time(out)
    elif mt == 4:
        out = restrict_time(restrict_time(out))
    elif mt != 1:
        raise ValueError(f"time factor must be 1, 2 or 4, got {mt}")
    if mx == 2:
        out = restrict_space(out)
    elif mx != 1:
        raise ValueError(f"space factor must be 1 or 2, got {mx}")
    return out


def prolong(coarse: np.ndarray, mt: int, mx: int) -> np.ndarray:
    """Composite correction prolongation by factors (mt, mx).

    Equals mt times the transposed composite restriction, realized as the
    composed per-direction interpolations scaled by 1/mx.
    """
    out = coarse
    if mx == 2:
        out = prolong_space(out)
    elif mx != 1:
        raise ValueError(f"space factor must be 1 or 2, got {mx}")
    if mt == 2:
        out = prolong_time(out)
    elif mt == 4:
        out = prolong_time(prolong_time(out))
    elif mt != 1:
        raise ValueError(f"time factor must be 1, 2 or 4, got {mt}")
    if mx == 2:
        out = out * 0.5
    return out


# ---------------------------------------------------------------------------
# assembled matrices (small grids; used by adjoint and composition checks)
# ---------------------------------------------------------------------------

def restriction_matrix_space(n_x: int) -> np.ndarray:
    nc = (n_x - 1) // 2
    r = np.zeros((nc, n_x))
    for j in range(nc):
        r[j, 2 * j] = 0.25
        r[j, 2 * j + 1] = 0.5
        r[j, 2 * j + 2] = 0.25
    return r


def restriction_matrix_time(n_t: int) -> np.ndarray:
    nc = n_t // 2
    r = np.zeros((nc, n_t))
    for j in range(nc):
        r[j, 2 * j] = 0.25
        r[j, 2 * j + 1] = 0.5
        if 2 * j + 2 < n_t:
            r[j, 2 * j + 2] = 0.25
    return r


def restriction_matrix(n_t: int, n_x: int, mt: int, mx: int) -> np.ndarray:
    """Dense composite restriction on the flattened time-major field."""
    rt = np.eye(n_t)
    nt = n_t
    for _ in range(mt.bit_length() - 1):
        rt = restriction_matrix_time(nt) @ rt
        nt //= 2
    rx = restriction_matrix_space(n_x) if mx == 2 else np.eye(n_x)
    return np.kron(rt, rx)


def prolongation_matrix(n_t: int, n_x: int, mt: int, mx: int) -> np.ndarray:
    """Dense composite correction prolongation, mt times the transposed restriction."""
    return mt * restriction_matrix(n_t, n_x, mt, mx).T
