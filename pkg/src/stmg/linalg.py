"""Spectral radius estimators used as independent cross-checks."""

from __future__ import annotations

import numpy as np


def power_iteration_radius(a: np.ndarray, iters: int = 2000, seed: int = 0) -> float:
    """Dominant |eigenvalue| estimate by plain power iteration.

    Suitable as an independent check against QR-based eigenvalues for
    matrices whose dominant eigenvalue is reasonably separated.
    """
    a = np.asarray(a)
    n = a.shape[0]
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(iters):
        w = a @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        est = nw
        v = w / nw
    return float(est)


def squared_power_radius(a: np.ndarray, squarings: int = 50) -> float:
    """Spectral radius via the power estimate ||A^k||_F^(1/k) at k = 2**squarings.

    Repeated squaring with norm tracking evaluates the limit of the power
    method stably; polynomial transients from nilpotent (Jordan) parts are
    suppressed by the enormous effective power, so the estimate resolves
    the radius of defective matrices like block-triangular iteration
    matrices, where plain power iteration converges only like 1/k.
    """
    a = np.asarray(a, dtype=complex)
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return 0.0
    m = a / norm
    log_scale = np.log(norm)
    k = 1.0
    for _ in range(squarings):
        m = m @ m
        norm = np.linalg.norm(m)
        if norm == 0.0:
            return 0.0  # nilpotent part only
        m /= norm
        log_scale = 2.0 * log_scale + np.log(norm)
        k *= 2.0
    return float(np.exp(log_scale / k))
