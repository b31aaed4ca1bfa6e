"""Eigenvalues of batches of small dense complex matrices.

The harmonic-space analysis needs spectral radii of very many 8x8
complex matrices, which makes per-matrix LAPACK calls the bottleneck.
This module bundles a Hessenberg reduction plus Wilkinson-shifted QR
iteration, jitted with numba when available; matrices that fail to
converge (and all matrices when numba is missing) fall back to
``numpy.linalg.eigvals``.  Tests cross-check both paths against each
other and against power iteration.
"""

from __future__ import annotations

import numpy as np

try:  # pragma: no cover - exercised indirectly
    import numba as _nb

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _nb = None
    _HAVE_NUMBA = False

_MAXITER_PER_N = 40
_EXCEPTIONAL_EVERY = 12


def _qr_eigvals_impl(a, ev, work):
    """Eigenvalues of one complex matrix in-place; returns True on success.

    ``work`` is a scratch buffer of length >= 3*n shared across calls to
    avoid per-matrix allocations; it is split into the Householder vector
    and the Givens rotation coefficients.
    """
    n = a.shape[0]
    v = work[:n]
    cs = work[n:2 * n]
    sn = work[2 * n:3 * n]
    # Householder reduction to upper Hessenberg form
    for k in range(n - 2):
        xnorm2 = 0.0
        for i in range(k + 1, n):
            xnorm2 += a[i, k].real ** 2 + a[i, k].imag ** 2
        xnorm = np.sqrt(xnorm2)
        if xnorm < 1e-300:
            continue
        x0 = a[k + 1, k]
        ax0 = abs(x0)
        phase = x0 / ax0 if ax0 > 0.0 else 1.0 + 0.0j
        m = n - k - 1
        for i in range(m):
            v[i] = a[k + 1 + i, k]
        v[0] += phase * xnorm
        vnorm2 = 0.0
        for i in range(m):
            vnorm2 += v[i].real ** 2 + v[i].imag ** 2
        if vnorm2 < 1e-300:
            continue
        for j in range(k, n):
            s = 0.0 + 0.0j
            for i in range(m):
                s += np.conj(v[i]) * a[k + 1 + i, j]
            s = 2.0 * s / vnorm2
            for i in range(m):
                a[k + 1 + i, j] -= s * v[i]
        for i in range(n):
            s = 0.0 + 0.0j
            for j in range(m):
                s += a[i, k + 1 + j] * v[j]
            s = 2.0 * s / vnorm2
            for j in range(m):
                a[i, k + 1 + j] -= s * np.conj(v[j])
    for i in range(n):
        for j in range(i + 2, n):
            a[j, i] = 0.0
    # shifted QR iteration with deflation
    hi = n - 1
    iters = 0
    stagnation = 0
    maxiter = _MAXITER_PER_N * n
    while hi >= 0:
        if hi == 0:
            ev[0] = a[0, 0]
            break
        # deflate converged trailing eigenvalues
        tiny = 1e-16 * (abs(a[hi - 1, hi - 1]) + abs(a[hi, hi]))
        if abs(a[hi, hi - 1]) <= tiny:
            ev[hi] = a[hi, hi]
            hi -= 1
            stagnation = 0
            continue
        if iters >= maxiter:
            return False
        # active block start
        lo = hi - 1
        while lo > 0:
            tiny = 1e-16 * (abs(a[lo - 1, lo - 1]) + abs(a[lo, lo]))
            if abs(a[lo, lo - 1]) <= tiny:
                a[lo, lo - 1] = 0.0
                break
            lo -= 1
        # Wilkinson shift from the trailing 2x2, exceptional shift on stagnation
        if stagnation > 0 and stagnation % _EXCEPTIONAL_EVERY == 0:
            mu = a[hi, hi] + 0.75 * abs(a[hi, hi - 1])
        else:
            tr = a[hi - 1, hi - 1] + a[hi, hi]
            det = a[hi - 1, hi - 1] * a[hi, hi] - a[hi - 1, hi] * a[hi, hi - 1]
            disc = np.sqrt(tr * tr - 4.0 * det)
            l1 = 0.5 * (tr + disc)
            l2 = 0.5 * (tr - disc)
            mu = l1 if abs(l1 - a[hi, hi]) < abs(l2 - a[hi, hi]) else l2
        for i in range(lo, hi + 1):
            a[i, i] -= mu
        for i in range(lo, hi):
            x = a[i, i]
            y = a[i + 1, i]
            r = np.sqrt(abs(x) ** 2 + abs(y) ** 2)
            if r < 1e-300:
                c = 1.0 + 0.0j
                s = 0.0 + 0.0j
            else:
                c = x / r
                s = y / r
            cs[i] = c
            sn[i] = s
            for j in range(i, hi + 1):
                t1 = a[i, j]
                t2 = a[i + 1, j]
                a[i, j] = np.conj(c) * t1 + np.conj(s) * t2
                a[i + 1, j] = -s * t1 + c * t2
        for i in range(lo, hi):
            c = cs[i]
            s = sn[i]
            jhi = i + 2 if i + 2 < hi else hi
            for j in range(lo, jhi + 1):
                t1 = a[j, i]
                t2 = a[j, i + 1]
                a[j, i] = c * t1 + s * t2
                a[j, i + 1] = -np.conj(s) * t1 + np.conj(c) * t2
        for i in range(lo, hi + 1):
            a[i, i] += mu
        iters += 1
        stagnation += 1
    return True


if _HAVE_NUMBA:  # pragma: no cover - import-time specialization
    _qr_eigvals_jit = _nb.njit(cache=True)(_qr_eigvals_impl)

    @_nb.njit(parallel=True, cache=True)
    def _batch_jit(mats, evs, flags):
        n = mats.shape[1]
        nthreads = _nb.get_num_threads()
        works = np.empty((nthreads, 3 * n), dtype=np.complex128)
        for b in _nb.prange(mats.shape[0]):
            tid = _nb.get_thread_id()
            flags[b] = _qr_eigvals_jit(mats[b], evs[b], works[tid])


def eigvals_batch(mats: np.ndarray) -> np.ndarray:
    """Eigenvalues of a stack of small complex matrices, shape (..., n, n) -> (..., n)."""
    mats = np.asarray(mats, dtype=np.complex128)
    n = mats.shape[-1]
    if mats.shape[-2] != n:
        raise ValueError("matrices must be square")
    lead = mats.shape[:-2]
    flat = np.ascontiguousarray(mats.reshape(-1, n, n)).copy()
    if not _HAVE_NUMBA:
        return np.linalg.eigvals(flat).reshape(lead + (n,))
    evs = np.zeros((flat.shape[0], n), dtype=np.complex128)
    flags = np.zeros(flat.shape[0], dtype=np.bool_)
    _batch_jit(flat, evs, flags)
    if not flags.all():
        bad = np.flatnonzero(~flags)
        evs[bad] = np.linalg.eigvals(mats.reshape(-1, n, n)[bad])
    return evs.reshape(lead + (n,))


def spectral_radius_batch(mats: np.ndarray) -> np.ndarray:
    """Spectral radii of a stack of small complex matrices."""
    return np.abs(eigvals_batch(mats)).max(axis=-1)
