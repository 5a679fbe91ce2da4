"""Sturm-sequence bisection for symmetric tridiagonal matrices.

Pure NumPy reference implementation.  Each count is an O(N) Python loop,
so it is only practical for small matrices; the finite-difference oracle
uses LAPACK's ``stebz`` (the same algorithm, compiled) and this module
cross-checks it in the test suite.
"""
from __future__ import annotations

import numpy as np

__all__ = ["sturm_count", "gershgorin_bounds", "bisect_eigenvalues"]


def sturm_count(diag, off, x):
    """Number of eigenvalues strictly less than ``x`` (vectorized over ``x``)."""
    diag = np.asarray(diag, dtype=float)
    off2 = np.asarray(off, dtype=float) ** 2
    x = np.atleast_1d(np.asarray(x, dtype=float))
    tiny = np.finfo(float).tiny
    count = np.zeros(x.shape, dtype=int)
    q = diag[0] - x
    q = np.where(q == 0.0, -tiny, q)
    count += q < 0
    for i in range(1, len(diag)):
        q = diag[i] - x - off2[i - 1] / q
        q = np.where(q == 0.0, -tiny, q)
        count += q < 0
    return count


def gershgorin_bounds(diag, off):
    diag = np.asarray(diag, dtype=float)
    radius = np.zeros_like(diag)
    a = np.abs(np.asarray(off, dtype=float))
    radius[:-1] += a
    radius[1:] += a
    return float(np.min(diag - radius)), float(np.max(diag + radius))


def bisect_eigenvalues(diag, off, indices, tol=None):
    """Eigenvalues with the given ascending ``indices`` (0-based) by bisection."""
    indices = np.atleast_1d(np.asarray(indices, dtype=int))
    lo_b, hi_b = gershgorin_bounds(diag, off)
    span = max(hi_b - lo_b, 1.0)
    if tol is None:
        tol = 4 * np.finfo(float).eps * span
    lo = np.full(indices.shape, lo_b - 1e-12 * span)
    hi = np.full(indices.shape, hi_b + 1e-12 * span)
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        below = sturm_count(diag, off, mid) > indices
        hi = np.where(below, mid, hi)
        lo = np.where(below, lo, mid)
    return 0.5 * (lo + hi)
