"""Generalized Laguerre polynomials and log-space factorial ratios.

The radial wavefunctions are built from ``L^{(2l+1)}_{n-l-1}`` and a
normalization that contains ratios such as ``(n+l)!/(n-l-1)!``.  Both are
kept here: polynomials are evaluated with the forward three-term recurrence
and factorials never leave log space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "LaguerreSpec",
    "laguerre_eval",
    "laguerre_derivative",
    "laguerre_series",
    "log_factorial_ratio",
]


@dataclass(frozen=True)
class LaguerreSpec:
    """Degree and order of a generalized Laguerre polynomial ``L^order_degree``."""

    degree: int
    order: float

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise DomainError(f"Laguerre degree must be a nonnegative integer, got {self.degree!r}")
        if not self.order > -1:
            raise DomainError(f"Laguerre order must exceed -1, got {self.order!r}")


def _check_x(x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise DomainError("Laguerre evaluation is restricted to finite x >= 0")
    return arr


def _recurrence(k, alpha, x):
    # (j+1) L_{j+1} = (2j+1+alpha-x) L_j - (j+alpha) L_{j-1}
    prev = np.ones_like(x)
    if k == 0:
        return prev
    cur = 1.0 + alpha - x
    for j in range(1, k):
        prev, cur = cur, ((2 * j + 1 + alpha - x) * cur - (j + alpha) * prev) / (j + 1)
    return cur


def laguerre_eval(spec, x):
    """Evaluate ``L^alpha_k(x)`` by forward recurrence.

    Accepts a scalar or an array of nonnegative abscissae and returns the
    same shape (a Python float for scalar input).
    """
    arr = _check_x(x)
    out = _recurrence(int(spec.degree), float(spec.order), arr)
    return float(out) if out.ndim == 0 else out


def laguerre_derivative(spec, x):
    """Derivative via ``d/dx L^a_k = -L^{a+1}_{k-1}``; identically zero for ``k = 0``."""
    arr = _check_x(x)
    if spec.degree == 0:
        out = np.zeros_like(arr)
    else:
        out = -_recurrence(int(spec.degree) - 1, float(spec.order) + 1.0, arr)
    return float(out) if out.ndim == 0 else out


def laguerre_series(spec, x):
    """Explicit finite sum ``sum_i (-1)^i C(k+a, k-i) x^i / i!``.

    Slow and cancellation-prone for large ``x``; meant as a test oracle for
    :func:`laguerre_eval`, not for production use.
    """
    arr = _check_x(x)
    k, a = int(spec.degree), float(spec.order)
    total = np.zeros_like(arr)
    for i in range(k + 1):
        # generalized binomial C(k+a, k-i) via Gamma functions
        log_binom = math.lgamma(k + a + 1) - math.lgamma(k - i + 1) - math.lgamma(a + i + 1)
        total = total + (-1) ** i * math.exp(log_binom) * arr**i / math.factorial(i)
    return float(total) if total.ndim == 0 else total


def log_factorial_ratio(a, b):
    """Return ``ln(a!/b!)`` by summing logarithms over the shorter range."""
    if int(a) != a or int(b) != b or a < 0 or b < 0:
        raise DomainError(f"factorial arguments must be nonnegative integers, got {a!r}, {b!r}")
    a, b = int(a), int(b)
    if a == b:
        return 0.0
    lo, hi = (b, a) if a > b else (a, b)
    s = math.fsum(math.log(i) for i in range(lo + 1, hi + 1))
    return s if a > b else -s
