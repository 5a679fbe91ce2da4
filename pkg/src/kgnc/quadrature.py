"""Generalized Gauss-Laguerre quadrature on the half line.

Rules integrate ``f(x) x^a e^{-x}`` over ``[0, inf)``; the weight is always
factored out of the integrand by the caller.  Nodes come from the
symmetric tridiagonal Jacobi matrix of the Laguerre recurrence
(Golub-Welsch).  The first eigenvector components are obtained from the
orthonormal three-term recurrence evaluated at each node, which is the
eigenvector itself, so weights keep full relative accuracy even where they
are tiny.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, EvaluationError

__all__ = [
    "MAX_ORDER",
    "GUARD_NODES",
    "QuadratureRule",
    "gauss_laguerre_rule",
    "integrate_halfline",
    "integrate_halfline_log",
    "exact_order",
]

MAX_ORDER = 512
GUARD_NODES = 8


@dataclass(frozen=True)
class QuadratureRule:
    """Immutable Gauss-Laguerre rule.

    ``unit_weights`` are the squared first eigenvector components; the true
    weights are ``exp(log_gamma) * unit_weights`` with
    ``log_gamma = ln Gamma(weight_exponent + 1)``, kept apart so large
    exponents do not overflow.
    """

    order: int
    weight_exponent: float
    nodes: tuple
    weights: tuple
    unit_weights: tuple = ()
    log_gamma: float = 0.0

    @property
    def x(self):
        return np.asarray(self.nodes)

    @property
    def w(self):
        return np.asarray(self.weights)


def _jacobi_matrix(order, alpha):
    k = np.arange(order, dtype=float)
    diag = 2.0 * k + alpha + 1.0
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    return diag, off


def _first_components_sq(nodes, diag, off):
    """Squared first component of each normalized Jacobi eigenvector."""
    n = len(diag)
    q_prev = np.zeros_like(nodes)
    q = np.ones_like(nodes)
    total = np.ones_like(nodes)
    log_scale = np.zeros_like(nodes)
    for k in range(n - 1):
        q_next = ((nodes - diag[k]) * q - (off[k - 1] if k > 0 else 0.0) * q_prev) / off[k]
        q_prev, q = q, q_next
        total = total + q * q
        big = np.abs(q) > 1e100
        if np.any(big):
            q[big] *= 1e-100
            q_prev[big] *= 1e-100
            total[big] *= 1e-200
            log_scale[big] += 100.0 * math.log(10.0)
    # v0^2 = 1 / sum_k q_k^2 with q_k = q_scaled * exp(log_scale)
    return np.exp(-np.log(total) - 2.0 * log_scale)


@lru_cache(maxsize=256)
def gauss_laguerre_rule(order, weight_exponent=0.0):
    """Nodes and weights for ``int_0^inf f(x) x^a e^{-x} dx``.

    Parameters
    ----------
    order : int
        Number of nodes, ``1 <= order <= 512``.  The rule is exact for
        polynomials of degree ``2*order - 1``.
    weight_exponent : float
        The exponent ``a > -1`` of the weight.
    """
    if int(order) != order or not 1 <= order <= MAX_ORDER:
        raise DomainError(f"quadrature order must be an integer in [1, {MAX_ORDER}], got {order!r}")
    alpha = float(weight_exponent)
    if not alpha > -1.0:
        raise DomainError(f"weight exponent must exceed -1, got {weight_exponent!r}")
    order = int(order)
    diag, off = _jacobi_matrix(order, alpha)
    if order == 1:
        nodes = diag.copy()
    else:
        nodes = eigh_tridiagonal(diag, off, eigvals_only=True)
    nodes = np.sort(nodes)
    unit = _first_components_sq(nodes, diag, off)
    log_gamma = math.lgamma(alpha + 1.0)
    with np.errstate(over="ignore"):
        weights = np.exp(log_gamma) * unit
    return QuadratureRule(
        order, alpha, tuple(nodes.tolist()), tuple(weights.tolist()), tuple(unit.tolist()), log_gamma
    )


def _values(f, x):
    try:
        values = np.asarray(f(x), dtype=float)
        if values.shape != x.shape:
            raise ValueError
    except (TypeError, ValueError):
        values = np.array([float(f(xi)) for xi in x])
    bad = ~np.isfinite(values)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise EvaluationError(f"integrand is not finite at node {i} (x = {x[i]!r}): {values[i]!r}")
    return values


def integrate_halfline(f, rule):
    """Apply ``rule`` to ``f``; the Laguerre weight is not part of ``f``."""
    return float(np.dot(rule.w, _values(f, rule.x)))


def integrate_halfline_log(f, rule):
    """``ln`` of the quadrature sum for a nonnegative integrand, overflow-free."""
    total = float(np.dot(np.asarray(rule.unit_weights), _values(f, rule.x)))
    if total <= 0:
        raise EvaluationError("log-space quadrature needs a positive sum")
    return rule.log_gamma + math.log(total)


def exact_order(poly_degree, guard=GUARD_NODES):
    """Smallest rule order integrating a degree-``poly_degree`` polynomial exactly, plus guard nodes."""
    return max(1, (int(poly_degree) + 2) // 2) + guard
