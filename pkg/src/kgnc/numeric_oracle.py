"""Nonperturbative finite-difference oracle for the radial equation.

For a trial energy ``E`` the r-space operator

    -d^2/dr^2 + V_eff(r; E) + W_r(r; E, m)

is discretized with second-order central differences on a uniform grid
with Dirichlet ends.  ``W_r`` is the first-order non-commutative term of
the r-space equation, ``(m theta / 2r) [2 l(l+1)/r^3 - 2 (E+M) Z alpha / r^2]``.
An eigenvalue ``lam`` of that operator is consistent when
``lam = E^2 - M^2``; since the potential depends on ``E`` the energy is
found by damped fixed-point iteration.

Nothing here uses the closed-form spectrum: grid sizing relies on a
nonrelativistic Bohr estimate only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, GridError, OracleError
from .spectrum_core import QuantumNumbers

__all__ = [
    "GridSpec",
    "OracleResult",
    "default_grid",
    "operator_bands",
    "eigen_fixed_e",
    "solve_selfconsistent",
    "richardson",
    "richardson_table",
    "solve_extrapolated",
    "attainable_tol",
    "nc_shift_nonperturbative",
    "count_sign_changes",
]

DEFAULT_POINTS = 4000
DEFAULT_TOL = 1e-13


@dataclass(frozen=True)
class GridSpec:
    """Uniform interior grid ``r_i = i h``, ``i = 1..points``, ``h = r_max/(points+1)``."""

    r_max: float
    points: int = DEFAULT_POINTS

    def __post_init__(self):
        if not (math.isfinite(self.r_max) and self.r_max > 0):
            raise GridError(f"r_max must be positive, got {self.r_max!r}")
        if int(self.points) != self.points or self.points < 100:
            raise GridError(f"points must be an integer >= 100, got {self.points!r}")

    @property
    def spacing(self):
        return self.r_max / (self.points + 1)

    @property
    def r(self):
        return self.spacing * np.arange(1, self.points + 1)

    def refined(self):
        """Same box with the spacing halved."""
        return GridSpec(self.r_max, 2 * self.points + 1)


@dataclass(frozen=True)
class OracleResult:
    energy: float
    iterations: int
    converged: bool
    residual: float
    grid: GridSpec
    nodes: int = -1
    history: tuple = field(default=(), repr=False)


def default_grid(params, qn, points=DEFAULT_POINTS):
    """Box of 60 estimated decay lengths.

    The decay constant ``sqrt(M^2 - E^2)`` is estimated from the
    nonrelativistic Bohr scaling ``~ M Z alpha / n``.
    """
    kappa = params.M * params.z_alpha / qn.n
    return GridSpec(60.0 / kappa, points)


def operator_bands(params, ell, energy, m, grid):
    """Diagonal and off-diagonal of the discretized radial operator."""
    r = grid.r
    h = grid.spacing
    M, za = params.M, params.z_alpha
    diag = 2.0 / h**2 - 2.0 * (M + energy) * za / r + ell * (ell + 1) / r**2
    if params.theta > 0 and m != 0:
        # r-space theta term transcribed with its printed sign
        diag = diag + (m * params.theta / (2.0 * r)) * (
            2.0 * ell * (ell + 1) / r**3 - 2.0 * (energy + M) * za / r**2
        )
    off = np.full(grid.points - 1, -1.0 / h**2)
    return diag, off


def _check_resolution(params, energy, grid):
    # first interior node must sit well inside the inner Coulomb length
    inner = 1.0 / max((params.M + energy) * params.z_alpha, 1e-300)
    if grid.spacing > 0.25 * inner:
        raise GridError(
            f"grid spacing {grid.spacing:.3g} too coarse near the origin "
            f"(inner length {inner:.3g}); increase points or reduce r_max"
        )


def eigen_fixed_e(params, ell, trial_energy, m, grid, count=3, vectors=False):
    """Lowest ``count`` eigenvalues of the radial operator at a fixed trial energy.

    Each eigenvalue approximates ``E^2 - M^2`` once ``trial_energy`` is
    self-consistent.  Uses LAPACK bisection on Sturm counts (``stebz``).
    """
    if not abs(trial_energy) < params.M:
        raise DomainError(f"trial energy {trial_energy!r} must satisfy |E| < M")
    _check_resolution(params, trial_energy, grid)
    diag, off = operator_bands(params, ell, trial_energy, m, grid)
    count = min(int(count), grid.points)
    out = eigh_tridiagonal(
        diag, off, eigvals_only=not vectors, select="i", select_range=(0, count - 1),
        lapack_driver="stebz",
    )
    return out


def count_sign_changes(v, rel_floor=1e-8):
    v = np.asarray(v)
    big = v[np.abs(v) > rel_floor * np.max(np.abs(v))]
    return int(np.count_nonzero(np.signbit(big[1:]) != np.signbit(big[:-1])))


def solve_selfconsistent(params, qn, grid=None, tol=DEFAULT_TOL, max_iter=1000,
                         damping=0.5, energy_guess=0.0):
    """Damped fixed point ``E <- (1-g) E + g sign(E) sqrt(M^2 + lam(E))``.

    ``lam`` is the ``(n-l-1)``-th eigenvalue at the current ``E``.  Returns
    ``converged=False`` instead of raising when ``max_iter`` is exhausted.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    grid = grid or default_grid(params, qn)
    index = qn.radial_degree
    M = params.M
    energy = float(energy_guess)
    history = []
    residual = math.inf
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        lam = eigen_fixed_e(params, qn.ell, energy, qn.m, grid, count=index + 1)[index]
        if lam <= -M * M:
            raise OracleError(f"eigenvalue {lam!r} <= -M^2 has no bound-state energy")
        target = math.copysign(math.sqrt(M * M + lam), energy if energy != 0 else 1.0)
        new = (1.0 - damping) * energy + damping * target
        residual = abs(new - energy)
        energy = new
        history.append(energy)
        if residual <= tol:
            converged = True
            break
    _, vecs = eigen_fixed_e(params, qn.ell, energy, qn.m, grid, count=index + 1, vectors=True)
    nodes = count_sign_changes(vecs[:, index])
    return OracleResult(energy, it, converged, residual, grid, nodes, tuple(history))


def richardson(coarse, fine):
    """Eliminate the ``h^2`` term from values at spacings ``h`` and ``h/2``."""
    return (4.0 * fine - coarse) / 3.0


def richardson_table(values, exponents):
    """Extrapolate values at spacings ``h, h/2, h/4, ...`` to ``h -> 0``.

    ``exponents`` lists the powers of ``h`` to eliminate, in order; it needs
    one fewer entry than ``values``.
    """
    row = [float(v) for v in values]
    if len(exponents) != len(row) - 1:
        raise ValueError("need exactly len(values) - 1 exponents")
    for p in exponents:
        f = 2.0**p
        row = [(f * b - a) / (f - 1.0) for a, b in zip(row[:-1], row[1:])]
    return row[0]


def attainable_tol(grid, tol):
    """``tol`` raised to the round-off floor of the discretized operator.

    Eigenvalues of a matrix with norm ``~4/h^2`` carry absolute errors of
    order ``eps/h^2``; a fixed point cannot settle below that.
    """
    return max(float(tol), np.finfo(float).eps / grid.spacing**2)


def solve_extrapolated(params, qn, grid=None, tol=DEFAULT_TOL, **kw):
    """Richardson-extrapolated energy plus the two underlying solves."""
    grid = grid or default_grid(params, qn)
    coarse = solve_selfconsistent(params, qn, grid, attainable_tol(grid, tol), **kw)
    fine_grid = grid.refined()
    fine = solve_selfconsistent(params, qn, fine_grid, attainable_tol(fine_grid, tol), energy_guess=coarse.energy,
                                **{k: v for k, v in kw.items() if k != "energy_guess"})
    return richardson(coarse.energy, fine.energy), coarse, fine


@lru_cache(maxsize=512)
def _base_solve(params, qn, grid, tol):
    return solve_selfconsistent(params, qn, grid, tol)


def _shift_on_grid(params, qn, grid, tol):
    tol = attainable_tol(grid, tol)
    base = _base_solve(params.replace(theta=0.0), QuantumNumbers(qn.n, qn.ell), grid, tol)
    if params.theta == 0 or qn.m == 0:
        return 0.0
    pert = solve_selfconsistent(params, qn, grid, tol, energy_guess=base.energy)
    if not (base.converged and pert.converged):
        raise OracleError(f"self-consistent solve did not converge for {qn}")
    expected = qn.radial_degree
    overlap = _state_overlap(params, qn, grid, base.energy, pert.energy)
    if base.nodes != expected or pert.nodes != expected or overlap < MIN_OVERLAP:
        raise OracleError(
            f"level labelling changed (nodes {base.nodes} -> {pert.nodes}, expected {expected}; "
            f"overlap with the theta=0 state {overlap:.3f}); use a smaller theta"
        )
    return pert.energy - base.energy


MIN_OVERLAP = 0.9


def _state_overlap(params, qn, grid, base_energy, pert_energy):
    index = qn.radial_degree
    _, v0 = eigen_fixed_e(params.replace(theta=0.0), qn.ell, base_energy, 0, grid, count=index + 1, vectors=True)
    _, v1 = eigen_fixed_e(params, qn.ell, pert_energy, qn.m, grid, count=index + 1, vectors=True)
    return float(abs(np.dot(v0[:, index], v1[:, index])))


# The r^-4 term makes R^2 W_r tend to a nonzero constant at the origin for
# l = 1, so the grid sum misses a half cell: the shift error starts at O(h).
SHIFT_ERROR_EXPONENTS = (1, 2)


def nc_shift_nonperturbative(params, qn, grid=None, tol=DEFAULT_TOL, extrapolate=True):
    """``E(theta) - E(0)`` from two self-consistent solves on a shared grid.

    With ``extrapolate`` the difference is formed on ``h``, ``h/2`` and
    ``h/4`` and the ``O(h)`` and ``O(h^2)`` error terms are eliminated.
    """
    if qn.ell < 1:
        raise DomainError("the theta term is only integrable against ell >= 1 states")
    grid = grid or default_grid(params, qn)
    if not extrapolate:
        return _shift_on_grid(params, qn, grid, tol)
    grids = [grid]
    for _ in SHIFT_ERROR_EXPONENTS:
        grids.append(grids[-1].refined())
    return richardson_table([_shift_on_grid(params, qn, g, tol) for g in grids], SHIFT_ERROR_EXPONENTS)
