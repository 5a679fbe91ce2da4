"""Unperturbed Klein-Gordon Coulomb spectrum and radial bound states.

Natural units (hbar = c = 1).  The scalar and vector potentials are equal
Coulomb potentials ``V = S = -Z alpha / r``, so the radial equation is

    R'' - [E_eff + V_eff(r)] R = 0,
    V_eff = -2 (M + E) Z alpha / r + l (l + 1) / r^2,   E_eff = M^2 - E^2.

With ``rho = 2 r sqrt(E_eff)`` it becomes the Whittaker-type equation
``R'' - l(l+1)/rho^2 R + varsigma/rho R - R/4 = 0``.

Two formula modes exist wherever the published closed forms and the
direct reduction of the radial equation disagree:

``paper``
    closed forms transcribed as printed (energy with ``(n - l)`` and the
    ``1/M`` factor in varsigma).
``rederived``
    quantities re-derived from the radial equation itself; these are what
    the finite-difference oracle reproduces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError
from .quadrature import exact_order, gauss_laguerre_rule, integrate_halfline_log
from .special_functions import LaguerreSpec, laguerre_eval, log_factorial_ratio

__all__ = [
    "MODES",
    "PhysicalParams",
    "QuantumNumbers",
    "RadialState",
    "Varsigma",
    "energy_unperturbed",
    "varsigma",
    "effective_quantities",
    "rho_of_r",
    "r_of_rho",
    "make_radial_state",
    "radial_moment",
    "equation_residual",
]

MODES = ("paper", "rederived")


@dataclass(frozen=True)
class PhysicalParams:
    """Rest mass, Coulomb coupling, non-commutativity and formula mode.

    ``theta`` is the z-component of the non-commutativity vector; the other
    components are taken to vanish.
    """

    M: float = 1.0
    z_alpha: float = 0.5
    theta: float = 0.0
    mode: str = "rederived"

    def __post_init__(self):
        if not (math.isfinite(self.M) and self.M > 0):
            raise DomainError(f"rest mass M must be positive, got {self.M!r}")
        if not (math.isfinite(self.z_alpha) and self.z_alpha > 0):
            raise DomainError(f"z_alpha must be positive, got {self.z_alpha!r}")
        if not (math.isfinite(self.theta) and self.theta >= 0):
            raise DomainError(f"theta must be >= 0, got {self.theta!r}")
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {self.mode!r}")

    def replace(self, **changes):
        values = {"M": self.M, "z_alpha": self.z_alpha, "theta": self.theta, "mode": self.mode}
        values.update(changes)
        return PhysicalParams(**values)


@dataclass(frozen=True)
class QuantumNumbers:
    """``(n, l, m)`` with ``l >= 0``, ``n >= l + 1`` and ``|m| <= l``.

    The printed range ``n = 0, 1, 2, ...`` is not accepted: the Laguerre
    degree ``n - l - 1`` must be a nonnegative integer.
    """

    n: int
    ell: int
    m: int = 0

    def __post_init__(self):
        for name in ("n", "ell", "m"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise DomainError(f"{name} must be an integer, got {value!r}")
        if self.ell < 0:
            raise DomainError(f"ell must be >= 0, got {self.ell}")
        if self.n - self.ell - 1 < 0:
            raise DomainError(
                f"no radial solution for n={self.n}, ell={self.ell}: Laguerre degree n-ell-1 is negative"
            )
        if abs(self.m) > self.ell:
            raise DomainError(f"|m| must not exceed ell={self.ell}, got m={self.m}")

    @property
    def radial_degree(self):
        return self.n - self.ell - 1


class Varsigma(NamedTuple):
    """Coulomb coefficient of the rho-space equation in both modes."""

    paper: float
    rederived: float

    def for_mode(self, mode):
        return self.paper if mode == "paper" else self.rederived


def energy_unperturbed(params, qn):
    """Bound-state energy ``E0`` for ``qn`` under ``params.mode``.

    paper:      ``M [(Za)^2 - (n-l)^2 M^2] / [(Za)^2 + (n-l)^2 M^2]``
    rederived:  root of ``Za sqrt((M+E)/(M-E)) = n``, i.e.
                ``M (n^2 - Za^2) / (n^2 + Za^2)``.
    """
    M, za = params.M, params.z_alpha
    if params.mode == "paper":
        k2 = float(qn.n - qn.ell) ** 2 * M * M
        return M * (za * za - k2) / (za * za + k2)
    n2 = float(qn.n) ** 2
    return M * (n2 - za * za) / (n2 + za * za)


def varsigma(params, energy):
    """Return ``varsigma`` as printed and as re-derived, at energy ``energy``."""
    M, za, E = params.M, params.z_alpha, float(energy)
    if E >= M:
        raise DomainError(f"E={E!r} >= M={M!r} is a scattering energy")
    ratio = (M + E) / (M - E)
    if ratio < 0:
        raise DomainError(f"E={E!r} < -M gives a negative radicand")
    root = math.sqrt(ratio)
    return Varsigma(paper=za / M * root, rederived=za * root)


def effective_quantities(params, energy, ell):
    """``E_eff = M^2 - E^2`` and the Coulomb ``V_eff(r)`` for angular momentum ``ell``."""
    M, za, E = params.M, params.z_alpha, float(energy)
    if abs(E) >= M:
        raise DomainError(f"|E|={abs(E)!r} must be below M={M!r} for a bound state")
    e_eff = M * M - E * E
    coupling = 2.0 * (M + E) * za
    centrifugal = float(ell * (ell + 1))

    def v_eff(r):
        r = np.asarray(r, dtype=float)
        return -coupling / r + centrifugal / (r * r)

    return e_eff, v_eff


def rho_of_r(r, e_eff):
    if not (r > 0 and e_eff > 0):
        raise DomainError(f"rho_of_r needs r > 0 and E_eff > 0, got r={r!r}, E_eff={e_eff!r}")
    return 2.0 * r * math.sqrt(e_eff)


def r_of_rho(rho, e_eff):
    if not (rho > 0 and e_eff > 0):
        raise DomainError(f"r_of_rho needs rho > 0 and E_eff > 0, got rho={rho!r}, E_eff={e_eff!r}")
    return rho / (2.0 * math.sqrt(e_eff))


@dataclass(frozen=True)
class RadialState:
    """Normalized unperturbed radial function ``R0(rho)`` and its energy.

    ``norm_log`` is ``ln N`` with ``N`` the printed normalization constant;
    ``measured_norm`` is ``int_0^inf R0^2 drho`` computed by exact quadrature,
    carried so expectation values can be self-normalized downstream.
    """

    qn: QuantumNumbers
    params: PhysicalParams
    energy: float
    norm_log: float
    amplitude_log: float
    measured_norm: float = field(default=float("nan"))

    @property
    def laguerre(self):
        return LaguerreSpec(self.qn.radial_degree, 2 * self.qn.ell + 1)

    @property
    def e_eff(self):
        return self.params.M**2 - self.energy**2

    def polynomial_part(self, rho):
        """``R0(rho) / rho^(l+1)`` without the exponential, i.e. ``C L(rho)``."""
        return math.exp(self.amplitude_log) * laguerre_eval(self.laguerre, rho)

    def __call__(self, rho):
        rho_arr = np.asarray(rho, dtype=float)
        val = (
            math.exp(self.amplitude_log)
            * rho_arr ** (self.qn.ell + 1)
            * laguerre_eval(self.laguerre, rho_arr)
            * np.exp(-0.5 * rho_arr)
        )
        return float(val) if np.ndim(val) == 0 else val

    evaluator = __call__


def make_radial_state(params, qn):
    """Assemble ``R0(rho) = N rho^(l+1) (n-l-1)!/(n+l)! (2l+1)! L^(2l+1)_(n-l-1)(rho) e^(-rho/2)``.

    ``N = sqrt((n+l)! / (2 |E0| n (n-l-1)!)) / (2l+1)!`` is evaluated in log
    space.  ``E0`` follows ``params.mode``.
    """
    n, ell = qn.n, qn.ell
    energy = energy_unperturbed(params, qn)
    if not abs(energy) < params.M:
        raise DomainError(f"E0={energy!r} is not a bound-state energy (|E0| >= M)")
    if energy == 0.0:
        raise DomainError("E0 = 0 makes the normalization constant infinite")
    log_fact_2l1 = log_factorial_ratio(2 * ell + 1, 0)
    norm_log = 0.5 * (log_factorial_ratio(n + ell, n - ell - 1) - math.log(2.0 * abs(energy) * n)) - log_fact_2l1
    amplitude_log = norm_log + log_factorial_ratio(n - ell - 1, n + ell) + log_fact_2l1
    state = RadialState(qn, params, energy, norm_log, amplitude_log)
    return RadialState(qn, params, energy, norm_log, amplitude_log, radial_moment(state, 0))


def radial_moment(state, power, guard=None):
    """``int_0^inf R0(rho)^2 rho^power drho`` by Gauss-Laguerre quadrature.

    The weight exponent absorbs ``rho^(2l+2+power)`` so the remaining
    integrand is the squared Laguerre polynomial and the rule is exact.
    """
    ell, k = state.qn.ell, state.qn.radial_degree
    alpha = 2 * ell + 2 + int(power)
    if alpha <= -1:
        raise DomainError(
            f"int R0^2 rho^{power} drho diverges at the origin for ell={ell}"
        )
    order = exact_order(2 * k) if guard is None else exact_order(2 * k, guard)
    rule = gauss_laguerre_rule(order, float(alpha))
    spec = state.laguerre
    log_integral = integrate_halfline_log(lambda x: laguerre_eval(spec, x) ** 2, rule)
    return math.exp(2.0 * state.amplitude_log + log_integral)


# 8th-order central stencil for the second derivative
_D2_COEFFS = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])


def equation_residual(state, rho, coefficient=None, step=1e-2):
    """Residual of ``R'' - [l(l+1)/rho^2 - c/rho + 1/4] R`` at ``rho``.

    ``R''`` comes from an eighth-order central difference.  ``coefficient``
    defaults to varsigma at ``state.energy`` in the state's mode.
    """
    rho = np.asarray(rho, dtype=float)
    if coefficient is None:
        coefficient = varsigma(state.params, state.energy).for_mode(state.params.mode)
    offsets = np.arange(-4, 5) * step
    samples = np.stack([state(rho + d) for d in offsets])
    d2 = np.tensordot(_D2_COEFFS, samples, axes=1) / step**2
    ell = state.qn.ell
    return d2 - (ell * (ell + 1) / rho**2 - coefficient / rho + 0.25) * state(rho)
