"""First-order energy shift from spatial non-commutativity.

With the non-commutativity vector along z, ``theta . L -> m theta`` and the
rho-space radial operator acquires the extra bracket term

    W(rho) = m theta [4 l(l+1) E_eff / rho^4 - c sqrt(E_eff) Z alpha / rho^3]

where ``c = 2 (1 + E/M)`` as printed (paper mode) or ``c = 2 (M + E)``
(rederived mode, obtained by rescaling the r-space equation).  The two
agree at ``M = 1``.

Two routes to the shift are provided:

``paper``
    the closed-form shift as printed, transcribed verbatim.
``matrix``
    ``<W>`` over the self-normalized unperturbed state, converted to an
    energy shift with ``dE = <W> / Lambda'(E0)``.  ``Lambda(E)`` is the
    lowest-consistent eigenvalue function of the rho-space bracket,
    ``varsigma(E)^2 / (4 n^2) - 1/4``, whose root is ``E0``.  The energy
    enters the rho operator nonlinearly, so the bracket eigenvalue shift is
    not itself the energy shift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import DomainError, SingularFormulaError
from .spectrum_core import QuantumNumbers, make_radial_state, radial_moment, varsigma

__all__ = [
    "ROUTES",
    "Expectation",
    "NCShift",
    "Sublevel",
    "SplittingReport",
    "nc_potential_term",
    "expectation_inverse_power",
    "laguerre_identity_moment",
    "bracket_eigenvalue",
    "bracket_slope",
    "shift_per_unit",
    "nc_energy_shift",
    "compute_nc_shift",
    "split_level",
]

ROUTES = ("paper", "matrix", "oracle")


def _coulomb_factor(params, energy):
    if params.mode == "paper":
        return 2.0 * (1.0 + energy / params.M)
    return 2.0 * (params.M + energy)


def _check_m(ell, m):
    if int(m) != m or abs(m) > ell:
        raise DomainError(f"m={m!r} is outside [-{ell}, {ell}]")


def nc_potential_term(params, state, m):
    """Return ``W(rho)``; the unperturbed bracket acquires ``-W``."""
    ell = state.qn.ell
    _check_m(ell, m)
    e_eff = state.e_eff
    quartic = 4.0 * ell * (ell + 1) * e_eff
    cubic = _coulomb_factor(params, state.energy) * math.sqrt(e_eff) * params.z_alpha
    strength = m * params.theta

    def w(rho):
        return strength * (quartic / rho**4 - cubic / rho**3)

    return w


@dataclass(frozen=True)
class Expectation:
    """An inverse-power expectation value and the norm it was taken against.

    ``value`` uses the printed normalization; ``self_normalized`` divides by
    the measured ``int R0^2 drho``.
    """

    k: int
    method: str
    value: float
    norm: float

    @property
    def self_normalized(self):
        return self.value / self.norm


def expectation_inverse_power(state, k, method="quadrature"):
    """``<rho^-k>`` with the printed pairing ``<rho^-k> = int R0^2 rho^(2-k) drho``.

    ``method="quadrature"`` integrates exactly; ``method="paper_closed_form"``
    evaluates the printed expressions (``k`` in {3, 4} only).
    """
    if k not in (1, 2, 3, 4):
        raise DomainError(f"k must be 1, 2, 3 or 4, got {k!r}")
    n, ell = state.qn.n, state.qn.ell
    if method == "quadrature":
        value = radial_moment(state, 2 - k)
    elif method == "paper_closed_form":
        e_abs = abs(state.energy)
        if k == 3:
            if ell == 0:
                raise SingularFormulaError("printed <rho^-3> is singular at ell=0")
            value = 1.0 / (2.0 * e_abs) / (ell * (2 * ell + 1) * (2 * ell + 2))
        elif k == 4:
            if 2 * ell - 1 <= 0:
                raise SingularFormulaError("printed <rho^-4> has Gamma(2l-1) singular at ell=0")
            gamma_ratio = math.exp(math.lgamma(2 * ell - 1) - math.lgamma(2 * ell + 4))
            value = gamma_ratio * (3 * n * n - ell * (ell + 1)) / (n * e_abs)
        else:
            raise DomainError("printed closed forms exist only for k = 3 and 4")
    else:
        raise DomainError(f"unknown method {method!r}")
    return Expectation(k, method, value, state.measured_norm)


def laguerre_identity_moment(state, k):
    """Closed Laguerre-integral value of ``int R0^2 rho^(2-k) drho``.

    Uses ``int x^(a+j) e^-x (L^a_d)^2 dx`` for ``j = -1, 0, 1, 2``, all multiples
    of ``h = Gamma(d+a+1)/d!``.  Independent of the quadrature path.
    """
    if k not in (1, 2, 3, 4):
        raise DomainError(f"k must be 1, 2, 3 or 4, got {k!r}")
    d, a = state.qn.radial_degree, 2 * state.qn.ell + 1
    h = math.exp(math.lgamma(d + a + 1) - math.lgamma(d + 1))
    factor = {
        4: 1.0 / a,
        3: 1.0,
        2: 2.0 * d + a + 1,
        1: 6.0 * d * d + 6.0 * d * (a + 1) + (a + 1) * (a + 2),
    }[k]
    return math.exp(2.0 * state.amplitude_log) * h * factor


def bracket_eigenvalue(params, n, energy):
    """``Lambda(E) = varsigma(E)^2 / (4 n^2) - 1/4`` for principal number ``n``."""
    s = varsigma(params, energy).for_mode(params.mode)
    return s * s / (4.0 * n * n) - 0.25


def bracket_slope(params, n, energy, rel_step=1e-3):
    """``dLambda/dE`` by a five-point central difference."""
    h = rel_step * (params.M - abs(energy))
    f = lambda e: bracket_eigenvalue(params, n, e)
    return (-f(energy + 2 * h) + 8 * f(energy + h) - 8 * f(energy - h) + f(energy - 2 * h)) / (12 * h)


def _require_splittable(qn):
    if qn.ell == 0:
        raise SingularFormulaError("shift undefined at ell=0 (spin-orbit-like term singular at ell=0)")


def shift_per_unit(params, qn, route):
    """Shift divided by ``m theta``; independent of ``m`` and ``theta``."""
    _require_splittable(qn)
    n, ell = qn.n, qn.ell
    state = make_radial_state(params, QuantumNumbers(n, ell))
    e_abs = abs(state.energy)
    if route == "paper":
        za, M = params.z_alpha, params.M
        nl2 = float(n - ell) ** 2
        first = (3 * n * n - ell * (ell + 1)) / (n * (2 * ell - 1) * (2 * ell + 3))
        second = 2.0 * nl2 * za / (ell * (ell + 1) * (nl2 + (za / M) ** 2))
        return (first - second) / (4.0 * (2 * ell + 1) * e_abs)
    if route == "matrix":
        e_eff = state.e_eff
        quartic = 4.0 * ell * (ell + 1) * e_eff * radial_moment(state, -4)
        cubic = _coulomb_factor(params, state.energy) * math.sqrt(e_eff) * params.z_alpha * radial_moment(state, -3)
        mean_w = (quartic - cubic) / state.measured_norm
        return mean_w / bracket_slope(params, n, state.energy)
    raise DomainError(f"route must be 'paper' or 'matrix', got {route!r}")


def nc_energy_shift(params, qn, route="matrix"):
    """First-order shift of level ``qn`` along ``route`` ('paper' or 'matrix')."""
    _require_splittable(qn)
    _check_m(qn.ell, qn.m)
    return qn.m * params.theta * shift_per_unit(params, qn, route)


@dataclass(frozen=True)
class NCShift:
    qn: QuantumNumbers
    delta_e_paper: float
    delta_e_matrix: float
    delta_e_oracle: Optional[float] = None


def compute_nc_shift(params, qn, oracle_grid=None, with_oracle=False):
    """Collect every available route for ``qn`` into an :class:`NCShift`."""
    oracle = None
    if with_oracle:
        from .numeric_oracle import nc_shift_nonperturbative

        oracle = nc_shift_nonperturbative(params, qn, grid=oracle_grid)
    return NCShift(
        qn,
        nc_energy_shift(params, qn, "paper"),
        nc_energy_shift(params, qn, "matrix"),
        oracle,
    )


class Sublevel(NamedTuple):
    m: int
    shift: Optional[float]
    total: float


@dataclass(frozen=True)
class SplittingReport:
    n: int
    ell: int
    base_energy: float
    route: str
    sublevels: tuple
    note: str = ""

    @property
    def shifts(self):
        return [s.shift for s in self.sublevels]


def split_level(params, n, ell, route="matrix", oracle_grid=None):
    """Expand level ``(n, ell)`` into its ``2 ell + 1`` magnetic sublevels.

    ``ell = 0`` yields a single unshifted sublevel annotated as having no
    splitting instead of raising.
    """
    base_qn = QuantumNumbers(n, ell)
    base = make_radial_state(params, base_qn).energy
    if ell == 0:
        return SplittingReport(n, ell, base, route, (Sublevel(0, None, base),), "no splitting defined at ell=0")
    if route == "oracle":
        from .numeric_oracle import nc_shift_nonperturbative

        shifts = [
            nc_shift_nonperturbative(params, QuantumNumbers(n, ell, m), grid=oracle_grid)
            for m in range(-ell, ell + 1)
        ]
    else:
        unit = shift_per_unit(params, base_qn, route)
        shifts = [m * params.theta * unit for m in range(-ell, ell + 1)]
    subs = tuple(Sublevel(m, s, base + s) for m, s in zip(range(-ell, ell + 1), shifts))
    return SplittingReport(n, ell, base, route, subs)
