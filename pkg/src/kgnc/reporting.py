"""Batch spectrum runs, discrepancy ledger and output writers."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional

from . import __version__
from .errors import KGError, SingularFormulaError
from .nc_perturbation import (
    expectation_inverse_power,
    laguerre_identity_moment,
    split_level,
)
from .numeric_oracle import nc_shift_nonperturbative, solve_extrapolated
from .spectrum_core import QuantumNumbers, energy_unperturbed, make_radial_state

__all__ = [
    "CSV_HEADER",
    "RELATIVE_FLOOR",
    "PAPER_TOL",
    "IDENTITY_TOL",
    "ORACLE_ENERGY_TOL",
    "ORACLE_SHIFT_TOL",
    "DiscrepancyRecord",
    "Level",
    "SpectrumTable",
    "make_record",
    "run_spectrum",
    "emit",
    "render",
]

CSV_HEADER = ("n", "ell", "m", "E0", "dE_paper", "dE_matrix", "dE_oracle", "E_total", "route_flags")

RELATIVE_FLOOR = 1e-300
PAPER_TOL = 1e-6
IDENTITY_TOL = 1e-10
ORACLE_ENERGY_TOL = 1e-6
# first-order vs nonperturbative shift; the remainder grows like sqrt(theta)
ORACLE_SHIFT_TOL = 5e-2


@dataclass(frozen=True)
class DiscrepancyRecord:
    """One closed-form value paired with an independent value.

    ``kind`` is ``paper`` for printed formulas checked against this
    package's numerics, ``identity`` for quadrature checked against closed
    Laguerre integrals, and ``oracle`` for closed forms checked against the
    finite-difference solver.
    """

    n: int
    ell: int
    quantity: str
    kind: str
    paper_value: Optional[float]
    oracle_value: Optional[float]
    relative_deviation: Optional[float]
    tolerance: float
    verdict: str
    note: str = ""


def make_record(n, ell, quantity, kind, paper, oracle, tol, note=""):
    if paper is None or oracle is None:
        return DiscrepancyRecord(n, ell, quantity, kind, paper, oracle, None, tol, "skipped", note)
    dev = abs(paper - oracle) / max(abs(oracle), RELATIVE_FLOOR)
    verdict = "match" if dev <= tol else "mismatch"
    return DiscrepancyRecord(n, ell, quantity, kind, paper, oracle, dev, tol, verdict, note)


def _singular(n, ell, quantity, kind, oracle, tol, exc):
    return DiscrepancyRecord(n, ell, quantity, kind, None, oracle, None, tol, "singular", str(exc))


@dataclass
class Level:
    n: int
    ell: int
    energy: Optional[float]
    energy_over_m: Optional[float]
    sublevels: list = field(default_factory=list)
    note: str = ""


@dataclass
class SpectrumTable:
    config: object
    levels: list = field(default_factory=list)
    discrepancies: list = field(default_factory=list)

    @property
    def primary_route(self):
        for route in ("matrix", "oracle", "paper"):
            if route in self.config.routes:
                return route
        return self.config.routes[0]


def _level_records(config, n, ell, state, paper_e0):
    """Ledger entries for one ``(n, ell)`` level; count depends only on config."""
    params = config.params
    out = []

    # norm: a normalization constant claims unit norm
    out.append(make_record(n, ell, "norm", "paper", 1.0, state.measured_norm, PAPER_TOL,
                           "printed constant implies int R0^2 drho = 1; oracle is exact quadrature"))
    for k, label in ((3, "rho^-3"), (4, "rho^-4")):
        quad = expectation_inverse_power(state, k, "quadrature").value
        try:
            printed = expectation_inverse_power(state, k, "paper_closed_form").value
            out.append(make_record(n, ell, label, "paper", printed, quad, PAPER_TOL,
                                   f"printed closed form vs quadrature of int R0^2 rho^{2 - k} drho"))
        except SingularFormulaError as exc:
            out.append(_singular(n, ell, label, "paper", quad, PAPER_TOL, exc))

    rederived = energy_unperturbed(params.replace(mode="rederived"), QuantumNumbers(n, ell))
    out.append(make_record(n, ell, "E0", "paper", paper_e0, rederived, PAPER_TOL,
                           "printed energy vs root of the radial quantization condition"))

    if ell >= 1:
        reports = {r: split_level(params, n, ell, r) for r in ("paper", "matrix")}
        dp = reports["paper"].sublevels[-1].shift
        dm = reports["matrix"].sublevels[-1].shift
        out.append(make_record(n, ell, "dE", "paper", dp, dm, PAPER_TOL,
                               f"m={ell}: printed shift vs first-order matrix element"))
    else:
        out.append(_singular(n, ell, "dE", "paper", None, PAPER_TOL,
                             SingularFormulaError("shift undefined at ell=0")))

    for k, label in ((2, "identity:norm"), (3, "identity:rho^-3"), (4, "identity:rho^-4")):
        quad = expectation_inverse_power(state, k, "quadrature").value
        out.append(make_record(n, ell, label, "identity", quad, laguerre_identity_moment(state, k),
                               IDENTITY_TOL, "quadrature vs closed Laguerre integral"))
    return out


def _oracle_records(config, n, ell, oracle_energy, oracle_shift, matrix_shift):
    params = config.params
    rederived = energy_unperturbed(params.replace(mode="rederived"), QuantumNumbers(n, ell))
    out = [make_record(n, ell, "oracle:E0", "oracle", rederived, oracle_energy, ORACLE_ENERGY_TOL,
                       "rederived closed form vs finite-difference solve")]
    if ell >= 1:
        out.append(make_record(n, ell, "oracle:dE", "oracle", matrix_shift, oracle_shift, ORACLE_SHIFT_TOL,
                               f"m={ell}: first-order matrix element vs nonperturbative shift"))
    else:
        out.append(_singular(n, ell, "oracle:dE", "oracle", None, ORACLE_SHIFT_TOL,
                             SingularFormulaError("shift undefined at ell=0")))
    return out


def _pairs(config):
    for n in range(1, config.n_max + 1):
        for ell in range(n):
            if config.ell is None or ell == config.ell:
                yield n, ell


def run_spectrum(config):
    """Evaluate every level in range along the requested routes.

    Per-level failures become annotations on that level; the batch never
    aborts on a domain error.
    """
    params = config.params
    table = SpectrumTable(config)
    for n, ell in _pairs(config):
        qn = QuantumNumbers(n, ell)
        try:
            state = make_radial_state(params, qn)
        except KGError as exc:
            table.levels.append(Level(n, ell, None, None, [], f"error: {exc}"))
            continue
        e0 = state.energy
        level = Level(n, ell, e0, e0 / params.M)
        paper_e0 = energy_unperturbed(params.replace(mode="paper"), qn)
        try:
            table.discrepancies.extend(_level_records(config, n, ell, state, paper_e0))
        except KGError as exc:
            level.note = f"error: {exc}"

        shifts = {}
        for route in config.routes:
            try:
                if route == "oracle":
                    grid = config.oracle_grid(qn)
                    if ell == 0:
                        shifts[route] = [None]
                    else:
                        shifts[route] = [
                            nc_shift_nonperturbative(params, QuantumNumbers(n, ell, m), grid, config.tol)
                            for m in range(-ell, ell + 1)
                        ]
                else:
                    shifts[route] = split_level(params, n, ell, route).shifts
            except KGError as exc:
                shifts[route] = [None] * (2 * ell + 1)
                level.note = (level.note + "; " if level.note else "") + f"{route} error: {exc}"

        if "oracle" in config.routes:
            try:
                grid = config.oracle_grid(qn)
                e_oracle, _, _ = solve_extrapolated(params, qn, grid, config.tol)
                matrix_shift = split_level(params, n, ell, "matrix").shifts[-1] if ell else None
                table.discrepancies.extend(
                    _oracle_records(config, n, ell, e_oracle, shifts["oracle"][-1], matrix_shift)
                )
            except KGError as exc:
                level.note = (level.note + "; " if level.note else "") + f"oracle error: {exc}"

        if ell == 0:
            level.note = level.note or "no splitting defined at ell=0"
        primary = table.primary_route
        for i, m in enumerate(range(-ell, ell + 1)):
            row = {r: shifts.get(r, [None] * (2 * ell + 1))[i] for r in ("paper", "matrix", "oracle")}
            main = row.get(primary)
            total = e0 + main if main is not None else e0
            level.sublevels.append({"m": m, "dE": row, "E_total": total})
        table.levels.append(level)
    return table


# ---------------------------------------------------------------- writers


def _fmt12(x):
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else format(x, ".12g")


def _route_flags(table, level):
    flags = [r for r in table.config.routes]
    if level.note:
        flags.append(level.note)
    return "|".join(flags)


def _render_csv(table):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(CSV_HEADER)
    for level in table.levels:
        flags = _route_flags(table, level)
        subs = level.sublevels or [{"m": "", "dE": {}, "E_total": None}]
        for sub in subs:
            d = sub["dE"]
            writer.writerow([
                level.n, level.ell, sub["m"], _fmt12(level.energy),
                _fmt12(d.get("paper")), _fmt12(d.get("matrix")), _fmt12(d.get("oracle")),
                _fmt12(sub["E_total"]), flags,
            ])
    return buf.getvalue()


def _clean(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def _render_json(table):
    cfg = table.config
    p = cfg.params
    meta = {
        "package": "kgnc",
        "version": __version__,
        "mass": p.M,
        "z_alpha": p.z_alpha,
        "theta": p.theta,
        "mode": p.mode,
        "n_max": cfg.n_max,
        "ell": cfg.ell,
        "routes": list(cfg.routes),
        "primary_route": table.primary_route,
        "grid_rmax": cfg.grid_rmax,
        "grid_points": cfg.grid_points,
        "tol": cfg.tol,
    }
    levels = []
    for level in table.levels:
        levels.append({
            "n": level.n,
            "ell": level.ell,
            "E0": _clean(level.energy),
            "E0_over_M": _clean(level.energy_over_m),
            "note": level.note,
            "sublevels": [
                {
                    "m": s["m"],
                    "dE_paper": _clean(s["dE"].get("paper")),
                    "dE_matrix": _clean(s["dE"].get("matrix")),
                    "dE_oracle": _clean(s["dE"].get("oracle")),
                    "E_total": _clean(s["E_total"]),
                }
                for s in level.sublevels
            ],
        })
    records = [
        {
            "n": r.n,
            "ell": r.ell,
            "quantity": r.quantity,
            "kind": r.kind,
            "paper_value": _clean(r.paper_value),
            "oracle_value": _clean(r.oracle_value),
            "relative_deviation": _clean(r.relative_deviation),
            "tolerance": r.tolerance,
            "verdict": r.verdict,
            "note": r.note,
        }
        for r in table.discrepancies
    ]
    # float repr is the shortest string that round-trips (at most 17 digits)
    return json.dumps({"meta": meta, "levels": levels, "discrepancies": records}, indent=2,
                      allow_nan=False) + "\n"


SVG_WIDTH = 640
SVG_HEIGHT = 480
_MARGIN = 60


def svg_magnification(table):
    """Scale so the widest splitting covers 10% of the smallest level gap."""
    energies = sorted({lv.energy for lv in table.levels if lv.energy is not None})
    gaps = [b - a for a, b in zip(energies[:-1], energies[1:]) if b - a > 0]
    gap = min(gaps) if gaps else max(abs(energies[0]), 1.0) if energies else 1.0
    widest = 0.0
    for lv in table.levels:
        shifts = [s["dE"].get(table.primary_route) for s in lv.sublevels]
        shifts = [s for s in shifts if s is not None]
        if shifts:
            widest = max(widest, max(shifts) - min(shifts))
    return 0.1 * gap / widest if widest > 0 else 1.0


def _render_svg(table):
    levels = [lv for lv in table.levels if lv.energy is not None]
    mag = svg_magnification(table)
    route = table.primary_route
    energies = [lv.energy for lv in levels] or [0.0]
    lo, hi = min(energies), max(energies)
    pad = 0.1 * (hi - lo) if hi > lo else 0.1 * max(abs(hi), 1.0)
    lo, hi = lo - pad, hi + pad
    ells = sorted({lv.ell for lv in levels}) or [0]
    col_w = (SVG_WIDTH - 2 * _MARGIN) / len(ells)

    def y(e):
        return _MARGIN + (hi - e) / (hi - lo) * (SVG_HEIGHT - 2 * _MARGIN)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        '<g font-family="sans-serif" font-size="11">',
        f'<text class="legend" x="{_MARGIN}" y="20">shifts ({route} route) magnified x{mag:.6g}; '
        f'theta={table.config.params.theta:.6g}, Z alpha={table.config.params.z_alpha:.6g}, '
        f'M={table.config.params.M:.6g}</text>',
    ]
    for j, ell in enumerate(ells):
        x0 = _MARGIN + j * col_w
        out.append(f'<text class="column" x="{x0 + 0.1 * col_w:.3f}" y="{SVG_HEIGHT - 20}">l={ell}</text>')
    for lv in levels:
        j = ells.index(lv.ell)
        x0 = _MARGIN + j * col_w + 0.1 * col_w
        x1 = x0 + 0.45 * col_w
        yb = y(lv.energy)
        out.append(
            f'<line class="level" data-n="{lv.n}" data-ell="{lv.ell}" x1="{x0:.3f}" y1="{yb:.3f}" '
            f'x2="{x1:.3f}" y2="{yb:.3f}" stroke="black" stroke-width="1.5"/>'
        )
        out.append(
            f'<text class="label" x="{x0:.3f}" y="{yb - 4:.3f}">n={lv.n} E/M={lv.energy_over_m:.8g}</text>'
        )
        for s in lv.sublevels:
            shift = s["dE"].get(route)
            yt = y(lv.energy + mag * (shift or 0.0))
            xt = x1 + 0.05 * col_w
            out.append(
                f'<line class="tick" data-n="{lv.n}" data-ell="{lv.ell}" data-m="{s["m"]}" '
                f'x1="{xt:.3f}" y1="{yt:.3f}" x2="{xt + 0.25 * col_w:.3f}" y2="{yt:.3f}" '
                f'stroke="crimson" stroke-width="1"/>'
            )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


_RENDERERS = {"csv": _render_csv, "json": _render_json, "svg-lines": _render_svg}


def render(table, fmt):
    """Serialize ``table`` as ``csv``, ``json`` or ``svg-lines`` text."""
    return _RENDERERS[fmt](table)


def emit(table, fmt, path):
    """Write ``table`` to ``path``; ``None`` or ``'-'`` returns the text instead."""
    text = render(table, fmt)
    if path in (None, "-"):
        return text
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text
