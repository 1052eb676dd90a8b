"""Parameter sweeps and the per-k table of characteristic times."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .barriers import DoubleRectangular, Rectangular
from .constants import PhysicalConstants, electron_constants
from .errors import OCSError
from .stationary import Regime, solve
from .timescales import (TimeName, asymptotic_group_times, double_barrier_dwell, dwell_buttiker,
                         dwell_free, dwell_reflection, dwell_total_flux, dwell_transmission, larmor_suite,
                         phase_time)

LARMOR_NAMES = (TimeName.LARMOR_PERP, TimeName.LARMOR_PERP_INITIAL, TimeName.FLIP_TIME,
                TimeName.LARMOR_PARALLEL_INITIAL_TR, TimeName.LARMOR_PARALLEL_INITIAL_REF)
RESIDUAL_NAMES = ("flip_chain", "perp_chain", "flip_forms", "parallel_sum", "reflection_angle", "group0_vs_perp0")
TIME_COLUMNS = tuple(f"{n.value}_fs" for n in TimeName)
TABLE_COLUMNS = ("k_nm-1", "E_eV", "T", "R") + TIME_COLUMNS + RESIDUAL_NAMES + ("larmor_reason", "notes")


@dataclass
class SweepResult:
    parameter: str
    columns: tuple
    rows: list
    summary: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows], dtype=float)


def _run(fn, values, workers: int):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, values))
    return [fn(v) for v in values]


def times_table(k: float, spec, consts: PhysicalConstants | None = None) -> dict:
    """Every characteristic time that is defined at (k, spec), with relation residuals.

    Undefined entries are None; the reason is recorded in `notes`, and for
    the Larmor group in `larmor_reason`.
    """
    c = consts or electron_constants()
    sol = solve(k, spec, c)
    row = dict.fromkeys(TABLE_COLUMNS)
    row.update({"k_nm-1": k, "E_eV": sol.E, "T": sol.T, "R": sol.R})
    notes = []

    def put(reports):
        for r in reports:
            row[f"{r.name.value}_fs"] = r.value

    def attempt(label, fn):
        try:
            put(fn())
        except OCSError as exc:
            notes.append(f"{label}:{type(exc).__name__}")

    attempt("free", lambda: [dwell_free(k, spec, c)])
    attempt("total_flux", lambda: [dwell_total_flux(k, spec, c)])
    attempt("buttiker", lambda: [dwell_buttiker(k, spec, c)])
    attempt("dwell_tr", lambda: [dwell_transmission(k, spec, c)])
    attempt("dwell_ref", lambda: [dwell_reflection(k, spec, c)])
    attempt("phase", lambda: list(phase_time(k, spec, c)))
    attempt("asymptotic", lambda: list(asymptotic_group_times(k, spec, c).values()))
    if not isinstance(spec, Rectangular):
        row["larmor_reason"] = "NotRectangular"
    elif sol.regime is not Regime.UNDER_BARRIER:
        row["larmor_reason"] = "AboveBarrier"
    else:
        try:
            suite = larmor_suite(k, spec, c)
            put(suite.reports[n] for n in LARMOR_NAMES)
            row.update({n: suite.residuals[n] for n in RESIDUAL_NAMES})
            row["larmor_reason"] = ""
        except OCSError as exc:
            row["larmor_reason"] = type(exc).__name__
    row["notes"] = ";".join(notes)
    return row


# Hartman d-sweep

HARTMAN_COLUMNS = ("d_nm", "PhaseWigner_fs", "LarmorPerp_fs", "DwellTr_fs", "DwellTotalFlux_fs")


def _hartman_row(d, k, V0, a, consts):
    spec = Rectangular(V0, a, a + d)
    return {
        "d_nm": d,
        "PhaseWigner_fs": phase_time(k, spec, consts)[0].value,
        "LarmorPerp_fs": dwell_buttiker(k, spec, consts).value,
        "DwellTr_fs": dwell_transmission(k, spec, consts).value,
        "DwellTotalFlux_fs": dwell_total_flux(k, spec, consts).value,
    }


def log_slope(d, tau) -> float:
    """Least-squares slope of ln(tau) against d."""
    return float(np.polyfit(np.asarray(d), np.log(np.asarray(tau)), 1)[0])


def hartman_sweep(k: float, V0: float, d_values, a: float = 200.0, consts=None, workers: int = 1,
                  fit_window=(8.0, 16.0)) -> SweepResult:
    """Saturating (phase, Buttiker) against growing (subprocess, total-flux) times over barrier width.

    The log-slope fits use the rows with kappa d inside fit_window; the
    saturation deltas compare the two largest widths.
    """
    c = consts or electron_constants()
    d_values = sorted(float(v) for v in d_values)
    rows = _run(partial(_hartman_row, k=k, V0=V0, a=a, consts=c), d_values, workers)
    res = SweepResult("d", HARTMAN_COLUMNS, rows)
    summary = {}
    if V0 > c.energy(k):
        kappa = float(c.kappa(V0, c.energy(k)))
        summary["kappa_nm-1"] = kappa
        d = res.column("d_nm")
        sel = (kappa * d >= fit_window[0] - 1e-9) & (kappa * d <= fit_window[1] + 1e-9)
        if sel.sum() >= 2:
            summary["log_slope_DwellTr"] = log_slope(d[sel], res.column("DwellTr_fs")[sel])
            summary["log_slope_DwellTotalFlux"] = log_slope(d[sel], res.column("DwellTotalFlux_fs")[sel])
    if len(rows) >= 2:
        for name in ("PhaseWigner_fs", "LarmorPerp_fs"):
            y = res.column(name)
            summary[f"saturation_delta_{name}"] = float(abs(y[-1] - y[-2]) / abs(y[-1]))
    res.summary = summary
    return res


# double-barrier l-sweep

DOUBLE_COLUMNS = ("l_nm", "tau1_fs", "tau_gap_fs", "tau2_fs", "total_fs", "additivity_residual",
                  "ratio", "ratio_closed_form", "PhaseWigner_fs")


def _double_row(l, k, V0, d_barrier, a, consts):
    spec = DoubleRectangular(V0, d_barrier, l, a)
    dd = double_barrier_dwell(k, spec, consts)
    return {
        "l_nm": l,
        "tau1_fs": dd.tau1,
        "tau_gap_fs": dd.tau_gap,
        "tau2_fs": dd.tau2,
        "total_fs": dd.total,
        "additivity_residual": (dd.tau1 + dd.tau_gap + dd.tau2 - dd.total) / dd.total,
        "ratio": dd.ratio,
        "ratio_closed_form": dd.ratio_asymptotic,
        "PhaseWigner_fs": phase_time(k, spec, consts)[0].value,
    }


def double_sweep(k: float, V0: float, d_barrier: float, l_values, a: float = 200.0, consts=None,
                 workers: int = 1) -> SweepResult:
    c = consts or electron_constants()
    l_values = sorted(float(v) for v in l_values)
    rows = _run(partial(_double_row, k=k, V0=V0, d_barrier=d_barrier, a=a, consts=c), l_values, workers)
    res = SweepResult("l", DOUBLE_COLUMNS, rows)
    gap = res.column("tau_gap_fs")
    ph = res.column("PhaseWigner_fs")
    ratio = res.column("ratio") / res.column("ratio_closed_form")
    kappa0 = math.sqrt(V0 / c.hbar2_over_2m)
    res.summary = {
        "kappa0_d": kappa0 * d_barrier,
        "tau_gap_increasing": bool(np.all(np.diff(gap) > 0)),
        "ratio_over_closed_form_max_deviation": float(np.max(np.abs(ratio - 1))),
        "PhaseWigner_relative_variation": float((ph.max() - ph.min()) / abs(ph.mean())),
        "max_additivity_residual": float(np.max(np.abs(res.column("additivity_residual")))),
    }
    return res


__all__ = ["SweepResult", "times_table", "hartman_sweep", "double_sweep", "log_slope", "TABLE_COLUMNS",
           "HARTMAN_COLUMNS", "DOUBLE_COLUMNS"]
