"""Acceptance gate: one printed PASS/FAIL line per criterion, each checked at its stated tolerance."""
import math
import time

import numpy as np

from ocs import packets as pk
from ocs.barriers import DoubleRectangular, Rectangular, SpatialGrid, TabulatedSymmetric
from ocs.constants import electron_constants
from ocs.stationary import evaluate_total, solve, solve_rectangular, solve_symmetric_numeric
from ocs.subprocesses import Which, build_subprocess, matching_report
from ocs.sweeps import TIME_COLUMNS, double_sweep, hartman_sweep, times_table
from ocs.timescales import (Method, TimeName, asymptotic_group_times, dwell_buttiker, dwell_transmission,
                            larmor_suite)

C = electron_constants()
K05 = float(C.wavenumber(0.05))
KAPPA = float(C.kappa(0.2, 0.05))


def report(capsys, number, title, checks, elapsed, limit):
    """Print the verdict line and return whether every check and the runtime passed."""
    checks = dict(checks)
    checks[f"runtime {elapsed:.1f}s < {limit:g}s"] = elapsed < limit
    ok = all(checks.values())
    detail = "; ".join(f"{name}: {'ok' if v else 'FAIL'}" for name, v in checks.items())
    with capsys.disabled():
        print(f"\n[acceptance {number}] {'PASS' if ok else 'FAIL'} {title} | {detail}")
    return ok, checks


def test_1_unitarity_sweep(capsys):
    t0 = time.perf_counter()
    ks = np.linspace(0.2, 3.0, 100)
    worst_a = worst_n = 0.0
    for d in (1.0, 5.0, 15.0):
        spec = Rectangular(0.2, 200.0, 200.0 + d)
        for k in ks:
            if abs(C.energy(k) - 0.2) < 1e-9:
                continue
            a = solve_rectangular(float(k), spec, C)
            n = solve_symmetric_numeric(float(k), spec, C)
            worst_a = max(worst_a, abs(a.T + a.R - 1))
            worst_n = max(worst_n, abs(n.T + n.R - 1))
    elapsed = time.perf_counter() - t0
    ok, checks = report(capsys, 1, "unitarity", {f"analytic {worst_a:.1e} < 1e-12": worst_a < 1e-12,
                                                  f"numeric {worst_n:.1e} < 1e-8": worst_n < 1e-8}, elapsed, 5)
    assert ok, checks


def _random_barrier(rng, i):
    kind = i % 3
    if kind == 0:
        a = rng.uniform(5, 100)
        return Rectangular(rng.uniform(0.05, 0.6), a, a + rng.uniform(0.3, 10))
    if kind == 1:
        return DoubleRectangular(rng.uniform(0.05, 0.6), rng.uniform(0.2, 3), rng.uniform(0, 5), rng.uniform(5, 100))
    a, w = rng.uniform(5, 100), rng.uniform(2, 10)
    x = np.linspace(a, a + w, 161)
    V = rng.uniform(0.05, 0.6) * np.exp(-((x - a - w / 2) / (0.25 * w)) ** 2)
    return TabulatedSymmetric(x, V)


def test_2_decomposition_and_matching(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240611)
    worst_sup = worst_match = 0.0
    slopes_nonzero = True
    for i in range(20):
        spec = _random_barrier(rng, i)
        while True:
            k = rng.uniform(0.3, 3.0)
            heights = [v for _, _, v in getattr(spec, "segments", ())] or [spec.v_max]
            if all(abs(C.energy(k) - v) > 1e-3 for v in heights):
                break
        sol = solve(k, spec, C)
        x = np.linspace(spec.a - 5, spec.b + 5, 801)
        tot, _ = evaluate_total(sol, x)
        tr, rf = build_subprocess(sol, Which.TRANSMISSION), build_subprocess(sol, Which.REFLECTION)
        worst_sup = max(worst_sup, np.max(np.abs(tr(x) + rf(x) - tot)) / np.max(np.abs(tot)))
        rep = matching_report(tr)
        worst_match = max(worst_match, max(rep.residuals()))
        if C.energy(k) < float(spec.potential(np.array([spec.x_c]))[0]):
            slopes_nonzero &= abs(rep.modulus_slope_left) > 0 and abs(rep.modulus_slope_right) > 0
    elapsed = time.perf_counter() - t0
    ok, checks = report(capsys, 2, "decomposition identity and matching",
                        {f"superposition {worst_sup:.1e} < 1e-10": worst_sup < 1e-10,
                         f"matching {worst_match:.1e} < 1e-9": worst_match < 1e-9,
                         "under-barrier modulus slopes nonzero": slopes_nonzero}, elapsed, 10)
    assert ok, checks


def test_3_closed_form_vs_quadrature(capsys):
    t0 = time.perf_counter()
    worst = {"dwell_tr": 0.0, "dwell_buttiker": 0.0, "tau_as": 0.0, "X_in0": 0.0}
    for k in np.linspace(0.4, 1.4, 10):
        for d in (0.5, 1.0, 2.0, 4.0, 6.0):
            spec = Rectangular(0.2, 200.0, 200.0 + d)
            k = float(k)
            rel = lambda a, b: abs(a - b) / abs(b)
            worst["dwell_tr"] = max(worst["dwell_tr"], rel(dwell_transmission(k, spec).value,
                                    dwell_transmission(k, spec, method=Method.CLOSED_FORM).value))
            worst["dwell_buttiker"] = max(worst["dwell_buttiker"], rel(dwell_buttiker(k, spec).value,
                                          dwell_buttiker(k, spec, method=Method.CLOSED_FORM).value))
            fd = asymptotic_group_times(k, spec)
            cf = asymptotic_group_times(k, spec, method=Method.CLOSED_FORM)
            worst["tau_as"] = max(worst["tau_as"], rel(fd[TimeName.ASYMPTOTIC_GROUP_TR].value,
                                  cf[TimeName.ASYMPTOTIC_GROUP_TR].value))
            worst["X_in0"] = max(worst["X_in0"], rel(fd[TimeName.GROUP_INITIAL].extra["X_in0_nm"],
                                 cf[TimeName.GROUP_INITIAL].extra["X_in0_nm"]))
    elapsed = time.perf_counter() - t0
    ok, checks = report(capsys, 3, "closed forms vs quadrature and finite differences",
                        {f"{n} {v:.1e} < 1e-6": v < 1e-6 for n, v in worst.items()}, elapsed, 30)
    assert ok, checks


def test_4_hartman_dichotomy(capsys):
    t0 = time.perf_counter()
    d = [v / KAPPA for v in np.arange(4, 16.5, 0.5)]
    res = hartman_sweep(K05, 0.2, d)
    s = res.summary
    slope_err = abs(s["log_slope_DwellTr"] / KAPPA - 1)
    elapsed = time.perf_counter() - t0
    ok, checks = report(capsys, 4, "Hartman dichotomy", {
        f"phase-time delta {s['saturation_delta_PhaseWigner_fs']:.1e} < 1e-4":
            s["saturation_delta_PhaseWigner_fs"] < 1e-4,
        f"tau_perp delta {s['saturation_delta_LarmorPerp_fs']:.1e} < 1e-4": s["saturation_delta_LarmorPerp_fs"] < 1e-4,
        f"ln dwell_tr slope/kappa - 1 = {slope_err:.1e} < 2e-2": slope_err < 2e-2}, elapsed, 30)
    assert ok, checks


def test_5_generalized_hartman(capsys):
    t0 = time.perf_counter()
    period = 2 * math.pi / K05
    res = double_sweep(K05, 50.0, 0.5, np.linspace(0.05, 0.95, 19) * period)
    s = res.summary
    elapsed = time.perf_counter() - t0
    dev = s["ratio_over_closed_form_max_deviation"]
    ok, checks = report(capsys, 5, f"generalized Hartman (kappa0 d = {s['kappa0_d']:.1f})", {
        "tau_gap strictly increasing": s["tau_gap_increasing"],
        f"gap/barrier ratio vs closed form {dev:.2f} < 0.05": dev < 0.05,
        f"phase-time variation {s['PhaseWigner_relative_variation']:.1e} < 1e-3":
            s["PhaseWigner_relative_variation"] < 1e-3}, elapsed, 60)
    assert ok, checks


def test_6_larmor_chain(capsys):
    t0 = time.perf_counter()
    worst = 0.0
    for E in (0.02, 0.06, 0.1, 0.14, 0.18):
        for d in (1.0, 2.0, 4.0, 6.0):
            worst = max(worst, abs(larmor_suite(float(C.wavenumber(E)), Rectangular(0.2, 200.0, 200.0 + d))
                                   .residuals["flip_chain"]))
    widths = np.array([4.0, 5.0, 6.0, 7.0, 8.0])
    flips = np.array([larmor_suite(K05, Rectangular(0.2, 200.0, 200.0 + d)).reports[TimeName.FLIP_TIME].value
                      for d in widths])
    elapsed = time.perf_counter() - t0
    growth = np.polyfit(widths, np.log(np.abs(flips)), 1)[0] if np.all(flips < 0) else float("nan")
    ok, checks = report(capsys, 6, "Larmor chain", {
        f"chain residual {worst:.1e} <= 1e-6": worst <= 1e-6,
        "flip time negative": bool(np.all(flips < 0)),
        f"|flip| grows exponentially (log slope {growth:.3f})": bool(growth > 0 and np.all(np.diff(np.abs(flips)) > 0)),
    }, elapsed, 60)
    assert ok, checks


FIG_SPEC = Rectangular(0.2, 200.0, 215.0)


def test_7_opaque_packet_trace(capsys):
    t0 = time.perf_counter()
    series = pk.propagate(pk.SpectrumSpec(K05, 10.0), FIG_SPEC, C)
    audit = pk.norm_current_audit(series)
    slopes = pk.asymptotic_slopes(series, consts=C)
    t_mid = time.perf_counter()
    wide = pk.propagate(pk.SpectrumSpec(K05, 40.0), FIG_SPEC, C)
    events = pk.group_event_times(wide, consts=C)
    wide_audit = pk.norm_current_audit(wide)
    elapsed = time.perf_counter() - t0
    v0 = slopes.reference
    e, l_, bw = slopes.early / v0 - 1, slopes.late / v0 - 1, slopes.barrier / v0
    tr_err = abs(events.dt_tr / events.dt_tr_stationary - 1)
    ref_err = abs(events.dt_ref / events.dt_ref_stationary - 1)
    checks = {
        f"early slope/v0 - 1 = {e:+.4f} within 1%": abs(e) < 0.01,
        f"late slope/v0 - 1 = {l_:+.4f} within 1%": abs(l_) < 0.01,
        f"barrier slope/v0 = {bw:.3f} < 0.2": bw < 0.2,
        f"norm {audit.norm_total:.1e} < 1e-6": audit.norm_total < 1e-6,
        f"N_ref constancy {audit.ref_constancy:.1e} < 1e-6": audit.ref_constancy < 1e-6,
        f"current balance {audit.current_balance:.1e} < 1e-3": audit.current_balance < 1e-3,
        f"l0=40 audits ({t_mid - t0:.0f}s + {elapsed - (t_mid - t0):.0f}s)": all(wide_audit.passed().values()),
        f"l0=40 transmission event time {events.dt_tr:.0f} vs {events.dt_tr_stationary:.0f} fs "
        f"({tr_err:.1%}) within 10%": tr_err < 0.1,
        f"l0=40 reflection event time {events.dt_ref:.0f} vs {events.dt_ref_stationary:.0f} fs "
        f"({ref_err:.1e}) within 10%": ref_err < 0.1,
    }
    ok, checks = report(capsys, 7, "opaque-barrier packet trace", checks, elapsed, 300)
    assert ok, checks


def test_8_free_limit(capsys):
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    for k in (0.5, K05, 2.0):
        for d in (1.0, 15.0):
            row = times_table(k, Rectangular(0.0, 200.0, 200.0 + d), C)
            free = C.m_over_hbar * d / k
            for col in TIME_COLUMNS:
                v = row[col]
                if v is None:
                    continue
                # delays are measured from md/hbar k, so they must vanish instead
                target = 0.0 if col.startswith("Delay") else free
                worst = max(worst, abs(v - target) / free)
                count += 1
    free_spec = Rectangular(0.0, 200.0, 215.0)
    spectrum = pk.SpectrumSpec(K05, 10.0)
    times = np.linspace(-300.0, 3000.0, 12)
    grid = SpatialGrid.with_nodes(-250.0, 600.0, 0.1, free_spec)
    series = pk.propagate(spectrum, free_spec, C, times=times, grid=grid)
    slope = np.polyfit(times, series.tracks["X_tot"], 1)[0]
    slope_err = abs(slope / float(C.velocity(K05)) - 1)
    elapsed = time.perf_counter() - t0
    ok, checks = report(capsys, 8, "free limit", {
        f"{count} defined times vs md/hbar k {worst:.1e} < 1e-10": worst < 1e-10,
        f"packet slope/v0 - 1 = {slope_err:.1e} < 1e-3": slope_err < 1e-3}, elapsed, 10)
    assert ok, checks
