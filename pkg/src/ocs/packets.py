"""Gaussian wave packets built from stationary states, and their subprocess dynamics.

A packet is the k-superposition (1/sqrt(2 pi)) int A(k) phi(x; k) exp(-i E t / hbar) dk
with phi the total, transmission or reflection stationary field.  The k
integral uses composite Gauss-Legendre panels; x integrals use composite
Boole rule restarted at a, x_c and b, where the integrands have kinks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .barriers import KGrid, SpatialGrid
from .constants import PhysicalConstants, electron_constants
from .errors import NoBracket, NormLeak, UnderResolvedPhase, ValidationError
from .stationary import evaluate_total, phase_derivatives, solve
from .subprocesses import Which, build_subprocess, center_limits

COMPONENTS = ("Total", "Transmission", "Reflection")
MIN_PANELS = 6


@dataclass(frozen=True)
class SpectrumSpec:
    k0: float
    l0: float
    cutoff: float = 6.0

    def __post_init__(self):
        if not (self.l0 > 0 and self.k0 - self.cutoff / self.l0 > 0):
            raise ValidationError("spectrum needs l0 > 0 and k0 - cutoff/l0 > 0")

    @property
    def k_range(self) -> tuple[float, float]:
        return self.k0 - self.cutoff / self.l0, self.k0 + self.cutoff / self.l0

    def amplitude(self, k):
        return (2 * self.l0**2 / math.pi) ** 0.25 * np.exp(-self.l0**2 * (np.asarray(k) - self.k0) ** 2)


def spread(l0: float, t, consts: PhysicalConstants):
    """Standard deviation of |psi|^2 for a free Gaussian after time t."""
    return l0 * np.sqrt(1 + (np.asarray(t) / (2 * consts.m_over_hbar * l0**2)) ** 2)


@dataclass(frozen=True)
class KQuadrature:
    grid: KGrid
    nodes: np.ndarray
    weights: np.ndarray
    points_per_oscillation: float


def k_quadrature(spectrum: SpectrumSpec, max_rate: float, points_per_oscillation: float = 12.0,
                 order: int = 16, n_panels: int | None = None, min_points_per_oscillation: float = 12.0) -> KQuadrature:
    """Gauss-Legendre panels on [k0 - c/l0, k0 + c/l0].

    max_rate bounds |d(phase)/dk| (nm) over all requested (x, t); the number
    of panels is chosen so the fastest phase gets the requested sampling
    density, or checked against it when n_panels is given.
    """
    k_lo, k_hi = spectrum.k_range
    width = k_hi - k_lo
    oscillations = max(width * max_rate / (2 * math.pi), 1.0)
    if n_panels is None:
        # six panels resolve the Gaussian itself to rounding over the default cutoff
        n_panels = max(MIN_PANELS, math.ceil(points_per_oscillation * oscillations / order))
    density = n_panels * order / oscillations
    if density < min_points_per_oscillation:
        raise UnderResolvedPhase(f"{density:.1f} k-points per phase oscillation, need {min_points_per_oscillation}")
    grid = KGrid(k_lo, k_hi, n_panels + 1)
    x, w = np.polynomial.legendre.leggauss(order)
    edges = grid.k
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return KQuadrature(grid, nodes, weights, density)


class StationaryCache:
    """Stationary solutions and their subprocess fields on the k nodes."""

    def __init__(self, spec, nodes, consts):
        self.spec = spec
        self.nodes = np.asarray(nodes)
        self.sols = [solve(float(k), spec, consts) for k in self.nodes]
        self.tr = [build_subprocess(s, Which.TRANSMISSION) for s in self.sols]
        self.rf = [build_subprocess(s, Which.REFLECTION) for s in self.sols]
        self.T = np.array([s.T for s in self.sols])
        self.R = np.array([s.R for s in self.sols])
        self.b_out = np.array([s.b_out for s in self.sols])
        self.a_out = np.array([s.a_out for s in self.sols])
        self.A_tr = np.array([s.A_tr_in for s in self.sols])
        self.A_ref = np.array([s.A_ref_in for s in self.sols])

    def fields(self, x: np.ndarray) -> dict:
        """Stationary fields as (n_k, n_x) arrays for each component."""
        spec = self.spec
        k = self.nodes[:, None]
        nk, nx = len(self.nodes), x.size
        out = {c: np.zeros((nk, nx), dtype=complex) for c in COMPONENTS}
        left = x <= spec.a
        right = x >= spec.b
        inner_l = (x > spec.a) & (x < spec.x_c)
        inner_r = (x >= spec.x_c) & (x < spec.b)
        if left.any():
            xl = x[left][None, :]
            inc = np.exp(1j * k * xl)
            ref = self.b_out[:, None] * np.exp(1j * k * (2 * spec.a - xl))
            out["Total"][:, left] = inc + ref
            out["Transmission"][:, left] = self.A_tr[:, None] * inc
            out["Reflection"][:, left] = self.A_ref[:, None] * inc + ref
        if right.any():
            tot = self.a_out[:, None] * np.exp(1j * k * (x[right][None, :] - spec.d))
            out["Total"][:, right] = tot
            out["Transmission"][:, right] = tot
        if inner_l.any() or inner_r.any():
            inner = inner_l | inner_r
            xi = x[inner]
            for i, sol in enumerate(self.sols):
                tot = evaluate_total(sol, xi)[0]
                out["Total"][i, inner] = tot
                trv = tot.copy()
                rfv = np.zeros_like(tot)
                sel = xi < spec.x_c
                if sel.any():
                    trv[sel] = self.tr[i](xi[sel])
                    rfv[sel] = self.rf[i](xi[sel])
                out["Transmission"][i, inner] = trv
                out["Reflection"][i, inner] = rfv
        return out

    def center(self) -> dict:
        """One-sided psi, psi' of both subprocess fields at x_c for every k."""
        n = len(self.nodes)
        res = {key: np.zeros(n, dtype=complex) for key in ("tr_l", "dtr_l", "tr_r", "dtr_r", "rf_l", "drf_l")}
        for i, sol in enumerate(self.sols):
            (pl, dl), (pr, dr), _ = center_limits(sol)
            res["tr_l"][i], res["dtr_l"][i], res["tr_r"][i], res["dtr_r"][i] = pl, dl, pr, dr
            p, dp = self.rf[i].evaluate(np.array([sol.spec.x_c]), side=-1)
            res["rf_l"][i], res["drf_l"][i] = p[0], dp[0]
        return res


@dataclass
class PacketSeries:
    times: np.ndarray
    grid: SpatialGrid
    spectrum: SpectrumSpec
    spec: object
    tracks: dict
    snapshots: dict = field(default_factory=dict)
    T_bar: float = 1.0
    R_bar: float = 0.0
    overlap_imag_expected: float = 0.0
    info: dict = field(default_factory=dict)
    segments: list = field(default_factory=list)


def _time_grid(spectrum, spec, consts, t_start, t_end, L, refine=4, dt=None):
    """Uniform coarse samples plus a finer uniform block around the barrier crossing."""
    v0 = float(consts.velocity(spectrum.k0))
    transit = spectrum.l0 / v0
    dt = transit / 20 if dt is None else dt
    w_lo = max(t_start, (spec.a - 6 * spectrum.l0) / v0)
    w_hi = min(t_end, (spec.b + 6 * spectrum.l0) / v0)
    fine = dt / refine
    blocks = []
    if w_lo > t_start:
        n = max(2, math.ceil((w_lo - t_start) / dt))
        blocks.append(np.linspace(t_start, w_lo, n + 1))
    n = max(8, math.ceil((w_hi - w_lo) / fine))
    blocks.append(np.linspace(w_lo, w_hi, n + 1))
    if t_end > w_hi:
        n = max(2, math.ceil((t_end - w_hi) / dt))
        blocks.append(np.linspace(w_hi, t_end, n + 1))
    times = np.concatenate([blocks[0]] + [b[1:] for b in blocks[1:]])
    segments, start = [], 0
    for b in blocks:
        end = start + len(b) - 1
        segments.append((start, end))
        start = end
    return times, segments


def default_window(spectrum, spec, consts, L):
    """Time window bracketing every event, and the spatial extent it needs."""
    v0 = float(consts.velocity(spectrum.k0))
    l0 = spectrum.l0
    t_start = -max(4 * l0, 40.0) / v0
    far = max(spec.b + L, 2 * spec.a)
    t_end = 1.1 * (far + 8 * float(spread(l0, far / v0, consts))) / v0
    return t_start, t_end


def default_grid(spectrum, spec, consts, t_start, t_end, dx=0.1):
    """Domain holding the incident, reflected and transmitted packets over the window."""
    k_lo, k_hi = spectrum.k0 - 2.0 / spectrum.l0, spectrum.k0 + 2.0 / spectrum.l0
    v_lo, v_hi = float(consts.velocity(max(k_lo, 0.5 * spectrum.k0))), float(consts.velocity(k_hi))
    s_end = float(spread(spectrum.l0, max(abs(t_start), abs(t_end)), consts))
    x_min = min(v_hi * t_start, 2 * spec.a - v_hi * t_end, -0.1 * v_hi * t_end) - 8 * s_end
    x_max = spec.b + v_hi * t_end + 8 * s_end
    return SpatialGrid.with_nodes(x_min, x_max, dx, spec)


def _max_phase_rate(x_min, x_max, t_start, t_end, spectrum, spec, consts):
    k_lo, k_hi = spectrum.k_range
    rate = 0.0
    for x in (x_min, x_max, spec.a, spec.b):
        for t in (t_start, t_end, 0.0):
            for kk in (k_lo, k_hi):
                vt = float(consts.velocity(kk)) * t
                rate = max(rate, abs(x - vt), abs(2 * spec.a - x - vt), abs(x - spec.d - vt))
    return rate


def propagate(spectrum: SpectrumSpec, spec, consts: PhysicalConstants | None = None, L: float | None = None,
              times=None, grid: SpatialGrid | None = None, dx: float = 0.1, points_per_oscillation: float = 12.0,
              n_panels: int | None = None, snapshot_times=(), chunk: int = 2048, leak_tol: float = 1e-8) -> PacketSeries:
    """Synthesize all three components on a time grid and reduce them to tracks."""
    consts = consts or electron_constants()
    L = spec.a if L is None else L
    if times is None:
        t_start, t_end = default_window(spectrum, spec, consts, L)
        times, segments = _time_grid(spectrum, spec, consts, t_start, t_end, L)
    else:
        times = np.asarray(times, dtype=float)
        segments = [(0, len(times) - 1)]
        t_start, t_end = float(times[0]), float(times[-1])
    if grid is None:
        grid = default_grid(spectrum, spec, consts, t_start, t_end, dx)
    rate = _max_phase_rate(grid.x_min, grid.x_max, t_start, t_end, spectrum, spec, consts)
    kq = k_quadrature(spectrum, rate, points_per_oscillation, n_panels=n_panels)
    cache = StationaryCache(spec, kq.nodes, consts)
    A = spectrum.amplitude(kq.nodes)
    wA2 = kq.weights * A**2
    T_bar = float(np.sum(wA2 * cache.T))
    R_bar = float(np.sum(wA2 * cache.R))
    overlap_imag = float(np.sum(wA2 * np.sqrt(cache.T * cache.R)))
    s_tr = 1.0 / math.sqrt(T_bar) if T_bar > 0 else 1.0

    E = consts.energy(kq.nodes)
    coef = (kq.weights * A / math.sqrt(2 * math.pi))[None, :] * np.exp(-1j * np.outer(times, E) / consts.hbar)
    x_all = grid.x
    w_all = grid.quadrature_weights([spec.a, spec.x_c, spec.b])
    nt = len(times)
    acc = {name: np.zeros(nt) for name in ("N_tot", "N_tr", "N_ref", "M_tot", "M_tr", "M_ref")}
    overlap = np.zeros(nt, dtype=complex)
    sup = np.zeros(nt)
    peak = np.zeros(nt)
    edge = {c: np.zeros(nt) for c in COMPONENTS}
    n_edge = max(2, grid.n_points // 100)
    snap_idx = sorted({int(np.argmin(np.abs(times - ts))) for ts in snapshot_times})
    snaps = {i: {c: np.zeros(grid.n_points, dtype=complex) for c in COMPONENTS} for i in snap_idx}

    for j0 in range(0, grid.n_points, chunk):
        j1 = min(grid.n_points, j0 + chunk)
        xs, ws = x_all[j0:j1], w_all[j0:j1]
        phi = cache.fields(xs)
        tot = coef @ phi["Total"]
        trs = coef @ (phi["Transmission"])
        ref = coef @ phi["Reflection"]
        sup = np.maximum(sup, np.max(np.abs(trs + ref - tot), axis=1))
        peak = np.maximum(peak, np.max(np.abs(tot), axis=1))
        trs *= s_tr
        for name, f in (("tot", tot), ("tr", trs), ("ref", ref)):
            dens = np.abs(f) ** 2
            acc[f"N_{name}"] += dens @ ws
            acc[f"M_{name}"] += dens @ (ws * xs)
        overlap += (np.conj(trs) * ref) @ ws
        lo_edge = slice(0, max(0, min(j1, n_edge) - j0))
        hi_start = max(0, grid.n_points - n_edge - j0)
        for c, f in (("Total", tot), ("Transmission", trs), ("Reflection", ref)):
            dens = np.abs(f) ** 2
            if lo_edge.stop > 0:
                edge[c] += dens[:, lo_edge] @ ws[lo_edge]
            if hi_start < j1 - j0:
                edge[c] += dens[:, hi_start:] @ ws[hi_start:]
        for i in snap_idx:
            snaps[i]["Total"][j0:j1] = tot[i]
            snaps[i]["Transmission"][j0:j1] = trs[i] / s_tr
            snaps[i]["Reflection"][j0:j1] = ref[i]

    cen = cache.center()
    mh = consts.m_over_hbar

    def cur(v, dv):
        psi, dpsi = coef @ v, coef @ dv
        return np.imag(np.conj(psi) * dpsi) / mh

    tracks = {
        "N_tot": acc["N_tot"],
        "N_tr": acc["N_tr"],
        "N_ref": acc["N_ref"],
        "X_tot": acc["M_tot"] / acc["N_tot"],
        "X_tr": acc["M_tr"] / acc["N_tr"],
        "X_ref": acc["M_ref"] / acc["N_ref"] if R_bar > 0 else np.full(nt, np.nan),
        "I_tr_left": cur(cen["tr_l"] * s_tr, cen["dtr_l"] * s_tr),
        "I_tr_right": cur(cen["tr_r"] * s_tr, cen["dtr_r"] * s_tr),
        "I_ref_left": cur(cen["rf_l"], cen["drf_l"]),
        "I_ref_right": np.zeros(nt),
        "overlap": overlap / s_tr,
        "superposition": sup / peak,
    }
    norms = {"Total": acc["N_tot"], "Transmission": acc["N_tr"], "Reflection": acc["N_ref"]}
    for c in COMPONENTS:
        if norms[c].max() > 0 and np.max(edge[c] / np.maximum(norms[c], 1e-300)) > leak_tol:
            if c == "Reflection" and R_bar == 0:
                continue
            raise NormLeak(f"{c} density at the domain edges exceeds {leak_tol:g} of its norm; enlarge the grid")
    info = dict(n_k=len(kq.nodes), k_panels=kq.grid.n_points - 1, points_per_oscillation=kq.points_per_oscillation,
                dx=grid.dx, n_x=grid.n_points, L=L, v0=float(consts.velocity(spectrum.k0)))
    return PacketSeries(times=np.asarray(times), grid=grid, spectrum=spectrum, spec=spec, tracks=tracks,
                        snapshots={float(times[i]): snaps[i] for i in snap_idx}, T_bar=T_bar, R_bar=R_bar,
                        overlap_imag_expected=overlap_imag, info=info, segments=segments)


def synthesize(spectrum: SpectrumSpec, spec, component: str, t, grid: SpatialGrid, consts=None,
               points_per_oscillation: float = 12.0):
    """Component field on the grid at time(s) t; returns shape (n_t, n_x)."""
    consts = consts or electron_constants()
    t = np.atleast_1d(np.asarray(t, dtype=float))
    rate = _max_phase_rate(grid.x_min, grid.x_max, float(t.min()), float(t.max()), spectrum, spec, consts)
    kq = k_quadrature(spectrum, rate, points_per_oscillation)
    cache = StationaryCache(spec, kq.nodes, consts)
    A = spectrum.amplitude(kq.nodes)
    coef = (kq.weights * A / math.sqrt(2 * math.pi))[None, :] * np.exp(
        -1j * np.outer(t, consts.energy(kq.nodes)) / consts.hbar)
    return coef @ cache.fields(grid.x)[component]


def center_of_mass(density, grid: SpatialGrid, nodes=()) -> float:
    w = grid.quadrature_weights(nodes)
    return float((density * grid.x) @ w / (density @ w))


# audits and derived quantities


def _segment_derivative(y, t, segments):
    """4th-order central differences within each uniform block; nan near block edges."""
    dy = np.full_like(y, np.nan)
    for i0, i1 in segments:
        if i1 - i0 < 4:
            continue
        h = t[i0 + 1] - t[i0]
        seg = y[i0:i1 + 1]
        d = (seg[:-4] - 8 * seg[1:-3] + 8 * seg[3:-1] - seg[4:]) / (12 * h)
        dy[i0 + 2:i1 - 1] = d
    return dy


@dataclass(frozen=True)
class Audit:
    norm_total: float
    ref_constancy: float
    tr_asymptotic: float
    current_balance: float
    ref_current: float
    overlap_real: float
    overlap_imag_error: float
    superposition: float

    def passed(self, norm_tol=1e-6, ref_tol=1e-6, balance_tol=1e-3) -> dict:
        return {
            "norm_total": self.norm_total < norm_tol,
            "ref_constancy": self.ref_constancy < ref_tol,
            "tr_asymptotic": self.tr_asymptotic < ref_tol,
            "current_balance": self.current_balance < balance_tol,
            "ref_current": self.ref_current < norm_tol,
            "overlap_real": self.overlap_real < norm_tol,
            "superposition": self.superposition < 1e-8,
        }


def norm_current_audit(series: PacketSeries) -> Audit:
    """Compare dN_tr/dt with the current jump at x_c and check the norm identities.

    Transmission quantities are normalised by T_bar, so the balance residual
    is relative to max |jump| in those units.
    """
    tr = series.tracks
    t = series.times
    dN = _segment_derivative(tr["N_tr"], t, series.segments)
    jump = tr["I_tr_right"] - tr["I_tr_left"]
    ok = np.isfinite(dN)
    # floor keeps the ratio meaningful when there is no barrier and the jump vanishes
    rate = series.info["v0"] / series.spectrum.l0
    scale = max(float(np.max(np.abs(jump[ok]))), 1e-8 * rate)
    balance = float(np.max(np.abs(dN[ok] - jump[ok])) / scale)
    ov = tr["overlap"][0]
    return Audit(
        norm_total=float(np.max(np.abs(tr["N_tot"] - 1))),
        ref_constancy=float(np.max(np.abs(tr["N_ref"] - tr["N_ref"][0]))),
        tr_asymptotic=float(abs(tr["N_tr"][-1] - tr["N_tr"][0])),
        current_balance=balance,
        ref_current=float(max(np.max(np.abs(tr["I_ref_left"])), np.max(np.abs(tr["I_ref_right"])))),
        overlap_real=float(abs(ov.real)),
        overlap_imag_error=float(abs(abs(ov.imag) - series.overlap_imag_expected)),
        superposition=float(np.max(tr["superposition"])),
    )


@dataclass(frozen=True)
class EventTimes:
    t_depart_tr: float
    t_arrive_tr: float
    dt_tr: float
    t_depart_ref: float | None
    t_arrive_ref: float | None
    dt_ref: float | None
    dt_tr_stationary: float | None
    dt_ref_stationary: float | None


def _roots(t, y, level):
    spline = CubicSpline(t, y - level)
    s = np.sign(y - level)
    idx = np.nonzero(s[:-1] * s[1:] <= 0)[0]
    out = []
    for i in idx:
        if y[i] == level:
            out.append(float(t[i]))
        elif s[i] != s[i + 1]:
            out.append(brentq(spline, t[i], t[i + 1], xtol=1e-12))
    return sorted(set(out))


def group_event_times(series: PacketSeries, L: float | None = None, consts=None) -> EventTimes:
    """Departure and arrival instants of the subprocess CMs and the stationary comparison."""
    consts = consts or electron_constants()
    spec = series.spec
    L = series.info.get("L", spec.a) if L is None else L
    t = series.times
    x_tr = series.tracks["X_tr"]
    dep = _roots(t, x_tr, 0.0)
    arr = _roots(t, x_tr, spec.b + L)
    if not dep or not arr:
        raise NoBracket("X_tr does not cross 0 and b+L inside the simulated window")
    t_dep, t_arr = dep[0], arr[-1]
    k0 = series.spectrum.k0
    m = consts.m_over_hbar / k0
    dt_ref = t_dep_ref = t_arr_ref = None
    st_tr = st_ref = None
    if series.R_bar > 0:
        r = _roots(t, series.tracks["X_ref"], 0.0)
        if len(r) < 2:
            raise NoBracket("X_ref does not leave and return to 0 inside the simulated window")
        t_dep_ref, t_arr_ref = r[0], r[-1]
        dt_ref = t_arr_ref - t_dep_ref
        pd = phase_derivatives(k0, spec, consts)
        jl = pd["J"].value - pd["lam"].value
        st_tr = m * (jl + spec.a + L)
        st_ref = m * (jl + 2 * spec.a)
    else:
        pd = phase_derivatives(k0, spec, consts, which=("J",))
        st_tr = m * (pd["J"].value + spec.a + L)
    return EventTimes(t_dep, t_arr, t_arr - t_dep, t_dep_ref, t_arr_ref, dt_ref, st_tr, st_ref)


@dataclass(frozen=True)
class Slopes:
    early: float
    late: float
    barrier: float
    reference: float


def asymptotic_slopes(series: PacketSeries, component: str = "X_tr", consts=None) -> Slopes:
    """Linear-fit CM velocities while the packet is clear of the barrier, and the mean barrier-window slope."""
    consts = consts or electron_constants()
    spec = series.spec
    t = series.times
    X = series.tracks[component]
    sig = spread(series.spectrum.l0, t, consts)
    early = (X + 6 * sig < spec.a) & (t < spec.a / consts.velocity(series.spectrum.k0))
    late = (X - 6 * sig > spec.b) & (t > spec.b / consts.velocity(series.spectrum.k0))
    if early.sum() < 3 or late.sum() < 3:
        raise NoBracket("not enough samples clear of the barrier for slope fits")
    s_early = np.polyfit(t[early], X[early], 1)[0]
    s_late = np.polyfit(t[late], X[late], 1)[0]
    ta = _roots(t, X, spec.a)
    tb = _roots(t, X, spec.b)
    barrier = (spec.b - spec.a) / (tb[-1] - ta[0]) if ta and tb and tb[-1] > ta[0] else float("nan")
    return Slopes(float(s_early), float(s_late), float(barrier), float(consts.velocity(series.spectrum.k0)))


def transmitted_trace(series: PacketSeries, consts=None):
    """Rows (t, X_tr(t), incoming asymptote (hbar k0/m) t - lambda'(k0))."""
    consts = consts or electron_constants()
    k0 = series.spectrum.k0
    v0 = float(consts.velocity(k0))
    if series.R_bar > 0:
        x0 = -phase_derivatives(k0, series.spec, consts, which=("lam",))["lam"].value
    else:
        x0 = 0.0
    return np.column_stack([series.times, series.tracks["X_tr"], v0 * series.times + x0])


SERIES_COLUMNS = ("t_fs", "X_tot_nm", "X_tr_nm", "X_ref_nm", "N_tr", "N_ref", "I_tr_left", "I_tr_right")


def series_rows(series: PacketSeries) -> np.ndarray:
    tr = series.tracks
    return np.column_stack([series.times, tr["X_tot"], tr["X_tr"], tr["X_ref"], tr["N_tr"], tr["N_ref"],
                            tr["I_tr_left"], tr["I_tr_right"]])


def run_summary(series: PacketSeries, events: EventTimes | None, audit: Audit) -> dict:
    return {
        "parameters": {"k0": series.spectrum.k0, "l0": series.spectrum.l0, "cutoff": series.spectrum.cutoff,
                       "barrier": series.spec.describe(), **series.info},
        "T_bar": series.T_bar,
        "R_bar": series.R_bar,
        "events": None if events is None else dict(events.__dict__),
        "audit": dict(audit.__dict__),
        "audit_passed": audit.passed(),
    }
