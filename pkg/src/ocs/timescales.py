"""Characteristic times (fs) for a particle scattering on a symmetric barrier."""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .barriers import DoubleRectangular, Rectangular
from .constants import PhysicalConstants, electron_constants
from .errors import (DegenerateSplit, LambdaUndefined, ValidationError, ZeroReflection,
                     ZeroTransmission)
from .numdiff import ddk
from .stationary import Regime, evaluate_total, phase_derivatives, solve
from .subprocesses import Which, build_subprocess, center_limits

QUAD_RTOL = 1e-10


class TimeName(enum.Enum):
    DWELL_FREE = "DwellFree"
    DWELL_TOTAL_FLUX = "DwellTotalFlux"
    DWELL_BUTTIKER = "DwellButtiker"
    DWELL_TR = "DwellTr"
    DWELL_REF = "DwellRef"
    PHASE_WIGNER = "PhaseWigner"
    DELAY_WIGNER = "DelayWigner"
    ASYMPTOTIC_GROUP_TR = "AsymptoticGroupTr"
    ASYMPTOTIC_GROUP_REF = "AsymptoticGroupRef"
    DELAY_TR = "DelayTr"
    DELAY_REF = "DelayRef"
    LARMOR_PERP = "LarmorPerp"
    LARMOR_PERP_INITIAL = "LarmorPerpInitial"
    FLIP_TIME = "FlipTime"
    LARMOR_PARALLEL_INITIAL_TR = "LarmorParallelInitialTr"
    LARMOR_PARALLEL_INITIAL_REF = "LarmorParallelInitialRef"
    GROUP_INITIAL = "GroupInitial"


class Method(enum.Enum):
    CLOSED_FORM = "ClosedForm"
    QUADRATURE = "Quadrature"
    FINITE_DIFFERENCE = "FiniteDifference"
    SIMULATION = "Simulation"


@dataclass(frozen=True)
class TimeReport:
    name: TimeName
    value: float
    method: Method
    k: float
    spec: object
    extra: dict = field(default_factory=dict, compare=False)


def _consts(consts):
    return consts or electron_constants()


def _integrate(fn, lo, hi, breaks=()):
    """Adaptive Gauss-Kronrod of a real scalar function on [lo, hi]."""
    pts = sorted(p for p in set(breaks) if lo < p < hi)
    edges = [lo, *pts, hi]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = quad(lambda x: float(fn(x)), a, b, epsabs=0.0, epsrel=QUAD_RTOL, limit=400)
        total += val
    return total


def _breaks(spec):
    pts = {spec.x_c}
    for seg in getattr(spec, "segments", ()):
        pts |= {seg[0], seg[1]}
    return pts


def _rect_params(k, spec, consts):
    c2 = consts.hbar2_over_2m
    E = c2 * k * k
    kappa = math.sqrt((spec.V0 - E) / c2)
    kappa0 = math.sqrt(spec.V0 / c2)
    return kappa, kappa0, spec.d, consts.m_over_hbar


def _sh_ratio(kappa, d):
    """sinh(x), cosh(x), sinh^2(x/2) times exp(-x) and sinh(2x) times exp(-2x), x = kappa d."""
    x = kappa * d
    e = math.exp(-2 * x)
    return (0.5 * (1 - e), 0.5 * (1 - e * e), 0.5 * (1 + e),
            0.25 * (1 - 2 * math.exp(-x) + e))


def _rect_D_scaled(k, kappa, kappa0, d):
    sh, _, _, _ = _sh_ratio(kappa, d)
    return 4 * k**2 * kappa**2 * math.exp(-2 * kappa * d) + kappa0**4 * sh**2


# conventional times


def dwell_free(k, spec, consts=None) -> TimeReport:
    c = _consts(consts)
    return TimeReport(TimeName.DWELL_FREE, spec.d * c.m_over_hbar / k, Method.CLOSED_FORM, k, spec)


def dwell_total_flux(k, spec, consts=None) -> TimeReport:
    """Norm in [a, b] divided by the transmitted flux T*hbar*k/m."""
    c = _consts(consts)
    sol = solve(k, spec, c)
    if not math.isfinite(sol.log_T) or sol.a_out == 0:
        raise ZeroTransmission("transmission underflows")
    integral = _integrate(lambda x: abs(evaluate_total(sol, np.array([x]), scaled=True)[0][0]) ** 2,
                          spec.a, spec.b, _breaks(spec))
    return TimeReport(TimeName.DWELL_TOTAL_FLUX, integral / sol.velocity, Method.QUADRATURE, k, spec)


def dwell_buttiker(k, spec, consts=None, method: Method = Method.QUADRATURE) -> TimeReport:
    """Norm in [a, b] divided by the incident flux hbar*k/m."""
    c = _consts(consts)
    if method is Method.CLOSED_FORM:
        kappa, kappa0, d, m = _rect_params(k, spec, c)
        sh, sh2, _, _ = _sh_ratio(kappa, d)
        num = 2 * kappa * d * (kappa**2 - k**2) * math.exp(-2 * kappa * d) + kappa0**2 * sh2
        val = m * k / kappa * num / _rect_D_scaled(k, kappa, kappa0, d)
        return TimeReport(TimeName.DWELL_BUTTIKER, val, Method.CLOSED_FORM, k, spec)
    sol = solve(k, spec, c)
    integral = _integrate(lambda x: abs(evaluate_total(sol, np.array([x]))[0][0]) ** 2,
                          spec.a, spec.b, _breaks(spec))
    return TimeReport(TimeName.DWELL_BUTTIKER, integral / sol.velocity, Method.QUADRATURE, k, spec)


def local_dwell_density(k, spec, x, consts=None):
    """|Psi_tot(x)|^2 divided by the incident flux, in fs/nm."""
    c = _consts(consts)
    sol = solve(k, spec, c)
    psi, _ = evaluate_total(sol, x)
    return np.abs(psi) ** 2 / sol.velocity


def phase_time(k, spec, consts=None) -> tuple[TimeReport, TimeReport]:
    """Wigner phase time (m/hbar k) J' and the delay (m/hbar k)(J' - d)."""
    c = _consts(consts)
    Jp = phase_derivatives(k, spec, c, which=("J",))["J"]
    m = c.m_over_hbar / k
    return (TimeReport(TimeName.PHASE_WIGNER, m * Jp.value, Method.FINITE_DIFFERENCE, k, spec,
                       {"error": m * Jp.error}),
            TimeReport(TimeName.DELAY_WIGNER, m * (Jp.value - spec.d), Method.FINITE_DIFFERENCE, k, spec))


# subprocess dwell times


def dwell_transmission(k, spec, consts=None, method: Method = Method.QUADRATURE, lo=None, hi=None) -> TimeReport:
    """Transmission-subprocess norm in [lo, hi] (default [a, b]) over T*hbar*k/m."""
    c = _consts(consts)
    if method is Method.CLOSED_FORM:
        kappa, kappa0, d, m = _rect_params(k, spec, c)
        # (kappa^2-k^2) kappa d + kappa0^2 sinh(kappa d), kept in linear form while it fits
        x = kappa * d
        if x < 700:
            val = m / (2 * k * kappa**3) * ((kappa**2 - k**2) * x + kappa0**2 * math.sinh(x))
        else:
            val = math.inf
        return TimeReport(TimeName.DWELL_TR, val, Method.CLOSED_FORM, k, spec)
    sol = solve(k, spec, c)
    if not math.isfinite(sol.log_T) or sol.a_out == 0:
        raise ZeroTransmission("transmission underflows")
    tr = build_subprocess(sol, Which.TRANSMISSION)
    lo = spec.a if lo is None else lo
    hi = spec.b if hi is None else hi
    integral = _integrate(lambda x: abs(tr(np.array([x]), scaled=True)[0]) ** 2, lo, hi, _breaks(spec))
    return TimeReport(TimeName.DWELL_TR, integral / sol.velocity, Method.QUADRATURE, k, spec)


def dwell_reflection(k, spec, consts=None) -> TimeReport:
    """Reflection-subprocess norm in [a, x_c] over R*hbar*k/m."""
    c = _consts(consts)
    sol = solve(k, spec, c)
    if not sol.R > 0:
        raise ZeroReflection("reflection dwell time needs R > 0")
    rf = build_subprocess(sol, Which.REFLECTION)
    integral = _integrate(lambda x: abs(rf(np.array([x]), side=-1)[0]) ** 2, spec.a, spec.x_c, _breaks(spec))
    return TimeReport(TimeName.DWELL_REF, integral / (sol.R * sol.velocity), Method.QUADRATURE, k, spec)


# asymptotic group times


def asymptotic_group_times(k, spec, consts=None, method: Method = Method.FINITE_DIFFERENCE) -> dict:
    """tau_as (equal for both subprocesses), their delays, the initial CM offset and group time."""
    c = _consts(consts)
    m = c.m_over_hbar / k
    if method is Method.CLOSED_FORM:
        kappa, kappa0, d, _ = _rect_params(k, spec, c)
        sh, _, ch, shh = _sh_ratio(kappa, d)
        D = _rect_D_scaled(k, kappa, kappa0, d)
        e = math.exp(-kappa * d)
        # [k^2 + k0^2 sinh^2(kd/2)] [k0^2 sinh(kd) - k^2 kd] / D, with two factors exp(-kd)
        tau_as = (4 * m / kappa * (k**2 * e + kappa0**2 * shh) * (kappa0**2 * sh - k**2 * kappa * d * e) / D)
        x0 = -2 * kappa0**2 / kappa * ((kappa**2 - k**2) * sh + k**2 * kappa * d * ch) * e / D
        meth = Method.CLOSED_FORM
    else:
        sol = solve(k, spec, c)
        if sol.lam is None:
            raise LambdaUndefined("lambda is undefined when R = 0")
        pd = phase_derivatives(k, spec, c)
        tau_as = m * (pd["J"].value - pd["lam"].value)
        x0 = -pd["lam"].value
        meth = Method.FINITE_DIFFERENCE
    free = spec.d * m
    mk = dict(k=k, spec=spec)
    return {
        TimeName.ASYMPTOTIC_GROUP_TR: TimeReport(TimeName.ASYMPTOTIC_GROUP_TR, tau_as, meth, **mk),
        TimeName.ASYMPTOTIC_GROUP_REF: TimeReport(TimeName.ASYMPTOTIC_GROUP_REF, tau_as, meth, **mk),
        TimeName.DELAY_TR: TimeReport(TimeName.DELAY_TR, tau_as - free, meth, **mk),
        TimeName.DELAY_REF: TimeReport(TimeName.DELAY_REF, tau_as - free, meth, **mk),
        TimeName.GROUP_INITIAL: TimeReport(TimeName.GROUP_INITIAL, -m * x0, meth, **mk, extra={"X_in0_nm": x0}),
    }


# double barrier


@dataclass(frozen=True)
class DoubleBarrierDwell:
    tau1: float
    tau_gap: float
    tau2: float
    total: float
    tau1_asymptotic: float
    tau_gap_asymptotic: float
    ratio: float
    ratio_asymptotic: float


def double_barrier_dwell(k, spec: DoubleRectangular, consts=None) -> DoubleBarrierDwell:
    """Transmission dwell time split over first barrier, gap and second barrier."""
    if not isinstance(spec, DoubleRectangular):
        raise ValidationError("double_barrier_dwell needs a DoubleRectangular barrier")
    c = _consts(consts)
    a, w, l = spec.a, spec.d_barrier, spec.l
    t1 = dwell_transmission(k, spec, c, lo=a, hi=a + w).value
    tg = dwell_transmission(k, spec, c, lo=a + w, hi=a + w + l).value if l > 0 else 0.0
    t2 = dwell_transmission(k, spec, c, lo=a + w + l, hi=spec.b).value
    total = dwell_transmission(k, spec, c).value
    m = c.m_over_hbar
    kappa0 = math.sqrt(spec.V0 / c.hbar2_over_2m)
    grow = math.exp(2 * kappa0 * w)
    t1a = m / (4 * k * kappa0) * grow
    tga = m * kappa0**2 / (8 * k**4) * (k * l - math.sin(k * l)) * grow
    return DoubleBarrierDwell(t1, tg, t2, total, t1a, tga, tg / t1, tga / t1a)


# Larmor clock


@dataclass(frozen=True)
class LarmorInputs:
    omega_L: float = 0.0
    kappa_step: float | None = None
    rel_step: float = 1e-3

    def step(self, kappa: float) -> float:
        s = self.rel_step * kappa if self.kappa_step is None else self.kappa_step
        if not (0 < s <= 1e-3 * kappa * (1 + 1e-12)):
            raise ValidationError("kappa_step must satisfy 0 < step <= 1e-3*kappa")
        return s


@dataclass(frozen=True)
class LarmorSuite:
    reports: dict
    residuals: dict


def _with_kappa(spec: Rectangular, E: float, kappa: float, c2: float) -> Rectangular:
    return spec.with_V0(E + c2 * kappa * kappa)


def _center_data(k, spec, consts, which: Which = Which.TRANSMISSION):
    """(psi(x_c), jump of psi' at x_c, Re(Psi'/Psi)(x_c), log(M^2/T)) for one subprocess."""
    sol = solve(k, spec, consts)
    F0, dF0, G0, _ = (float(v) for v in sol.basis.fg(np.array(0.0)))
    if which is Which.TRANSMISSION:
        (pl, dl), (pr, dr), _ = center_limits(sol)
        psi_c, jump = pr, dr - dl
    else:
        # psi_ref = c_ref F on the left and vanishes on the right
        c_ref = build_subprocess(sol, Which.REFLECTION).c_ref
        psi_c, jump = c_ref * F0, -c_ref * dF0
    g = (-sol.P.conjugate() * dF0 / (sol.Q.conjugate() * G0)).real
    log_m2_over_t = 2 * math.log(k) + 2 * math.log(abs(G0)) - 2 * math.log(abs(sol.P)) - sol.log_T
    return sol, psi_c, jump, g, log_m2_over_t


def flip_time(k, spec: Rectangular, consts=None, inputs: LarmorInputs | None = None):
    """tau_flip = (m/hbar k kappa)(M^2/T) d/dkappa [M_x/M] at x_c.

    This is M M_xk - M_x M_k written as M^2 d/dkappa(M_x/M); M_x/M = Re(Psi'/Psi)
    is an order-one quantity, so the kappa difference does not lose digits to
    the exponentially large M.
    """
    c = _consts(consts)
    inputs = inputs or LarmorInputs()
    sol, _, _, _, log_m2t = _center_data(k, spec, c)
    kappa = sol.kappa
    E, c2 = sol.E, c.hbar2_over_2m

    def g(kk):
        out = np.empty(np.shape(kk))
        for i, kv in np.ndenumerate(np.asarray(kk)):
            out[i] = _center_data(k, _with_kappa(spec, E, float(kv), c2), c)[3]
        return out

    dg = ddk(g, kappa, inputs.step(kappa), rtol=1e-12, strict=False)
    pref = c.m_over_hbar / (k * kappa) * math.exp(log_m2t)
    return pref * dg.value, pref * dg.error


def flip_time_jump(k, spec: Rectangular, consts=None, inputs: LarmorInputs | None = None,
                   which: Which = Which.TRANSMISSION) -> float:
    """Jump form: Re[psi (d tilde*+ - d tilde*-) - tilde* (psi'+ - psi'-)]/(k T), tilde = (m/2 hbar kappa) d psi/d kappa.

    which=Which.REFLECTION evaluates the same expression on psi_ref.
    """
    c = _consts(consts)
    inputs = inputs or LarmorInputs()
    sol, psi_c, jump, _, _ = _center_data(k, spec, c, which)
    kappa = sol.kappa
    E, c2 = sol.E, c.hbar2_over_2m
    h = inputs.step(kappa)

    def part(slot, comp):
        def f(kk):
            out = np.empty(np.shape(kk))
            for i, kv in np.ndenumerate(np.asarray(kk)):
                z = _center_data(k, _with_kappa(spec, E, float(kv), c2), c, which)[slot]
                out[i] = z.real if comp == 0 else z.imag
            return out
        return ddk(f, kappa, h, rtol=1e-12, strict=False).value

    dpsi = complex(part(1, 0), part(1, 1))
    djump = complex(part(2, 0), part(2, 1))
    s = c.m_over_hbar / (2 * kappa)
    tilde_c = s * dpsi
    tilde_jump = s * djump
    return (psi_c * tilde_jump.conjugate() - tilde_c.conjugate() * jump).real / (k * sol.T)


def larmor_suite(k, spec: Rectangular, consts=None, inputs: LarmorInputs | None = None) -> LarmorSuite:
    c = _consts(consts)
    if not isinstance(spec, Rectangular):
        raise ValidationError("the Larmor suite is defined for rectangular barriers")
    sol = solve(k, spec, c)
    if sol.regime is not Regime.UNDER_BARRIER:
        raise ValidationError("the Larmor suite needs E < V0")
    if sol.log_T < math.log(1e-300) or sol.R < 1e-300:
        raise DegenerateSplit("R or T too small for the Larmor decomposition")
    kappa, kappa0, d, m = _rect_params(k, spec, c)
    sh, _, ch, _ = _sh_ratio(kappa, d)
    D = _rect_D_scaled(k, kappa, kappa0, d)
    perp = dwell_buttiker(k, spec, c, Method.CLOSED_FORM).value
    perp0 = 2 * m * k / kappa * ((kappa**2 - k**2) * sh + kappa0**2 * kappa * d * ch) * math.exp(-kappa * d) / D
    flip, flip_err = flip_time(k, spec, c, inputs)
    flip30 = flip_time_jump(k, spec, c, inputs)
    par_tr = perp0 * math.sqrt(sol.R / sol.T)
    par_ref = -(sol.T / sol.R) * par_tr
    tau_tr = dwell_transmission(k, spec, c, Method.CLOSED_FORM).value
    tau_ref = dwell_reflection(k, spec, c).value
    group0 = asymptotic_group_times(k, spec, c, Method.CLOSED_FORM)[TimeName.GROUP_INITIAL].value
    mk = dict(k=k, spec=spec)
    reports = {
        TimeName.LARMOR_PERP: TimeReport(TimeName.LARMOR_PERP, perp, Method.CLOSED_FORM, **mk),
        TimeName.LARMOR_PERP_INITIAL: TimeReport(TimeName.LARMOR_PERP_INITIAL, perp0, Method.CLOSED_FORM, **mk),
        TimeName.FLIP_TIME: TimeReport(TimeName.FLIP_TIME, flip, Method.FINITE_DIFFERENCE, **mk,
                                       extra={"error": flip_err, "jump_form": flip30}),
        TimeName.LARMOR_PARALLEL_INITIAL_TR: TimeReport(TimeName.LARMOR_PARALLEL_INITIAL_TR, par_tr,
                                                        Method.CLOSED_FORM, **mk),
        TimeName.LARMOR_PARALLEL_INITIAL_REF: TimeReport(TimeName.LARMOR_PARALLEL_INITIAL_REF, par_ref,
                                                         Method.CLOSED_FORM, **mk),
    }
    residuals = {
        # tau_tr + tau_flip - tau_ref, relative to tau_ref
        "flip_chain": (tau_tr + flip - tau_ref) / tau_ref,
        # tau_ref - (tau_perp - tau_perp0), relative to tau_ref
        "perp_chain": (tau_ref - (perp - perp0)) / tau_ref,
        "flip_forms": (flip - flip30) / abs(flip),
        "parallel_sum": sol.T * par_tr + sol.R * par_ref,
        # reflection precession angle per unit omega_L: -tau_tr as stated vs -tau_ref as implied
        "reflection_angle": tau_ref - tau_tr,
        # initial group time from the initial-CM closed form against tau_perp0
        "group0_vs_perp0": group0 - perp0,
        "tau_dwell_tr": tau_tr,
        "tau_dwell_ref": tau_ref,
    }
    return LarmorSuite(reports, residuals)
