"""Stationary scattering states for a symmetric barrier."""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .barriers import BarrierSpec, DoubleRectangular, KGrid, Rectangular, validate_barrier
from .basis import AT_TOP_WINDOW_EV, make_basis
from .constants import PhysicalConstants, electron_constants
from .errors import AtBarrierTop, LambdaUndefined, NonPositiveK, UnwrapAmbiguity


class Regime(enum.Enum):
    UNDER_BARRIER = "UnderBarrier"
    OVER_BARRIER = "OverBarrier"


@dataclass(frozen=True)
class StationarySolution:
    k: float
    E: float
    spec: object
    consts: PhysicalConstants
    kappa: float
    kappa0: float
    Q: complex
    P: complex
    log_W: float
    a_out: complex
    b_out: complex
    a_tot: complex
    b_tot: complex
    T: float
    R: float
    log_T: float
    J: float
    lam: float | None
    A_tr_in: complex
    A_ref_in: complex
    regime: Regime
    basis: object = field(repr=False, compare=False)

    @property
    def velocity(self) -> float:
        return float(self.consts.velocity(self.k))

    @property
    def m_over_hbar_k(self) -> float:
        return self.consts.m_over_hbar / self.k


def _rect_kappa(spec, E, consts):
    V0 = float(getattr(spec, "V0", spec.v_max))
    kappa0 = math.sqrt(abs(V0) / consts.hbar2_over_2m)
    kappa = math.sqrt(abs(V0 - E) / consts.hbar2_over_2m)
    return kappa, kappa0


def _assemble(k, E, spec, consts, basis) -> StationarySolution:
    bd = basis.boundary
    Q = complex(bd.dF, k * bd.F)
    P = complex(bd.dG, k * bd.G)
    # a_out = -i k W / (Q* P*), b_out = -(F'G' + k^2 F G) / (Q* P*)
    log_abs_a = math.log(k) + bd.log_W - math.log(abs(Q)) - math.log(abs(P))
    J = -0.5 * math.pi + cmath.phase(Q) + cmath.phase(P)
    J = math.remainder(J, 2 * math.pi)
    if spec.v_max == 0.0:
        # free propagation: unit transmission and no reflection, exactly
        log_abs_a = 0.0
        b_out = 0j
    else:
        b_out = -(bd.dF * bd.dG + k * k * bd.F * bd.G) / (Q.conjugate() * P.conjugate())
    a_out = cmath.rect(math.exp(log_abs_a), J)
    eika = cmath.exp(1j * k * spec.a)
    a_tot = 1j * k * eika / Q.conjugate()
    b_tot = -1j * k * eika / P.conjugate()
    T = math.exp(2 * log_abs_a)
    R = abs(b_out) ** 2
    # a_out conj(b_out) is +-i sqrt(TR) for a symmetric barrier; using that form
    # keeps Re(A_tr) = T to full relative precision when T is tiny
    sign = 1.0 if (a_out * b_out.conjugate()).imag >= 0 else -1.0
    cross = 1j * sign * math.sqrt(T * R)
    A_tr = T - cross
    A_ref = R + cross
    lam = cmath.phase(A_ref) if R > 0 else None
    kappa, kappa0 = _rect_kappa(spec, E, consts)
    regime = Regime.UNDER_BARRIER if E < spec.v_max else Regime.OVER_BARRIER
    return StationarySolution(k=k, E=E, spec=spec, consts=consts, kappa=kappa, kappa0=kappa0, Q=Q, P=P,
                              log_W=bd.log_W, a_out=a_out, b_out=b_out, a_tot=a_tot, b_tot=b_tot,
                              T=T, R=R, log_T=2 * log_abs_a, J=J, lam=lam, A_tr_in=A_tr, A_ref_in=A_ref,
                              regime=regime, basis=basis)


def _prepare(k, spec, consts):
    if not (k > 0):
        raise NonPositiveK(f"wave number must be positive, got {k}")
    validate_barrier(spec)
    consts = consts or electron_constants()
    return consts, float(consts.energy(k))


def solve_rectangular(k: float, spec: Rectangular, consts: PhysicalConstants | None = None,
                      window: float = AT_TOP_WINDOW_EV) -> StationarySolution:
    if not isinstance(spec, Rectangular):
        raise TypeError("solve_rectangular needs a Rectangular barrier")
    consts, E = _prepare(k, spec, consts)
    return _assemble(k, E, spec, consts, make_basis(E, spec, consts, window=window))


def solve_symmetric_numeric(k: float, spec: BarrierSpec, consts: PhysicalConstants | None = None,
                            window: float = AT_TOP_WINDOW_EV) -> StationarySolution:
    """ODE integration for rectangular/tabulated, exact transfer steps for double barriers."""
    consts, E = _prepare(k, spec, consts)
    return _assemble(k, E, spec, consts, make_basis(E, spec, consts, numeric=True, window=window))


def solve(k: float, spec: BarrierSpec, consts: PhysicalConstants | None = None,
          window: float = AT_TOP_WINDOW_EV) -> StationarySolution:
    """Best available path: closed form for rectangles, exact transfer or ODE otherwise."""
    consts, E = _prepare(k, spec, consts)
    return _assemble(k, E, spec, consts, make_basis(E, spec, consts, window=window))


def evaluate_total(sol: StationarySolution, x, scaled: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Total scattering state and its x-derivative.

    scaled=True returns Psi/a_out, which stays finite on [a, inf) when T
    underflows (left of a it is finite only while a_out is nonzero).
    """
    x = np.asarray(x, dtype=float)
    spec, k = sol.spec, sol.k
    psi = np.empty(x.shape, dtype=complex)
    dpsi = np.empty(x.shape, dtype=complex)
    left = x < spec.a
    right = x > spec.b
    mid = ~(left | right)
    norm = 1.0 / sol.a_out if scaled else 1.0
    amp_out = 1.0 if scaled else sol.a_out
    if left.any():
        inc = norm * np.exp(1j * k * x[left])
        ref = norm * sol.b_out * np.exp(1j * k * (2 * spec.a - x[left]))
        psi[left] = inc + ref
        dpsi[left] = 1j * k * (inc - ref)
    if right.any():
        out = amp_out * np.exp(1j * k * (x[right] - spec.d))
        psi[right] = out
        dpsi[right] = 1j * k * out
    if mid.any():
        C, dC, S, dS = sol.basis.prop(x[mid])
        amp = amp_out * np.exp(1j * k * spec.a)
        psi[mid] = amp * (C + 1j * k * S)
        dpsi[mid] = amp * (dC + 1j * k * dS)
    return psi, dpsi


def current(sol: StationarySolution, psi, dpsi):
    """Probability current (hbar/m) Im(psi* psi') in nm/fs."""
    return np.imag(np.conj(psi) * dpsi) / sol.consts.m_over_hbar


def phase_derivatives(k: float, spec, consts=None, which=("J", "lam"), step=None, rtol=1e-9):
    """J'(k) and lambda'(k) by adaptive central differences.

    Phases are taken relative to the value at k (arg of a ratio), so no
    branch cut is ever crossed for steps that stay on the smooth branch.
    """
    from .numdiff import ddk

    consts = consts or electron_constants()
    base = solve(k, spec, consts)
    if "lam" in which and base.lam is None:
        raise LambdaUndefined("lambda is undefined when R = 0")

    def phase(name):
        def f(kk):
            out = np.empty(np.shape(kk))
            for i, kv in np.ndenumerate(np.asarray(kk)):
                s = solve(float(kv), spec, consts)
                if name == "J":
                    out[i] = math.remainder(s.J - base.J, 2 * math.pi)
                else:
                    out[i] = cmath.phase(s.A_ref_in / base.A_ref_in)
            return out

        return f

    step = 1e-3 * k if step is None else step
    return {name: ddk(phase(name), k, step, rtol=rtol) for name in which}


@dataclass(frozen=True)
class PhaseTable:
    k: np.ndarray
    J: np.ndarray
    lam: np.ndarray | None

    def derivative(self, name: str, k: float) -> float:
        """Local cubic-spline derivative of an unwrapped phase."""
        from scipy.interpolate import CubicSpline

        y = self.J if name == "J" else self.lam
        if y is None:
            raise ValueError("lambda is undefined for this table")
        return float(CubicSpline(self.k, y).derivative()(k))


def phase_spectra(kgrid: KGrid, spec, consts=None) -> PhaseTable:
    """Unwrapped J(k) and lambda(k) along the grid."""
    consts = consts or electron_constants()
    ks = kgrid.k
    sols = [solve(float(k), spec, consts) for k in ks]
    J = _unwrap(np.array([s.J for s in sols]))
    if any(s.lam is None for s in sols):
        lam = None
    else:
        lam = _unwrap(np.array([s.lam for s in sols]))
    return PhaseTable(ks, J, lam)


def _unwrap(phi):
    out = np.unwrap(phi)
    if np.any(np.abs(np.diff(out)) > 0.5 * math.pi):
        raise UnwrapAmbiguity("adjacent phase step exceeds pi/2 after unwrapping; refine the k grid")
    return out


def check_top(k, spec, consts=None, window=AT_TOP_WINDOW_EV):
    """Raise AtBarrierTop when E(k) falls in the excluded window of any segment."""
    consts = consts or electron_constants()
    E = float(consts.energy(k))
    heights = [s[2] for s in spec.segments] if isinstance(spec, (Rectangular, DoubleRectangular)) else []
    for v in heights:
        if v != 0.0 and abs(E - v) < window:
            raise AtBarrierTop(f"E={E} eV within {window} eV of V={v} eV")
