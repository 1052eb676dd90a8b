"""Transmission and reflection subprocess wave functions for a symmetric barrier."""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .stationary import StationarySolution, current, evaluate_total

# relative size below which P*A_ref + conj(P)*b_out is treated as cancelled
_CANCEL = 1e-3


class Which(enum.Enum):
    TRANSMISSION = "Transmission"
    REFLECTION = "Reflection"


@dataclass(frozen=True)
class MatchingReport:
    phase_jump: float
    phase_slope_jump: float
    modulus_jump: float
    modulus_slope_sum: float
    current_jump: float
    modulus_slope_left: float
    modulus_slope_right: float

    def residuals(self):
        return (abs(self.phase_jump), abs(self.phase_slope_jump), abs(self.modulus_jump),
                abs(self.modulus_slope_sum), abs(self.current_jump))


class SubprocessField:
    """psi_tr or psi_ref evaluated region by region.

    For a <= x < x_c the transmission field is evaluated through the mirror
    relation psi_tr(x) = e^{i theta} conj(Psi_tot(2 x_c - x)), e^{i theta} =
    b_tot / conj(b_tot), which is algebraically the same function as the
    F/G combination but free of cancellation for opaque barriers.  The
    reflection field there is c_ref F(x - x_c); c_ref falls back to the value
    matched at x = a when the interior combination cancels.
    """

    def __init__(self, sol: StationarySolution, which: Which):
        self.sol = sol
        self.which = which
        spec = sol.spec
        self.a, self.b, self.x_c = spec.a, spec.b, spec.x_c
        k = sol.k
        eika = cmath.exp(1j * k * spec.a)
        self._mirror = sol.b_tot / sol.b_tot.conjugate() if sol.b_tot != 0 else 1.0
        bd = sol.basis.boundary
        comb = sol.P * sol.A_ref_in + sol.P.conjugate() * sol.b_out
        ext = (sol.A_ref_in + sol.b_out) * eika
        F_a = -bd.F
        self.c_ref_interior = comb * eika * math.exp(-sol.log_W) if sol.log_W > -700 else complex("nan")
        use_interior = abs(comb) >= _CANCEL * abs(sol.P) and math.isfinite(abs(self.c_ref_interior))
        self.c_ref = self.c_ref_interior if use_interior else (ext / F_a if F_a != 0 else 0j)
        self.c_ref_source = "interior" if use_interior else "matched-at-a"
        if use_interior and abs(ext) > 0:
            self.continuity_residual_at_a = abs(self.c_ref_interior * F_a - ext) / abs(ext)
        else:
            self.continuity_residual_at_a = float("nan")

    def evaluate(self, x, side: int = +1, scaled: bool = False):
        """Field and x-derivative; side=-1 takes the left limit at x = x_c.

        scaled=True divides the transmission field by a_out (|value|^2 / T).
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        sol, k = self.sol, self.sol.k
        psi = np.zeros(x.shape, dtype=complex)
        dpsi = np.zeros(x.shape, dtype=complex)
        outer = x <= self.a
        inner = (x > self.a) & ((x < self.x_c) | ((x == self.x_c) & (side < 0)))
        right = ~(outer | inner)
        if self.which is Which.TRANSMISSION:
            if outer.any():
                amp = (sol.a_out.conjugate() - sol.b_out.conjugate()) if scaled else sol.A_tr_in
                psi[outer] = amp * np.exp(1j * k * x[outer])
                dpsi[outer] = 1j * k * psi[outer]
            if inner.any():
                p, dp = evaluate_total(sol, 2 * self.x_c - x[inner], scaled=scaled)
                # conj(Psi/a_out) = conj(Psi)/a_out * (a_out/conj(a_out))
                rot = self._mirror * (_unit(sol.a_out).conjugate() ** 2 if scaled else 1.0)
                psi[inner] = rot * np.conj(p)
                dpsi[inner] = -rot * np.conj(dp)
            if right.any():
                psi[right], dpsi[right] = evaluate_total(sol, x[right], scaled=scaled)
        else:
            if outer.any():
                inc = sol.A_ref_in * np.exp(1j * k * x[outer])
                ref = sol.b_out * np.exp(1j * k * (2 * self.a - x[outer]))
                psi[outer] = inc + ref
                dpsi[outer] = 1j * k * (inc - ref)
            if inner.any():
                F, dF, _, _ = sol.basis.fg(x[inner] - self.x_c)
                psi[inner] = self.c_ref * F
                dpsi[inner] = self.c_ref * dF
        return psi, dpsi

    def __call__(self, x, side: int = +1, scaled: bool = False):
        return self.evaluate(x, side, scaled)[0]


def _unit(z: complex) -> complex:
    return cmath.exp(1j * cmath.phase(z))


def build_subprocess(sol: StationarySolution, which) -> SubprocessField:
    return SubprocessField(sol, Which(which) if not isinstance(which, Which) else which)


def subprocess_current(field: SubprocessField, x, side: int = +1):
    psi, dpsi = field.evaluate(x, side)
    return current(field.sol, psi, dpsi)


def center_limits(sol: StationarySolution):
    """One-sided limits (psi, psi') of psi_tr at x_c from the interior coefficients.

    Also returns the F-coefficients on each side: the current of alpha F + beta G
    is Im(conj(beta) alpha) W exactly, which avoids evaluating Im(psi* psi')
    as a difference of exponentially large terms.
    """
    eika = cmath.exp(1j * sol.k * sol.spec.a)
    F0, dF0, G0, dG0 = (float(v) for v in sol.basis.fg(np.array(0.0)))
    alpha_left = sol.P * sol.A_tr_in * eika * math.exp(-sol.log_W)
    left_val = sol.b_tot * G0
    left_der = alpha_left * dF0
    right_val, right_der = (complex(v[0]) for v in evaluate_total(sol, np.array([sol.spec.x_c])))
    return (left_val, left_der), (right_val, right_der), (alpha_left, sol.a_tot)


def matching_report(field: SubprocessField) -> MatchingReport:
    """Jumps of phase, phase slope, modulus, modulus slope and current at x_c."""
    if field.which is not Which.TRANSMISSION:
        raise ValueError("matching_report applies to the transmission field")
    sol = field.sol
    (pl, dl), (pr, dr), _ = center_limits(sol)
    scale_d = max(abs(dr), abs(dl))
    ml, mr = abs(pl), abs(pr)
    slope_l = (dl / pl).real * ml
    slope_r = (dr / pr).real * mr
    ph_slope_l = (dl / pl).imag
    ph_slope_r = (dr / pr).imag
    flux = sol.T * sol.velocity
    # Im(conj(beta) alpha) W with the products reduced by the Wronskian:
    # conj(b_tot) alpha_left = i k A_tr / W and Im(conj(b_tot) a_tot) = k^3 W / |P Q|^2
    k, mh = sol.k, sol.consts.m_over_hbar
    cur_l = k * sol.A_tr_in.real / mh
    log_r = 3 * math.log(k) + 2 * sol.log_W - 2 * math.log(abs(sol.P)) - 2 * math.log(abs(sol.Q))
    cur_r = math.exp(log_r) / mh
    rel = scale_d / mr if mr > 0 else 1.0
    return MatchingReport(
        phase_jump=cmath.phase(pr / pl),
        phase_slope_jump=(ph_slope_r - ph_slope_l) / rel if rel > 0 else 0.0,
        modulus_jump=(mr - ml) / mr,
        modulus_slope_sum=(slope_l + slope_r) / scale_d if scale_d > 0 else 0.0,
        current_jump=(cur_r - cur_l) / flux if flux > 0 else 0.0,
        modulus_slope_left=slope_l,
        modulus_slope_right=slope_r,
    )
