"""Real solution pairs (F odd, G even about x_c) on a symmetric barrier.

Every basis exposes the same three views:

* ``boundary``: F, F', G, G' at x = b rescaled to order one, together with
  log W, the logarithm of the Wronskian F'G - G'F in the same scaling.
  Amplitudes are invariant under independent rescaling of F and G, so this
  keeps opaque barriers free of overflow.
* ``fg(xi)``: F, F', G, G' at xi = x - x_c in the boundary scaling.
* ``prop(x)``: real solutions C, S propagated backwards from b with
  C(b) = 1, C'(b) = 0, S(b) = 0, S'(b) = 1.  Any solution u on [a, b]
  equals u(b) C + u'(b) S, which evaluates the scattering state without the
  cancellation that a_tot F + b_tot G suffers near b.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .barriers import DoubleRectangular, Rectangular, TabulatedSymmetric
from .constants import PhysicalConstants
from .errors import AtBarrierTop, IntegrationFailure

AT_TOP_WINDOW_EV = 1e-9
ODE_RTOL = 1e-12
ODE_ATOL = 1e-14


@dataclass(frozen=True)
class Boundary:
    F: float
    dF: float
    G: float
    dG: float
    log_W: float


def _check_top(E, V, window):
    if V != 0.0 and abs(E - V) < window:
        raise AtBarrierTop(f"E={E!r} eV is within {window:g} eV of the segment height V={V!r} eV")


def _slab(q2, r):
    """Transfer entries (c, s, dc, ds) over displacement r for u'' = q2 u."""
    r = np.asarray(r, dtype=float)
    if q2 > 0:
        q = math.sqrt(q2)
        ch, sh = np.cosh(q * r), np.sinh(q * r)
        return ch, sh / q, q * sh, ch
    if q2 < 0:
        p = math.sqrt(-q2)
        c, s = np.cos(p * r), np.sin(p * r)
        return c, s / p, -p * s, c
    one = np.ones_like(r)
    return one, r, np.zeros_like(r), one


class RectangularBasis:
    """Closed-form basis for a single rectangular barrier.

    Under the barrier F and G are sinh and cosh scaled by exp(-kappa*h); above
    it they are sin and cos of kappa'*xi.
    """

    def __init__(self, E: float, spec: Rectangular, consts: PhysicalConstants, window=AT_TOP_WINDOW_EV):
        _check_top(E, float(spec.V0), window)
        self.E = E
        self.a, self.b, self.x_c = spec.a, spec.b, spec.x_c
        self.h = 0.5 * spec.d
        q2 = (float(spec.V0) - E) / consts.hbar2_over_2m
        self.under = q2 > 0
        self.q = math.sqrt(abs(q2))
        q, h = self.q, self.h
        if self.under:
            e2 = math.exp(-2 * q * h)
            self.boundary = Boundary(-0.5 * math.expm1(-2 * q * h), 0.5 * q * (1 + e2),
                                     0.5 * (1 + e2), -0.5 * q * math.expm1(-2 * q * h),
                                     math.log(q) - 2 * q * h)
        else:
            self.boundary = Boundary(math.sin(q * h), q * math.cos(q * h),
                                     math.cos(q * h), -q * math.sin(q * h), math.log(q))

    def fg(self, xi):
        xi = np.asarray(xi, dtype=float)
        q, h = self.q, self.h
        if self.under:
            ep = np.exp(q * (xi - h))
            em = np.exp(-q * (xi + h))
            return 0.5 * (ep - em), 0.5 * q * (ep + em), 0.5 * (ep + em), 0.5 * q * (ep - em)
        s, c = np.sin(q * xi), np.cos(q * xi)
        return s, q * c, c, -q * s

    def prop(self, x):
        r = self.b - np.asarray(x, dtype=float)
        if self.under:
            ch, sh = np.cosh(self.q * r), np.sinh(self.q * r)
            return ch, -self.q * sh, -sh / self.q, ch
        c, s = np.cos(self.q * r), np.sin(self.q * r)
        return c, self.q * s, -s / self.q, c


class PiecewiseConstantBasis:
    """Exact 2x2 transfer propagation through constant-potential segments."""

    def __init__(self, E: float, segments, x_c: float, consts: PhysicalConstants, window=AT_TOP_WINDOW_EV):
        for _, _, v in segments:
            _check_top(E, v, window)
        self.E = E
        self.a, self.b = segments[0][0], segments[-1][1]
        self.x_c = x_c
        self.h = self.b - x_c
        c2 = consts.hbar2_over_2m
        self._q2 = np.array([(v - E) / c2 for _, _, v in segments])
        self._edges = np.array([s[0] for s in segments] + [self.b])

        # forward from x_c: right-half breakpoints in xi
        right = [(max(lo, x_c) - x_c, hi - x_c, q2) for (lo, hi, _), q2 in zip(segments, self._q2) if hi > x_c]
        self._r_lo = np.array([r[0] for r in right])
        self._r_q2 = [r[2] for r in right]
        states, logs = [], []
        fy, gy = np.array([0.0, 1.0]), np.array([1.0, 0.0])
        lf = lg = 0.0
        for lo, hi, q2 in right:
            states.append((fy.copy(), gy.copy()))
            logs.append((lf, lg))
            c, s, dc, ds = _slab(q2, hi - lo)
            m = np.array([[c, s], [dc, ds]], dtype=float)
            fy, gy = m @ fy, m @ gy
            nf, ng = np.hypot(*fy), np.hypot(*gy)
            fy, gy = fy / nf, gy / ng
            lf += math.log(nf)
            lg += math.log(ng)
        self._fwd = states
        self._fwd_log = logs
        self._lf, self._lg = lf, lg
        self.boundary = Boundary(fy[0], fy[1], gy[0], gy[1], -(lf + lg))

        # backward from b over the whole support
        cy, sy = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        back = [None] * len(segments)
        for j in range(len(segments) - 1, -1, -1):
            back[j] = (cy.copy(), sy.copy())
            c, s, dc, ds = _slab(self._q2[j], -(self._edges[j + 1] - self._edges[j]))
            m = np.array([[c, s], [dc, ds]], dtype=float)
            cy, sy = m @ cy, m @ sy
        self._back = back

    def fg(self, xi):
        xi = np.asarray(xi, dtype=float)
        sgn = np.where(xi < 0, -1.0, 1.0)
        ax = np.abs(xi)
        j = np.clip(np.searchsorted(self._r_lo, ax, side="right") - 1, 0, len(self._r_lo) - 1)
        F = np.empty_like(ax); dF = np.empty_like(ax); G = np.empty_like(ax); dG = np.empty_like(ax)
        for seg in np.unique(j):
            sel = j == seg
            c, s, dc, ds = _slab(self._r_q2[seg], ax[sel] - self._r_lo[seg])
            (f0, f1), (g0, g1) = self._fwd[seg]
            lf, lg = self._fwd_log[seg]
            sf, sg = math.exp(lf - self._lf), math.exp(lg - self._lg)
            F[sel] = sf * (c * f0 + s * f1)
            dF[sel] = sf * (dc * f0 + ds * f1)
            G[sel] = sg * (c * g0 + s * g1)
            dG[sel] = sg * (dc * g0 + ds * g1)
        # F odd, G even
        return sgn * F, dF, G, sgn * dG

    def prop(self, x):
        x = np.asarray(x, dtype=float)
        n = len(self._q2)
        j = np.clip(np.searchsorted(self._edges, x, side="right") - 1, 0, n - 1)
        C = np.empty_like(x); dC = np.empty_like(x); S = np.empty_like(x); dS = np.empty_like(x)
        for seg in np.unique(j):
            sel = j == seg
            c, s, dc, ds = _slab(self._q2[seg], x[sel] - self._edges[seg + 1])
            (c0, c1), (s0, s1) = self._back[seg]
            C[sel] = c * c0 + s * c1
            dC[sel] = dc * c0 + ds * c1
            S[sel] = c * s0 + s * s1
            dS[sel] = dc * s0 + ds * s1
        return C, dC, S, dS


class ODEBasis:
    """Adaptive Runge-Kutta integration of u'' = (V - E)/c2 u, piecewise between knots."""

    def __init__(self, E: float, spec, consts: PhysicalConstants, rtol=ODE_RTOL, window=AT_TOP_WINDOW_EV):
        if isinstance(spec, Rectangular):
            _check_top(E, float(spec.V0), window)
            knots = np.array([spec.a, spec.b])
        elif isinstance(spec, TabulatedSymmetric):
            knots = spec.knots
        else:
            knots = np.array(sorted({s[0] for s in spec.segments} | {spec.b}))
        self.E = E
        self.a, self.b, self.x_c = spec.a, spec.b, spec.x_c
        self.h = spec.b - spec.x_c
        c2 = consts.hbar2_over_2m
        self._spec = spec
        self._rtol = rtol

        flat = isinstance(spec, Rectangular)

        def rhs(x, y, lo, hi):
            if flat:
                w = (spec.V0 - E) / c2
            else:
                # evaluate V strictly inside the current piece so steps never see a jump
                xm = min(max(x, lo + 1e-12 * (hi - lo)), hi - 1e-12 * (hi - lo))
                w = (float(spec.potential(np.array([xm]))[0]) - E) / c2
            return np.array([y[1], w * y[0], y[3], w * y[2]])

        self._rhs = rhs
        right = np.concatenate([[self.x_c], knots[knots > self.x_c]])
        fwd = self._integrate(right, np.array([0.0, 1.0, 1.0, 0.0]))
        yb = fwd[-1][1].sol(right[-1])
        nf, ng = math.hypot(yb[0], yb[1]), math.hypot(yb[2], yb[3])
        self._nf, self._ng = nf, ng
        self._fwd = fwd
        self._fwd_edges = right
        self.boundary = Boundary(yb[0] / nf, yb[1] / nf, yb[2] / ng, yb[3] / ng, -math.log(nf) - math.log(ng))

        self._back_edges = knots
        self._back = None

    def _integrate(self, edges, y0):
        pieces = []
        y = y0
        for lo, hi in zip(edges[:-1], edges[1:]):
            a, b = min(lo, hi), max(lo, hi)
            scale = max(1.0, float(np.max(np.abs(y))))
            res = solve_ivp(self._rhs, (lo, hi), y, method="DOP853", rtol=self._rtol,
                            atol=ODE_ATOL * scale, dense_output=True, args=(a, b))
            if not res.success:
                raise IntegrationFailure(f"ODE integration failed on [{a}, {b}]: {res.message}")
            pieces.append(((a, b), res))
            y = res.y[:, -1]
        return pieces

    def _eval(self, pieces, edges_sorted, x):
        out = np.empty((4, x.size))
        j = np.clip(np.searchsorted(edges_sorted, x, side="right") - 1, 0, len(pieces) - 1)
        for seg in np.unique(j):
            sel = j == seg
            out[:, sel] = pieces[seg][1].sol(x[sel])
        return out

    def fg(self, xi):
        xi = np.asarray(xi, dtype=float)
        flat = np.atleast_1d(np.abs(xi)).ravel() + self.x_c
        y = self._eval(self._fwd, self._fwd_edges, flat)
        sgn = np.where(np.atleast_1d(xi).ravel() < 0, -1.0, 1.0)
        F = sgn * y[0] / self._nf
        dF = y[1] / self._nf
        G = y[2] / self._ng
        dG = sgn * y[3] / self._ng
        shape = np.shape(xi)
        return tuple(v.reshape(shape) for v in (F, dF, G, dG))

    def prop(self, x):
        x = np.asarray(x, dtype=float)
        if self._back is None:
            # only field evaluation inside the barrier needs the propagator
            self._back = self._integrate(self._back_edges[::-1], np.array([1.0, 0.0, 0.0, 1.0]))[::-1]
        y = self._eval(self._back, self._back_edges, np.atleast_1d(x).ravel())
        shape = np.shape(x)
        return tuple(v.reshape(shape) for v in y)


def make_basis(E: float, spec, consts: PhysicalConstants, numeric: bool = False, window=AT_TOP_WINDOW_EV):
    """Analytic basis where one exists; numeric=True forces propagation."""
    if isinstance(spec, Rectangular) and not numeric:
        return RectangularBasis(E, spec, consts, window)
    if isinstance(spec, (Rectangular, DoubleRectangular)) and not (numeric and isinstance(spec, Rectangular)):
        return PiecewiseConstantBasis(E, spec.segments, spec.x_c, consts, window)
    return ODEBasis(E, spec, consts, window=window)
