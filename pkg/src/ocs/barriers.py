"""Symmetric barrier descriptions and grids."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.integrate import newton_cotes

from .errors import AsymmetricBarrier, DegenerateGeometry


@dataclass(frozen=True)
class Rectangular:
    V0: float
    a: float
    b: float

    @property
    def d(self) -> float:
        return self.b - self.a

    @property
    def x_c(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def segments(self):
        """Constant-potential pieces as (x_left, x_right, V)."""
        return ((self.a, self.b, float(self.V0)),)

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.a) & (x <= self.b), float(self.V0), 0.0)

    @property
    def v_max(self) -> float:
        return abs(float(self.V0))

    def with_V0(self, V0: float) -> "Rectangular":
        return Rectangular(V0, self.a, self.b)

    def with_width(self, d: float) -> "Rectangular":
        return Rectangular(self.V0, self.a, self.a + d)

    def describe(self) -> str:
        return f"rect:{self.V0!r},{self.a!r},{self.b!r}"


@dataclass(frozen=True)
class DoubleRectangular:
    """Two identical barriers of height V0 and width d separated by a gap l."""

    V0: float
    d_barrier: float
    l: float
    a: float

    @property
    def b(self) -> float:
        return self.a + 2.0 * self.d_barrier + self.l

    @property
    def d(self) -> float:
        return self.b - self.a

    @property
    def x_c(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def segments(self):
        a, w, l = self.a, self.d_barrier, self.l
        V0 = float(self.V0)
        if l > 0:
            return ((a, a + w, V0), (a + w, a + w + l, 0.0), (a + w + l, self.b, V0))
        return ((a, self.b, V0),)

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for lo, hi, v in self.segments:
            out = np.where((x >= lo) & (x <= hi) & (out == 0.0), v, out)
        return out

    @property
    def v_max(self) -> float:
        return abs(float(self.V0))

    def with_V0(self, V0: float) -> "DoubleRectangular":
        return DoubleRectangular(V0, self.d_barrier, self.l, self.a)

    def describe(self) -> str:
        return f"double:{self.V0!r},{self.d_barrier!r},{self.l!r},{self.a!r}"


@dataclass(frozen=True)
class TabulatedSymmetric:
    """Potential sampled at increasing x, linearly interpolated, zero outside."""

    x: tuple
    V: tuple
    source: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        object.__setattr__(self, "V", tuple(float(v) for v in self.V))

    @property
    def a(self) -> float:
        return self.x[0]

    @property
    def b(self) -> float:
        return self.x[-1]

    @property
    def d(self) -> float:
        return self.b - self.a

    @property
    def x_c(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def knots(self) -> np.ndarray:
        return np.asarray(self.x)

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.a) & (x <= self.b)
        return np.where(inside, np.interp(x, self.x, self.V), 0.0)

    @property
    def v_max(self) -> float:
        return float(np.max(np.abs(self.V)))

    def describe(self) -> str:
        return f"table:{self.source}" if self.source else f"table:{len(self.x)} samples"


BarrierSpec = Union[Rectangular, DoubleRectangular, TabulatedSymmetric]


@dataclass(frozen=True)
class ValidationReport:
    x_c: float
    d: float
    symmetry_residual: float
    tol: float


def default_tolerance(spec: BarrierSpec) -> float:
    return 1e-8 if isinstance(spec, TabulatedSymmetric) else 1e-10


def validate_barrier(spec: BarrierSpec, tol: float | None = None) -> ValidationReport:
    """Check geometry and mirror symmetry about x_c; raises on failure."""
    tol = default_tolerance(spec) if tol is None else tol
    if isinstance(spec, DoubleRectangular):
        if not (spec.d_barrier > 0):
            raise DegenerateGeometry(f"barrier width d must be positive, got {spec.d_barrier}")
        if spec.l < 0:
            raise DegenerateGeometry(f"gap l must be non-negative, got {spec.l}")
    if isinstance(spec, TabulatedSymmetric):
        xs = np.asarray(spec.x)
        if xs.size < 2 or np.any(np.diff(xs) <= 0):
            raise DegenerateGeometry("tabulated x must be strictly increasing with at least two samples")
        if len(spec.V) != xs.size:
            raise DegenerateGeometry("tabulated x and V lengths differ")
    if not (spec.b > spec.a):
        raise DegenerateGeometry(f"need b > a, got a={spec.a}, b={spec.b}")
    if not (spec.a > 0):
        raise DegenerateGeometry(f"need a > 0 (packet launched at x=0), got a={spec.a}")
    if not all(math.isfinite(v) for v in _values(spec)):
        raise DegenerateGeometry("potential values must be finite")

    residual = _symmetry_residual(spec)
    if residual > tol:
        raise AsymmetricBarrier(f"symmetry residual {residual:.3e} exceeds tolerance {tol:.1e}")
    return ValidationReport(x_c=spec.x_c, d=spec.d, symmetry_residual=residual, tol=tol)


def _values(spec):
    if isinstance(spec, TabulatedSymmetric):
        return spec.V
    return (float(spec.V0),)


def _symmetry_residual(spec) -> float:
    if isinstance(spec, TabulatedSymmetric):
        xs = np.asarray(spec.x)
        vs = np.asarray(spec.V)
        mirrored = np.interp(2.0 * spec.x_c - xs, xs, vs)
        scale = max(np.max(np.abs(vs)), np.finfo(float).tiny)
        return float(np.max(np.abs(mirrored - vs)) / scale)
    # piecewise constant: compare segment edges reflected about x_c
    segs = spec.segments
    xc = spec.x_c
    scale = max(spec.d, 1.0)
    res = 0.0
    for (lo, hi, v), (lo2, hi2, v2) in zip(segs, reversed(segs)):
        res = max(res, abs((xc - lo) - (hi2 - xc)) / scale, abs((hi - xc) - (xc - lo2)) / scale)
        if v != v2:
            res = max(res, abs(v - v2) / max(abs(v), abs(v2)))
    return res


def read_barrier_csv(path) -> TabulatedSymmetric:
    """Two columns (x_nm, V_eV); a non-numeric first row is treated as a header."""
    xs, vs = [], []
    with open(path, newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                x, v = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                if i == 0:
                    continue
                raise DegenerateGeometry(f"{path}: malformed row {i + 1}: {row!r}")
            xs.append(x)
            vs.append(v)
    return TabulatedSymmetric(xs, vs, source=str(path))


@dataclass(frozen=True)
class SpatialGrid:
    x_min: float
    x_max: float
    n_points: int

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    def index_of(self, x0: float) -> int:
        """Index of a node that coincides with x0."""
        i = int(round((x0 - self.x_min) / self.dx))
        if abs(self.x_min + i * self.dx - x0) > 1e-9 * max(1.0, abs(x0)):
            raise ValueError(f"{x0} is not a grid node")
        return i

    def resolves(self, k_max: float) -> bool:
        return self.dx <= 2.0 * np.pi / k_max / 8.0

    @classmethod
    def with_nodes(cls, x_min: float, x_max: float, dx: float, spec: BarrierSpec) -> "SpatialGrid":
        """Uniform grid of spacing <= dx with a, x_c and b as nodes.

        Every region between consecutive special nodes holds a multiple of 4
        intervals so composite Newton-Cotes rules up to order 4 apply region
        by region.
        """
        half = spec.x_c - spec.a
        m = _multiple(max(4, math.ceil(half / dx)))
        step = half / m
        n_left = _multiple(math.ceil((spec.a - x_min) / step))
        n_right = _multiple(math.ceil((x_max - spec.b) / step))
        lo = spec.a - n_left * step
        n = n_left + 2 * m + n_right + 1
        return cls(lo, lo + (n - 1) * step, n)

    def quadrature_weights(self, nodes=(), order: int = 4) -> np.ndarray:
        """Composite closed Newton-Cotes weights (order 2 is Simpson, 4 is Boole).

        The rule restarts at each of the given interior nodes, so integrands
        with kinks there keep full order.
        """
        idx = sorted({0, self.n_points - 1, *(self.index_of(x) for x in nodes)})
        panel = newton_cotes(order, 1)[0] / order
        w = np.zeros(self.n_points)
        for i0, i1 in zip(idx[:-1], idx[1:]):
            if (i1 - i0) % order:
                raise ValueError(f"quadrature regions need a multiple of {order} intervals")
            for j in range(i0, i1, order):
                w[j:j + order + 1] += panel * order * self.dx
        return w

    def simpson_weights(self, nodes=()) -> np.ndarray:
        return self.quadrature_weights(nodes, order=2)


def _multiple(n: int, of: int = 4) -> int:
    return -(-n // of) * of


@dataclass(frozen=True)
class KGrid:
    k_min: float
    k_max: float
    n_points: int

    def __post_init__(self):
        if not (0 < self.k_min < self.k_max) or self.n_points < 2:
            raise DegenerateGeometry("KGrid needs 0 < k_min < k_max and n_points >= 2")

    @property
    def k(self) -> np.ndarray:
        return np.linspace(self.k_min, self.k_max, self.n_points)

    @property
    def dk(self) -> float:
        return (self.k_max - self.k_min) / (self.n_points - 1)
