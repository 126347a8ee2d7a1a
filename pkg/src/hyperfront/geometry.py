"""Wall descriptions, their polyline approximation and wing splitting.

The flow occupies ``y < b(x)``; the wall is its upper boundary.  A wing
with surfaces ``b_+ >= b_-`` on ``[0, chord]`` is split into two half
problems of that form: the lower surface directly and the upper surface
after the mirror map ``(y, v) -> (-y, -v)``.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
import numpy as np

from .errors import InvalidBoundaryError


@dataclass(frozen=True)
class WallSpec:
    """Continuous wall profile ``b(x)`` on ``x >= 0`` with ``b(0) = 0``.

    Parameters
    ----------
    kind : {"piecewise_linear", "samples"}
        ``piecewise_linear`` uses ``slopes[i]`` on
        ``[breakpoints[i-1], breakpoints[i])`` (with ``breakpoints[-1]``
        implicitly 0) and ``slopes[-1]`` beyond the last breakpoint.
        ``samples`` interpolates ``(x, y)`` linearly and continues with the
        slope of the last interval.
    """

    kind: str
    breakpoints: tuple = ()
    slopes: tuple = ()
    x: tuple = ()
    y: tuple = ()

    def __post_init__(self):
        if self.kind == "piecewise_linear":
            if len(self.slopes) != len(self.breakpoints) + 1:
                raise InvalidBoundaryError(
                    "piecewise_linear needs len(slopes) == len(breakpoints) + 1")
            bp = list(self.breakpoints)
            if any(b <= 0.0 for b in bp) or bp != sorted(set(bp)):
                raise InvalidBoundaryError(
                    "breakpoints must be positive and increasing")
        elif self.kind == "samples":
            if len(self.x) != len(self.y) or len(self.x) < 2:
                raise InvalidBoundaryError("samples need matching x, y of length >= 2")
            if self.x[0] != 0.0:
                raise InvalidBoundaryError("samples must start at x = 0")
            if any(b <= a for a, b in zip(self.x, self.x[1:])):
                raise InvalidBoundaryError("sample abscissae must increase")
        else:
            raise InvalidBoundaryError("unknown wall kind %r" % (self.kind,))

    @classmethod
    def from_dict(cls, d: dict) -> "WallSpec":
        kind = d.get("kind")
        if kind == "piecewise_linear":
            allowed = {"kind", "breakpoints", "slopes"}
        elif kind == "samples":
            allowed = {"kind", "x", "y"}
        else:
            raise InvalidBoundaryError("unknown wall kind %r" % (kind,))
        extra = set(d) - allowed
        if extra:
            raise InvalidBoundaryError("unknown wall keys: %s" % sorted(extra))
        return cls(kind=kind,
                   breakpoints=tuple(float(b) for b in d.get("breakpoints", ())),
                   slopes=tuple(float(s) for s in d.get("slopes", ())),
                   x=tuple(float(t) for t in d.get("x", ())),
                   y=tuple(float(t) for t in d.get("y", ())))

    def to_dict(self) -> dict:
        if self.kind == "piecewise_linear":
            return {"kind": self.kind, "breakpoints": list(self.breakpoints),
                    "slopes": list(self.slopes)}
        return {"kind": self.kind, "x": list(self.x), "y": list(self.y)}

    def negated(self) -> "WallSpec":
        """Mirror image ``-b``."""
        return WallSpec(self.kind, self.breakpoints,
                        tuple(-s for s in self.slopes), self.x,
                        tuple(-t for t in self.y))

    # piecewise-constant slope as (edges, values); values[i] on [edges[i], edges[i+1])
    def _slope_pieces(self):
        if self.kind == "piecewise_linear":
            return [0.0, *self.breakpoints], list(self.slopes)
        xs, ys = self.x, self.y
        vals = [(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) for i in range(len(xs) - 1)]
        return list(xs[:-1]) + [xs[-1]], vals + [vals[-1]]

    @property
    def far_slope(self) -> float:
        return self._slope_pieces()[1][-1]

    @property
    def initial_slope(self) -> float:
        return self._slope_pieces()[1][0]

    @property
    def last_change(self) -> float:
        """Abscissa beyond which the slope is constant."""
        edges, vals = self._slope_pieces()
        far = vals[-1]
        for i in range(len(vals) - 1, -1, -1):
            if vals[i] != far:
                return edges[i + 1]
        return 0.0

    def slope(self, x: float) -> float:
        edges, vals = self._slope_pieces()
        return vals[max(0, bisect.bisect_right(edges, x) - 1)]

    def value(self, x: float) -> float:
        """``b(x)`` by exact integration of the slope pieces."""
        return self.integral(0.0, x)

    def integral(self, x0: float, x1: float) -> float:
        """``b(x1) - b(x0)`` for ``0 <= x0 <= x1``."""
        edges, vals = self._slope_pieces()
        total = 0.0
        for i, s in enumerate(vals):
            lo = edges[i]
            hi = edges[i + 1] if i + 1 < len(edges) else math.inf
            a, b = max(lo, x0), min(hi, x1)
            if b > a:
                total += s * (b - a)
        return total

    def mean_slope(self, x0: float, x1: float) -> float:
        edges, vals = self._slope_pieces()
        i = max(0, bisect.bisect_right(edges, x0) - 1)
        hi = edges[i + 1] if i + 1 < len(edges) else math.inf
        if x1 <= hi:
            # whole segment inside one piece: exact slope, no round-off
            return vals[i]
        return self.integral(x0, x1) / (x1 - x0)

    def max_spacing(self) -> float:
        if self.kind != "samples":
            return 0.0
        return max(b - a for a, b in zip(self.x, self.x[1:]))


@dataclass(frozen=True)
class BoundaryPolyline:
    """Polyline ``b_h`` through ``(k h, b_k)``.

    ``thetas[k]`` is the angle of the segment ``[x_k, x_{k+1}]`` and
    ``turns[k]`` the change of angle at ``x_k`` (``turns[0] = thetas[0]``).
    Beyond the last stored vertex the final segment is extended.
    """

    h: float
    xs: np.ndarray
    bs: np.ndarray
    thetas: np.ndarray
    far_slope: float
    k_star: int
    turns: np.ndarray = field(init=False)

    def __post_init__(self):
        t = np.empty_like(self.thetas)
        t[0] = self.thetas[0]
        t[1:] = np.diff(self.thetas)
        object.__setattr__(self, "turns", t)

    def segment(self, x: float) -> int:
        """Index of the segment containing ``x`` (right-continuous)."""
        k = int(math.floor(x / self.h + 1e-12))
        return min(max(k, 0), len(self.thetas) - 1)

    def theta_at(self, x: float) -> float:
        return float(self.thetas[self.segment(x)])

    def __call__(self, x: float) -> float:
        k = self.segment(x)
        return float(self.bs[k] + (x - self.xs[k]) * math.tan(self.thetas[k]))

    def values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        k = np.clip(np.floor(x / self.h + 1e-12).astype(int), 0, len(self.thetas) - 1)
        return self.bs[k] + (x - self.xs[k]) * np.tan(self.thetas[k])

    @property
    def total_turning(self) -> float:
        return float(np.sum(np.abs(self.turns)))


def build_polyline(spec: WallSpec, h: float, x_max: float,
                   check: bool = True) -> BoundaryPolyline:
    """Polyline approximation with vertices at ``x_k = k h``.

    Past ``k_*`` the slope is frozen at its far-field limit.  For sampled
    walls ``k_*`` is the first index after which the slope stays within
    ``h`` of that limit; piecewise-linear walls use their last breakpoint.

    Raises
    ------
    InvalidBoundaryError
        If the wall violates ``b(0) = 0``, ``b'(0) <= 0`` or ``b <= 0``, or
        if samples are coarser than ``h``.
    """
    if not h > 0.0:
        raise InvalidBoundaryError("h must be positive")
    if spec.kind == "samples":
        if spec.y[0] != 0.0:
            raise InvalidBoundaryError("wall must start at b(0) = 0")
        if spec.max_spacing() > h * (1.0 + 1e-9):
            raise InvalidBoundaryError("wall sampling is coarser than h")
    if check and spec.initial_slope > 0.0:
        raise InvalidBoundaryError("wall must turn into the flow: b'(0) <= 0")
    far = spec.far_slope
    edges, vals = spec._slope_pieces()
    # k_*: sup over x >= k h of |b' - b'_inf| <= tol.  Piecewise-linear walls
    # are exact past their last breakpoint, so no slope change is discarded.
    tol = 0.0 if spec.kind == "piecewise_linear" else h
    tail = 0.0
    for i in range(len(vals) - 1, -1, -1):
        if abs(vals[i] - far) > tol:
            tail = edges[i + 1]
            break
    k_star = int(math.ceil(tail / h - 1e-12))
    n = max(k_star, int(math.ceil(x_max / h - 1e-12))) + 1
    xs = np.arange(n + 1, dtype=float) * h
    thetas = np.empty(n)
    bs = np.empty(n + 1)
    bs[0] = 0.0
    for k in range(n):
        if k < k_star:
            s = spec.mean_slope(xs[k], xs[k + 1])
        else:
            s = far
        thetas[k] = math.atan(s)
        bs[k + 1] = bs[k] + h * s
    if check:
        if np.any(bs > 1e-14):
            raise InvalidBoundaryError("wall must stay at or below y = 0")
        if spec.kind == "samples" and max(spec.y) > 0.0:
            raise InvalidBoundaryError("wall must stay at or below y = 0")
    # exact turns where consecutive slopes coincide
    for k in range(1, n):
        if abs(thetas[k] - thetas[k - 1]) < 1e-15:
            thetas[k] = thetas[k - 1]
    return BoundaryPolyline(h, xs, bs, thetas, far, k_star)


def corner_schedule(poly: BoundaryPolyline) -> list:
    """Corners ``(x_k, omega_k)`` with non-zero turn, in increasing ``x``."""
    return [(float(poly.xs[k]), float(w)) for k, w in enumerate(poly.turns)
            if w != 0.0]


def turning_variation(poly: BoundaryPolyline) -> float:
    """Total variation of the wall angle, counting the turn at ``x = 0``."""
    return poly.total_turning


@dataclass(frozen=True)
class WingGeometry:
    """Thin wing with surfaces ``b_+`` (upper) and ``b_-`` (lower)."""

    chord: float
    upper: WallSpec
    lower: WallSpec

    def __post_init__(self):
        if not self.chord > 0.0:
            raise InvalidBoundaryError("chord must be positive")
        if self.upper.initial_slope < 0.0 or self.lower.initial_slope > 0.0:
            raise InvalidBoundaryError(
                "surfaces must open into the flow at the leading edge")
        for spec in (self.upper, self.lower):
            if abs(spec.value(self.chord)) > 1e-12:
                raise InvalidBoundaryError("surfaces must close at the chord")
        grid = np.linspace(0.0, self.chord, 257)
        if any(self.upper.value(x) < self.lower.value(x) - 1e-14 for x in grid):
            raise InvalidBoundaryError("upper surface dips below the lower one")

    @classmethod
    def lens(cls, chord: float, thickness: float, h: float) -> "WingGeometry":
        """Symmetric parabolic lens sampled as a polyline with spacing ``h``.

        ``thickness`` is the maximal gap ``b_+ - b_-``.
        """
        n = int(round(chord / h))
        xs = [chord * i / n for i in range(n + 1)]
        amp = 2.0 * thickness / chord ** 2

        def b(x):
            return amp * x * (chord - x)

        slopes = [(b(xs[i + 1]) - b(xs[i])) / (xs[i + 1] - xs[i]) for i in range(n)]
        slopes.append(0.0)
        up = WallSpec("piecewise_linear", tuple(xs[1:]), tuple(slopes))
        return cls(chord, up, up.negated())


@dataclass(frozen=True)
class HalfProblems:
    """The two wedge-type problems a wing is split into.

    ``upper`` is already mirrored so the flow lies below it.
    """

    upper: BoundaryPolyline
    lower: BoundaryPolyline
    chord: float


def wing_to_half_problems(wing: WingGeometry, h: float) -> HalfProblems:
    """Split a wing into a mirrored upper and a direct lower half problem."""
    return HalfProblems(build_polyline(wing.upper.negated(), h, wing.chord),
                        build_polyline(wing.lower, h, wing.chord),
                        wing.chord)

