"""Front-tracking evolution in the marching variable ``x``.

Fronts are straight segments ``y = y0 + speed (x - x0)`` kept in a doubly
linked list ordered bottom to top.  Events (front interactions, fronts
reaching the wall, wall corners) are processed from a priority queue in
increasing ``x``; stale queue entries are discarded lazily.

Speeds of physical fronts carry a deterministic offset in
``(0, 2**-(nu+1))`` keyed by the front's lineage, which keeps events
generic and lets paired runs (same data, different ``tau``) share offsets.
"""
from __future__ import annotations

import hashlib
import heapq
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .compare import Profile
from .errors import (BudgetExceededError, GenericityError, InvalidDataError)
from .gas_core import (BACKGROUND, SimilarityParams, State, check_admissible,
                       lambda_hat)
from .geometry import BoundaryPolyline, WallSpec, build_polyline, corner_schedule
from .riemann import (NONPHYSICAL, STRENGTH_FLOOR, Wave, ars_fronts,
                      interaction_threshold, solve_boundary, solve_interior,
                      srs_fronts)

#: weight of the interaction potential in the Glimm functional
GLIMM_K = 4.0
#: margin added to the calibrated reflection and corner weights
GLIMM_MARGIN = 0.25


# ---------------------------------------------------------------- initial data

@dataclass(frozen=True)
class InitialData:
    """Initial profile on the line ``x = x_start``.

    Parameters
    ----------
    kind : {"constant", "jumps", "bump"}
        ``constant`` uses ``state``; ``jumps`` takes ``breakpoints`` and one
        more entry in ``states``; ``bump`` adds
        ``amplitude * cos(pi (y - center) / (2 half_width))**2`` to the
        background on ``|y - center| < half_width``.
    """

    kind: str = "constant"
    state: tuple = tuple(BACKGROUND)
    breakpoints: tuple = ()
    states: tuple = ()
    center: float = 0.0
    half_width: float = 0.0
    amplitude: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.kind == "jumps":
            if len(self.states) != len(self.breakpoints) + 1:
                raise InvalidDataError("jumps need len(states) == len(breakpoints) + 1")
            if list(self.breakpoints) != sorted(self.breakpoints):
                raise InvalidDataError("breakpoints must increase")
        elif self.kind == "bump":
            if not self.half_width > 0.0:
                raise InvalidDataError("bump half_width must be positive")
        elif self.kind != "constant":
            raise InvalidDataError("unknown initial data kind %r" % (self.kind,))

    @classmethod
    def from_dict(cls, d: dict) -> "InitialData":
        kind = d.get("kind", "constant")
        allowed = {"constant": {"kind", "state"},
                   "jumps": {"kind", "breakpoints", "states"},
                   "bump": {"kind", "center", "half_width", "amplitude"}}
        if kind not in allowed:
            raise InvalidDataError("unknown initial data kind %r" % (kind,))
        extra = set(d) - allowed[kind]
        if extra:
            raise InvalidDataError("unknown initial data keys: %s" % sorted(extra))
        return cls(kind=kind,
                   state=tuple(float(t) for t in d.get("state", BACKGROUND)),
                   breakpoints=tuple(float(t) for t in d.get("breakpoints", ())),
                   states=tuple(tuple(float(t) for t in s) for s in d.get("states", ())),
                   center=float(d.get("center", 0.0)),
                   half_width=float(d.get("half_width", 0.0)),
                   amplitude=tuple(float(t) for t in d.get("amplitude", (0.0, 0.0))))

    def to_dict(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "state": list(self.state)}
        if self.kind == "jumps":
            return {"kind": "jumps", "breakpoints": list(self.breakpoints),
                    "states": [list(s) for s in self.states]}
        return {"kind": "bump", "center": self.center,
                "half_width": self.half_width, "amplitude": list(self.amplitude)}

    @property
    def top(self) -> float:
        """Upper end of the support of ``U0 - background``."""
        if self.kind == "jumps":
            return max(self.breakpoints, default=-math.inf)
        if self.kind == "bump":
            return self.center + self.half_width
        return -math.inf

    def bump_shape(self, y):
        z = np.clip((np.asarray(y, dtype=float) - self.center) / self.half_width, -1, 1)
        return np.cos(0.5 * np.pi * z) ** 2

    def bump_integral(self, y0, y1):
        """Exact integral of the bump shape over ``[y0, y1]``."""
        c, w = self.center, self.half_width

        def prim(y):
            z = np.clip(y, c - w, c + w)
            return 0.5 * (z - c) + (w / (2 * np.pi)) * np.sin(np.pi * (z - c) / w)
        return prim(np.asarray(y1, dtype=float)) - prim(np.asarray(y0, dtype=float))

    @property
    def total_variation(self) -> float:
        if self.kind == "constant":
            return 0.0
        if self.kind == "jumps":
            s = np.asarray(self.states, dtype=float)
            return float(np.abs(np.diff(s, axis=0)).sum())
        return 2.0 * float(np.abs(self.amplitude).sum())


def sample_initial_data(data: InitialData, nu: int,
                        background: State = BACKGROUND) -> Profile:
    """Piecewise-constant approximation with ``L1`` error below ``2**-nu``.

    Cell averages are used on uniform cells, refined by halving until the
    error (measured by Gauss-Legendre quadrature) meets the bound, so the
    total variation never exceeds that of ``data``.
    """
    if data.kind == "constant":
        return Profile.constant(data.state)
    if data.kind == "jumps":
        return Profile(np.asarray(data.breakpoints), np.asarray(data.states)).simplified()
    target = 2.0 ** (-nu)
    amp = np.asarray(data.amplitude, dtype=float)
    bg = np.asarray(background, dtype=float)
    lo, hi = data.center - data.half_width, data.center + data.half_width
    gx, gw = np.polynomial.legendre.leggauss(16)
    n = 4
    while True:
        edges = np.linspace(lo, hi, n + 1)
        widths = np.diff(edges)
        means = data.bump_integral(edges[:-1], edges[1:]) / widths
        # quadrature of |shape - mean| on each cell
        mid = 0.5 * (edges[:-1] + edges[1:])
        pts = mid[:, None] + 0.5 * widths[:, None] * gx[None, :]
        dev = np.abs(data.bump_shape(pts) - means[:, None])
        err = float((dev * gw[None, :]).sum(axis=1).dot(0.5 * widths)) * float(np.abs(amp).sum())
        if err < target:
            break
        n *= 2
    vals = np.vstack([bg, bg[None, :] + means[:, None] * amp[None, :], bg])
    return Profile(edges, vals).simplified()


# ---------------------------------------------------------------- configuration

@dataclass(frozen=True)
class RunConfig:
    """Everything needed for one front-tracking run.

    ``wall = None`` selects the Cauchy problem on the whole line.
    ``initial_profile`` overrides ``initial_data`` (used to continue a run).
    ``lambda_hat`` fixes the non-physical speed, which paired runs share.
    """

    params: SimilarityParams
    h: float = 0.05
    nu: int = 12
    x_end: float = 1.0
    wall: WallSpec | None = None
    initial_data: InitialData = field(default_factory=InitialData)
    seed: int = 0
    x_start: float = 0.0
    lambda_hat: float | None = None
    budget: float = 0.5
    max_fronts: int = 20000
    initial_profile: Profile | None = None
    polyline: BoundaryPolyline | None = None

    def __post_init__(self):
        if not self.h > 0.0:
            raise InvalidDataError("h must be positive")
        if int(self.nu) != self.nu or self.nu < 1:
            raise InvalidDataError("nu must be a positive integer")
        if not self.x_end >= self.x_start:
            raise InvalidDataError("x_end must not precede x_start")

    def with_tau(self, tau: float) -> "RunConfig":
        from dataclasses import replace
        return replace(self, params=self.params.with_tau(tau))

    def replace(self, **kw) -> "RunConfig":
        from dataclasses import replace
        return replace(self, **kw)


# ---------------------------------------------------------------- fronts

class Front:
    """A straight front; immutable once created apart from its death ``x1``."""

    __slots__ = ("id", "key", "family", "strength", "left", "right", "speed",
                 "nominal_speed", "order", "x0", "y0", "x1", "below", "above")

    def __init__(self, id, key, family, strength, left, right, speed,
                 nominal_speed, order, x0, y0):
        self.id = id
        self.key = key
        self.family = family
        self.strength = strength
        self.left = left
        self.right = right
        self.speed = speed
        self.nominal_speed = nominal_speed
        self.order = order
        self.x0 = x0
        self.y0 = y0
        self.x1 = math.inf
        self.below = None
        self.above = None

    def y(self, x: float) -> float:
        return self.y0 + self.speed * (x - self.x0)

    @property
    def alive(self) -> bool:
        return self.x1 == math.inf

    @property
    def is_shock(self) -> bool:
        return self.family != NONPHYSICAL and self.strength < 0.0

    @property
    def is_physical(self) -> bool:
        return self.family != NONPHYSICAL

    def __repr__(self):
        return ("Front(id=%d, family=%d, strength=%.3g, order=%d, x0=%.6g, y0=%.6g)"
                % (self.id, self.family, self.strength, self.order, self.x0, self.y0))


def lineage_key(*parts) -> int:
    """Stable 64-bit key derived from a front's ancestry."""
    d = hashlib.blake2b(repr(parts).encode(), digest_size=8).digest()
    return int.from_bytes(d, "little")


def speed_jitter(seed: int, key: int, nu: int) -> float:
    """Deterministic offset in ``(0, 2**-(nu+1))``."""
    d = hashlib.blake2b(b"%d:%d" % (seed, key), digest_size=8).digest()
    u = (int.from_bytes(d, "little") + 0.5) / 2.0 ** 64
    return u * 2.0 ** (-nu - 1)


# ---------------------------------------------------------------- Glimm functional

class GlimmSnapshot(NamedTuple):
    """Components of ``V + K Q``."""

    v1: float
    v2: float
    vc: float
    q: float
    total: float


@dataclass(frozen=True)
class GlimmWeights:
    k_b: float
    k_c: float
    k: float = GLIMM_K


def calibrate_weights(params: SimilarityParams, eps: float = 1e-6) -> GlimmWeights:
    """Reflection and corner weights measured at the background plus a margin."""
    args = params.args
    # state below an incoming 2-wave of strength eps that ends at the background
    rl, vl = kernels.rarefaction(2, -eps, 1.0, 0.0, *args)
    beta, _ = kernels.boundary(rl, vl, 0.0, *args)
    alpha, _ = kernels.boundary(1.0, 0.0, -eps, *args)
    return GlimmWeights(max(1.0, abs(beta / eps)) + GLIMM_MARGIN,
                        abs(alpha / eps) + GLIMM_MARGIN)


def glimm_of(fronts, vc: float, w: GlimmWeights) -> GlimmSnapshot:
    """Glimm functional of physical fronts listed bottom to top.

    Two fronts approach when a 2-front lies below a 1-front, or when they
    share a family and at least one is a shock.
    """
    v1 = v2 = q = 0.0
    s1 = s1_shock = s2 = s2_shock = 0.0
    for f in fronts:
        if f.family == NONPHYSICAL:
            continue
        a = abs(f.strength)
        shock = f.strength < 0.0
        if f.family == 1:
            q += a * s2 + a * (s1 if shock else s1_shock)
            v1 += a
            s1 += a
            if shock:
                s1_shock += a
        else:
            q += a * (s2 if shock else s2_shock)
            v2 += a
            s2 += a
            if shock:
                s2_shock += a
    total = v1 + w.k_b * v2 + w.k_c * vc + w.k * q
    return GlimmSnapshot(v1, v2, vc, q, total)


# ---------------------------------------------------------------- trajectory

@dataclass
class EventRecord:
    """One processed event."""

    x: float
    kind: str
    solver: str
    incoming: tuple
    incoming_strengths: tuple
    outgoing: tuple
    outgoing_strengths: tuple
    glimm_before: float
    glimm_after: float


@dataclass
class Trajectory:
    """Result of a run: every front ever created and the event log."""

    config: RunConfig
    params: SimilarityParams
    polyline: BoundaryPolyline | None
    fronts: list
    events: list
    bottom_state: State
    lam_hat: float
    weights: GlimmWeights
    glimm_initial: float
    corners: list
    x_start: float
    x_end: float
    _arrays: tuple | None = None

    @property
    def nu(self) -> int:
        return self.config.nu

    def _arr(self):
        if self._arrays is None:
            fs = self.fronts
            self._arrays = (np.array([f.x0 for f in fs]), np.array([f.x1 for f in fs]),
                            np.array([f.y0 for f in fs]), np.array([f.speed for f in fs]))
        return self._arrays

    def alive_at(self, x: float) -> list:
        """Fronts present at ``x`` (born at or before, dying after), bottom to top."""
        if not self.fronts:
            return []
        x0, x1, y0, sp = self._arr()
        idx = np.nonzero((x0 <= x) & (x < x1))[0]
        y = y0[idx] + sp[idx] * (x - x0[idx])
        order = np.lexsort((sp[idx], y))
        return [self.fronts[i] for i in idx[order]]

    def wall(self, x: float) -> float:
        return math.inf if self.polyline is None else self.polyline(x)

    def profile(self, x: float) -> Profile:
        """State profile ``(rho, v)`` at ``x``."""
        fs = self.alive_at(x)
        bp = np.array([f.y(x) for f in fs])
        vals = np.array([self.bottom_state] + [f.right for f in fs], dtype=float)
        return Profile(bp, vals, self.wall(x))

    def glimm(self, x: float) -> GlimmSnapshot:
        vc = sum(abs(w) for xc, w in self.corners if xc > x)
        return glimm_of(self.alive_at(x), vc, self.weights)

    def nonphysical_total(self, x: float) -> float:
        return sum(f.strength for f in self.alive_at(x) if f.family == NONPHYSICAL)

    def max_nonphysical_total(self) -> float:
        """Largest total non-physical strength present at any ``x``."""
        changes = {}
        for f in self.fronts:
            if f.family == NONPHYSICAL:
                changes[f.x0] = changes.get(f.x0, 0.0) + f.strength
                if math.isfinite(f.x1):
                    changes[f.x1] = changes.get(f.x1, 0.0) - f.strength
        best = cur = 0.0
        for x in sorted(changes):
            cur += changes[x]
            best = max(best, cur)
        return best

    def max_rarefaction(self) -> float:
        """Largest rarefaction front ever created."""
        return max((f.strength for f in self.fronts if f.is_physical), default=0.0)

    def glimm_range(self) -> tuple:
        vals = [self.glimm_initial] + [e.glimm_after for e in self.events]
        return min(vals), max(vals)

    def has_event_in(self, xa: float, xb: float) -> bool:
        return any(xa < e.x <= xb for e in self.events)

    def event_xs(self) -> np.ndarray:
        return np.array([e.x for e in self.events])


# ---------------------------------------------------------------- the engine

_INTERACTION, _WALL, _CORNER = 0, 1, 2


class _Engine:
    def __init__(self, config: RunConfig):
        self.cfg = config
        self.p = config.params
        self.nu = int(config.nu)
        self.rho_thr = interaction_threshold(self.nu)
        self.lam_hat = config.lambda_hat if config.lambda_hat else lambda_hat(self.p)
        self.weights = calibrate_weights(self.p)
        self.fronts = []
        self.events = []
        self.queue = []
        self.seq = 0
        self.bottom = None
        self.top = None
        self.n_alive = 0
        self.x_now = config.x_start
        self.last_event_x = -math.inf
        self.poly = None
        self.corners = []
        if config.polyline is not None:
            self.poly = config.polyline
        elif config.wall is not None:
            self.poly = build_polyline(config.wall, config.h, config.x_end)
        if self.poly is not None:
            self.corners = corner_schedule(self.poly)
        self.corner_epoch = 0

    # -- helpers
    def _vc(self, x, inclusive=False):
        if inclusive:
            return sum(abs(w) for xc, w in self.corners if xc >= x)
        return sum(abs(w) for xc, w in self.corners if xc > x)

    def _alive_list(self):
        out = []
        f = self.bottom
        while f is not None:
            out.append(f)
            f = f.above
        return out

    def _glimm(self, x, inclusive=False):
        return glimm_of(self._alive_list(), self._vc(x, inclusive), self.weights)

    def _new_front(self, wave: Wave, order: int, key: int, x: float, y: float) -> Front:
        if wave.family == NONPHYSICAL:
            speed = nominal = self.lam_hat
            order = self.nu + 1
        else:
            nominal = wave.speed
            speed = nominal + speed_jitter(self.cfg.seed, key, self.nu)
        f = Front(len(self.fronts), key, wave.family, wave.strength, wave.left,
                  wave.right, speed, nominal, order, x, y)
        self.fronts.append(f)
        return f

    def _splice(self, below, above, new):
        # link below -> new... -> above
        prev = below
        for f in new:
            f.below = prev
            if prev is None:
                self.bottom = f
            else:
                prev.above = f
            prev = f
        if prev is None:
            self.bottom = above
        else:
            prev.above = above
        if above is None:
            self.top = prev
        else:
            above.below = prev
        self.n_alive += len(new)
        if self.n_alive > self.cfg.max_fronts:
            raise BudgetExceededError("front count exceeded %d" % self.cfg.max_fronts)
        for a, b in zip(new, new[1:]):
            if a.y0 == b.y0 and not a.speed < b.speed:
                raise GenericityError("outgoing fronts are not ordered by speed")

    def _kill(self, f: Front, x: float):
        f.x1 = x
        self.n_alive -= 1

    def _push(self, x, kind, a, b=None, tag=0):
        self.seq += 1
        heapq.heappush(self.queue, (x, self.seq, kind, a, b, tag))

    def _schedule_pair(self, a, b):
        if a is None or b is None or not a.speed > b.speed:
            return
        xr = max(a.x0, b.x0, self.x_now)
        gap = b.y(xr) - a.y(xr)
        xi = xr + max(gap, 0.0) / (a.speed - b.speed)
        self._push(xi, _INTERACTION, a, b)

    def _next_corner_x(self):
        if self.corner_epoch < len(self.corners):
            return self.corners[self.corner_epoch][0]
        return math.inf

    def _schedule_wall(self, f):
        if self.poly is None or f is None or f is not self.top:
            return
        slope = math.tan(self.poly.theta_at(self.x_now))
        rel = f.speed - slope
        if not rel > 0.0:
            return
        xr = max(f.x0, self.x_now)
        gap = self.poly(xr) - f.y(xr)
        xi = xr + max(gap, 0.0) / rel
        if xi < self._next_corner_x():
            self._push(xi, _WALL, f, None, self.corner_epoch)

    def _top_state(self):
        return self.top.right if self.top is not None else self.bottom_state

    def _orders_ars(self, a, b, fam):
        if fam == a.family == b.family:
            return min(a.order, b.order)
        if fam == a.family:
            return a.order
        if fam == b.family:
            return b.order
        return max(a.order, b.order) + 1

    # -- setup
    def setup(self):
        cfg = self.cfg
        prof = cfg.initial_profile
        if prof is None:
            prof = sample_initial_data(cfg.initial_data, self.nu)
        self.initial_profile = prof
        states = [check_admissible(s, self.p) for s in prof.states]
        self.bottom_state = states[0]
        if self.poly is not None:
            if prof.breakpoints.size and prof.breakpoints[-1] >= self.poly(cfg.x_start):
                raise InvalidDataError("initial data must vary only below the wall")
            tv_wall = self.poly.total_turning
        else:
            tv_wall = 0.0
        if prof.tv() + tv_wall > cfg.budget:
            raise BudgetExceededError(
                "data and wall variation %.3g exceed the smallness budget %.3g"
                % (prof.tv() + tv_wall, cfg.budget))
        x = cfg.x_start
        created = []
        for i, y in enumerate(prof.breakpoints):
            fan = solve_interior(states[i], states[i + 1], self.p)
            for j, w in enumerate(ars_fronts(fan, self.nu, self.p)):
                created.append(self._new_front(w, 1, lineage_key("init", i, j), x, float(y)))
        self._splice(None, None, created)
        # skip corners already behind the start line
        while (self.corner_epoch < len(self.corners)
               and self.corners[self.corner_epoch][0] < x):
            self.corner_epoch += 1
        self.glimm_initial = self._glimm(x, inclusive=True).total
        self.g_cur = self.glimm_initial
        for a in created:
            self._schedule_pair(a, a.above)
        if self.poly is not None:
            k0 = self.poly.segment(x)
            has_corner = (self.corner_epoch < len(self.corners)
                          and self.corners[self.corner_epoch][0] == x)
            U = self._top_state()
            if has_corner or abs(kernels.slip(U.rho, U.v, self.poly.theta_at(x),
                                              *self.p.args)) > 1e-14:
                self._corner(x, k0, has_corner)
            else:
                self._schedule_wall(self.top)
        for xc, _ in self.corners[self.corner_epoch:]:
            self._push(xc, _CORNER, None, None, self.poly.segment(xc))

    # -- event handlers
    def _record(self, x, kind, solver, inc, out, unchanged=False):
        # the functional only changes at events; Vc only at corners
        g_before = self.g_cur
        g_after = g_before if unchanged else self._glimm(x).total
        self.g_cur = g_after
        self.events.append(EventRecord(
            x, kind, solver, tuple(f.id for f in inc),
            tuple(f.strength for f in inc), tuple(f.id for f in out),
            tuple(f.strength for f in out), g_before, g_after))
        if self.glimm_initial > 0.0 and g_after > 2.0 * self.glimm_initial:
            raise BudgetExceededError(
                "Glimm functional %.4g doubled its initial value %.4g at x = %.6g"
                % (g_after, self.glimm_initial, x))
        return g_after

    def _interaction(self, x, a, b):
        y = 0.5 * (a.y(x) + b.y(x))
        accurate = (a.is_physical and b.is_physical
                    and max(a.order, b.order) < self.nu
                    and abs(a.strength * b.strength) > self.rho_thr)
        if accurate:
            fan = solve_interior(a.left, b.right, self.p)
            waves = ars_fronts(fan, self.nu, self.p)
            orders = [self._orders_ars(a, b, w.family) for w in waves]
        else:
            wa = Wave(a.family, a.strength, a.left, a.right, a.nominal_speed)
            wb = Wave(b.family, b.strength, b.left, b.right, b.nominal_speed)
            waves = srs_fronts(wa, wb, self.p, self.lam_hat)
            orders = []
            for w in waves:
                if w.family == NONPHYSICAL:
                    orders.append(self.nu + 1)
                elif w.family == a.family == b.family:
                    orders.append(min(a.order, b.order))
                elif w.family == b.family:
                    orders.append(b.order)
                else:
                    orders.append(a.order)
        new = [self._new_front(w, o, lineage_key(a.key, b.key, j), x, y)
               for j, (w, o) in enumerate(zip(waves, orders))]
        below, above = a.below, b.above
        self._kill(a, x)
        self._kill(b, x)
        self._splice(below, above, new)
        if new:
            self._schedule_pair(below, new[0])
            self._schedule_pair(new[-1], above)
        else:
            self._schedule_pair(below, above)
        self._schedule_wall(self.top)
        # a non-physical front crossing a physical one changes neither
        # strengths nor the set of approaching physical pairs
        self._record(x, "interaction", "ARS" if accurate else "SRS", (a, b), new,
                     unchanged=not (a.is_physical and b.is_physical))

    def _wall_hit(self, x, f):
        if f.family == 1:
            raise GenericityError("a 1-front reached the wall")
        if f.family == NONPHYSICAL:
            # absorbed: the slip defect it leaves is at most its strength and
            # is removed by the next physical reflection
            below = f.below
            self._kill(f, x)
            self._splice(below, None, [])
            self._schedule_wall(self.top)
            self._record(x, "boundary_hit", "SRS", (f,), [], unchanged=True)
            return
        y = self.poly(x)
        fan = solve_boundary(f.left, self.poly.theta_at(x), self.p)
        order = f.order
        waves = ars_fronts(fan, self.nu, self.p)
        new = [self._new_front(w, order, lineage_key("wall", f.key, j), x, y)
               for j, w in enumerate(waves)]
        below = f.below
        self._kill(f, x)
        self._splice(below, None, new)
        if new:
            self._schedule_pair(below, new[0])
        self._schedule_wall(self.top)
        self._record(x, "boundary_hit", "ARS", (f,), new)

    def _corner(self, x, k, counted=True):
        y = self.poly(x)
        theta = float(self.poly.thetas[k])
        fan = solve_boundary(self._top_state(), theta, self.p)
        waves = ars_fronts(fan, self.nu, self.p)
        new = [self._new_front(w, 1, lineage_key("corner", k, j), x, y)
               for j, w in enumerate(waves)]
        old_top = self.top
        if counted:
            self.corner_epoch += 1
        self._splice(old_top, None, new)
        if new:
            self._schedule_pair(old_top, new[0])
        self._schedule_wall(self.top)
        self._record(x, "corner", "ARS", (), new)

    def run(self) -> Trajectory:
        self.setup()
        x_end = self.cfg.x_end
        while self.queue:
            x, _, kind, a, b, tag = self.queue[0]
            if x > x_end:
                break
            heapq.heappop(self.queue)
            if kind == _INTERACTION:
                if not (a.alive and b.alive and a.above is b):
                    continue
            elif kind == _WALL:
                if not (a.alive and a is self.top and tag == self.corner_epoch):
                    continue
            if not x > self.last_event_x:
                raise GenericityError("two events share x = %.17g" % x)
            self.x_now = x
            self.last_event_x = x
            if kind == _INTERACTION:
                self._interaction(x, a, b)
            elif kind == _WALL:
                self._wall_hit(x, a)
            else:
                self._corner(x, tag)
        return Trajectory(self.cfg, self.p, self.poly, self.fronts, self.events,
                          self.bottom_state, self.lam_hat, self.weights,
                          self.glimm_initial, self.corners, self.cfg.x_start,
                          x_end)


def run(config: RunConfig) -> Trajectory:
    """Evolve ``config`` from ``x_start`` to ``x_end``.

    Raises
    ------
    BudgetExceededError
        If the smallness budget, the front count or the Glimm guard is
        exceeded.
    GenericityError
        If two events coincide, which the speed offsets rule out.
    """
    return _Engine(config).run()


def glimm_functional(traj: Trajectory, x: float) -> GlimmSnapshot:
    """``V + K Q`` of a trajectory at ``x``."""
    return traj.glimm(x)


def max_rarefaction(traj: Trajectory, x: float) -> float:
    return max((f.strength for f in traj.alive_at(x) if f.is_physical), default=0.0)
