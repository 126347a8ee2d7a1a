"""Piecewise-constant profiles, exact L1 distances and rate fits.

Also provides the one-step local error used to check that a scaled-system
trajectory is an approximate solution of the small-disturbance system.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import DegenerateInputError, EventWindowError, ProfileMismatchError
from .gas_core import SimilarityParams, State
from .riemann import NONPHYSICAL, ars_fronts, solve_boundary, solve_interior


@dataclass(frozen=True)
class Profile:
    """Piecewise-constant function of ``y`` at fixed ``x``.

    ``values[i]`` holds on ``(breakpoints[i-1], breakpoints[i])`` with the
    conventions ``breakpoints[-1] = -inf`` and ``breakpoints[n] = upper``.
    ``values`` has shape ``(n + 1, d)``; ``d = 2`` for states ``(rho, v)``.
    Below ``support_floor`` the profile equals its background ``values[0]``.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    upper: float = math.inf
    support_floor: float = -math.inf

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float).reshape(-1)
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim == 1:
            vals = vals.reshape(-1, 1)
        if vals.shape[0] != bp.size + 1:
            raise ValueError("need exactly one more value row than breakpoints")
        if bp.size and np.any(np.diff(bp) < 0.0):
            raise ValueError("breakpoints must be non-decreasing")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        if self.support_floor == -math.inf and bp.size:
            object.__setattr__(self, "support_floor", float(bp[0]))

    @classmethod
    def constant(cls, value, upper: float = math.inf) -> "Profile":
        return cls(np.empty(0), np.asarray([value], dtype=float), upper)

    @property
    def background(self) -> tuple:
        return tuple(self.values[0])

    @property
    def states(self) -> list:
        return [State(float(r), float(v)) for r, v in self.values]

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def __call__(self, y: float) -> np.ndarray:
        """Value at ``y`` (right-continuous at breakpoints)."""
        return self.values[np.searchsorted(self.breakpoints, y, side="right")]

    def tv(self, upper: float | None = None) -> float:
        """Total variation (sum over components) below ``upper``."""
        top = self.upper if upper is None else upper
        keep = self.breakpoints < top
        jumps = np.abs(np.diff(self.values, axis=0))[keep]
        return float(jumps.sum())

    def mirrored(self) -> "Profile":
        """Image under ``(y, v) -> (-y, -v)`` for state profiles."""
        if self.dim != 2:
            raise ValueError("mirroring needs a (rho, v) profile")
        vals = self.values[::-1].copy()
        vals[:, 1] *= -1.0
        lo = -self.upper
        return Profile(-self.breakpoints[::-1], vals, math.inf,
                       lo if np.isfinite(lo) else -math.inf)

    def with_wall(self, wall: float, fill=None) -> "Profile":
        """Cut at ``wall`` and continue above it with ``fill`` (default background)."""
        fill = self.values[0] if fill is None else np.asarray(fill, dtype=float)
        keep = self.breakpoints < wall
        bp = np.append(self.breakpoints[keep], wall)
        vals = np.vstack([self.values[: keep.sum() + 1], fill])
        return Profile(bp, vals, math.inf, self.support_floor)

    def simplified(self, tol: float = 0.0) -> "Profile":
        """Drop breakpoints across which the value does not change."""
        if not self.breakpoints.size:
            return self
        jump = np.abs(np.diff(self.values, axis=0)).max(axis=1) > tol
        bp = self.breakpoints[jump]
        vals = np.vstack([self.values[:1], self.values[1:][jump]])
        return Profile(bp, vals, self.upper, self.support_floor)


def l1_components(P: Profile, Q: Profile, upper: float | None = None) -> np.ndarray:
    """Exact componentwise ``L1`` distance on ``(-inf, upper)``.

    Raises
    ------
    ProfileMismatchError
        If the backgrounds differ or, for an unbounded range, the top
        states differ.
    """
    if P.dim != Q.dim:
        raise ProfileMismatchError("profiles have different dimensions")
    if np.max(np.abs(P.values[0] - Q.values[0])) > 1e-12:
        raise ProfileMismatchError("profiles have different backgrounds")
    top = min(P.upper, Q.upper) if upper is None else float(upper)
    pts = np.union1d(P.breakpoints[P.breakpoints < top],
                     Q.breakpoints[Q.breakpoints < top])
    if not pts.size:
        # both constant below top and equal to the common background
        return np.zeros(P.dim)
    if not np.isfinite(top):
        ip = np.searchsorted(P.breakpoints, pts[-1], side="right")
        iq = np.searchsorted(Q.breakpoints, pts[-1], side="right")
        if np.max(np.abs(P.values[ip] - Q.values[iq])) > 1e-12:
            raise ProfileMismatchError("profiles differ at +infinity")
        edges = pts
    else:
        edges = np.append(pts, top)
    lengths = np.diff(edges)
    ip = np.searchsorted(P.breakpoints, edges[:-1], side="right")
    iq = np.searchsorted(Q.breakpoints, edges[:-1], side="right")
    diff = np.abs(P.values[ip] - Q.values[iq])
    return (diff * lengths[:, None]).sum(axis=0)


def l1_distance(P: Profile, Q: Profile, upper: float | None = None) -> float:
    """Exact ``L1`` distance (sum over components) on ``(-inf, upper)``."""
    return float(l1_components(P, Q, upper).sum())


def reconstruct_u(P: Profile, params: SimilarityParams) -> Profile:
    """Scalar profile of the axial perturbation ``u``."""
    vals = np.array([[kernels.axial_velocity(r, v, *params.args)]
                     for r, v in P.values])
    return Profile(P.breakpoints, vals, P.upper, P.support_floor)


class ProfileError(NamedTuple):
    """``L1`` errors split by component group."""

    rho_v: float
    u: float

    @property
    def total(self) -> float:
        return self.rho_v + self.u


def profile_error(P: Profile, params_p: SimilarityParams, Q: Profile,
                  params_q: SimilarityParams,
                  upper: float | None = None) -> ProfileError:
    """Distance between ``(rho, u, v)`` reconstructions of two profiles.

    Each profile is cut at its own upper boundary and continued with its
    background above it, so walls of different heights are handled by a
    strip term bounded by the sup norm times the wall offset.
    """
    if upper is None:
        upper = max(P.upper, Q.upper)
    if np.isfinite(P.upper):
        P = P.with_wall(P.upper)
    if np.isfinite(Q.upper):
        Q = Q.with_wall(Q.upper)
    rv = l1_distance(P, Q, upper)
    uu = l1_distance(reconstruct_u(P, params_p), reconstruct_u(Q, params_q), upper)
    return ProfileError(rv, uu)


@dataclass(frozen=True)
class RateFit:
    """Least-squares fit ``log E = slope * log tau + intercept``."""

    slope: float
    intercept: float
    residual: float

    @property
    def constant(self) -> float:
        return math.exp(self.intercept)


def fit_rate(taus: Sequence[float], errors: Sequence[float]) -> RateFit:
    """Fit a power law to ``(tau, E)`` pairs.

    ``residual`` is the root-mean-square deviation in log space.

    Raises
    ------
    DegenerateInputError
        With fewer than three pairs, non-positive entries or repeated taus.
    """
    t = np.asarray(taus, dtype=float)
    e = np.asarray(errors, dtype=float)
    if t.shape != e.shape or t.size < 3:
        raise DegenerateInputError("need at least three (tau, E) pairs")
    if np.any(t <= 0.0) or np.any(e <= 0.0) or not np.all(np.isfinite(e)):
        raise DegenerateInputError("taus and errors must be positive")
    if np.unique(t).size != t.size:
        raise DegenerateInputError("taus must be distinct")
    lt, le = np.log(t), np.log(e)
    slope, intercept = np.polyfit(lt, le, 1)
    res = le - (slope * lt + intercept)
    return RateFit(float(slope), float(intercept), float(np.sqrt(np.mean(res ** 2))))


def _fan_pieces(w, params: SimilarityParams, y0: float, s: float, jit: float,
                resolution: int | None, nu: int):
    # positioned (y, right_state) pieces of one wave after a step s
    if w.strength > 0.0 and resolution:
        out = []
        m = max(1, resolution)
        part = w.strength / m
        U = w.left
        for i in range(m):
            if i == m - 1:
                right = w.right
            else:
                right = State(*kernels.rarefaction(w.family, part, U.rho, U.v,
                                                   *params.args))
            # fan sample: average characteristic speed of the piece
            lam_l = kernels.eigenvalues(U.rho, U.v, *params.args)[w.family - 1]
            lam_r = kernels.eigenvalues(right.rho, right.v, *params.args)[w.family - 1]
            out.append((y0 + s * (0.5 * (lam_l + lam_r) + jit), right))
            U = right
        return out
    return [(y0 + s * (w.speed + jit), w.right)]


def reference_step(jumps, bottom: State, params0: SimilarityParams, s: float,
                   nu: int, wall=None, theta: float | None = None,
                   fan_resolution: int | None = None) -> Profile:
    """Evolve a piecewise-constant configuration by ``s`` under ``params0``.

    ``jumps`` holds ``(y, U_left, U_right, offset)`` bottom to top.  Every
    jump is re-solved with the accurate solver; outgoing fronts inherit the
    speed ``offset`` (jitter) of the front they replace, so a configuration
    produced by the same solver is reproduced exactly.  ``wall`` is
    ``(y_now, y_after)`` when the boundary problem must be solved too.
    """
    pieces = []
    for y0, left, right, jit in jumps:
        fan = solve_interior(left, right, params0)
        waves = list(fan.waves) if fan_resolution else ars_fronts(fan, nu, params0)
        for w in waves:
            pieces.extend(_fan_pieces(w, params0, y0, s, jit, fan_resolution, nu))
    upper = math.inf
    if wall is not None:
        y_wall, upper = wall
        top = jumps[-1][2] if jumps else bottom
        bf = solve_boundary(top, theta, params0)
        waves = list(bf.waves) if fan_resolution else ars_fronts(bf, nu, params0)
        for w in waves:
            pieces.extend(_fan_pieces(w, params0, y_wall, s, 0.0,
                                      fan_resolution, nu))
    pieces.sort(key=lambda p: p[0])
    bp = np.array([p[0] for p in pieces])
    vals = np.array([bottom] + [p[1] for p in pieces], dtype=float)
    return Profile(bp, vals, upper)


def local_step_error(traj, x: float, s: float, params0: SimilarityParams | None = None,
                     fan_resolution: int | None = None) -> float:
    """One-step defect ``||U_tau(x+s) - P0(s) U_tau(x)||_L1 / s``.

    ``P0`` re-solves every jump of the profile at ``x`` (and the wall
    problem, if any) with the small-disturbance system.  Only ``(rho, v)``
    enters the norm.

    Raises
    ------
    EventWindowError
        If an event of the trajectory falls in ``(x, x + s]``.
    """
    if not s > 0.0:
        raise ValueError("step must be positive")
    if traj.has_event_in(x, x + s):
        raise EventWindowError("an event lies inside (x, x + s]")
    params0 = traj.params.with_tau(0.0) if params0 is None else params0
    jumps = [(f.y(x), f.left, f.right,
              0.0 if f.family == NONPHYSICAL else f.speed - f.nominal_speed)
             for f in traj.alive_at(x)]
    wall = None
    theta = None
    if traj.polyline is not None:
        wall = (traj.polyline(x), traj.polyline(x + s))
        theta = traj.polyline.theta_at(x)
    ref = reference_step(jumps, traj.bottom_state, params0, s, traj.nu, wall,
                         theta, fan_resolution)
    cur = traj.profile(x + s)
    if wall is not None:
        return l1_distance(cur.with_wall(cur.upper), ref.with_wall(ref.upper),
                           max(cur.upper, ref.upper)) / s
    return l1_distance(cur, ref) / s
