"""Wing problems: two half-plane runs glued at the trailing edge.

The upper half problem is solved in mirrored coordinates ``(y, v) -> (-y, -v)``
so that, like the lower one, its flow lies below the wall.  At the trailing
edge both traces are glued into one profile on the whole line, which is then
continued as a Cauchy problem.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .compare import Profile, fit_rate, profile_error
from .engine import RunConfig, Trajectory, run
from .errors import InvalidDataError
from .gas_core import SimilarityParams, lambda_hat
from .geometry import WingGeometry, wing_to_half_problems

#: tail horizon is ``TAIL_C / tau``
TAIL_C = 0.5


@dataclass(frozen=True)
class WingConfig:
    """Settings of a wing study.

    ``taus`` are the positive parameters compared against ``tau = 0``.
    """

    params: SimilarityParams
    wing: WingGeometry
    h: float = 0.05
    nu: int = 12
    seed: int = 0
    taus: tuple = (0.2, 0.1, 0.05)
    tail_c: float = TAIL_C
    samples: int = 24
    budget: float = 0.5
    max_fronts: int = 20000

    def __post_init__(self):
        if len(self.taus) < 1 or any(not t > 0.0 for t in self.taus):
            raise InvalidDataError("wing taus must be positive")
        if self.samples < 2:
            raise InvalidDataError("need at least two tail samples")

    def horizon(self, tau: float) -> float:
        return self.tail_c / tau

    def shared_lambda_hat(self) -> float:
        return lambda_hat(self.params.with_tau(max(self.taus)))


def glue(lower: Profile, upper_mirrored: Profile, y_join: float = 0.0) -> Profile:
    """Concatenate a trace below ``y_join`` with one above it.

    ``lower`` must be cut at its wall and ``upper_mirrored`` already mapped
    back to physical coordinates.
    """
    lo_bp = lower.breakpoints[lower.breakpoints < y_join]
    up_bp = upper_mirrored.breakpoints[upper_mirrored.breakpoints > y_join]
    if lo_bp.size != lower.breakpoints.size or up_bp.size != upper_mirrored.breakpoints.size:
        raise InvalidDataError("traces overlap the join line")
    bp = np.concatenate([lo_bp, [y_join], up_bp])
    vals = np.vstack([lower.values, upper_mirrored.values])
    return Profile(bp, vals).simplified()


@dataclass
class WingRun:
    """One regime of a wing study: both half runs and the tail run."""

    tau: float
    lower: Trajectory
    upper: Trajectory
    glued: Profile
    tail: Trajectory

    def profile(self, x: float) -> Profile:
        return self.tail.profile(x)


def _half_config(cfg: WingConfig, params, poly, lam_hat) -> RunConfig:
    # stop just short of the trailing edge: the corner there is not part of
    # the half problem, the wake takes over
    end = math.nextafter(cfg.wing.chord, 0.0)
    return RunConfig(params, h=cfg.h, nu=cfg.nu, x_end=end, seed=cfg.seed,
                     lambda_hat=lam_hat, budget=cfg.budget,
                     max_fronts=cfg.max_fronts, polyline=poly)


def run_wing(cfg: WingConfig, tau: float, x_end: float,
             lam_hat: float | None = None) -> WingRun:
    """Solve both halves up to the chord and continue past it."""
    params = cfg.params.with_tau(tau)
    lam_hat = cfg.shared_lambda_hat() if lam_hat is None else lam_hat
    halves = wing_to_half_problems(cfg.wing, cfg.h)
    chord = cfg.wing.chord
    lo = run(_half_config(cfg, params, halves.lower, lam_hat))
    up = run(_half_config(cfg, params, halves.upper, lam_hat))
    p_lo = lo.profile(chord)
    p_up = up.profile(chord)
    glued = glue(Profile(p_lo.breakpoints, p_lo.values), p_up.mirrored())
    tail_cfg = RunConfig(params, h=cfg.h, nu=cfg.nu, x_start=chord, x_end=x_end,
                         seed=cfg.seed, lambda_hat=lam_hat, budget=cfg.budget,
                         max_fronts=cfg.max_fronts, initial_profile=glued)
    return WingRun(tau, lo, up, glued, run(tail_cfg))


def tail_xs(cfg: WingConfig, x_end: float) -> np.ndarray:
    """Geometric sample grid on ``(chord, x_end]``."""
    c = cfg.wing.chord
    return np.geomspace(c, x_end, cfg.samples + 1)[1:]


def tv_slope(xs, tv) -> float:
    """Log-log slope of total variation samples against ``x``."""
    xs = np.asarray(xs, dtype=float)
    tv = np.asarray(tv, dtype=float)
    if np.any(tv <= 0.0):
        return 0.0
    slope, _ = np.polyfit(np.log(xs), np.log(tv), 1)
    return float(slope)


def wing_profiles(task):
    """Worker: ``(WingConfig, tau, x_end, lambda_hat, xs) -> [Profile]``."""
    cfg, tau, x_end, lam_hat, xs = task
    r = run_wing(cfg, tau, x_end, lam_hat)
    return [r.profile(x) for x in xs]


@dataclass
class WingStudy:
    """Tail results per ``tau``.

    ``decay[tau]`` and ``tail_error[tau]`` are ``(x, value)`` lists on the
    sample grid of that ``tau``.
    """

    taus: tuple
    decay: dict = field(default_factory=dict)
    tail_error: dict = field(default_factory=dict)
    tv_slopes: dict = field(default_factory=dict)
    sup_error: dict = field(default_factory=dict)
    rate: object = None


def wing_study(cfg: WingConfig, mapper=map) -> WingStudy:
    """Tail errors against ``tau = 0`` and total-variation decay per ``tau``.

    The ``tau = 0`` reference runs once up to the longest horizon and is
    sampled on the union of all grids.
    """
    lam_hat = cfg.shared_lambda_hat()
    taus = tuple(sorted(cfg.taus, reverse=True))
    grids = {t: tail_xs(cfg, cfg.horizon(t)) for t in taus}
    ref_xs = sorted(set(x for g in grids.values() for x in g.tolist()))
    x_max = max(cfg.horizon(t) for t in taus)
    tasks = [(cfg, 0.0, x_max, lam_hat, ref_xs)]
    tasks += [(cfg, t, cfg.horizon(t), lam_hat, grids[t].tolist()) for t in taus]
    profs = list(mapper(wing_profiles, tasks))
    ref = dict(zip(ref_xs, profs[0]))
    p0 = cfg.params.with_tau(0.0)
    study = WingStudy(taus)
    for j, t in enumerate(taus):
        xs = grids[t].tolist()
        pt = cfg.params.with_tau(t)
        tv = [p.tv() for p in profs[j + 1]]
        errs = [profile_error(p, pt, ref[x], p0).total
                for x, p in zip(xs, profs[j + 1])]
        study.decay[t] = list(zip(xs, tv))
        study.tail_error[t] = list(zip(xs, errs))
        study.tv_slopes[t] = tv_slope(xs, tv)
        study.sup_error[t] = max(errs)
    # no fit when the wing leaves no disturbance (all errors vanish)
    if len(taus) >= 3 and all(study.sup_error[t] > 0.0 for t in taus):
        study.rate = fit_rate(taus, [study.sup_error[t] for t in taus])
    return study
