"""Paired runs of the two regimes and the ``tau`` rate study.

Every comparison pits a run at ``tau > 0`` against a ``tau = 0`` run with
the same data, mesh, ``nu``, seed and non-physical speed.  Runs are
independent, so callers may pass a parallel ``mapper``; only profiles at
the query points travel back.
"""
from __future__ import annotations

from dataclasses import dataclass

from .compare import ProfileError, fit_rate, profile_error
from .engine import run
from .gas_core import lambda_hat


def run_profiles(task):
    """Worker: ``(RunConfig, xs) -> [Profile]``."""
    run_cfg, xs = task
    traj = run(run_cfg)
    return [traj.profile(x) for x in xs]


@dataclass(frozen=True)
class Comparison:
    """Errors of one ``tau`` against ``tau = 0`` at the query points."""

    tau: float
    xs: tuple
    errors: tuple  # of ProfileError

    def totals(self) -> list:
        return [e.total for e in self.errors]

    def constants(self) -> list:
        """``E(x) / (x tau^2)``."""
        return [e.total / (x * self.tau ** 2) for x, e in zip(self.xs, self.errors)]


def _compare(tau, xs, prof_t, prof_0, params_t, params_0) -> Comparison:
    errs = tuple(profile_error(p, params_t, q, params_0)
                 for p, q in zip(prof_t, prof_0))
    return Comparison(tau, tuple(xs), errs)


def compare_study(cfg, mapper=map) -> Comparison:
    """``cfg.params.tau`` against ``tau = 0``."""
    tau = cfg.params.tau
    lam = lambda_hat(cfg.params)
    xs = cfg.xs()
    tasks = [(cfg.run_config(tau, lam), xs), (cfg.run_config(0.0, lam), xs)]
    prof_t, prof_0 = list(mapper(run_profiles, tasks))
    return _compare(tau, xs, prof_t, prof_0, cfg.params, cfg.params.with_tau(0.0))


@dataclass(frozen=True)
class SweepResult:
    """Per-``tau`` comparisons plus a power-law fit at each query ``x``."""

    taus: tuple
    xs: tuple
    comparisons: tuple
    fits: tuple

    def errors_at(self, i: int) -> list:
        return [c.errors[i].total for c in self.comparisons]

    def linearity_ratio(self) -> float:
        """Largest ``max/min`` over ``x`` of ``E(x)/(x tau^2)`` among the taus."""
        worst = 1.0
        for c in self.comparisons:
            k = c.constants()
            if min(k) > 0.0:
                worst = max(worst, max(k) / min(k))
            elif max(k) > 0.0:
                worst = float("inf")
        return worst


def sweep_study(cfg, mapper=map) -> SweepResult:
    """Run ``tau = 0`` once and every ``tau`` in ``cfg.taus``.

    The non-physical speed is taken at the largest ``tau`` and shared by all
    runs so the only difference between runs is the parameter itself.
    """
    taus = tuple(cfg.taus)
    xs = cfg.xs()
    if cfg.synthetic_errors is not None:
        comps = tuple(Comparison(t, xs, tuple(ProfileError(row[j], 0.0)
                                              for row in cfg.synthetic_errors))
                      for j, t in enumerate(taus))
    else:
        lam = lambda_hat(cfg.params.with_tau(max(taus)))
        tasks = [(cfg.run_config(0.0, lam), xs)]
        tasks += [(cfg.run_config(t, lam), xs) for t in taus]
        profs = list(mapper(run_profiles, tasks))
        p0 = cfg.params.with_tau(0.0)
        comps = tuple(_compare(t, xs, profs[j + 1], profs[0], cfg.params.with_tau(t), p0)
                      for j, t in enumerate(taus))
    fits = tuple(fit_rate(taus, [c.errors[i].total for c in comps])
                 for i in range(len(xs)))
    return SweepResult(taus, xs, comps, fits)
