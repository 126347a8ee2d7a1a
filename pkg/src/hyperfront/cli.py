"""Command-line entry point.

Usage::

    hyperfront run|compare|sweep|wing CONFIG.json [--out DIR] [--seed N] [--quiet]

Outputs (all CSVs have a header row; floats use 17 significant digits):

``run``
    ``events.csv``: ``x, kind, solver, incoming_ids, incoming_strengths,
    outgoing_ids, outgoing_strengths, glimm_before, glimm_after`` with id and
    strength lists joined by ``;``.
    ``profiles.csv``: ``x, y_low, y_high, rho, v, u``, one row per constant
    piece at every query ``x``.
    ``summary.json``: front and event counts, extremal strengths and Glimm
    range.
``compare``
    ``compare.csv``: ``tau, x, err_rho_v, err_u, err_total, err_over_x_tau2``.
``sweep``
    ``sweep.csv`` (as ``compare.csv``, one block per ``tau``) and
    ``slopes.json`` with the fitted slope, intercept, residual, per-``tau``
    errors and constants at each ``x``.
``wing``
    ``decay.csv``: ``tau, x, tv``; ``tail_error.csv``: ``tau, x, error``;
    ``slopes.json``: total-variation slopes, sup errors and their ``tau`` fit.

Files are written only after every computation succeeded, each through a
temporary file renamed into place.  Exit status is 0 on success, 1 for an
invalid config and 2 when a run leaves the small-data regime (budget
exceeded, state outside the admissible neighbourhood or a failed solve).

``HYPERFRONT_THREADS`` caps the number of runs executed concurrently.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from pathlib import Path

from . import kernels
from .config import Config, load
from .engine import run
from .errors import (BudgetExceededError, ConfigError, ConvergenceError,
                     DegenerateInputError, DomainError, GenericityError,
                     HyperfrontError, InvalidBoundaryError, InvalidDataError)
from .sweep import compare_study, sweep_study
from .wing import wing_study

log = logging.getLogger("hyperfront")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_BUDGET = 2

TV_DECAY_WARN = -0.3


def fmt(x) -> str:
    """Float with 17 significant digits (``inf``/``-inf`` spelled out)."""
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([c if isinstance(c, str) else fmt(c) for c in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_outputs(out_dir, files: dict) -> list:
    """Write ``{name: text}`` atomically (temp file, then rename)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in files.items():
        fd, tmp = tempfile.mkstemp(dir=out, prefix="." + name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(text)
            os.replace(tmp, out / name)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        written.append(out / name)
    return written


def _threads() -> int:
    raw = os.environ.get("HYPERFRONT_THREADS", "")
    try:
        n = int(raw) if raw else (os.cpu_count() or 1)
    except ValueError:
        raise ConfigError("HYPERFRONT_THREADS must be an integer") from None
    return max(1, n)


@contextmanager
def _mapper(n_tasks: int):
    n = min(_threads(), n_tasks)
    if n <= 1:
        yield map
        return
    with ProcessPoolExecutor(max_workers=n) as pool:
        yield pool.map


# ---------------------------------------------------------------- commands

def events_csv(traj) -> str:
    header = ["x", "kind", "solver", "incoming_ids", "incoming_strengths",
              "outgoing_ids", "outgoing_strengths", "glimm_before", "glimm_after"]

    def join(vals):
        return ";".join(fmt(v) for v in vals)
    rows = [(e.x, e.kind, e.solver, join(e.incoming), join(e.incoming_strengths),
             join(e.outgoing), join(e.outgoing_strengths), e.glimm_before,
             e.glimm_after) for e in traj.events]
    return _csv(header, rows)


def profiles_csv(traj, xs) -> str:
    rows = []
    for x in xs:
        p = traj.profile(x)
        edges = [-math.inf, *p.breakpoints.tolist(), p.upper]
        for i, (r, v) in enumerate(p.values):
            u = kernels.axial_velocity(r, v, *traj.params.args)
            rows.append((x, edges[i], edges[i + 1], r, v, u))
    return _csv(["x", "y_low", "y_high", "rho", "v", "u"], rows)


def summary(traj) -> dict:
    kinds = Counter(e.kind for e in traj.events)
    lo, hi = traj.glimm_range()
    alive = traj.alive_at(traj.x_end)
    return {
        "regime": traj.params.regime,
        "tau": traj.params.tau,
        "nu": traj.nu,
        "backend": kernels.BACKEND,
        "fronts_created": len(traj.fronts),
        "fronts_alive_at_end": len(alive),
        "events": len(traj.events),
        "events_by_kind": dict(sorted(kinds.items())),
        "max_rarefaction": traj.max_rarefaction(),
        "rarefaction_bound": 1.0 / traj.nu,
        "max_nonphysical_total": traj.max_nonphysical_total(),
        "glimm_initial": traj.glimm_initial,
        "glimm_min": lo,
        "glimm_max": hi,
        "lambda_hat": traj.lam_hat,
    }


def cmd_run(cfg: Config) -> dict:
    traj = run(cfg.run_config())
    s = summary(traj)
    s["name"] = cfg.name
    return {"events.csv": events_csv(traj),
            "profiles.csv": profiles_csv(traj, cfg.xs()),
            "summary.json": _json(s)}


def _comparison_rows(comp):
    return [(comp.tau, x, e.rho_v, e.u, e.total, k)
            for x, e, k in zip(comp.xs, comp.errors, comp.constants())]


_CMP_HEADER = ["tau", "x", "err_rho_v", "err_u", "err_total", "err_over_x_tau2"]


def cmd_compare(cfg: Config) -> dict:
    if not cfg.params.tau > 0.0:
        raise ConfigError("compare needs tau > 0 (nothing to compare at tau = 0)")
    with _mapper(2) as m:
        comp = compare_study(cfg, m)
    return {"compare.csv": _csv(_CMP_HEADER, _comparison_rows(comp))}


def cmd_sweep(cfg: Config) -> dict:
    if len(cfg.taus) < 3:
        raise ConfigError("sweep needs at least three taus")
    with _mapper(len(cfg.taus) + 1) as m:
        res = sweep_study(cfg, m)
    rows = [r for c in res.comparisons for r in _comparison_rows(c)]
    fits = []
    for i, (x, f) in enumerate(zip(res.xs, res.fits)):
        fits.append({"x": x, "slope": f.slope, "intercept": f.intercept,
                     "residual": f.residual, "errors": res.errors_at(i),
                     "constants": [c.constants()[i] for c in res.comparisons]})
    slopes = {"name": cfg.name, "taus": list(res.taus), "fits": fits,
              "x_linearity_ratio": res.linearity_ratio(),
              "synthetic": cfg.synthetic_errors is not None}
    return {"sweep.csv": _csv(_CMP_HEADER, rows), "slopes.json": _json(slopes)}


def cmd_wing(cfg: Config) -> dict:
    wcfg = cfg.wing_config()
    with _mapper(len(wcfg.taus) + 1) as m:
        st = wing_study(wcfg, m)
    decay = [(t, x, v) for t in st.taus for x, v in st.decay[t]]
    tail = [(t, x, e) for t in st.taus for x, e in st.tail_error[t]]
    out = {
        "name": cfg.name,
        "taus": list(st.taus),
        "tail_c": wcfg.tail_c,
        "tv_slopes": {repr(float(t)): st.tv_slopes[t] for t in st.taus},
        "sup_error": {repr(float(t)): st.sup_error[t] for t in st.taus},
    }
    if st.rate is not None:
        out["tail_rate"] = {"slope": st.rate.slope, "intercept": st.rate.intercept,
                            "residual": st.rate.residual}
    for t in st.taus:
        if st.tv_slopes[t] > TV_DECAY_WARN:
            log.warning("tau=%s: total variation decays like x^%.3f, slower than x^%.1f",
                        repr(float(t)), st.tv_slopes[t], TV_DECAY_WARN)
    return {"decay.csv": _csv(["tau", "x", "tv"], decay),
            "tail_error.csv": _csv(["tau", "x", "error"], tail),
            "slopes.json": _json(out)}


COMMANDS = {"run": cmd_run, "compare": cmd_compare, "sweep": cmd_sweep,
            "wing": cmd_wing}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hyperfront",
                                 description="Front tracking for steady supersonic flow.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("config", help="JSON config file")
    ap.add_argument("--out", default=None,
                    help="output directory (default: ./hyperfront-out/<name>)")
    ap.add_argument("--seed", type=int, default=None, help="override the jitter seed")
    ap.add_argument("--quiet", action="store_true", help="print nothing on success")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="hyperfront: %(message)s")
    try:
        cfg = load(args.config).with_seed(args.seed)
    except BudgetExceededError as exc:
        log.error("%s", exc)
        return EXIT_BUDGET
    except (ConfigError, InvalidDataError, InvalidBoundaryError) as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    try:
        files = COMMANDS[args.command](cfg)
    except (ConfigError, InvalidDataError, InvalidBoundaryError,
            DegenerateInputError) as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except (BudgetExceededError, DomainError, ConvergenceError,
            GenericityError) as exc:
        log.error("run aborted: %s", exc)
        return EXIT_BUDGET
    except HyperfrontError as exc:
        log.error("run aborted: %s", exc)
        return EXIT_BUDGET
    out = args.out if args.out is not None else os.path.join("hyperfront-out", cfg.name)
    paths = write_outputs(out, files)
    if not args.quiet:
        for p in paths:
            print(p)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
