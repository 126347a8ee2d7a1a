import math

import numpy as np
import pytest

from hyperfront.compare import Profile, fit_rate
from hyperfront.config import from_dict
from hyperfront.errors import InvalidDataError
from hyperfront.gas_core import SimilarityParams
from hyperfront.geometry import WallSpec, WingGeometry
from hyperfront.sweep import sweep_study
from hyperfront.wing import (TAIL_C, WingConfig, glue, run_wing, tail_xs,
                             tv_slope, wing_study)

P = SimilarityParams(1.4, 0.5, 0.1)
FLAT = WallSpec("piecewise_linear", (), (0.0,))


class TestGlue:
    def test_variation(self):
        lo = Profile([-1.0, -0.5], [[1, 0], [1.01, 0.01], [1.02, 0.0]])
        up = Profile([0.5], [[1.03, -0.02], [1, 0]])
        g = glue(lo, up)
        jump = np.abs(lo.values[-1] - up.values[0]).sum()
        assert g.tv() <= lo.tv() + up.tv() + jump + 1e-15
        assert list(g.breakpoints) == [-1.0, -0.5, 0.0, 0.5]

    def test_rejects_overlap(self):
        lo = Profile([0.5], [[1, 0], [1.01, 0]])
        with pytest.raises(InvalidDataError):
            glue(lo, Profile.constant((1, 0)))

    def test_constant_pieces_merge(self):
        g = glue(Profile.constant((1.0, 0.0)), Profile.constant((1.0, 0.0)))
        assert g.breakpoints.size == 0


class TestWing:
    def test_zero_thickness(self):
        cfg = WingConfig(P, WingGeometry(1.0, FLAT, FLAT), taus=(0.2, 0.1, 0.05))
        st = wing_study(cfg)
        for t in st.taus:
            assert all(e == 0.0 for _, e in st.tail_error[t])
            assert all(v == 0.0 for _, v in st.decay[t])
        assert st.rate is None

    def test_horizon_and_grid(self):
        cfg = WingConfig(P, WingGeometry(1.0, FLAT, FLAT))
        assert cfg.horizon(0.1) == TAIL_C / 0.1
        xs = tail_xs(cfg, 5.0)
        assert len(xs) == cfg.samples and xs[0] > 1.0 and xs[-1] == pytest.approx(5.0)

    def test_lens_symmetric(self):
        lens = WingGeometry.lens(1.0, 0.05, 0.05)
        cfg = WingConfig(P, lens, budget=1.5, taus=(0.1,))
        r = run_wing(cfg, 0.1, 1.5)
        g = r.glued
        m = g.mirrored()
        assert np.allclose(m.breakpoints, g.breakpoints, atol=1e-12)
        assert np.allclose(m.values, g.values, atol=1e-12)
        assert r.profile(1.5).tv() <= 1.5 * g.tv()

    def test_tv_slope(self):
        xs = np.geomspace(1, 10, 8)
        assert tv_slope(xs, xs ** -0.5) == pytest.approx(-0.5, abs=1e-12)
        assert tv_slope(xs, np.zeros(8)) == 0.0


def sweep_cfg(**kw):
    d = {"version": 1, "params": {"gamma": 1.4, "a_inf": 0.5, "tau": 0.1},
         "geometry": {"kind": "piecewise_linear", "breakpoints": [], "slopes": [-0.05]},
         "h": 0.05, "nu": 12, "x_end": 1.0, "query_xs": [0.5, 1.0],
         "taus": [0.2, 0.1, 0.05]}
    d.update(kw)
    return from_dict(d)


def test_synthetic_sweep_reproduces_fit():
    errs = [[0.04, 0.01, 0.0025], [0.08, 0.02, 0.005]]
    res = sweep_study(sweep_cfg(synthetic_errors=errs))
    for row, f in zip(errs, res.fits):
        ref = fit_rate([0.2, 0.1, 0.05], row)
        assert (f.slope, f.intercept, f.residual) == (ref.slope, ref.intercept, ref.residual)
    assert res.linearity_ratio() == pytest.approx(1.0)


def test_straight_wedge_sweep():
    res = sweep_study(sweep_cfg())
    for i in range(2):
        assert all(e > 0 for e in res.errors_at(i))
    assert res.fits[-1].slope == pytest.approx(2.0, abs=0.3)
