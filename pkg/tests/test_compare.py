import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hyperfront.compare import (Profile, fit_rate, l1_components, l1_distance,
                                local_step_error, profile_error, reconstruct_u)
from hyperfront.engine import InitialData, RunConfig, run
from hyperfront.errors import (DegenerateInputError, EventWindowError,
                               ProfileMismatchError)
from hyperfront.gas_core import SimilarityParams, axial_velocity
from hyperfront.wave_curves import wave_curve

BG = (1.0, 0.0)


def random_profile(rng, n, lo=-2.0, hi=0.0):
    # breakpoints on a 1e-3 lattice keep midpoint quadrature exact
    bp = np.sort(np.round(rng.uniform(lo, hi, n), 3))
    vals = np.vstack([BG, rng.uniform(-0.05, 0.05, (n - 1, 2)) + BG, BG])
    return Profile(bp, vals)


def quadrature(P, Q, lo=-2.5, hi=0.5, n=300000):
    y = lo + (np.arange(n) + 0.5) * (hi - lo) / n
    ip = np.searchsorted(P.breakpoints, y, side="right")
    iq = np.searchsorted(Q.breakpoints, y, side="right")
    return np.abs(P.values[ip] - Q.values[iq]).sum() * (hi - lo) / n


class TestProfile:
    def test_evaluation(self):
        P = Profile([0.0, 1.0], [[1.0, 0.0], [1.1, 0.1], [1.0, 0.0]])
        assert tuple(P(-1.0)) == (1.0, 0.0)
        assert tuple(P(0.0)) == (1.1, 0.1)
        assert P.tv() == pytest.approx(0.4)
        assert P.support_floor == 0.0

    def test_validation(self):
        with pytest.raises(ValueError):
            Profile([0.0], [[1.0, 0.0]])
        with pytest.raises(ValueError):
            Profile([1.0, 0.0], [[1.0, 0.0]] * 3)

    def test_mirror_involution(self):
        P = random_profile(np.random.default_rng(0), 5)
        M = P.mirrored().mirrored()
        assert np.array_equal(M.breakpoints, P.breakpoints)
        assert np.array_equal(M.values, P.values)

    def test_simplified(self):
        P = Profile([0.0, 1.0], [[1.0, 0.0], [1.0, 0.0], [1.1, 0.0]])
        S = P.simplified()
        assert list(S.breakpoints) == [1.0]
        assert l1_distance(P.with_wall(2.0), S.with_wall(2.0)) == 0.0


class TestL1:
    def test_identical(self):
        P = random_profile(np.random.default_rng(1), 6)
        assert l1_distance(P, P) == 0.0

    def test_shifted_jump(self):
        d, w = 0.02, 0.3
        P = Profile([0.0], [BG, (1.0 + d, 0.0)], upper=1.0)
        Q = Profile([w], [BG, (1.0 + d, 0.0)], upper=1.0)
        assert l1_distance(P, Q) == pytest.approx(d * w, rel=1e-14)

    def test_disjoint_bumps(self):
        d, w = 0.01, 0.2
        P = Profile([0.0, w], [BG, (1.0, d), BG])
        Q = Profile([1.0, 1.0 + w], [BG, (1.0, d), BG])
        assert l1_distance(P, Q) == pytest.approx(2 * d * w, rel=1e-14)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_quadrature(self, seed):
        rng = np.random.default_rng(seed)
        P, Q = random_profile(rng, 7), random_profile(rng, 9)
        assert l1_distance(P, Q) == pytest.approx(quadrature(P, Q), abs=1e-8)

    @given(st.integers(0, 10 ** 6))
    def test_metric(self, seed):
        rng = np.random.default_rng(seed)
        P, Q, R = (random_profile(rng, int(rng.integers(1, 8))) for _ in range(3))
        assert l1_distance(P, Q) == pytest.approx(l1_distance(Q, P), abs=1e-15)
        assert l1_distance(P, R) <= l1_distance(P, Q) + l1_distance(Q, R) + 1e-12

    def test_upper_limit(self):
        P = Profile([0.0], [BG, (1.1, 0.0)])
        Q = Profile.constant(BG)
        assert l1_components(P, Q, upper=0.5) == pytest.approx([0.05, 0.0])
        with pytest.raises(ProfileMismatchError):
            l1_distance(P, Q)

    def test_background_mismatch(self):
        with pytest.raises(ProfileMismatchError):
            l1_distance(Profile.constant(BG), Profile.constant((1.01, 0.0)), upper=0.0)


class TestReconstruction:
    def test_background(self, params):
        assert np.all(reconstruct_u(Profile.constant(BG), params).values == 0.0)

    def test_pointwise(self, params):
        P = random_profile(np.random.default_rng(2), 5)
        U = reconstruct_u(P, params)
        for (r, v), (u,) in zip(P.values, U.values):
            assert u == axial_velocity((r, v), params)

    def test_profile_error_split(self, p0, p1):
        P = random_profile(np.random.default_rng(3), 6).with_wall(0.5)
        e = profile_error(P, p1, P, p0)
        assert e.rho_v == 0.0 and e.u > 0.0
        assert e.total == e.rho_v + e.u

    def test_u_lipschitz_in_state(self, p0):
        rng = np.random.default_rng(4)
        ratios = []
        for _ in range(20):
            P, Q = random_profile(rng, 6).with_wall(0.5), random_profile(rng, 6).with_wall(0.5)
            e = profile_error(P, p0, Q, p0)
            ratios.append(e.u / e.rho_v)
        # |du| <= (|v| + c^(gamma-1)/a^2 ...) |dU|; stays below 5 near the background
        assert max(ratios) < 5.0


class TestFit:
    def test_exact_square(self):
        taus = [0.2, 0.1, 0.05, 0.025]
        f = fit_rate(taus, [3 * t ** 2 for t in taus])
        assert f.slope == pytest.approx(2.0, abs=1e-12)
        assert f.residual == pytest.approx(0.0, abs=1e-12)
        assert f.constant == pytest.approx(3.0, rel=1e-12)

    def test_three_halves(self):
        taus = [0.2, 0.1, 0.05]
        assert fit_rate(taus, [5 * t ** 1.5 for t in taus]).slope == pytest.approx(1.5, abs=1e-12)

    @pytest.mark.parametrize("seed", range(10))
    def test_noise(self, seed):
        rng = np.random.default_rng(seed)
        taus = np.array([0.2, 0.1, 0.05, 0.025])
        errs = taus ** 2 * (1 + 0.05 * rng.uniform(-1, 1, 4))
        assert 1.9 <= fit_rate(taus, errs).slope <= 2.1

    @pytest.mark.parametrize("taus,errs", [([0.1, 0.2], [1.0, 2.0]),
                                           ([0.1, 0.2, 0.3], [1.0, 0.0, 2.0]),
                                           ([0.1, 0.1, 0.3], [1.0, 1.0, 2.0])])
    def test_degenerate(self, taus, errs):
        with pytest.raises(DegenerateInputError):
            fit_rate(taus, errs)


def single_shock_run(tau, alpha=-0.02, nu=12):
    p = SimilarityParams(1.4, 0.5, tau)
    top = wave_curve(1, alpha, BG, p).state
    data = InitialData("jumps", breakpoints=(0.0,), states=(BG, tuple(top)))
    return run(RunConfig(p, nu=nu, x_end=1.0, initial_data=data, seed=3))


class TestLocalStep:
    def test_self_consistent(self):
        traj = single_shock_run(0.0)
        assert local_step_error(traj, 0.5, 0.01) <= 1e-14

    def test_event_window(self):
        p = SimilarityParams(1.4, 0.5, 0.0)
        mid = wave_curve(2, -0.01, BG, p).state
        top = wave_curve(1, -0.01, mid, p).state
        data = InitialData("jumps", breakpoints=(0.0, 1.0), states=(BG, tuple(mid), tuple(top)))
        traj = run(RunConfig(p, x_end=1.0, initial_data=data))
        x = traj.events[0].x
        with pytest.raises(EventWindowError):
            local_step_error(traj, x - 1e-3, 2e-3)

    def test_bounded_by_strength(self):
        traj = single_shock_run(0.1)
        rate = local_step_error(traj, 0.5, 0.01)
        assert rate <= 10 * 0.02 * (0.1 ** 2 + 2.0 ** -12)

    def test_quadratic_in_tau(self):
        taus = [0.2, 0.1, 0.05]
        # nu = 30 makes the speed offsets negligible against tau^2
        rates = []
        for t in taus:
            traj = single_shock_run(t, nu=30)
            rates.append(local_step_error(traj, 0.5, 0.01))
        assert fit_rate(taus, rates).slope == pytest.approx(2.0, abs=0.3)
