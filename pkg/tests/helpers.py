"""Shared test helpers."""
import numpy as np

from hyperfront.gas_core import State


def random_states(n, radius, seed=0, center=(1.0, 0.0)):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-radius, radius, size=(n, 2)) + np.asarray(center)
    return [State(float(r), float(v)) for r, v in pts]


def rh_residual(UL, UR, s, params):
    from hyperfront.gas_core import flux_F, flux_G
    gl, gr = flux_G(UL, params), flux_G(UR, params)
    fl, fr = flux_F(UL, params), flux_F(UR, params)
    return max(abs(s * (gr[i] - gl[i]) - (fr[i] - fl[i])) for i in range(2))
