"""Interior and boundary Riemann solvers, accurate and simplified.

Waves are returned bottom to top.  Family ``0`` marks a non-physical
front, which carries the sup-norm mismatch left by the simplified solver
and travels at the fixed speed ``lambda_hat``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from . import kernels
from .errors import DomainError
from .gas_core import SimilarityParams, State, check_admissible

#: waves weaker than this are dropped and their jump absorbed by a neighbour
STRENGTH_FLOOR = 1e-12
NONPHYSICAL = 0


class Wave(NamedTuple):
    """A single front descriptor without position."""

    family: int
    strength: float
    left: State
    right: State
    speed: float

    @property
    def is_shock(self) -> bool:
        return self.family != NONPHYSICAL and self.strength < 0.0

    @property
    def is_physical(self) -> bool:
        return self.family != NONPHYSICAL


@dataclass(frozen=True)
class RiemannFan:
    """Solution of an interior Riemann problem.

    Attributes
    ----------
    strengths : tuple of float
        ``(alpha_1, alpha_2)``.
    middle : State
        State between the two waves.
    waves : tuple of Wave
        Non-negligible waves, bottom to top.
    """

    left: State
    right: State
    strengths: tuple
    middle: State
    waves: tuple
    iterations: int = 0


@dataclass(frozen=True)
class BoundaryFan:
    """Solution of the boundary Riemann problem at a wall of angle ``theta``."""

    left: State
    theta: float
    strength: float
    wall_state: State
    waves: tuple
    iterations: int = 0


def interaction_threshold(nu: int) -> float:
    """Product threshold ``2**-nu`` below which the simplified solver is used."""
    return 2.0 ** (-nu)


def _chain(waves: list, U_L: State, U_R: State) -> list:
    # drop negligible waves and make the chain start at U_L and end at U_R
    kept = [w for w in waves
            if w.family == NONPHYSICAL or abs(w.strength) > STRENGTH_FLOOR]
    out = []
    prev = U_L
    for i, w in enumerate(kept):
        right = U_R if i == len(kept) - 1 else w.right
        out.append(w._replace(left=prev, right=right))
        prev = right
    return out


def solve_interior(U_L, U_R, params: SimilarityParams) -> RiemannFan:
    """Accurate interior solve: ``U_R = Phi_2(alpha_2; Phi_1(alpha_1; U_L))``.

    Raises
    ------
    DomainError
        If either state or the resulting strengths leave the admissible
        region.
    ConvergenceError
        If the Newton iteration stalls.
    """
    U_L = check_admissible(U_L, params)
    U_R = check_admissible(U_R, params)
    args = params.args
    if U_L == U_R:
        return RiemannFan(U_L, U_R, (0.0, 0.0), U_L, (), 0)
    a1, a2, it = kernels.interior(U_L.rho, U_L.v, U_R.rho, U_R.v, *args)
    if max(abs(a1), abs(a2)) >= params.delta0:
        raise DomainError("wave strengths leave the curve radius")
    m0, m1, s1 = kernels.curve(1, a1, U_L.rho, U_L.v, *args)
    middle = check_admissible((m0, m1), params)
    _, _, s2 = kernels.curve(2, a2, m0, m1, *args)
    waves = [Wave(1, a1, U_L, middle, s1), Wave(2, a2, middle, U_R, s2)]
    return RiemannFan(U_L, U_R, (a1, a2), middle,
                      tuple(_chain(waves, U_L, U_R)), it)


def solve_boundary(U_L, theta: float, params: SimilarityParams) -> BoundaryFan:
    """Find the 1-wave whose right state is tangent to the wall.

    The slip condition is ``(1 + tau^2 u) sin(theta) = v cos(theta)``,
    which reduces to ``v = tan(theta)`` when ``tau = 0``.
    """
    U_L = check_admissible(U_L, params)
    args = params.args
    a1, it = kernels.boundary(U_L.rho, U_L.v, float(theta), *args)
    if abs(a1) >= params.delta0:
        raise DomainError("boundary wave leaves the curve radius")
    r, v, s = kernels.curve(1, a1, U_L.rho, U_L.v, *args)
    wall = check_admissible((r, v), params)
    waves = _chain([Wave(1, a1, U_L, wall, s)], U_L, wall)
    return BoundaryFan(U_L, float(theta), a1, wall, tuple(waves), it)


def slip_residual(U, theta: float, params: SimilarityParams) -> float:
    """Flow-tangency defect of ``U`` on a wall of angle ``theta``."""
    return kernels.slip(U[0], U[1], float(theta), *params.args)


def _split(w: Wave, nu: int, params: SimilarityParams) -> list:
    if w.strength <= 0.0 or w.family == NONPHYSICAL:
        return [w]
    # guard against round-off pushing alpha * nu just above an integer
    m = max(1, math.ceil(w.strength * nu - 1e-9))
    if m == 1:
        return [w]
    part = w.strength / m
    out = []
    U = w.left
    for i in range(m):
        if i == m - 1:
            right = w.right
        else:
            r, v = kernels.rarefaction(w.family, part, U.rho, U.v, *params.args)
            right = State(r, v)
        lam = kernels.eigenvalues(right.rho, right.v, *params.args)[w.family - 1]
        out.append(Wave(w.family, part, U, right, lam))
        U = right
    return out


def ars_fronts(fan, nu: int, params: SimilarityParams) -> list:
    """Front descriptors of the accurate solver.

    Shocks stay single fronts.  A rarefaction of strength ``alpha`` is
    split into ``ceil(alpha * nu)`` equal pieces, each moving with the
    characteristic speed of its right state.
    """
    out = []
    for w in fan.waves:
        out.extend(_split(w, nu, params))
    return out


def _np_wave(U_from: State, U_to: State, lam_hat: float) -> Wave:
    mis = max(abs(U_to.rho - U_from.rho), abs(U_to.v - U_from.v))
    return Wave(NONPHYSICAL, mis, U_from, U_to, lam_hat)


def srs_fronts(lower: Wave, upper: Wave, params: SimilarityParams,
               lam_hat: float) -> list:
    """Simplified solver for two approaching fronts.

    Physical fronts are transmitted with their incoming strengths, two
    fronts of one family merge into one of strength ``alpha + beta``, and a
    single non-physical front carries the remaining mismatch.
    """
    if lower.strength == 0.0 and upper.strength == 0.0:
        return []
    U_l, U_r = lower.left, upper.right
    args = params.args
    if not upper.is_physical:
        raise ValueError("a non-physical front cannot be overtaken")
    if not lower.is_physical:
        transmitted = [(upper.family, upper.strength)]
    elif lower.family == upper.family:
        transmitted = [(lower.family, lower.strength + upper.strength)]
    elif lower.family == 2 and upper.family == 1:
        transmitted = [(1, upper.strength), (2, lower.strength)]
    else:
        raise ValueError("fronts of families 1 below 2 do not approach")
    waves = []
    U = U_l
    for k, a in transmitted:
        r, v, s = kernels.curve(k, a, U.rho, U.v, *args)
        right = check_admissible((r, v), params)
        waves.append(Wave(k, a, U, right, s))
        U = right
    waves.append(_np_wave(U, U_r, lam_hat))
    return _drop_tiny_np(_chain(waves, U_l, U_r), U_l, U_r)


def _drop_tiny_np(waves: list, U_l: State, U_r: State) -> list:
    if waves and not waves[-1].is_physical and waves[-1].strength <= STRENGTH_FLOOR:
        return _chain(waves[:-1], U_l, U_r)
    return waves


def fan_from_jump(U_L, U_R, params: SimilarityParams, nu: int) -> list:
    """Accurate fronts for a single jump (helper for initial data)."""
    return ars_fronts(solve_interior(U_L, U_R, params), nu, params)


def total_strength(waves: Sequence[Wave]) -> float:
    return sum(abs(w.strength) for w in waves)
