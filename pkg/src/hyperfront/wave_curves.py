"""Lax wave curves through a left state.

A curve of family ``k`` is parameterised by the jump of ``lambda_k``
across it: ``alpha >= 0`` follows the integral curve of ``r_k``
(rarefaction), ``alpha < 0`` the Hugoniot locus (admissible shock).  With
this choice both branches meet with second-order contact at ``alpha = 0``.
"""
from __future__ import annotations

from typing import NamedTuple

from . import kernels
from .errors import DomainError
from .gas_core import SimilarityParams, State, check_admissible


class WavePoint(NamedTuple):
    """A point on a wave curve.

    ``speed`` is the shock speed on the shock branch and the
    characteristic speed of the end state on the rarefaction branch.
    """

    state: State
    speed: float
    family: int
    strength: float


def _check(k: int, alpha: float, U_L, params: SimilarityParams) -> State:
    if k not in (1, 2):
        raise ValueError("family must be 1 or 2, got %r" % (k,))
    if abs(alpha) >= params.delta0:
        raise DomainError("|alpha| = %g exceeds the curve radius" % abs(alpha))
    return check_admissible(U_L, params)


def rarefaction_point(k: int, alpha: float, U_L,
                      params: SimilarityParams) -> WavePoint:
    """Integral-curve point at ``alpha >= 0`` (RK4, step ``alpha / 32``)."""
    if alpha < 0.0:
        raise ValueError("rarefaction branch needs alpha >= 0")
    U_L = _check(k, alpha, U_L, params)
    rho, v = kernels.rarefaction(k, alpha, U_L.rho, U_L.v, *params.args)
    U = check_admissible((rho, v), params)
    lam = kernels.eigenvalues(rho, v, *params.args)[k - 1]
    return WavePoint(U, lam, k, float(alpha))


def shock_point(k: int, alpha: float, U_L,
                params: SimilarityParams) -> WavePoint:
    """Rankine-Hugoniot point at ``alpha <= 0``.

    The right state and speed solve ``s [G] = [F]`` together with
    ``lambda_k(U_R) - lambda_k(U_L) = alpha`` by a damped Newton corrector
    started from a second-order predictor.
    """
    if alpha > 0.0:
        raise ValueError("shock branch needs alpha <= 0")
    U_L = _check(k, alpha, U_L, params)
    rho, v, s, _ = kernels.shock(k, alpha, U_L.rho, U_L.v, *params.args)
    return WavePoint(check_admissible((rho, v), params), s, k, float(alpha))


def wave_curve(k: int, alpha: float, U_L,
               params: SimilarityParams) -> WavePoint:
    """Dispatch on the sign of ``alpha``."""
    if alpha >= 0.0:
        return rarefaction_point(k, alpha, U_L, params)
    return shock_point(k, alpha, U_L, params)


def is_lax_shock(k: int, U_L, U_R, s: float, params: SimilarityParams) -> bool:
    """``lambda_k(U_R) < s < lambda_k(U_L)``."""
    lam_l = kernels.eigenvalues(U_L[0], U_L[1], *params.args)[k - 1]
    lam_r = kernels.eigenvalues(U_R[0], U_R[1], *params.args)[k - 1]
    return lam_r < s < lam_l
