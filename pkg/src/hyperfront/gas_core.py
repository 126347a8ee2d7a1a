"""Closure, fluxes and characteristic structure of the two steady systems.

The scaled system (``tau > 0``) reads ``G(U)_x + F(U)_y = 0`` with
``U = (rho, v)``, ``G = (rho (1 + tau^2 u), v)`` and ``F = (rho v, -u)``,
where the axial perturbation ``u`` follows from the Bernoulli relation

    u + (v^2 + tau^2 u^2) / 2 + (rho^(gamma-1) - 1) / ((gamma-1) a^2) = 0.

Setting ``tau = 0`` gives the small-disturbance system with ``G = U``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

from . import kernels
from .errors import DomainError, UnsupportedRegimeError


class State(NamedTuple):
    """Primary unknowns ``(rho, v)``."""

    rho: float
    v: float


BACKGROUND = State(1.0, 0.0)

#: default wave-strength bound as a multiple of the state radius
CURVE_RADIUS_FACTOR = 3.0


@dataclass(frozen=True)
class SimilarityParams:
    """Physical constants and the similarity parameter.

    Parameters
    ----------
    gamma : float
        Adiabatic exponent, ``> 1``.
    a_inf : float
        Far-field Mach-number scale ``a``.
    tau : float
        Similarity parameter; ``0`` selects the small-disturbance system
        and ``tau`` must stay below ``a_inf / 2`` otherwise.
    neighborhood_radius : float
        Sup-norm radius of the admissible neighbourhood of ``(1, 0)``.
    curve_radius : float, optional
        Bound on wave strengths ``|alpha|``.  Strengths are eigenvalue jumps,
        so connecting two admissible states can take ``|alpha|`` well above
        the state radius; the default is ``CURVE_RADIUS_FACTOR`` times it.
    """

    gamma: float = 1.4
    a_inf: float = 0.5
    tau: float = 0.0
    neighborhood_radius: float = 0.1
    curve_radius: float | None = None

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError("gamma must exceed 1")
        if not self.a_inf > 0.0:
            raise ValueError("a_inf must be positive")
        if self.tau < 0.0 or self.tau >= 0.5 * self.a_inf:
            raise ValueError("tau must lie in [0, a_inf / 2)")
        if not self.neighborhood_radius > 0.0:
            raise ValueError("neighborhood_radius must be positive")
        if self.curve_radius is not None and not self.curve_radius > 0.0:
            raise ValueError("curve_radius must be positive")

    @property
    def delta0(self) -> float:
        """Largest admissible wave strength."""
        if self.curve_radius is not None:
            return self.curve_radius
        return CURVE_RADIUS_FACTOR * self.neighborhood_radius

    @property
    def regime(self) -> str:
        return "scaled" if self.tau > 0.0 else "small_disturbance"

    def with_tau(self, tau: float) -> "SimilarityParams":
        return replace(self, tau=float(tau))

    @property
    def args(self):
        # positional tail shared by every kernel call
        return self.gamma, self.a_inf, self.tau


def check_admissible(U, params: SimilarityParams) -> State:
    """Return ``U`` as a :class:`State` or raise :class:`DomainError`.

    A state is admissible when it lies in the sup-norm neighbourhood of
    the background and the Bernoulli radicand is positive.
    """
    U = State(float(U[0]), float(U[1]))
    r = params.neighborhood_radius
    if not (abs(U.rho - 1.0) <= r and abs(U.v) <= r):
        raise DomainError("state %r leaves the admissible neighbourhood" % (U,))
    kernels.axial_velocity(U.rho, U.v, *params.args)
    return U


def axial_velocity(U, params: SimilarityParams) -> float:
    """Axial perturbation ``u(rho, v)``."""
    return kernels.axial_velocity(U[0], U[1], *params.args)


def sonic_speed(U, params: SimilarityParams | None = None) -> float:
    """Scaled sound speed ``c = rho^((gamma-1)/2)``."""
    gamma = 1.4 if params is None else params.gamma
    if not U[0] > 0.0:
        raise DomainError("density must be positive")
    return U[0] ** (0.5 * (gamma - 1.0))


def flux_G(U, params: SimilarityParams) -> tuple[float, float]:
    """Conserved density ``G(U)``; equals ``U`` when ``tau = 0``."""
    g0, g1, _, _ = kernels.fluxes(U[0], U[1], *params.args)
    return g0, g1


def flux_F(U, params: SimilarityParams) -> tuple[float, float]:
    """Transverse flux ``F(U)``."""
    _, _, f0, f1 = kernels.fluxes(U[0], U[1], *params.args)
    return f0, f1


def flux_jacobians(U, params: SimilarityParams):
    """Return ``(DG, DF)`` as nested 2x2 tuples."""
    g00, g01, f00, f01, f10, f11 = kernels.jacobians(U[0], U[1], *params.args)
    return ((g00, g01), (0.0, 1.0)), ((f00, f01), (f10, f11))


def eigenvalues(U, params: SimilarityParams) -> tuple[float, float]:
    """Characteristic speeds ``lambda_1 < lambda_2``."""
    return kernels.eigenvalues(U[0], U[1], *params.args)


def eigenvectors(U, params: SimilarityParams):
    """Right eigenvectors normalised so that ``grad(lambda_j) . r_j = 1``.

    Returns
    -------
    tuple
        ``(r_1, r_2)``, each a pair ``(dr_rho, dr_v)``.
    """
    _, a0, a1 = kernels.eigen(1, U[0], U[1], *params.args)
    _, b0, b1 = kernels.eigen(2, U[0], U[1], *params.args)
    return (a0, a1), (b0, b1)


def grad_lambda(k: int, U, params: SimilarityParams) -> tuple[float, float]:
    """Gradient of ``lambda_k`` with respect to ``(rho, v)``."""
    return kernels.grad_lambda(k, U[0], U[1], *params.args)


def entropy_pair(U, params: SimilarityParams) -> tuple[float, float]:
    """Convex entropy pair ``(E, Q)`` of the small-disturbance system.

    The energy ``rho v^2 / 2 + rho^gamma / (gamma (gamma-1) a^2)`` is taken
    relative to its tangent plane at the background, so both ``E`` and
    ``Q`` vanish there.  ``Q`` satisfies ``grad Q = grad E . DF``.

    Raises
    ------
    UnsupportedRegimeError
        If ``params.tau > 0``.
    """
    if params.tau > 0.0:
        raise UnsupportedRegimeError("entropy pair is defined for tau = 0 only")
    rho, v = float(U[0]), float(U[1])
    if not rho > 0.0:
        raise DomainError("density must be positive")
    g = params.gamma
    k = 1.0 / ((g - 1.0) * params.a_inf ** 2)
    rg = rho ** g
    e = 0.5 * rho * v * v + k * (rg - 1.0 - g * (rho - 1.0)) / g
    q = 0.5 * rho * v ** 3 + k * v * (rg - rho)
    return e, q


def lambda_hat(params: SimilarityParams, samples: int = 21) -> float:
    """Speed assigned to non-physical fronts.

    Twice the largest ``|lambda|`` over a grid on the admissible square.
    """
    r = params.neighborhood_radius
    best = 0.0
    for i in range(samples):
        rho = 1.0 - r + 2.0 * r * i / (samples - 1)
        for j in range(samples):
            v = -r + 2.0 * r * j / (samples - 1)
            try:
                l1, l2 = kernels.eigenvalues(rho, v, *params.args)
            except DomainError:
                continue
            best = max(best, abs(l1), abs(l2))
    return 2.0 * best


def background_speed(params: SimilarityParams) -> float:
    """``|lambda_j|`` at the background state."""
    if params.tau > 0.0:
        return 1.0 / math.sqrt(params.a_inf ** 2 - params.tau ** 2)
    return 1.0 / params.a_inf
