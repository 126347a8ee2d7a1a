"""Scalar kernels, pure-Python backend.

Every routine works on bare floats so that ``_ckernels.pyx`` can mirror
it line for line.  A single code path serves both systems: ``tau == 0``
reduces the scaled closure and fluxes to the small-disturbance ones.

Family indices are 1 (slow) and 2 (fast).  Strengths are measured by the
jump of the family eigenvalue, which makes the rarefaction and shock
branches of a wave curve agree to second order at the origin.
"""
import math

from .errors import ConvergenceError, DomainError

RK_STEPS = 32
MAX_ITER = 50
SHOCK_TOL = 1e-14
STATE_TOL = 1e-13
SLIP_TOL = 1e-14
FD_STEP = 1e-7
# below this |alpha| the second-order predictor is exact to round-off
SMALL_ALPHA = 1e-6


def axial_velocity(rho, v, gamma, a, tau):
    """Closed-form axial perturbation ``u`` from the Bernoulli relation."""
    if not rho > 0.0:
        raise DomainError("density must be positive, got %r" % (rho,))
    k = v * v + 2.0 * (rho ** (gamma - 1.0) - 1.0) / ((gamma - 1.0) * a * a)
    rad = 1.0 - tau * tau * k
    if not rad > 0.0:
        raise DomainError("Bernoulli radicand is not positive")
    # rationalised form of (sqrt(rad) - 1) / tau**2, exact at tau = 0
    return -k / (1.0 + math.sqrt(rad))


def fluxes(rho, v, gamma, a, tau):
    """Return ``(G0, G1, F0, F1)``."""
    u = axial_velocity(rho, v, gamma, a, tau)
    w = 1.0 + tau * tau * u
    return rho * w, v, rho * v, -u


def jacobians(rho, v, gamma, a, tau):
    """Return the flux Jacobians as flat tuples ``(g00, g01, f00, f01, f10, f11)``.

    ``DG`` has a trivial second row ``(0, 1)``.
    """
    u = axial_velocity(rho, v, gamma, a, tau)
    w = 1.0 + tau * tau * u
    p = rho ** (gamma - 2.0)
    u_r = -p / (a * a * w)
    u_v = -v / w
    t2 = tau * tau
    return (w + t2 * rho * u_r, t2 * rho * u_v, v, rho, -u_r, -u_v)


def _eigen(k, rho, v, gamma, a, tau):
    # returns (lam, rt0, rt1, l_r, l_v) with rt the un-normalised eigenvector
    u = axial_velocity(rho, v, gamma, a, tau)
    t2 = tau * tau
    a2 = a * a
    w = 1.0 + t2 * u
    p = rho ** (gamma - 2.0)
    c2 = p * rho
    c = math.sqrt(c2)
    u_r = -p / (a2 * w)
    u_v = -v / w
    big_a = a2 * w * w - t2 * c2
    disc = a2 * w * w + t2 * (a2 * v * v - c2)
    if not (big_a > 0.0 and disc > 0.0):
        raise DomainError("state is not strictly hyperbolic")
    sq = math.sqrt(disc)
    sgn = -1.0 if k == 1 else 1.0
    lam = (a2 * w * v + sgn * c * sq) / big_a
    rt0 = a2 * rho * (w * lam - v) / c
    rt1 = c
    # implicit differentiation of A lam^2 + B lam + C = 0
    w_r = t2 * u_r
    w_v = t2 * u_v
    dc2 = (gamma - 1.0) * p
    a_r = 2.0 * a2 * w * w_r - t2 * dc2
    a_v = 2.0 * a2 * w * w_v
    b_r = -2.0 * a2 * v * w_r
    b_v = -2.0 * a2 * (w + v * w_v)
    c_r = -dc2
    c_v = 2.0 * a2 * v
    dp = 2.0 * sgn * c * sq
    l_r = -(a_r * lam * lam + b_r * lam + c_r) / dp
    l_v = -(a_v * lam * lam + b_v * lam + c_v) / dp
    return lam, rt0, rt1, l_r, l_v


def eigenvalues(rho, v, gamma, a, tau):
    """Return ``(lambda_1, lambda_2)``."""
    return (_eigen(1, rho, v, gamma, a, tau)[0],
            _eigen(2, rho, v, gamma, a, tau)[0])


def grad_lambda(k, rho, v, gamma, a, tau):
    """Exact gradient ``(d lambda_k / d rho, d lambda_k / d v)``."""
    e = _eigen(k, rho, v, gamma, a, tau)
    return e[3], e[4]


def eigen(k, rho, v, gamma, a, tau):
    """Return ``(lambda_k, r0, r1)`` with ``grad(lambda_k) . r = 1``."""
    lam, rt0, rt1, l_r, l_v = _eigen(k, rho, v, gamma, a, tau)
    gn = l_r * rt0 + l_v * rt1
    if not gn > 0.0:
        raise DomainError("genuine nonlinearity lost at this state")
    return lam, rt0 / gn, rt1 / gn


def rarefaction(k, alpha, rho, v, gamma, a, tau):
    """Integrate ``dU/dalpha = r_k(U)`` with classical RK4 in 32 steps."""
    hs = alpha / RK_STEPS
    for _ in range(RK_STEPS):
        _, k1a, k1b = eigen(k, rho, v, gamma, a, tau)
        _, k2a, k2b = eigen(k, rho + 0.5 * hs * k1a, v + 0.5 * hs * k1b,
                            gamma, a, tau)
        _, k3a, k3b = eigen(k, rho + 0.5 * hs * k2a, v + 0.5 * hs * k2b,
                            gamma, a, tau)
        _, k4a, k4b = eigen(k, rho + hs * k3a, v + hs * k3b, gamma, a, tau)
        rho += hs * (k1a + 2.0 * k2a + 2.0 * k3a + k4a) / 6.0
        v += hs * (k1b + 2.0 * k2b + 2.0 * k3b + k4b) / 6.0
    return rho, v


def _solve3(m, b):
    # Gaussian elimination with partial pivoting on a 3x3 system
    m = [row[:] for row in m]
    b = b[:]
    for col in range(3):
        piv = max(range(col, 3), key=lambda i: abs(m[i][col]))
        if m[piv][col] == 0.0:
            raise ConvergenceError("singular Rankine-Hugoniot Jacobian")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            b[col], b[piv] = b[piv], b[col]
        for i in range(col + 1, 3):
            f = m[i][col] / m[col][col]
            for j in range(col, 3):
                m[i][j] -= f * m[col][j]
            b[i] -= f * b[col]
    x = [0.0, 0.0, 0.0]
    for i in (2, 1, 0):
        acc = b[i]
        for j in range(i + 1, 3):
            acc -= m[i][j] * x[j]
        x[i] = acc / m[i][i]
    return x


def _shock_residual(k, alpha, w0, w1, s, rl, vl, gl0, gl1, fl0, fl1, laml,
                    gamma, a, tau):
    rho = rl + alpha * w0
    v = vl + alpha * w1
    g0, g1, f0, f1 = fluxes(rho, v, gamma, a, tau)
    lam = _eigen(k, rho, v, gamma, a, tau)[0]
    e0 = (s * (g0 - gl0) - (f0 - fl0)) / alpha
    e1 = (s * (g1 - gl1) - (f1 - fl1)) / alpha
    e2 = (lam - laml) / alpha - 1.0
    return e0, e1, e2, g0, g1


def shock(k, alpha, rho, v, gamma, a, tau):
    """Hugoniot point at eigenvalue jump ``alpha``.

    Unknowns are the scaled displacement ``W = (U - U_L) / alpha`` and the
    speed ``s``.  The scaled system stays non-singular as ``alpha -> 0``.
    Returns ``(rho_R, v_R, s, iterations)``.
    """
    laml, r0, r1 = eigen(k, rho, v, gamma, a, tau)
    if alpha == 0.0:
        return rho, v, laml, 0
    gl0, gl1, fl0, fl1 = fluxes(rho, v, gamma, a, tau)
    # midpoint predictor is second-order accurate along the curve
    _, w0, w1 = eigen(k, rho + 0.5 * alpha * r0, v + 0.5 * alpha * r1,
                      gamma, a, tau)
    s = laml + 0.5 * alpha
    if abs(alpha) < SMALL_ALPHA:
        return rho + alpha * w0, v + alpha * w1, s, 0
    e0, e1, e2, g0, g1 = _shock_residual(k, alpha, w0, w1, s, rho, v, gl0,
                                         gl1, fl0, fl1, laml, gamma, a, tau)
    res = max(abs(e0), abs(e1), abs(e2))
    # differences of O(1) fluxes divided by alpha carry this much round-off
    tol = max(SHOCK_TOL, 1e-15 / abs(alpha))
    for it in range(1, MAX_ITER + 1):
        rr = rho + alpha * w0
        vv = v + alpha * w1
        j00, j01, f00, f01, f10, f11 = jacobians(rr, vv, gamma, a, tau)
        _, _, _, l_r, l_v = _eigen(k, rr, vv, gamma, a, tau)
        m = [[s * j00 - f00, s * j01 - f01, (g0 - gl0) / alpha],
             [-f10, s - f11, (g1 - gl1) / alpha],
             [l_r, l_v, 0.0]]
        d = _solve3(m, [-e0, -e1, -e2])
        step = 1.0
        for _ in range(30):
            try:
                t = _shock_residual(k, alpha, w0 + step * d[0],
                                    w1 + step * d[1], s + step * d[2], rho, v,
                                    gl0, gl1, fl0, fl1, laml, gamma, a, tau)
            except DomainError:
                step *= 0.5
                continue
            nres = max(abs(t[0]), abs(t[1]), abs(t[2]))
            if nres < res or nres < tol:
                break
            step *= 0.5
        else:
            if res < 10.0 * tol:
                return rho + alpha * w0, v + alpha * w1, s, it
            raise ConvergenceError("shock line search failed")
        w0 += step * d[0]
        w1 += step * d[1]
        s += step * d[2]
        e0, e1, e2, g0, g1 = t
        res = nres
        if (res < tol or (step < 1.0 and res < 100.0 * tol)
                or max(abs(step * d[0]), abs(step * d[1]),
                       abs(step * d[2])) < 1e-13):
            return rho + alpha * w0, v + alpha * w1, s, it
    raise ConvergenceError("Rankine-Hugoniot corrector did not converge")


def curve(k, alpha, rho, v, gamma, a, tau):
    """Wave-curve point ``(rho, v, speed)``; the speed of a rarefaction is
    the eigenvalue of its end state."""
    if alpha >= 0.0:
        r, vv = rarefaction(k, alpha, rho, v, gamma, a, tau)
        return r, vv, _eigen(k, r, vv, gamma, a, tau)[0]
    r, vv, s, _ = shock(k, alpha, rho, v, gamma, a, tau)
    return r, vv, s


def _compose(a1, a2, rl, vl, gamma, a, tau):
    r, v, _ = curve(1, a1, rl, vl, gamma, a, tau)
    r, v, _ = curve(2, a2, r, v, gamma, a, tau)
    return r, v


def interior(rl, vl, rr, vr, gamma, a, tau):
    """Strengths ``(alpha1, alpha2, iterations)`` joining ``U_L`` to ``U_R``."""
    _, p0, p1 = eigen(1, rl, vl, gamma, a, tau)
    _, q0, q1 = eigen(2, rl, vl, gamma, a, tau)
    d0 = rr - rl
    d1 = vr - vl
    det = p0 * q1 - q0 * p1
    a1 = (d0 * q1 - q0 * d1) / det
    a2 = (p0 * d1 - p1 * d0) / det
    x0, x1 = _compose(a1, a2, rl, vl, gamma, a, tau)
    e0 = x0 - rr
    e1 = x1 - vr
    res = max(abs(e0), abs(e1))
    for it in range(1, MAX_ITER + 1):
        if res < STATE_TOL:
            return a1, a2, it - 1
        y0, y1 = _compose(a1 + FD_STEP, a2, rl, vl, gamma, a, tau)
        z0, z1 = _compose(a1, a2 + FD_STEP, rl, vl, gamma, a, tau)
        m00 = (y0 - x0) / FD_STEP
        m10 = (y1 - x1) / FD_STEP
        m01 = (z0 - x0) / FD_STEP
        m11 = (z1 - x1) / FD_STEP
        det = m00 * m11 - m01 * m10
        d0 = -(e0 * m11 - m01 * e1) / det
        d1 = -(m00 * e1 - m10 * e0) / det
        step = 1.0
        for _ in range(30):
            try:
                t0, t1 = _compose(a1 + step * d0, a2 + step * d1, rl, vl,
                                  gamma, a, tau)
            except (DomainError, ConvergenceError):
                step *= 0.5
                continue
            nres = max(abs(t0 - rr), abs(t1 - vr))
            if nres < res or nres < STATE_TOL:
                break
            step *= 0.5
        else:
            raise ConvergenceError("interior Riemann line search failed")
        a1 += step * d0
        a2 += step * d1
        x0, x1 = t0, t1
        e0 = x0 - rr
        e1 = x1 - vr
        if abs(step * d0) + abs(step * d1) < 1e-16:
            res = max(abs(e0), abs(e1))
            return a1, a2, it
        res = max(abs(e0), abs(e1))
    if res < 1e-11:
        return a1, a2, MAX_ITER
    raise ConvergenceError("interior Riemann solver did not converge")


def slip(rho, v, theta, gamma, a, tau):
    """Flow-tangency residual ``w sin(theta) - v cos(theta)``."""
    u = axial_velocity(rho, v, gamma, a, tau)
    return (1.0 + tau * tau * u) * math.sin(theta) - v * math.cos(theta)


def boundary(rl, vl, theta, gamma, a, tau):
    """Strength ``(alpha1, iterations)`` of the 1-wave restoring slip."""
    st = math.sin(theta)
    ct = math.cos(theta)
    lres = slip(rl, vl, theta, gamma, a, tau)
    if abs(lres) < SLIP_TOL:
        return 0.0, 0
    u = axial_velocity(rl, vl, gamma, a, tau)
    w = 1.0 + tau * tau * u
    p = rl ** (gamma - 2.0)
    t2 = tau * tau
    _, r0, r1 = eigen(1, rl, vl, gamma, a, tau)
    dl = t2 * (-p / (a * a * w)) * st * r0 + (t2 * (-vl / w) * st - ct) * r1
    a1 = -lres / dl
    r, v, _ = curve(1, a1, rl, vl, gamma, a, tau)
    res = slip(r, v, theta, gamma, a, tau)
    for it in range(1, MAX_ITER + 1):
        if abs(res) < SLIP_TOL:
            return a1, it
        r2, v2, _ = curve(1, a1 + FD_STEP, rl, vl, gamma, a, tau)
        der = (slip(r2, v2, theta, gamma, a, tau) - res) / FD_STEP
        d = -res / der
        step = 1.0
        for _ in range(30):
            try:
                r, v, _ = curve(1, a1 + step * d, rl, vl, gamma, a, tau)
                nres = slip(r, v, theta, gamma, a, tau)
            except (DomainError, ConvergenceError):
                step *= 0.5
                continue
            if abs(nres) < abs(res) or abs(nres) < SLIP_TOL:
                break
            step *= 0.5
        else:
            raise ConvergenceError("boundary line search failed")
        a1 += step * d
        res = nres
        if abs(step * d) < 1e-17:
            return a1, it
    if abs(res) < 1e-12:
        return a1, MAX_ITER
    raise ConvergenceError("boundary Riemann solver did not converge")
