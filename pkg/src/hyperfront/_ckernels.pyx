# cython: boundscheck=False, wraparound=False, cdivision=True
"""Scalar kernels, compiled backend.

Line-for-line mirror of ``_pykernels``; see that module for the maths.
"""
from libc.math cimport sqrt, pow, fabs, sin, cos

from .errors import ConvergenceError, DomainError

cdef enum:
    RK_STEPS = 32
    MAX_ITER = 50

cdef double SHOCK_TOL = 1e-14
cdef double STATE_TOL = 1e-13
cdef double SLIP_TOL = 1e-14
cdef double FD_STEP = 1e-7
cdef double SMALL_ALPHA = 1e-6


cdef int _axial(double rho, double v, double gamma, double a, double tau,
                double* u) except -1:
    cdef double k, rad
    if not rho > 0.0:
        raise DomainError("density must be positive, got %r" % (rho,))
    k = v * v + 2.0 * (pow(rho, gamma - 1.0) - 1.0) / ((gamma - 1.0) * a * a)
    rad = 1.0 - tau * tau * k
    if not rad > 0.0:
        raise DomainError("Bernoulli radicand is not positive")
    u[0] = -k / (1.0 + sqrt(rad))
    return 0


cdef int _fluxes(double rho, double v, double gamma, double a, double tau,
                 double* out) except -1:
    cdef double u
    _axial(rho, v, gamma, a, tau, &u)
    out[0] = rho * (1.0 + tau * tau * u)
    out[1] = v
    out[2] = rho * v
    out[3] = -u
    return 0


cdef int _jac(double rho, double v, double gamma, double a, double tau,
              double* out) except -1:
    cdef double u, w, p, u_r, u_v, t2
    _axial(rho, v, gamma, a, tau, &u)
    w = 1.0 + tau * tau * u
    p = pow(rho, gamma - 2.0)
    u_r = -p / (a * a * w)
    u_v = -v / w
    t2 = tau * tau
    out[0] = w + t2 * rho * u_r
    out[1] = t2 * rho * u_v
    out[2] = v
    out[3] = rho
    out[4] = -u_r
    out[5] = -u_v
    return 0


cdef int _eig(int k, double rho, double v, double gamma, double a, double tau,
              double* out) except -1:
    # out = (lam, rt0, rt1, l_r, l_v)
    cdef double u, t2, a2, w, p, c2, c, u_r, u_v, big_a, disc, sq, sgn, lam
    cdef double w_r, w_v, dc2, a_r, a_v, b_r, b_v, c_r, c_v, dp
    _axial(rho, v, gamma, a, tau, &u)
    t2 = tau * tau
    a2 = a * a
    w = 1.0 + t2 * u
    p = pow(rho, gamma - 2.0)
    c2 = p * rho
    c = sqrt(c2)
    u_r = -p / (a2 * w)
    u_v = -v / w
    big_a = a2 * w * w - t2 * c2
    disc = a2 * w * w + t2 * (a2 * v * v - c2)
    if not (big_a > 0.0 and disc > 0.0):
        raise DomainError("state is not strictly hyperbolic")
    sq = sqrt(disc)
    sgn = -1.0 if k == 1 else 1.0
    lam = (a2 * w * v + sgn * c * sq) / big_a
    out[0] = lam
    out[1] = a2 * rho * (w * lam - v) / c
    out[2] = c
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
    out[3] = -(a_r * lam * lam + b_r * lam + c_r) / dp
    out[4] = -(a_v * lam * lam + b_v * lam + c_v) / dp
    return 0


cdef int _eigen_n(int k, double rho, double v, double gamma, double a,
                  double tau, double* out) except -1:
    # out = (lam, r0, r1)
    cdef double e[5]
    cdef double gn
    _eig(k, rho, v, gamma, a, tau, e)
    gn = e[3] * e[1] + e[4] * e[2]
    if not gn > 0.0:
        raise DomainError("genuine nonlinearity lost at this state")
    out[0] = e[0]
    out[1] = e[1] / gn
    out[2] = e[2] / gn
    return 0


cdef int _rarefaction(int k, double alpha, double rho, double v, double gamma,
                      double a, double tau, double* out) except -1:
    cdef double hs = alpha / <double>RK_STEPS
    cdef double k1[3]
    cdef double k2[3]
    cdef double k3[3]
    cdef double k4[3]
    cdef int i
    for i in range(RK_STEPS):
        _eigen_n(k, rho, v, gamma, a, tau, k1)
        _eigen_n(k, rho + 0.5 * hs * k1[1], v + 0.5 * hs * k1[2],
                 gamma, a, tau, k2)
        _eigen_n(k, rho + 0.5 * hs * k2[1], v + 0.5 * hs * k2[2],
                 gamma, a, tau, k3)
        _eigen_n(k, rho + hs * k3[1], v + hs * k3[2], gamma, a, tau, k4)
        rho += hs * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]) / 6.0
        v += hs * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]) / 6.0
    out[0] = rho
    out[1] = v
    return 0


cdef int _solve3(double* m, double* b, double* x) except -1:
    # in-place Gaussian elimination with partial pivoting, m row-major 3x3
    cdef int col, i, j, piv
    cdef double f, tmp, acc, best
    for col in range(3):
        piv = col
        best = fabs(m[3 * col + col])
        for i in range(col + 1, 3):
            if fabs(m[3 * i + col]) > best:
                best = fabs(m[3 * i + col])
                piv = i
        if m[3 * piv + col] == 0.0:
            raise ConvergenceError("singular Rankine-Hugoniot Jacobian")
        if piv != col:
            for j in range(3):
                tmp = m[3 * col + j]
                m[3 * col + j] = m[3 * piv + j]
                m[3 * piv + j] = tmp
            tmp = b[col]
            b[col] = b[piv]
            b[piv] = tmp
        for i in range(col + 1, 3):
            f = m[3 * i + col] / m[3 * col + col]
            for j in range(col, 3):
                m[3 * i + j] -= f * m[3 * col + j]
            b[i] -= f * b[col]
    for i in range(2, -1, -1):
        acc = b[i]
        for j in range(i + 1, 3):
            acc -= m[3 * i + j] * x[j]
        x[i] = acc / m[3 * i + i]
    return 0


cdef int _shock_res(int k, double alpha, double w0, double w1, double s,
                    double rl, double vl, double* gl, double laml,
                    double gamma, double a, double tau, double* out) except -1:
    # out = (e0, e1, e2, g0, g1); gl = fluxes at U_L
    cdef double rho = rl + alpha * w0
    cdef double v = vl + alpha * w1
    cdef double fx[4]
    cdef double e[5]
    _fluxes(rho, v, gamma, a, tau, fx)
    _eig(k, rho, v, gamma, a, tau, e)
    out[0] = (s * (fx[0] - gl[0]) - (fx[2] - gl[2])) / alpha
    out[1] = (s * (fx[1] - gl[1]) - (fx[3] - gl[3])) / alpha
    out[2] = (e[0] - laml) / alpha - 1.0
    out[3] = fx[0]
    out[4] = fx[1]
    return 0


cdef int _shock(int k, double alpha, double rho, double v, double gamma,
                double a, double tau, double* out) except -1:
    # out = (rho_R, v_R, s, iterations)
    cdef double en[3]
    cdef double gl[4]
    cdef double res5[5]
    cdef double t5[5]
    cdef double jc[6]
    cdef double e[5]
    cdef double m[9]
    cdef double rhs[3]
    cdef double d[3]
    cdef double laml, w0, w1, s, res, nres, tol, step, rr, vv
    cdef int it, ls, ok
    _eigen_n(k, rho, v, gamma, a, tau, en)
    laml = en[0]
    if alpha == 0.0:
        out[0] = rho
        out[1] = v
        out[2] = laml
        out[3] = 0
        return 0
    _fluxes(rho, v, gamma, a, tau, gl)
    _eigen_n(k, rho + 0.5 * alpha * en[1], v + 0.5 * alpha * en[2],
             gamma, a, tau, en)
    w0 = en[1]
    w1 = en[2]
    s = laml + 0.5 * alpha
    if fabs(alpha) < SMALL_ALPHA:
        out[0] = rho + alpha * w0
        out[1] = v + alpha * w1
        out[2] = s
        out[3] = 0
        return 0
    _shock_res(k, alpha, w0, w1, s, rho, v, gl, laml, gamma, a, tau, res5)
    res = max(fabs(res5[0]), max(fabs(res5[1]), fabs(res5[2])))
    tol = max(SHOCK_TOL, 1e-15 / fabs(alpha))
    for it in range(1, MAX_ITER + 1):
        rr = rho + alpha * w0
        vv = v + alpha * w1
        _jac(rr, vv, gamma, a, tau, jc)
        _eig(k, rr, vv, gamma, a, tau, e)
        m[0] = s * jc[0] - jc[2]
        m[1] = s * jc[1] - jc[3]
        m[2] = (res5[3] - gl[0]) / alpha
        m[3] = -jc[4]
        m[4] = s - jc[5]
        m[5] = (res5[4] - gl[1]) / alpha
        m[6] = e[3]
        m[7] = e[4]
        m[8] = 0.0
        rhs[0] = -res5[0]
        rhs[1] = -res5[1]
        rhs[2] = -res5[2]
        _solve3(m, rhs, d)
        step = 1.0
        ok = 0
        for ls in range(30):
            try:
                _shock_res(k, alpha, w0 + step * d[0], w1 + step * d[1],
                           s + step * d[2], rho, v, gl, laml, gamma, a, tau,
                           t5)
            except DomainError:
                step *= 0.5
                continue
            nres = max(fabs(t5[0]), max(fabs(t5[1]), fabs(t5[2])))
            if nres < res or nres < tol:
                ok = 1
                break
            step *= 0.5
        if not ok:
            if res < 10.0 * tol:
                out[0] = rho + alpha * w0
                out[1] = v + alpha * w1
                out[2] = s
                out[3] = it
                return 0
            raise ConvergenceError("shock line search failed")
        w0 += step * d[0]
        w1 += step * d[1]
        s += step * d[2]
        res5[0] = t5[0]
        res5[1] = t5[1]
        res5[2] = t5[2]
        res5[3] = t5[3]
        res5[4] = t5[4]
        res = nres
        if (res < tol or (step < 1.0 and res < 100.0 * tol)
                or max(fabs(step * d[0]), max(fabs(step * d[1]),
                                             fabs(step * d[2]))) < 1e-13):
            out[0] = rho + alpha * w0
            out[1] = v + alpha * w1
            out[2] = s
            out[3] = it
            return 0
    raise ConvergenceError("Rankine-Hugoniot corrector did not converge")


cdef int _curve(int k, double alpha, double rho, double v, double gamma,
                double a, double tau, double* out) except -1:
    # out = (rho, v, speed)
    cdef double e[5]
    cdef double sh[4]
    if alpha >= 0.0:
        _rarefaction(k, alpha, rho, v, gamma, a, tau, out)
        _eig(k, out[0], out[1], gamma, a, tau, e)
        out[2] = e[0]
        return 0
    _shock(k, alpha, rho, v, gamma, a, tau, sh)
    out[0] = sh[0]
    out[1] = sh[1]
    out[2] = sh[2]
    return 0


cdef int _compose(double a1, double a2, double rl, double vl, double gamma,
                  double a, double tau, double* out) except -1:
    cdef double t[3]
    _curve(1, a1, rl, vl, gamma, a, tau, t)
    _curve(2, a2, t[0], t[1], gamma, a, tau, out)
    return 0


cdef double _slip(double rho, double v, double theta, double gamma, double a,
                  double tau) except? -1e300:
    cdef double u
    _axial(rho, v, gamma, a, tau, &u)
    return (1.0 + tau * tau * u) * sin(theta) - v * cos(theta)


def axial_velocity(double rho, double v, double gamma, double a, double tau):
    """Closed-form axial perturbation ``u`` from the Bernoulli relation."""
    cdef double u
    _axial(rho, v, gamma, a, tau, &u)
    return u


def fluxes(double rho, double v, double gamma, double a, double tau):
    """Return ``(G0, G1, F0, F1)``."""
    cdef double f[4]
    _fluxes(rho, v, gamma, a, tau, f)
    return f[0], f[1], f[2], f[3]


def jacobians(double rho, double v, double gamma, double a, double tau):
    """Return ``(g00, g01, f00, f01, f10, f11)``."""
    cdef double j[6]
    _jac(rho, v, gamma, a, tau, j)
    return j[0], j[1], j[2], j[3], j[4], j[5]


def eigenvalues(double rho, double v, double gamma, double a, double tau):
    """Return ``(lambda_1, lambda_2)``."""
    cdef double e1[5]
    cdef double e2[5]
    _eig(1, rho, v, gamma, a, tau, e1)
    _eig(2, rho, v, gamma, a, tau, e2)
    return e1[0], e2[0]


def grad_lambda(int k, double rho, double v, double gamma, double a,
                double tau):
    """Exact gradient of ``lambda_k``."""
    cdef double e[5]
    _eig(k, rho, v, gamma, a, tau, e)
    return e[3], e[4]


def eigen(int k, double rho, double v, double gamma, double a, double tau):
    """Return ``(lambda_k, r0, r1)`` with ``grad(lambda_k) . r = 1``."""
    cdef double e[3]
    _eigen_n(k, rho, v, gamma, a, tau, e)
    return e[0], e[1], e[2]


def rarefaction(int k, double alpha, double rho, double v, double gamma,
                double a, double tau):
    """RK4 integral-curve point."""
    cdef double o[2]
    _rarefaction(k, alpha, rho, v, gamma, a, tau, o)
    return o[0], o[1]


def shock(int k, double alpha, double rho, double v, double gamma, double a,
          double tau):
    """Hugoniot point ``(rho_R, v_R, s, iterations)``."""
    cdef double o[4]
    _shock(k, alpha, rho, v, gamma, a, tau, o)
    return o[0], o[1], o[2], int(o[3])


def curve(int k, double alpha, double rho, double v, double gamma, double a,
          double tau):
    """Wave-curve point ``(rho, v, speed)``."""
    cdef double o[3]
    _curve(k, alpha, rho, v, gamma, a, tau, o)
    return o[0], o[1], o[2]


def interior(double rl, double vl, double rr, double vr, double gamma,
             double a, double tau):
    """Strengths ``(alpha1, alpha2, iterations)`` joining ``U_L`` to ``U_R``."""
    cdef double p[3]
    cdef double q[3]
    cdef double x[2]
    cdef double y[2]
    cdef double z[2]
    cdef double t[2]
    cdef double d0, d1, det, a1, a2, e0, e1, res, nres, step
    cdef double m00, m01, m10, m11
    cdef int it, ls, ok
    _eigen_n(1, rl, vl, gamma, a, tau, p)
    _eigen_n(2, rl, vl, gamma, a, tau, q)
    d0 = rr - rl
    d1 = vr - vl
    det = p[1] * q[2] - q[1] * p[2]
    a1 = (d0 * q[2] - q[1] * d1) / det
    a2 = (p[1] * d1 - p[2] * d0) / det
    _compose(a1, a2, rl, vl, gamma, a, tau, x)
    e0 = x[0] - rr
    e1 = x[1] - vr
    res = max(fabs(e0), fabs(e1))
    for it in range(1, MAX_ITER + 1):
        if res < STATE_TOL:
            return a1, a2, it - 1
        _compose(a1 + FD_STEP, a2, rl, vl, gamma, a, tau, y)
        _compose(a1, a2 + FD_STEP, rl, vl, gamma, a, tau, z)
        m00 = (y[0] - x[0]) / FD_STEP
        m10 = (y[1] - x[1]) / FD_STEP
        m01 = (z[0] - x[0]) / FD_STEP
        m11 = (z[1] - x[1]) / FD_STEP
        det = m00 * m11 - m01 * m10
        d0 = -(e0 * m11 - m01 * e1) / det
        d1 = -(m00 * e1 - m10 * e0) / det
        step = 1.0
        ok = 0
        for ls in range(30):
            try:
                _compose(a1 + step * d0, a2 + step * d1, rl, vl, gamma, a,
                         tau, t)
            except (DomainError, ConvergenceError):
                step *= 0.5
                continue
            nres = max(fabs(t[0] - rr), fabs(t[1] - vr))
            if nres < res or nres < STATE_TOL:
                ok = 1
                break
            step *= 0.5
        if not ok:
            raise ConvergenceError("interior Riemann line search failed")
        a1 += step * d0
        a2 += step * d1
        x[0] = t[0]
        x[1] = t[1]
        e0 = x[0] - rr
        e1 = x[1] - vr
        if fabs(step * d0) + fabs(step * d1) < 1e-16:
            return a1, a2, it
        res = max(fabs(e0), fabs(e1))
    if res < 1e-11:
        return a1, a2, MAX_ITER
    raise ConvergenceError("interior Riemann solver did not converge")


def slip(double rho, double v, double theta, double gamma, double a,
         double tau):
    """Flow-tangency residual ``w sin(theta) - v cos(theta)``."""
    return _slip(rho, v, theta, gamma, a, tau)


def boundary(double rl, double vl, double theta, double gamma, double a,
             double tau):
    """Strength ``(alpha1, iterations)`` of the 1-wave restoring slip."""
    cdef double st = sin(theta)
    cdef double ct = cos(theta)
    cdef double lres, u, w, p, t2, dl, a1, res, nres, der, d, step
    cdef double en[3]
    cdef double o[3]
    cdef int it, ls, ok
    lres = _slip(rl, vl, theta, gamma, a, tau)
    if fabs(lres) < SLIP_TOL:
        return 0.0, 0
    _axial(rl, vl, gamma, a, tau, &u)
    w = 1.0 + tau * tau * u
    p = pow(rl, gamma - 2.0)
    t2 = tau * tau
    _eigen_n(1, rl, vl, gamma, a, tau, en)
    dl = t2 * (-p / (a * a * w)) * st * en[1] + (t2 * (-vl / w) * st - ct) * en[2]
    a1 = -lres / dl
    _curve(1, a1, rl, vl, gamma, a, tau, o)
    res = _slip(o[0], o[1], theta, gamma, a, tau)
    for it in range(1, MAX_ITER + 1):
        if fabs(res) < SLIP_TOL:
            return a1, it
        _curve(1, a1 + FD_STEP, rl, vl, gamma, a, tau, o)
        der = (_slip(o[0], o[1], theta, gamma, a, tau) - res) / FD_STEP
        d = -res / der
        step = 1.0
        ok = 0
        for ls in range(30):
            try:
                _curve(1, a1 + step * d, rl, vl, gamma, a, tau, o)
                nres = _slip(o[0], o[1], theta, gamma, a, tau)
            except (DomainError, ConvergenceError):
                step *= 0.5
                continue
            if fabs(nres) < fabs(res) or fabs(nres) < SLIP_TOL:
                ok = 1
                break
            step *= 0.5
        if not ok:
            raise ConvergenceError("boundary line search failed")
        a1 += step * d
        res = nres
        if fabs(step * d) < 1e-17:
            return a1, it
    if fabs(res) < 1e-12:
        return a1, MAX_ITER
    raise ConvergenceError("boundary Riemann solver did not converge")
