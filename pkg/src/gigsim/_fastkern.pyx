# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels.

Scalar cores of the routines in _purekern, compiled and looped over
contiguous float64 arrays.  Algorithms, branch cutoffs and accuracy
targets are identical to the pure numpy fallback; see _purekern for the
reference implementation and commentary.
"""

from libc.math cimport (cos, cosh, exp, fabs, lgamma as c_lgamma, log,
                        log1p, round as c_round, sin, sinh, sqrt)

import numpy as np

cdef double EPS = 1.0e-16
cdef double FPMIN = 1.0e-290
cdef double XMIN_TEMME = 2.0
cdef double XASYM = 20.0
cdef int MAXIT = 800
cdef double PI = 3.141592653589793
cdef double TWO_PI_HI = 6.283185307179586
cdef double TWO_PI_LO = 2.449293598294706354452e-16
cdef double PI_LO = 1.224646799147353177226e-16
cdef double SPLIT = 134217729.0  # 2^27 + 1


cdef inline double _recip_gamma1p_odd(double m2):
    # odd part of the Maclaurin series of 1/Gamma(1+z): sum d_k z^(k-1), k odd
    cdef double odd = 0.0000011330272319816959
    odd = odd * m2 - 0.0000201348547807882387
    odd = odd * m2 - 0.0002152416741149509728
    odd = odd * m2 + 0.0072189432466630995424
    odd = odd * m2 - 0.0421977345555443367482
    odd = odd * m2 - 0.0420026350340952355290
    odd = odd * m2 + 0.5772156649015328606065
    return odd


cdef int _temme_pair(double mu, double* gampl, double* gammi,
                     double* gam1, double* gam2) except -1:
    gampl[0] = exp(-c_lgamma(1.0 + mu))
    gammi[0] = exp(-c_lgamma(1.0 - mu))
    if fabs(mu) < 0.25:
        gam1[0] = -_recip_gamma1p_odd(mu * mu)
    else:
        gam1[0] = (gammi[0] - gampl[0]) / (2.0 * mu)
    gam2[0] = 0.5 * (gammi[0] + gampl[0])
    return 0


cdef int _cf1_one(double nu, double x, double* f_out, int* isign_out) except -1:
    cdef double xi = 1.0 / x
    cdef double f = nu * xi
    cdef double c, d, b, delt
    cdef int i, isign = 1
    if fabs(f) < FPMIN:
        f = FPMIN
    c = f
    d = 0.0
    for i in range(1, MAXIT + 1):
        b = 2.0 * (nu + i) * xi
        d = b - d
        if fabs(d) < FPMIN:
            d = FPMIN
        c = b - 1.0 / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delt = c * d
        f = f * delt
        if d < 0.0:
            isign = -isign
        if fabs(delt - 1.0) < EPS:
            break
    else:
        raise RuntimeError("bessel CF1 failed to converge")
    f_out[0] = f
    isign_out[0] = isign
    return 0


cdef int _jy_one(double nu, double x, double* jout, double* yout) except -1:
    cdef int nl, i, isign, k, m, j
    cdef double mu, xi, f, seed, rjl, rjpl, rjtemp, fact, fmu
    cdef double gampl, gammi, gam1, gam2
    cdef double x2, pimu, tfact, d, e, fact2, ff, ee, p, q, pimu2, fact3, r
    cdef double cc, dd, total, total1, delt, delt1
    cdef double w, ymu, ymu1, ymup, rjmu, a, b, newb
    cdef double gam
    cdef double complex lc, ld, lf, ldelt, bk
    cdef double ak

    if x < XMIN_TEMME:
        nl = <int>(nu + 0.5)
    else:
        nl = <int>(nu - x + 1.5)
        if nl < 0:
            nl = 0
    mu = nu - nl
    xi = 1.0 / x

    _cf1_one(nu, x, &f, &isign)

    # downward recurrence of (J, J') from nu to mu, unnormalized
    seed = FPMIN
    rjl = seed
    rjpl = f * rjl
    fact = nu * xi
    for i in range(nl):
        rjtemp = fact * rjl + rjpl
        fact = fact - xi
        rjpl = fact * rjtemp - rjl
        rjl = rjtemp
    if rjl == 0.0:
        rjl = EPS
    fmu = rjpl / rjl
    w = 2.0 / (PI * x)

    if x < XMIN_TEMME:
        # Temme's series for Y_mu, Y_{mu+1}
        _temme_pair(mu, &gampl, &gammi, &gam1, &gam2)
        x2 = 0.5 * x
        pimu = PI * mu
        if fabs(pimu) < 1e-15:
            tfact = 1.0
        else:
            tfact = pimu / sin(pimu)
        d = -log(x2)
        e = mu * d
        if fabs(e) < 1e-15:
            fact2 = 1.0
        else:
            fact2 = sinh(e) / e
        ff = (2.0 / PI) * tfact * (gam1 * cosh(e) + gam2 * fact2 * d)
        ee = exp(e)
        p = ee / (gampl * PI)
        q = 1.0 / (ee * PI * gammi)
        pimu2 = 0.5 * pimu
        if fabs(pimu2) < 1e-15:
            fact3 = 1.0
        else:
            fact3 = sin(pimu2) / pimu2
        r = PI * pimu2 * fact3 * fact3
        cc = 1.0
        dd = -x2 * x2
        total = ff + r * q
        total1 = p
        for i in range(1, MAXIT + 1):
            ff = (i * ff + p + q) / (i * i - mu * mu)
            cc = cc * (dd / i)
            p = p / (i - mu)
            q = q / (i + mu)
            delt = cc * (ff + r * q)
            total = total + delt
            delt1 = cc * p - i * delt
            total1 = total1 + delt1
            if fabs(delt) < (1.0 + fabs(total)) * EPS:
                break
        else:
            raise RuntimeError("bessel Temme series failed to converge")
        ymu = -total
        ymu1 = -total1 * (2.0 / x)
        ymup = (mu / x) * ymu - ymu1
        rjmu = w / (ymup - fmu * ymu)
        jout[0] = seed * (rjmu / rjl)
    else:
        # CF2 at order mu: p + iq = (J' + iY')/(J + iY)
        lc = FPMIN
        ld = 0.0
        lf = FPMIN
        for k in range(1, MAXIT + 1):
            ak = (k - 0.5) * (k - 0.5) - mu * mu
            bk = 2.0 * x + 2.0j * k
            ld = bk + ak * ld
            if ld == 0.0:
                ld = FPMIN
            lc = bk + ak / lc
            if lc == 0.0:
                lc = FPMIN
            ld = 1.0 / ld
            ldelt = lc * ld
            lf = lf * ldelt
            if fabs(ldelt.real - 1.0) + fabs(ldelt.imag) < EPS:
                break
        else:
            raise RuntimeError("bessel CF2 failed to converge")
        lf = (-0.5 / x + 1.0j) + (1.0j / x) * lf
        p = lf.real
        q = lf.imag
        gam = (p - fmu) / q
        rjmu = sqrt(w / ((p - fmu) * gam + q))
        if rjl * isign < 0.0:
            rjmu = -rjmu
        ymu = rjmu * gam
        ymup = ymu * p + rjmu * q
        ymu1 = (mu / x) * ymu - ymup
        jout[0] = seed * (rjmu / rjl)

    if nl == 0:
        yout[0] = ymu
        return 0
    a = ymu
    b = ymu1
    for i in range(1, nl):
        newb = (2.0 * (mu + i) * xi) * b - a
        a = b
        b = newb
    yout[0] = b
    return 0


cdef int _asym_pq_one(double nu, double x, double* pp, double* qq) except -1:
    cdef double mu4 = 4.0 * nu * nu
    cdef double p = 1.0, q = 0.0, c = 1.0, cn, term
    cdef int j, k, m
    for j in range(1, 46):
        cn = c * (mu4 - (2.0 * j - 1.0) * (2.0 * j - 1.0)) / (8.0 * x * j)
        if fabs(cn) > fabs(c):
            break  # truncate at the smallest term
        if j % 2 == 1:
            k = (j - 1) // 2
            term = cn if k % 2 == 0 else -cn
            q = q + term
        else:
            m = j // 2
            term = cn if m % 2 == 0 else -cn
            p = p + term
        c = cn
        if fabs(c) < 1e-17:
            break
    pp[0] = p
    qq[0] = q
    return 0


cdef inline void _two_prod(double a, double b, double* hi, double* lo):
    cdef double pr = a * b
    cdef double ah = a * SPLIT - (a * SPLIT - a)
    cdef double al = a - ah
    cdef double bh = b * SPLIT - (b * SPLIT - b)
    cdef double bl = b - bh
    hi[0] = pr
    lo[0] = ((ah * bh - pr) + ah * bl + al * bh) + al * bl


cdef int _jy_asym_one(double nu, double x, double* jout, double* yout) except -1:
    cdef double pp, qq, n, p1, e1, rem, chi, p2, e2, omega, fac, co, si
    _asym_pq_one(nu, x, &pp, &qq)
    n = c_round(x / TWO_PI_HI)
    _two_prod(n, TWO_PI_HI, &p1, &e1)
    rem = (x - p1) - (e1 + n * TWO_PI_LO)
    chi = 0.5 * nu + 0.25
    _two_prod(chi, PI, &p2, &e2)
    omega = (rem - p2) - (e2 + chi * PI_LO)
    fac = sqrt(2.0 / (PI * x))
    co = cos(omega)
    si = sin(omega)
    jout[0] = fac * (pp * co - qq * si)
    yout[0] = fac * (pp * si + qq * co)
    return 0


def bessel_jy(double nu, double[::1] x):
    cdef Py_ssize_t n = x.shape[0], i
    jarr = np.empty(n, dtype=np.float64)
    yarr = np.empty(n, dtype=np.float64)
    cdef double[::1] jv = jarr
    cdef double[::1] yv = yarr
    cdef double jj = 0.0, yy = 0.0
    for i in range(n):
        if x[i] >= XASYM:
            _jy_asym_one(nu, x[i], &jj, &yy)
        else:
            _jy_one(nu, x[i], &jj, &yy)
        jv[i] = jj
        yv[i] = yy
    return jarr, yarr


def hankel_sq(double nu, double[::1] x):
    cdef Py_ssize_t n = x.shape[0], i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double jj = 0.0, yy = 0.0, pp = 0.0, qq = 0.0
    for i in range(n):
        if x[i] >= XASYM:
            # modulus needs no phase: |H|^2 = (2/(pi x))(P^2 + Q^2)
            _asym_pq_one(nu, x[i], &pp, &qq)
            ov[i] = (2.0 / (PI * x[i])) * (pp * pp + qq * qq)
        else:
            _jy_one(nu, x[i], &jj, &yy)
            ov[i] = jj * jj + yy * yy
    return out


def lgamma(double[::1] x):
    cdef Py_ssize_t n = x.shape[0], i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    for i in range(n):
        ov[i] = c_lgamma(x[i])
    return out


def gammafn(double[::1] x):
    cdef Py_ssize_t n = x.shape[0], i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    for i in range(n):
        ov[i] = exp(c_lgamma(x[i]))
    return out


cdef double _gser_p_one(double a, double x) except -1.0:
    cdef double total, delt, ap
    cdef int i
    if x == 0.0:
        return 0.0
    total = 1.0 / a
    delt = total
    ap = a
    for i in range(MAXIT):
        ap += 1.0
        delt = delt * x / ap
        total += delt
        if fabs(delt) < fabs(total) * EPS:
            return total * exp(-x + a * log(x) - c_lgamma(a))
    raise RuntimeError("incomplete gamma series failed to converge")


cdef double _gcf_h_one(double a, double x) except -1.0:
    cdef double b = x + 1.0 - a
    cdef double c = 1.0 / FPMIN
    cdef double d = 1.0 / b
    cdef double h = d, an, delt
    cdef int i
    for i in range(1, MAXIT + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if fabs(d) < FPMIN:
            d = FPMIN
        c = b + an / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delt = d * c
        h *= delt
        if fabs(delt - 1.0) < EPS:
            return h
    raise RuntimeError("incomplete gamma continued fraction failed to converge")


cdef double _p_one(double a, double x) except -1.0:
    if x < a + 1.0:
        return _gser_p_one(a, x)
    return 1.0 - exp(-x + a * log(x) - c_lgamma(a)) * _gcf_h_one(a, x)


cdef double _q_one(double a, double x) except -1.0:
    if x < a + 1.0:
        return 1.0 - _gser_p_one(a, x)
    return exp(-x + a * log(x) - c_lgamma(a)) * _gcf_h_one(a, x)


def gammainc_p(double a, double[::1] x):
    cdef Py_ssize_t n = x.shape[0], i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    for i in range(n):
        ov[i] = _p_one(a, x[i])
    return out


def gammainc_q(double a, double[::1] x):
    cdef Py_ssize_t n = x.shape[0], i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    for i in range(n):
        ov[i] = _q_one(a, x[i])
    return out


def upper_gamma_scaled(double a, double[::1] x):
    cdef Py_ssize_t n = x.shape[0], i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double ga = exp(c_lgamma(a))
    for i in range(n):
        if x[i] < a + 1.0:
            ov[i] = exp(x[i]) * ga * (1.0 - _gser_p_one(a, x[i]))
        else:
            ov[i] = exp(a * log(x[i])) * _gcf_h_one(a, x[i])
    return out


cdef double _norm_ppf_crude_one(double p):
    cdef double pp = p if p < 0.5 else 1.0 - p
    cdef double t, x
    if pp < 1e-300:
        pp = 1e-300
    t = sqrt(-2.0 * log(pp))
    x = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t
    return x if p < 0.5 else -x


cdef double _inv_p_one(double a, double p, double gln) except -1.0:
    cdef double a1 = a - 1.0
    cdef double lna1 = 0.0, afac = 0.0, g, x, t, err, t_, u, step, xn, xs, w3
    cdef int j
    if p == 0.0:
        return 0.0
    if a > 1.0:
        lna1 = log(a1)
        afac = exp(a1 * (lna1 - 1.0) - gln)
        g = _norm_ppf_crude_one(p)
        w3 = 1.0 - 1.0 / (9.0 * a) + g / (3.0 * sqrt(a))
        x = a * w3 * w3 * w3
        if x < 1e-3:
            x = 1e-3
    else:
        t = 1.0 - a * (0.253 + a * 0.12)
        if p < t:
            x = exp(log(p / t) / a)
        else:
            x = 1.0 - log1p(-(p - t) / (1.0 - t))
    for j in range(14):
        xs = x if x > 1e-320 else 1e-320
        err = _p_one(a, xs) - p
        if a > 1.0:
            t_ = afac * exp(-(xs - a1) + a1 * (log(xs) - lna1))
        else:
            t_ = exp(-xs + a1 * log(xs) - gln)
        if t_ == 0.0 or t_ != t_:
            continue
        u = err / t_
        step = u * ((a - 1.0) / xs - 1.0)
        if step > 1.0:
            step = 1.0
        step = u / (1.0 - 0.5 * step)
        xn = xs - step
        if xn <= 0.0:
            x = 0.5 * xs
        else:
            x = xn
        if fabs(step) < 1e-15 * xs:
            break
    return x


def inv_gammainc_p(double a, double[::1] p):
    cdef Py_ssize_t n = p.shape[0], i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double gln = c_lgamma(a)
    for i in range(n):
        ov[i] = _inv_p_one(a, p[i], gln)
    return out


def inv_gammainc_q_log(double a, double[::1] log_q):
    cdef Py_ssize_t n = log_q.shape[0], i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double gln = c_lgamma(a)
    cdef double lqcrit = log(_q_one(a, a + 1.0))
    cdef double lq, x, h, lnq, step, xn
    cdef int j
    for i in range(n):
        lq = log_q[i]
        if lq > lqcrit:
            ov[i] = _inv_p_one(a, 1.0 - exp(lq), gln)
            continue
        x = -lq - gln
        if x < a + 1.5:
            x = a + 1.5
        for j in range(3):
            x = -lq - gln + (a - 1.0) * log(x)
            if x < a + 1.0:
                x = a + 1.0
        for j in range(40):
            h = _gcf_h_one(a, x)
            lnq = a * log(x) + log(h) - x - gln
            step = (lnq - lq) * x * h
            if step > 0.5 * x:
                step = 0.5 * x
            elif step < -0.5 * x:
                step = -0.5 * x
            xn = x + step
            if xn < a + 1.0:
                xn = a + 1.0
            if fabs(xn - x) <= 1e-14 * fabs(x):
                x = xn
                break
            x = xn
        ov[i] = x
    return out
