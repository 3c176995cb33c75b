"""Numeric kernel dispatch.

Selects the compiled extension when it imported cleanly, otherwise the
pure numpy fallback.  Set GIGSIM_PURE=1 in the environment to force the
fallback.  Public functions accept scalars or arrays of any shape and
return matching python floats or float64 arrays; domain validation
happens here once so both backends behave identically.
"""

import os

import numpy as np

from . import _purekern

if os.environ.get("GIGSIM_PURE", "") == "1":
    _impl = _purekern
    BACKEND = "pure"
else:
    try:
        from . import _fastkern as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _purekern
        BACKEND = "pure"


def _as1d(x):
    arr = np.ascontiguousarray(x, dtype=np.float64)
    return arr.reshape(-1), arr.shape, np.isscalar(x) or np.ndim(x) == 0


def _restore(flat, shape, scalar):
    if scalar:
        return float(flat[0])
    return flat.reshape(shape)


def bessel_jy(nu, z):
    """Bessel J_nu(z) and Y_nu(z) for z > 0, nu >= 0."""
    nu = float(nu)
    if nu < 0.0:
        raise ValueError("order must be nonnegative")
    flat, shape, scalar = _as1d(z)
    if flat.size and flat.min() <= 0.0:
        raise ValueError("argument must be positive")
    j, y = _impl.bessel_jy(nu, flat)
    return _restore(j, shape, scalar), _restore(y, shape, scalar)


def bessel_j(nu, z):
    return bessel_jy(nu, z)[0]


def bessel_y(nu, z):
    return bessel_jy(nu, z)[1]


def hankel_sq(nu, z):
    """|H_nu(z)|^2 = J_nu(z)^2 + Y_nu(z)^2 for z > 0, nu >= 0."""
    nu = float(nu)
    if nu < 0.0:
        raise ValueError("order must be nonnegative")
    flat, shape, scalar = _as1d(z)
    if flat.size and flat.min() <= 0.0:
        raise ValueError("argument must be positive")
    return _restore(_impl.hankel_sq(nu, flat), shape, scalar)


def lgamma(x):
    flat, shape, scalar = _as1d(x)
    if flat.size and flat.min() <= 0.0:
        raise ValueError("lgamma requires x > 0")
    return _restore(_impl.lgamma(flat), shape, scalar)


def gammafn(x):
    flat, shape, scalar = _as1d(x)
    if flat.size and flat.min() <= 0.0:
        raise ValueError("gammafn requires x > 0")
    return _restore(_impl.gammafn(flat), shape, scalar)


def _check_ax(a, x, name):
    a = float(a)
    if a <= 0.0:
        raise ValueError("shape must be positive")
    flat, shape, scalar = _as1d(x)
    if flat.size and flat.min() < 0.0:
        raise ValueError(f"{name} requires x >= 0")
    return a, flat, shape, scalar


def gammainc_p(a, x):
    """Regularized lower incomplete gamma P(a, x)."""
    a, flat, shape, scalar = _check_ax(a, x, "gammainc_p")
    return _restore(_impl.gammainc_p(a, flat), shape, scalar)


def gammainc_q(a, x):
    """Regularized upper incomplete gamma Q(a, x)."""
    a, flat, shape, scalar = _check_ax(a, x, "gammainc_q")
    return _restore(_impl.gammainc_q(a, flat), shape, scalar)


def upper_gamma_scaled(a, x):
    """exp(x) Gamma(a, x), unregularized; finite for arbitrarily large x."""
    a, flat, shape, scalar = _check_ax(a, x, "upper_gamma_scaled")
    return _restore(_impl.upper_gamma_scaled(a, flat), shape, scalar)


def inv_gammainc_p(a, p):
    """x such that P(a, x) = p, for p in [0, 1)."""
    a = float(a)
    if a <= 0.0:
        raise ValueError("shape must be positive")
    flat, shape, scalar = _as1d(p)
    if flat.size and (flat.min() < 0.0 or flat.max() >= 1.0):
        raise ValueError("probability must lie in [0, 1)")
    return _restore(_impl.inv_gammainc_p(a, flat), shape, scalar)


def inv_gammainc_q_log(a, log_q):
    """x such that log Q(a, x) = log_q; stable for very negative log_q."""
    a = float(a)
    if a <= 0.0:
        raise ValueError("shape must be positive")
    flat, shape, scalar = _as1d(log_q)
    if flat.size and flat.max() > 0.0:
        raise ValueError("log probability must be <= 0")
    return _restore(_impl.inv_gammainc_q_log(a, flat), shape, scalar)
