"""Special functions and square-root-gamma samplers.

Thin public layer over the numeric kernels: Bessel functions of the
first and second kind at real order, the squared Hankel modulus
|H_nu(z)|^2 = J_nu(z)^2 + Y_nu(z)^2, unregularised incomplete gamma
functions, and exact samplers for Z with Z^2 gamma distributed,
optionally truncated to one side of a corner point.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import DegenerateRegionError, ParameterError

__all__ = [
    "bessel_j",
    "bessel_y",
    "hankel_sq",
    "lower_inc_gamma",
    "upper_inc_gamma",
    "upper_inc_gamma_scaled",
    "sample_sqrt_gamma",
    "sample_truncated_sqrt_gamma",
]

# Below this mass a truncated region is numerically empty.
_MASS_FLOOR = 1e-300
_LOG_MASS_FLOOR = float(np.log(_MASS_FLOOR))

bessel_j = kernels.bessel_j
bessel_y = kernels.bessel_y
hankel_sq = kernels.hankel_sq


def lower_inc_gamma(a, x):
    """Unregularised lower incomplete gamma integral of t^(a-1) e^-t on (0, x)."""
    return kernels.gammainc_p(a, x) * kernels.gammafn(a)


def upper_inc_gamma(a, x):
    """Unregularised upper incomplete gamma integral of t^(a-1) e^-t on (x, inf)."""
    return kernels.gammainc_q(a, x) * kernels.gammafn(a)


def upper_inc_gamma_scaled(a, x):
    """exp(x) * upper_inc_gamma(a, x), stable for large x where both factors over/underflow."""
    return kernels.upper_gamma_scaled(a, x)


def _check_shape_rate(shape, rate):
    shape = float(shape)
    if not shape > 0.0:
        raise ParameterError(f"shape must be positive, got {shape}")
    rate = np.asarray(rate, dtype=np.float64)
    if not np.all(rate > 0.0):
        raise ParameterError("rate must be positive")
    return shape, rate


def sample_sqrt_gamma(shape, rate, rng, size=None):
    """Draw Z with Z^2 ~ Gamma(shape, rate).

    rate may be an array, one draw per element; size is only meaningful
    for scalar rate.
    """
    shape, rate = _check_shape_rate(shape, rate)
    if size is not None:
        if rate.ndim != 0:
            raise ParameterError("size is only valid with scalar rate")
        rate = np.broadcast_to(rate, (int(size),))
    g = rng.gamma(shape, 1.0 / rate)
    return np.sqrt(g)


def sample_truncated_sqrt_gamma(shape, rate, region, z0, rng, size=None):
    """Draw Z with Z^2 ~ Gamma(shape, rate) conditioned on one side of z0.

    region is "below" for Z in (0, z0) or "above" for Z in [z0, inf).
    Uses inverse-CDF sampling; the upper tail is inverted in the log
    domain so arbitrarily deep tails stay exact.  Raises
    DegenerateRegionError when the requested region holds less than
    1e-300 of the distribution's mass.
    """
    shape, rate = _check_shape_rate(shape, rate)
    z0 = float(z0)
    if not z0 > 0.0:
        raise ParameterError(f"z0 must be positive, got {z0}")
    if region not in ("below", "above"):
        raise ParameterError(f"region must be 'below' or 'above', got {region!r}")
    scalar = rate.ndim == 0 and size is None
    if size is not None:
        if rate.ndim != 0:
            raise ParameterError("size is only valid with scalar rate")
        rate = np.broadcast_to(rate, (int(size),))
    rate = np.atleast_1d(rate)

    s0 = rate * (z0 * z0)
    u = rng.random(rate.shape)
    if region == "below":
        mass = kernels.gammainc_p(shape, s0)
        if np.any(mass < _MASS_FLOOR):
            raise DegenerateRegionError(
                f"below-region mass under {_MASS_FLOOR:g} for shape={shape}"
            )
        t = kernels.inv_gammainc_p(shape, u * mass)
        # guard: u*mass can underflow to a subnormal whose inversion rounds to 0
        t = np.maximum(t, 5e-324)
    else:
        log_q0 = (
            np.log(kernels.upper_gamma_scaled(shape, s0))
            - s0
            - kernels.lgamma(shape)
        )
        if np.any(log_q0 < _LOG_MASS_FLOOR):
            raise DegenerateRegionError(
                f"above-region mass under {_MASS_FLOOR:g} for shape={shape}"
            )
        log_u = np.log(np.maximum(u, 5e-324))
        t = kernels.inv_gammainc_q_log(shape, log_u + log_q0)
    z = np.sqrt(t / rate)
    if scalar:
        return float(z[0])
    return z
