"""Closed-form bounds on the GIG jump density and acceptance rates.

The integral part of the jump density,

    Q(x) = (2 e^(-x gamma_p^2/2) / (pi^2 x))
           * integral_0^inf e^(-z^2 x/(2 delta^2)) / (z |H_nu(z)|^2) dz,

is sandwiched by replacing z |H_nu(z)|^2 with piecewise power bounds.
With s = z^2 x / (2 delta^2) both replacements integrate in closed form
through incomplete gamma functions, giving computable two-sided bounds
for every x > 0.  The same substitution bounds the acceptance rate of
the one-envelope sampler from both sides.

A slow adaptive-quadrature reference for Q(x) is kept alongside as an
independent check; it shares no code path with the closed forms.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, QuadratureError
from .gig import GigParams, corner_point, natural_corner
from .kernels import gammafn, gammainc_p, gammainc_q, hankel_sq

__all__ = [
    "q_gig_reference",
    "simple_bound",
    "q_a",
    "q_b",
    "q_b_optimized",
    "rho_bounds_high",
    "rho_bounds_low",
    "BoundTable",
    "bound_table",
]

_SQRT_PI = math.sqrt(math.pi)


def _require_integral_part(params: GigParams):
    if params.delta == 0.0:
        raise ParameterError("bounds require delta > 0")


def _gamma_term(params: GigParams, x):
    """Exact additive component lam e^(-x gamma_p^2/2)/x, zero for lam < 0.

    Added identically to the reference and to every bound so all of
    them describe the full jump density and their ordering is kept.
    """
    if params.lam <= 0.0:
        return np.zeros_like(np.asarray(x, dtype=np.float64))
    x = np.asarray(x, dtype=np.float64)
    return params.lam * np.exp(-0.5 * params.gamma_p**2 * x) / x


def _lower_upper_terms(nu: float, s: float, zc: float, beta: float):
    """Common closed form: integral of e^(-beta z^2) against the piecewise
    power weight (z/zc)^(2 nu - 1) below zc and 1 above it equals
    gamma(nu, s)/(2 zc^(2nu-1) beta^nu) + Gamma(1/2, s)/(2 sqrt(beta))
    with s = beta zc^2."""
    head = gammainc_p(nu, s) * gammafn(nu) / (2.0 * zc ** (2.0 * nu - 1.0) * beta**nu)
    tail = gammainc_q(0.5, s) * _SQRT_PI / (2.0 * math.sqrt(beta))
    return float(head), float(tail)


def simple_bound(params: GigParams, x):
    """Crude upper bound delta Gamma(1/2) e^(-x gamma_p^2/2) / (sqrt(2) pi x^(3/2)).

    Comes from z |H_nu(z)|^2 >= 2/pi applied on the whole axis; an
    upper bound for nu >= 1/2 where that floor holds, and equal to both
    refined bounds at nu = 1/2.  The exact gamma term is included for
    lam > 0, as in every other bound here.
    """
    _require_integral_part(params)
    x = np.asarray(x, dtype=np.float64)
    pref = params.delta * _SQRT_PI / (math.sqrt(2.0) * math.pi)
    out = pref * np.exp(-0.5 * params.gamma_p**2 * x) * x**-1.5
    return out + _gamma_term(params, x)


def q_a(params: GigParams, x) -> np.ndarray:
    """Corner-pinned bound on Q(x) built from the exact crossing point.

    Replaces z |H_nu(z)|^2 by (2/pi)(z/z1)^(1-2 nu) below the natural
    corner z1 and by 2/pi above it.  For nu < 1/2 this is a lower bound
    on Q, for nu > 1/2 an upper bound; at nu = 1/2 it equals Q exactly.
    """
    _require_integral_part(params)
    nu = params.nu
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0.0):
        raise ParameterError("x must be positive")
    z1 = natural_corner(nu)
    out = np.empty(x.shape)
    flat = x.reshape(-1)
    res = out.reshape(-1)
    for i, xi in enumerate(flat):
        beta = xi / (2.0 * params.delta**2)
        s1 = beta * z1 * z1
        head, tail = _lower_upper_terms(nu, s1, z1, beta)
        res[i] = (head + tail) / (math.pi * xi)
    out *= np.exp(-0.5 * params.gamma_p**2 * x)
    out += _gamma_term(params, x)
    return out if out.ndim else float(out)


def q_b(params: GigParams, x, z0: float | None = None) -> np.ndarray:
    """Corner-slid bound on Q(x) from the one-sided Hankel bound at z0.

    Replaces z |H_nu(z)|^2 by H0 (z/z0)^(1-2 nu) below z0 and by H0
    above it, H0 = z0 |H_nu(z0)|^2.  For nu < 1/2 this is an upper
    bound on Q, for nu > 1/2 a lower bound; z0 defaults to the natural
    corner and can be slid to tighten the bound at a given x.
    """
    _require_integral_part(params)
    nu = params.nu
    corner = corner_point(nu, z0)
    z0v, H0 = corner.z0, corner.H0
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0.0):
        raise ParameterError("x must be positive")
    out = np.empty(x.shape)
    flat = x.reshape(-1)
    res = out.reshape(-1)
    for i, xi in enumerate(flat):
        beta = xi / (2.0 * params.delta**2)
        s0 = beta * z0v * z0v
        head, tail = _lower_upper_terms(nu, s0, z0v, beta)
        res[i] = 2.0 * (head + tail) / (math.pi**2 * xi * H0)
    out *= np.exp(-0.5 * params.gamma_p**2 * x)
    out += _gamma_term(params, x)
    return out if out.ndim else float(out)


def _golden_minimize(f, lo: float, hi: float, tol: float = 1e-6, coarse: int = 32):
    """Golden-section minimum of f over [lo, hi] after a coarse scan.

    Returns (t_star, f_star, hit_boundary)."""
    ts = np.linspace(lo, hi, coarse)
    vals = [f(t) for t in ts]
    k = int(np.argmin(vals))
    a = ts[max(k - 1, 0)]
    b = ts[min(k + 1, coarse - 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    t_star = 0.5 * (a + b)
    hit = k == 0 or k == coarse - 1
    return t_star, f(t_star), hit


def q_b_optimized(params: GigParams, x: float):
    """Tightest corner-slid bound at a single x, optimising over z0.

    Minimises q_b for nu < 1/2 (upper bound) and maximises it for
    nu > 1/2 (lower bound), searching log z0 within 1e-4 .. 1e4 times
    the natural corner.  Returns (value, z0_star).  Warns if the
    optimum lands on the search boundary.
    """
    _require_integral_part(params)
    x = float(x)
    if not x > 0.0:
        raise ParameterError(f"x must be positive, got {x}")
    nu = params.nu
    z1 = natural_corner(nu)
    if abs(nu - 0.5) < 1e-12:
        return float(q_b(params, x, z1)), z1
    if float(q_b(params, x, z1)) == 0.0:
        # the x-prefactor underflowed: the bound is zero for every z0
        # and a search would only wander to an arbitrary boundary
        return 0.0, z1
    sign = 1.0 if nu < 0.5 else -1.0

    def objective(t: float) -> float:
        return sign * float(q_b(params, x, math.exp(t)))

    lo = math.log(z1) + math.log(1e-4)
    hi = math.log(z1) + math.log(1e4)
    t_star, f_star, hit = _golden_minimize(objective, lo, hi)
    if hit:
        warnings.warn(
            "q_b_optimized: optimum at the edge of the z0 search range",
            RuntimeWarning,
        )
    return sign * f_star, math.exp(t_star)


def q_gig_reference(params: GigParams, x: float, rel_tol: float = 1e-8) -> float:
    """Adaptive-quadrature reference for Q(x), independent of the bounds.

    The z-integral is split at z = 1.  On (0, 1) the substitution
    u = z^(2 nu) removes the integrable singularity when nu < 1/2 (for
    nu >= 1/2 there is none and the integration stays in z); both forms
    are split again at the Gaussian cutoff when beta = x/(2 delta^2) is
    large.  The tail is integrated directly, split at 6/sqrt(beta) when
    the Gaussian factor decays slowly.  Raises QuadratureError when the
    achieved relative error estimate exceeds rel_tol.
    """
    from scipy.integrate import quad

    _require_integral_part(params)
    x = float(x)
    if not x > 0.0:
        raise ParameterError(f"x must be positive, got {x}")
    nu = params.nu
    beta = x / (2.0 * params.delta**2)

    def head(u: float) -> float:
        z = u ** (1.0 / (2.0 * nu))
        return math.exp(-beta * z * z) / (2.0 * nu * u * float(hankel_sq(nu, z)))

    def tail(z: float) -> float:
        return math.exp(-beta * z * z) / (z * float(hankel_sq(nu, z)))

    total = 0.0
    err = 0.0
    # The Gaussian factor cuts off at z = 1/sqrt(beta); for large beta
    # that sits below the coarse rule's nodes, so split there.  The
    # u-substitution is only needed for nu < 1/2 (where z^(2 nu - 1) is
    # singular); for nu >= 1/2 the raw integrand vanishes at 0 and the
    # substitution would smear the cutoff over decades, so integrate in
    # z directly.
    if nu < 0.5:
        fn = head
        cut = beta**-nu if beta > 1.0 else 1.0
    else:
        fn = tail
        cut = 1.0 / math.sqrt(beta) if beta > 1.0 else 1.0
    head_spans = [(0.0, cut), (cut, 1.0)] if cut < 1.0 else [(0.0, 1.0)]
    for a, b in head_spans:
        res = quad(
            fn, a, b,
            epsabs=1e-12 * max(total, 1e-300) if total else 0.0,
            epsrel=1e-10,
            limit=300,
            full_output=1,
        )
        total += res[0]
        err += res[1]
    zc = 6.0 / math.sqrt(beta)
    spans = [(1.0, zc), (zc, np.inf)] if zc > 1.0 else [(1.0, np.inf)]
    for a, b in spans:
        # later pieces may be negligible; give them an absolute floor tied
        # to what is already accumulated so QUADPACK can terminate
        res = quad(
            tail, a, b,
            epsabs=1e-12 * max(total, 1e-300),
            epsrel=1e-10,
            limit=300,
            full_output=1,
        )
        total += res[0]
        err += res[1]
    if not total > 0.0 or err > rel_tol * total:
        raise QuadratureError(
            f"reference quadrature achieved {err / max(total, 1e-300):.2e} "
            f"relative error, requested {rel_tol:.2e}"
        )
    q = 2.0 * math.exp(-0.5 * params.gamma_p**2 * x) * total / (math.pi**2 * x)
    if params.lam > 0.0:
        q += params.lam * math.exp(-0.5 * params.gamma_p**2 * x) / x
    return q


def rho_bounds_high(params: GigParams, x: float, z0: float | None = None):
    """Two-sided bounds on the one-envelope acceptance rate, nu > 1/2.

    The acceptance rate at jump size x is
    rho(x) = E[2/(pi z |H_nu(z)|^2)] with z^2 ~ Gamma(1/2, x/(2 delta^2)).
    The upper bound pins the corner at z1 and is exact there; the lower
    bound holds for any corner z0 and is optimised over z0 when z0 is
    None.  Returns (lower, upper).
    """
    _require_integral_part(params)
    nu = params.nu
    if nu <= 0.5:
        raise ParameterError("rho_bounds_high requires |lam| > 1/2")
    x = float(x)
    if not x > 0.0:
        raise ParameterError(f"x must be positive, got {x}")
    beta = x / (2.0 * params.delta**2)

    z1 = natural_corner(nu)
    s1 = beta * z1 * z1
    upper = (
        s1 ** (0.5 - nu) * gammainc_p(nu, s1) * gammafn(nu)
        + gammainc_q(0.5, s1) * _SQRT_PI
    ) / _SQRT_PI

    def lower_at(z: float) -> float:
        c = corner_point(nu, z)
        s0 = beta * c.z0 * c.z0
        val = (
            s0 ** (0.5 - nu) * gammainc_p(nu, s0) * gammafn(nu)
            + gammainc_q(0.5, s0) * _SQRT_PI
        ) / _SQRT_PI
        return 2.0 * val / (math.pi * c.H0)

    if z0 is not None:
        lower = lower_at(float(z0))
    else:
        t_star, neg, hit = _golden_minimize(
            lambda t: -lower_at(math.exp(t)),
            math.log(z1) + math.log(1e-3),
            math.log(z1) + math.log(1e3),
        )
        if hit:
            warnings.warn(
                "rho_bounds_high: optimum at the edge of the z0 search range",
                RuntimeWarning,
            )
        lower = -neg
    return float(lower), float(upper)


def rho_bounds_low(params: GigParams, z0: float | None = None):
    """Per-region acceptance floors for the split sampler, nu < 1/2.

    Returns (rho1, rho2): below-corner acceptance is at least
    H0 z0^(2 nu - 1) pi^2 / (2^(2 nu) Gamma(nu)^2) and above-corner
    acceptance at least pi H0 / 2, pointwise in z and independent of x.
    Derived with z0 at or below the natural corner (the default).
    """
    _require_integral_part(params)
    nu = params.nu
    if nu >= 0.5:
        raise ParameterError("rho_bounds_low requires |lam| < 1/2")
    corner = corner_point(nu, z0)
    z0v, H0 = corner.z0, corner.H0
    rho1 = (
        H0
        * z0v ** (2.0 * nu - 1.0)
        * math.pi**2
        / (2.0 ** (2.0 * nu) * float(gammafn(nu)) ** 2)
    )
    rho2 = 0.5 * math.pi * H0
    return float(rho1), float(rho2)


@dataclass
class BoundTable:
    """Sandwich of Q(x) on a grid: bounds, optimal corners, reference."""

    x: np.ndarray
    qa: np.ndarray
    qb_star: np.ndarray
    z0_star: np.ndarray
    simple: np.ndarray
    q_ref: np.ndarray

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "qa", "qb_star", "z0_star", "simple", "q_ref"])
            for row in zip(
                self.x, self.qa, self.qb_star, self.z0_star, self.simple, self.q_ref
            ):
                w.writerow([f"{v:.17g}" for v in row])


def bound_table(params: GigParams, xs, with_reference: bool = True) -> BoundTable:
    """Evaluate the full bound sandwich on a grid of jump sizes."""
    xs = np.asarray(xs, dtype=np.float64).reshape(-1)
    qa_v = np.asarray(q_a(params, xs), dtype=np.float64)
    qb_v = np.empty(xs.size)
    z0_v = np.empty(xs.size)
    for i, xi in enumerate(xs):
        qb_v[i], z0_v[i] = q_b_optimized(params, float(xi))
    simple_v = np.asarray(simple_bound(params, xs), dtype=np.float64)
    if with_reference:
        ref_v = np.array([q_gig_reference(params, float(xi)) for xi in xs])
    else:
        ref_v = np.full(xs.size, np.nan)
    return BoundTable(xs, qa_v, qb_v, z0_v, simple_v, ref_v)
