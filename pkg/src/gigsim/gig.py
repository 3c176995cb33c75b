"""Shot-noise sampling of GIG subordinator jumps.

The driving jump measure has density

    Q(x) = (2 / (pi^2 x)) e^(-x gamma_p^2 / 2)
           * integral_0^inf e^(-z^2 x / (2 delta^2)) / (z |H_nu(z)|^2) dz
           + (lam > 0 only)  lam e^(-x gamma_p^2 / 2) / x,

with nu = |lam|.  Sampling augments each jump x with the auxiliary
integration variable z: propose x from a dominating series, draw z from
a (possibly truncated) square-root-gamma law, and accept with a ratio
built from two-sided bounds on z |H_nu(z)|^2.

Two regimes:

* nu >= 1/2: z |H_nu(z)|^2 >= 2/pi everywhere, so a single tempered
  1/2-stable series dominates and z is drawn untruncated.
* nu < 1/2: the z-axis is split at a corner point z0.  Below the corner
  the dominating series is either a nu-stable series (only valid when
  gamma_p = 0) or a pair of gamma-process series; above it a tempered
  1/2-stable series (default) or a 1/x^2 series.  z is drawn truncated
  to the matching side of z0.

Every sampler returns an EnvelopeSample recording each proposal, its
auxiliary draw, and its total acceptance probability, so envelope
validity can be audited sample by sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rngs, special
from .errors import ParameterError
from .kernels import gammafn, gammainc_p, gammainc_q, hankel_sq
from .series import (
    JUMP_FLOOR,
    GammaProcessParams,
    JumpSeries,
    TemperedStableParams,
    assign_times,
    gamma_process_proposals,
    generate_epochs,
    sample_stable_jumps,
    temper_jumps,
)

__all__ = [
    "GigParams",
    "CornerPoint",
    "EnvelopeSample",
    "natural_corner",
    "corner_point",
    "levy_density_bivariate",
    "sample_regime_high",
    "sample_regime_low",
    "sample_below_corner",
    "sample_above_corner",
    "add_positive_lambda_gamma_term",
    "sample_gig",
    "sample_gig_terminal",
]

# Euler's constant, for the nu -> 1/2 limit of the corner point.
_EULER = 0.5772156649015328606065

# Sub-stream keys under (seed, path): one per proposal source plus the
# arrival times and the Brownian marks used by the GH layer.
KEY_DIRECT = 0
KEY_BELOW = 1
KEY_ABOVE = 2
KEY_GAMMA_TERM = 3
KEY_TIMES = 4
KEY_MARKS = 5

# Past this value of rate*z0^2 the truncated upper tail holds so little
# mass that the inverse CDF saturates; a one-step hazard approximation
# of the conditional tail is exact to O(1/s) there.
_TAIL_S_SWITCH = 600.0


@dataclass(frozen=True)
class GigParams:
    """Parameters (lam, gamma_p, delta) of the GIG law.

    Density on x > 0 is proportional to
    x^(lam-1) exp(-(gamma_p^2 x + delta^2 / x) / 2).

    lam = 0 is rejected: the auxiliary-variable split is parameterised
    by nu = |lam| > 0.  gamma_p = 0 requires lam < 0 and delta = 0
    requires lam > 0, else the law is not normalisable.
    """

    lam: float
    gamma_p: float
    delta: float

    def __post_init__(self):
        for name in ("lam", "gamma_p", "delta"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ParameterError(f"{name} must be a finite number, got {v!r}")
        if self.lam == 0.0:
            raise ParameterError("lam = 0 is not supported")
        if self.gamma_p < 0.0 or self.delta < 0.0:
            raise ParameterError("gamma_p and delta must be nonnegative")
        if self.gamma_p == 0.0 and self.lam >= 0.0:
            raise ParameterError("gamma_p = 0 requires lam < 0")
        if self.delta == 0.0 and self.lam <= 0.0:
            raise ParameterError("delta = 0 requires lam > 0")

    @property
    def nu(self) -> float:
        return abs(self.lam)


@dataclass(frozen=True)
class CornerPoint:
    """Corner z0 of the piecewise envelope and H0 = z0 |H_nu(z0)|^2."""

    z0: float
    H0: float


@dataclass
class EnvelopeSample:
    """Proposals from one envelope source with their acceptance record.

    source is one of "direct", "below_corner", "above_corner",
    "gamma_term".  x holds every proposal from the dominating series,
    z the auxiliary draws (NaN for the gamma term, which has none),
    accept_prob the proposal's total acceptance probability, and
    accepted the realised coin flips.  dropped counts proposals
    discarded below the representable floor before the auxiliary step.
    """

    source: str
    x: np.ndarray
    z: np.ndarray
    accept_prob: np.ndarray
    accepted: np.ndarray
    dropped: int = 0

    @property
    def jumps(self) -> np.ndarray:
        return self.x[self.accepted]

    def counts(self) -> dict:
        n = int(self.x.size) + self.dropped
        k = int(np.count_nonzero(self.accepted))
        return {
            "proposed": n,
            "accepted": k,
            "rate": (k / n) if n else float("nan"),
        }


def natural_corner(nu: float) -> float:
    """Corner abscissa where the small-z and flat Hankel bounds cross.

    For nu != 1/2 this is (2^(1-2 nu) pi / Gamma(nu)^2)^(1/(1-2 nu));
    the removable limit at nu = 1/2 is e^(-euler)/2.
    """
    if not nu > 0.0:
        raise ParameterError(f"nu must be positive, got {nu}")
    if abs(nu - 0.5) < 1e-12:
        return 0.5 * math.exp(-_EULER)
    lo = (1.0 - 2.0 * nu) * math.log(2.0) + math.log(math.pi) - 2.0 * math.lgamma(nu)
    return math.exp(lo / (1.0 - 2.0 * nu))


def corner_point(nu: float, z0: float | None = None) -> CornerPoint:
    """Resolve the envelope corner: given z0 or the natural default."""
    if z0 is None:
        z0 = natural_corner(nu)
    z0 = float(z0)
    if not z0 > 0.0:
        raise ParameterError(f"z0 must be positive, got {z0}")
    H0 = z0 * float(hankel_sq(nu, z0))
    return CornerPoint(z0=z0, H0=H0)


def levy_density_bivariate(params: GigParams, x, z):
    """Joint jump density in (x, z) for the integral part of Q.

    Integrating over z > 0 recovers the integral term of Q(x); the
    additive gamma term for lam > 0 lives on x alone and is not part of
    this bivariate density.
    """
    if params.delta == 0.0:
        raise ParameterError("bivariate density requires delta > 0")
    x = np.asarray(x, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if np.any(x <= 0.0) or np.any(z <= 0.0):
        raise ParameterError("x and z must be positive")
    nu = params.nu
    beta_x = 0.5 * params.gamma_p**2
    expo = np.exp(-beta_x * x - z * z * x / (2.0 * params.delta**2))
    return 2.0 * expo / (np.pi**2 * x * z * hankel_sq(nu, z))


def _filter_floor(x: np.ndarray):
    keep = x >= JUMP_FLOOR
    return x[keep], int(x.size - np.count_nonzero(keep))


def sample_regime_high(
    params: GigParams, budget: int, rng, horizon: float = 1.0
) -> EnvelopeSample:
    """One-envelope sampler for nu >= 1/2.

    Proposals come from the tempered 1/2-stable series with
    C = delta / sqrt(2 pi) and tempering gamma_p^2 / 2; the auxiliary z
    is a square-root-gamma draw and the acceptance probability
    2 / (pi z |H_nu(z)|^2) is at most one because z |H_nu(z)|^2 >= 2/pi.
    """
    nu = params.nu
    if nu < 0.5:
        raise ParameterError("sample_regime_high requires |lam| >= 1/2")
    if params.delta == 0.0:
        raise ParameterError("sample_regime_high requires delta > 0")
    ts = TemperedStableParams(
        C=horizon * params.delta / math.sqrt(2.0 * math.pi),
        alpha=0.5,
        beta=0.5 * params.gamma_p**2,
    )
    raw = sample_stable_jumps(ts, generate_epochs(budget, rng))
    x = temper_jumps(raw, ts.beta, rng).jumps
    x, dropped = _filter_floor(x)
    if x.size:
        rate = x / (2.0 * params.delta**2)
        z = np.atleast_1d(special.sample_sqrt_gamma(0.5, rate, rng))
        acc = 2.0 / (np.pi * z * hankel_sq(nu, z))
    else:
        z = np.empty(0)
        acc = np.empty(0)
    accepted = rng.random(x.shape) < acc
    return EnvelopeSample("direct", x, z, acc, accepted, dropped)


def _resolve_n1_method(params: GigParams, method: str) -> str:
    if method == "auto":
        return "ts" if params.gamma_p == 0.0 else "two-gamma"
    if method == "ts":
        if params.gamma_p != 0.0:
            raise ParameterError(
                "the stable below-corner envelope requires gamma_p = 0"
            )
        return "ts"
    if method == "two-gamma":
        if params.gamma_p == 0.0:
            raise ParameterError(
                "the two-gamma below-corner envelope requires gamma_p > 0"
            )
        return "two-gamma"
    raise ParameterError(f"unknown below-corner method {method!r}")


def _resolve_n2_method(method: str) -> str:
    if method == "auto":
        return "sqrt"
    if method in ("sqrt", "x2"):
        return method
    raise ParameterError(f"unknown above-corner method {method!r}")


def sample_below_corner(
    params: GigParams,
    corner: CornerPoint,
    budget: int,
    rng,
    method: str = "auto",
    horizon: float = 1.0,
) -> EnvelopeSample:
    """Jumps whose auxiliary z lies below the corner (nu < 1/2 only).

    method "ts" (requires gamma_p = 0): a nu-stable series with
    C = Gamma(nu) (2 delta^2)^nu / (pi^2 H0 z0^(2 nu - 1)) dominates the
    x-marginal; the marginal-to-envelope ratio is the regularised lower
    incomplete gamma P(nu, z0^2 x / (2 delta^2)).

    method "two-gamma" (requires gamma_p > 0): the marginal is bounded
    by a sum of two gamma-process densities via
    lower_inc_gamma(nu, s) <= s^nu (1 + nu e^-s) / (nu (1 + nu)).

    The auxiliary z is drawn from a square-root-gamma law truncated to
    (0, z0); accept_prob is the marginal ratio times the z-stage ratio
    H0 z0^(2 nu - 1) / (z^(2 nu) |H_nu(z)|^2), each factor at most one.
    """
    nu = params.nu
    if nu >= 0.5:
        raise ParameterError("sample_below_corner requires |lam| < 1/2")
    if params.delta == 0.0:
        raise ParameterError("sample_below_corner requires delta > 0")
    method = _resolve_n1_method(params, method)
    z0, H0 = corner.z0, corner.H0
    two_d2 = 2.0 * params.delta**2

    if method == "ts":
        C1 = float(gammafn(nu)) * two_d2**nu / (np.pi**2 * H0 * z0 ** (2.0 * nu - 1.0))
        ts = TemperedStableParams(C=horizon * C1, alpha=nu, beta=0.0)
        x = sample_stable_jumps(ts, generate_epochs(budget, rng)).jumps
        x, dropped = _filter_floor(x)
        s = (z0 * z0) * x / two_d2
        thin = gammainc_p(nu, s)
    else:
        base = horizon * z0 / (np.pi**2 * (1.0 + nu) * H0)
        beta_x = 0.5 * params.gamma_p**2
        g1 = GammaProcessParams(C=base / nu, beta=beta_x)
        g2 = GammaProcessParams(C=base, beta=beta_x + z0 * z0 / two_d2)
        xs = []
        for gp in (g1, g2):
            x_i, _, acc_i = gamma_process_proposals(gp, generate_epochs(budget, rng), rng)
            xs.append(x_i[acc_i])
        x = np.concatenate(xs)
        x, dropped = _filter_floor(x)
        s = (z0 * z0) * x / two_d2
        thin = _two_gamma_thin(nu, s)

    if x.size:
        rate = x / two_d2
        z = np.atleast_1d(
            special.sample_truncated_sqrt_gamma(nu, rate, "below", z0, rng)
        )
        acc = thin * H0 * z0 ** (2.0 * nu - 1.0) / (z ** (2.0 * nu) * hankel_sq(nu, z))
    else:
        z = np.empty(0)
        acc = np.empty(0)
    accepted = rng.random(x.shape) < acc
    return EnvelopeSample("below_corner", x, z, acc, accepted, dropped)


def _two_gamma_thin(nu: float, s: np.ndarray) -> np.ndarray:
    """Ratio lower_inc_gamma(nu,s) * nu (1+nu) / (s^nu (1 + nu e^-s)) <= 1.

    For tiny s the regularised form loses the s^nu cancellation, so the
    two-term series lower_inc_gamma(nu, s)/s^nu = 1/nu - s/(nu+1) + O(s^2)
    is used instead.
    """
    s = np.asarray(s, dtype=np.float64)
    out = np.empty_like(s)
    tiny = s < 1e-200
    if np.any(~tiny):
        sb = s[~tiny]
        num = nu * (1.0 + nu) * gammainc_p(nu, sb) * float(gammafn(nu))
        out[~tiny] = num / (sb**nu * (1.0 + nu * np.exp(-sb)))
    if np.any(tiny):
        st = s[tiny]
        head = nu * (1.0 + nu) * (1.0 / nu - st / (nu + 1.0))
        out[tiny] = head / (1.0 + nu * np.exp(-st))
    return out


def sample_above_corner(
    params: GigParams,
    corner: CornerPoint,
    budget: int,
    rng,
    method: str = "auto",
    horizon: float = 1.0,
) -> EnvelopeSample:
    """Jumps whose auxiliary z lies above the corner (nu < 1/2 only).

    method "sqrt" (default): tempered 1/2-stable proposals with
    C = sqrt(2 delta^2) Gamma(1/2) / (pi^2 H0); the marginal ratio is
    the regularised upper incomplete gamma Q(1/2, z0^2 x / (2 delta^2)).

    method "x2": proposals from the K x^-2 e^(-theta x) series with
    K = 2 delta^2 / (pi^2 z0 H0), theta = gamma_p^2/2 + z0^2/(2 delta^2);
    the marginal ratio is sqrt(s) e^s upper_inc_gamma(1/2, s) <= 1.

    The auxiliary z is drawn from a square-root-gamma law truncated to
    [z0, inf); accept_prob is the marginal ratio times the z-stage
    ratio H0 / (z |H_nu(z)|^2), each factor at most one.
    """
    nu = params.nu
    if nu >= 0.5:
        raise ParameterError("sample_above_corner requires |lam| < 1/2")
    if params.delta == 0.0:
        raise ParameterError("sample_above_corner requires delta > 0")
    method = _resolve_n2_method(method)
    z0, H0 = corner.z0, corner.H0
    two_d2 = 2.0 * params.delta**2
    beta_x = 0.5 * params.gamma_p**2

    if method == "sqrt":
        C2 = math.sqrt(two_d2) * math.sqrt(math.pi) / (np.pi**2 * H0)
        ts = TemperedStableParams(C=horizon * C2, alpha=0.5, beta=beta_x)
        raw = sample_stable_jumps(ts, generate_epochs(budget, rng))
        x = temper_jumps(raw, ts.beta, rng).jumps
        x, dropped = _filter_floor(x)
        s = (z0 * z0) * x / two_d2
        thin = gammainc_q(0.5, s)
    else:
        K = horizon * two_d2 / (np.pi**2 * z0 * H0)
        theta = beta_x + z0 * z0 / two_d2
        g = generate_epochs(budget, rng).values
        x = K / g
        keep = rng.random(x.shape) < np.exp(-theta * x)
        x = x[keep]
        x, dropped = _filter_floor(x)
        s = (z0 * z0) * x / two_d2
        thin = np.sqrt(s) * special.upper_inc_gamma_scaled(0.5, s)

    z = np.empty_like(x)
    if x.size:
        rate = x / two_d2
        s_lo = rate * (z0 * z0)
        deep = s_lo > _TAIL_S_SWITCH
        if np.any(~deep):
            z[~deep] = np.atleast_1d(
                special.sample_truncated_sqrt_gamma(0.5, rate[~deep], "above", z0, rng)
            )
        if np.any(deep):
            # conditional Gamma(1/2) tail beyond s behaves as s + Exp(1) to O(1/s)
            u = rng.random(int(np.count_nonzero(deep)))
            t = s_lo[deep] - np.log(np.maximum(u, 5e-324))
            z[deep] = np.sqrt(t / rate[deep])
        acc = thin * H0 / (z * hankel_sq(nu, z))
    else:
        acc = np.empty(0)
    accepted = rng.random(x.shape) < acc
    return EnvelopeSample("above_corner", x, z, acc, accepted, dropped)


def add_positive_lambda_gamma_term(
    params: GigParams, budget: int, rng, horizon: float = 1.0
) -> EnvelopeSample:
    """Extra gamma-process component lam e^(-x gamma_p^2/2)/x for lam > 0."""
    if params.lam <= 0.0:
        raise ParameterError("gamma term only exists for lam > 0")
    gp = GammaProcessParams(C=horizon * params.lam, beta=0.5 * params.gamma_p**2)
    x, acc, accepted = gamma_process_proposals(gp, generate_epochs(budget, rng), rng)
    z = np.full(x.shape, np.nan)
    return EnvelopeSample("gamma_term", x, z, acc, accepted, 0)


def sample_regime_low(
    params: GigParams,
    budget: int,
    rng,
    rng2=None,
    z0: float | None = None,
    n1_method: str = "auto",
    n2_method: str = "auto",
    horizon: float = 1.0,
) -> list[EnvelopeSample]:
    """Two-envelope sampler for nu < 1/2: below- and above-corner pieces.

    rng drives the below-corner piece and rng2 the above-corner one; if
    rng2 is omitted it is split off rng deterministically.
    """
    if params.nu >= 0.5:
        raise ParameterError("sample_regime_low requires |lam| < 1/2")
    if rng2 is None:
        rng2 = rng.spawn(1)[0]
    corner = corner_point(params.nu, z0)
    below = sample_below_corner(params, corner, budget, rng, n1_method, horizon)
    above = sample_above_corner(params, corner, budget, rng2, n2_method, horizon)
    return [below, above]


def _components(
    params: GigParams,
    budget: int,
    seed: int,
    path: int,
    z0: float | None,
    n1_method: str,
    n2_method: str,
    horizon: float,
) -> list[EnvelopeSample]:
    pieces: list[EnvelopeSample] = []
    if params.delta > 0.0:
        if params.nu >= 0.5:
            pieces.append(
                sample_regime_high(
                    params, budget, rngs.stream(seed, path, KEY_DIRECT), horizon
                )
            )
        else:
            pieces.extend(
                sample_regime_low(
                    params,
                    budget,
                    rngs.stream(seed, path, KEY_BELOW),
                    rngs.stream(seed, path, KEY_ABOVE),
                    z0,
                    n1_method,
                    n2_method,
                    horizon,
                )
            )
    if params.lam > 0.0:
        pieces.append(
            add_positive_lambda_gamma_term(
                params, budget, rngs.stream(seed, path, KEY_GAMMA_TERM), horizon
            )
        )
    return pieces


def sample_gig(
    params: GigParams,
    horizon: float,
    budget: int,
    seed: int,
    path: int = 0,
    z0: float | None = None,
    n1_method: str = "auto",
    n2_method: str = "auto",
) -> JumpSeries:
    """Sample one GIG subordinator path's jumps on [0, horizon].

    budget is the number of Poisson epochs spent on each component
    series.  Draws are fully determined by (seed, path); distinct paths
    use independent streams, as do the component sources within a path.
    The returned series carries per-source acceptance statistics.
    """
    horizon = float(horizon)
    if not horizon > 0.0:
        raise ParameterError(f"horizon must be positive, got {horizon}")
    pieces = _components(params, budget, seed, path, z0, n1_method, n2_method, horizon)
    jumps = np.concatenate([p.jumps for p in pieces]) if pieces else np.empty(0)
    out = assign_times(jumps, horizon, rngs.stream(seed, path, KEY_TIMES))
    out.stats = {p.source: p.counts() for p in pieces}
    return out


def sample_gig_terminal(
    params: GigParams,
    n: int,
    budget: int,
    seed: int,
    horizon: float = 1.0,
    z0: float | None = None,
    n1_method: str = "auto",
    n2_method: str = "auto",
    workers: int = 1,
    collect_stats: bool = False,
):
    """n independent draws of W(horizon), one path per draw.

    Returns (samples, stats) where stats aggregates per-source proposal
    and acceptance counts over all paths (None unless collect_stats).
    Results are byte-identical for any workers value because path i
    always consumes the streams keyed by (seed, i).
    """
    n = int(n)
    if n <= 0:
        raise ParameterError(f"n must be positive, got {n}")
    horizon = float(horizon)
    if not horizon > 0.0:
        raise ParameterError(f"horizon must be positive, got {horizon}")
    if workers > 1:
        return _terminal_parallel(
            params, n, budget, seed, horizon, z0, n1_method, n2_method,
            workers, collect_stats,
        )
    samples = np.empty(n)
    agg: dict | None = {} if collect_stats else None
    for i in range(n):
        total, stats = _terminal_one(
            params, budget, seed, i, horizon, z0, n1_method, n2_method, collect_stats
        )
        samples[i] = total
        if collect_stats:
            _merge_stats(agg, stats)
    return samples, agg


def _terminal_one(params, budget, seed, path, horizon, z0, n1, n2, want_stats):
    pieces = _components(params, budget, seed, path, z0, n1, n2, horizon)
    total = float(sum(p.jumps.sum() for p in pieces))
    if not want_stats:
        return total, None
    return total, {p.source: p.counts() for p in pieces}


def _merge_stats(agg: dict, stats: dict) -> None:
    for source, c in stats.items():
        slot = agg.setdefault(source, {"proposed": 0, "accepted": 0})
        slot["proposed"] += c["proposed"]
        slot["accepted"] += c["accepted"]
        slot["rate"] = (
            slot["accepted"] / slot["proposed"] if slot["proposed"] else float("nan")
        )


def _terminal_chunk(args):
    params, lo, hi, budget, seed, horizon, z0, n1, n2, want_stats = args
    out = np.empty(hi - lo)
    agg: dict | None = {} if want_stats else None
    for i in range(lo, hi):
        total, stats = _terminal_one(
            params, budget, seed, i, horizon, z0, n1, n2, want_stats
        )
        out[i - lo] = total
        if want_stats:
            _merge_stats(agg, stats)
    return lo, out, agg


def _terminal_parallel(
    params, n, budget, seed, horizon, z0, n1, n2, workers, collect_stats
):
    from concurrent.futures import ProcessPoolExecutor

    workers = min(int(workers), n)
    edges = np.linspace(0, n, workers + 1).astype(int)
    tasks = [
        (params, int(lo), int(hi), budget, seed, horizon, z0, n1, n2, collect_stats)
        for lo, hi in zip(edges[:-1], edges[1:])
        if hi > lo
    ]
    samples = np.empty(n)
    agg: dict | None = {} if collect_stats else None
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for lo, chunk, stats in pool.map(_terminal_chunk, tasks):
            samples[lo : lo + chunk.size] = chunk
            if collect_stats and stats:
                for source, c in stats.items():
                    slot = agg.setdefault(source, {"proposed": 0, "accepted": 0})
                    slot["proposed"] += c["proposed"]
                    slot["accepted"] += c["accepted"]
    if collect_stats and agg:
        for slot in agg.values():
            slot["rate"] = (
                slot["accepted"] / slot["proposed"] if slot["proposed"] else float("nan")
            )
    return samples, agg
