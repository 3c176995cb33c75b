"""Generalised hyperbolic processes by Brownian subordination.

A GH path is Brownian motion with drift mu_w and volatility sigma_w run
on a GIG subordinator clock: conditional on a subordinator jump J, the
GH jump is Normal(mu_w J, sigma_w^2 J).  Everything about the clock
(regimes, envelopes, corners, budgets, streams) is inherited from the
GIG engine; this layer only attaches the Gaussian marks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rngs
from .errors import ParameterError
from .gig import KEY_MARKS, GigParams, sample_gig
from .series import JumpSeries

__all__ = ["GhParams", "sample_gh", "sample_gh_terminal"]


@dataclass(frozen=True)
class GhParams:
    """GH parameters: the GIG clock (lam, gamma_p, delta) plus the
    Brownian drift mu_w and volatility sigma_w."""

    lam: float
    gamma_p: float
    delta: float
    mu_w: float = 0.0
    sigma_w: float = 1.0

    def __post_init__(self):
        for name in ("mu_w", "sigma_w"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ParameterError(f"{name} must be a finite number, got {v!r}")
        if self.sigma_w < 0.0:
            raise ParameterError(f"sigma_w must be nonnegative, got {self.sigma_w}")
        # delegate clock validation
        self.gig()

    def gig(self) -> GigParams:
        return GigParams(lam=self.lam, gamma_p=self.gamma_p, delta=self.delta)


def _attach_marks(params: GhParams, clock: JumpSeries, rng) -> JumpSeries:
    j = clock.jumps
    marks = rng.standard_normal(j.size)
    signed = params.mu_w * j + params.sigma_w * np.sqrt(j) * marks
    out = JumpSeries(
        jumps=signed, times=clock.times, horizon=clock.horizon, dropped=clock.dropped
    )
    out.stats = clock.stats
    return out


def sample_gh(
    params: GhParams,
    horizon: float,
    budget: int,
    seed: int,
    path: int = 0,
    z0: float | None = None,
    n1_method: str = "auto",
    n2_method: str = "auto",
) -> JumpSeries:
    """Sample one GH path's (signed) jumps on [0, horizon].

    The clock consumes exactly the streams sample_gig would, and the
    Gaussian marks use a separate stream, so the subordinator underneath
    a GH path is the GIG path of the same (seed, path).
    """
    clock = sample_gig(
        params.gig(), horizon, budget, seed, path, z0, n1_method, n2_method
    )
    return _attach_marks(params, clock, rngs.stream(seed, path, KEY_MARKS))


def sample_gh_terminal(
    params: GhParams,
    n: int,
    budget: int,
    seed: int,
    horizon: float = 1.0,
    z0: float | None = None,
    n1_method: str = "auto",
    n2_method: str = "auto",
) -> np.ndarray:
    """n independent draws of the GH increment at the horizon."""
    n = int(n)
    if n <= 0:
        raise ParameterError(f"n must be positive, got {n}")
    out = np.empty(n)
    for i in range(n):
        s = sample_gh(params, horizon, budget, seed, i, z0, n1_method, n2_method)
        out[i] = s.jumps.sum()
    return out
