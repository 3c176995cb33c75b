"""Shot-noise series machinery for subordinators.

A path on [0, T] is built from the arrival epochs of a unit-rate Poisson
process: each epoch is mapped through a decreasing level function h to a
jump size, jumps are optionally thinned, and surviving jumps receive
i.i.d. uniform arrival times on [0, T].  The path value at t is the sum
of jumps that arrived by t.

Level functions and thinning probabilities here cover the two building
blocks used throughout: tempered stable series (polynomial level
function, exponential thinning) and gamma-process series (exponential
level function, (1 + beta*x) e^(-beta*x) thinning).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

__all__ = [
    "Epochs",
    "JumpSeries",
    "ProcessPath",
    "TemperedStableParams",
    "GammaProcessParams",
    "generate_epochs",
    "sample_stable_jumps",
    "temper_jumps",
    "gamma_process_proposals",
    "sample_gamma_process",
    "assign_times",
    "evaluate_path",
]

# Jumps below this are indistinguishable from zero in double precision
# and are dropped (with a count kept) rather than carried through.
JUMP_FLOOR = 1e-300


@dataclass
class Epochs:
    """Strictly increasing arrival epochs of a unit-rate Poisson process."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)

    def __len__(self):
        return self.values.size


@dataclass
class JumpSeries:
    """Jumps of a truncated shot-noise series, optionally with arrival times.

    jumps and times align elementwise once times are assigned; dropped
    counts jumps removed for falling below the representable floor.
    stats, when present, maps an envelope source name to its proposal
    and acceptance counts.
    """

    jumps: np.ndarray
    times: np.ndarray | None = None
    horizon: float | None = None
    dropped: int = 0
    stats: dict | None = field(default=None, repr=False)

    def __post_init__(self):
        self.jumps = np.asarray(self.jumps, dtype=np.float64)
        if self.times is not None:
            self.times = np.asarray(self.times, dtype=np.float64)
            if self.times.shape != self.jumps.shape:
                raise ParameterError("times and jumps must align elementwise")

    def total(self) -> float:
        """Sum of all jumps; the path value at the horizon."""
        return float(self.jumps.sum())


@dataclass
class ProcessPath:
    """A cadlag path evaluated on a fixed time grid."""

    grid: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class TemperedStableParams:
    """Levy density C x^(-1-alpha) e^(-beta x) on (0, inf).

    beta = 0 gives the untempered stable series.
    """

    C: float
    alpha: float
    beta: float = 0.0

    def __post_init__(self):
        if not self.C > 0.0:
            raise ParameterError(f"C must be positive, got {self.C}")
        if not 0.0 < self.alpha < 1.0:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.beta < 0.0:
            raise ParameterError(f"beta must be nonnegative, got {self.beta}")


@dataclass(frozen=True)
class GammaProcessParams:
    """Levy density C e^(-beta x) / x on (0, inf)."""

    C: float
    beta: float

    def __post_init__(self):
        if not self.C > 0.0:
            raise ParameterError(f"C must be positive, got {self.C}")
        if not self.beta > 0.0:
            raise ParameterError(f"beta must be positive, got {self.beta}")


def generate_epochs(n: int, rng) -> Epochs:
    """First n arrival epochs of a unit-rate Poisson process."""
    n = int(n)
    if n <= 0:
        raise ParameterError(f"epoch count must be positive, got {n}")
    return Epochs(np.cumsum(rng.exponential(1.0, n)))


def sample_stable_jumps(params: TemperedStableParams, epochs: Epochs) -> JumpSeries:
    """Map epochs through the stable level function h(g) = (alpha g / C)^(-1/alpha).

    Produces the series for Levy density C x^(-1-alpha); tempering is a
    separate thinning step (temper_jumps).
    """
    g = epochs.values
    jumps = (params.alpha * g / params.C) ** (-1.0 / params.alpha)
    return JumpSeries(jumps=jumps)


def temper_jumps(series: JumpSeries, beta: float, rng) -> JumpSeries:
    """Thin each jump with retention probability exp(-beta * jump).

    Turns a C x^(-1-alpha) series into C x^(-1-alpha) e^(-beta x).
    beta = 0 keeps everything.
    """
    if beta < 0.0:
        raise ParameterError(f"beta must be nonnegative, got {beta}")
    x = series.jumps
    if beta == 0.0:
        keep = np.ones(x.shape, dtype=bool)
    else:
        keep = rng.random(x.shape) < np.exp(-beta * x)
    times = None if series.times is None else series.times[keep]
    return JumpSeries(
        jumps=x[keep], times=times, horizon=series.horizon, dropped=series.dropped
    )


def gamma_process_proposals(params: GammaProcessParams, epochs: Epochs, rng):
    """Raw gamma-process proposals with their thinning probabilities.

    Returns (jumps, accept_prob, accepted): epochs mapped through
    h(g) = 1 / (beta (e^(g/C) - 1)), each kept with probability
    (1 + beta x) e^(-beta x).  Epochs deep enough for h to underflow
    yield zero jumps; these are accepted with probability one and left
    for the downstream floor to drop.
    """
    g = epochs.values
    with np.errstate(over="ignore"):
        x = 1.0 / (params.beta * np.expm1(g / params.C))
    x = np.where(np.isfinite(x), x, 0.0)
    bx = params.beta * x
    accept_prob = (1.0 + bx) * np.exp(-bx)
    accepted = rng.random(x.shape) < accept_prob
    return x, accept_prob, accepted


def sample_gamma_process(params: GammaProcessParams, epochs: Epochs, rng) -> JumpSeries:
    """Series for the Levy density C e^(-beta x) / x."""
    x, _, accepted = gamma_process_proposals(params, epochs, rng)
    return JumpSeries(jumps=x[accepted])


def assign_times(jumps, horizon: float, rng) -> JumpSeries:
    """Attach i.i.d. uniform arrival times on [0, horizon] to the jumps.

    Jumps below the representable floor are dropped first and counted in
    the result's dropped field.
    """
    horizon = float(horizon)
    if not horizon > 0.0:
        raise ParameterError(f"horizon must be positive, got {horizon}")
    jumps = np.asarray(jumps, dtype=np.float64)
    keep = jumps >= JUMP_FLOOR
    dropped = int(jumps.size - np.count_nonzero(keep))
    kept = jumps[keep]
    times = rng.uniform(0.0, horizon, kept.size)
    return JumpSeries(jumps=kept, times=times, horizon=horizon, dropped=dropped)


def evaluate_path(series: JumpSeries, grid) -> ProcessPath:
    """Evaluate W(t) = sum of jumps with arrival time <= t on the grid."""
    if series.times is None:
        raise ParameterError("series has no arrival times; call assign_times first")
    grid = np.asarray(grid, dtype=np.float64)
    order = np.argsort(series.times, kind="stable")
    t_sorted = series.times[order]
    cum = np.concatenate(([0.0], np.cumsum(series.jumps[order])))
    idx = np.searchsorted(t_sorted, grid, side="right")
    return ProcessPath(grid=grid, values=cum[idx])
