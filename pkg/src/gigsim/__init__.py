"""Simulation of GIG and GH Levy processes by auxiliary-variable series.

The package samples generalised inverse Gaussian subordinators (and
generalised hyperbolic processes built on them) as truncated shot-noise
series: jump proposals come from tractable dominating series, an
auxiliary Hankel-integral variable is drawn exactly, and proposals are
accepted using certified two-sided bounds on z |H_nu(z)|^2.  Closed
form bounds on the jump density and acceptance rates, an independent
exact sampler for the increment law, and a statistical verification
harness ship alongside the engine.
"""

from .bounds import (
    BoundTable,
    bound_table,
    q_a,
    q_b,
    q_b_optimized,
    q_gig_reference,
    rho_bounds_high,
    rho_bounds_low,
    simple_bound,
)
from .errors import DegenerateRegionError, ParameterError, QuadratureError
from .gh import GhParams, sample_gh, sample_gh_terminal
from .gig import (
    CornerPoint,
    EnvelopeSample,
    GigParams,
    add_positive_lambda_gamma_term,
    corner_point,
    levy_density_bivariate,
    natural_corner,
    sample_above_corner,
    sample_below_corner,
    sample_gig,
    sample_gig_terminal,
    sample_regime_high,
    sample_regime_low,
)
from .kernels import BACKEND
from .rngs import stream
from .series import (
    Epochs,
    GammaProcessParams,
    JumpSeries,
    ProcessPath,
    TemperedStableParams,
    assign_times,
    evaluate_path,
    generate_epochs,
    sample_gamma_process,
    sample_stable_jumps,
    temper_jumps,
)
from .special import (
    bessel_j,
    bessel_y,
    hankel_sq,
    lower_inc_gamma,
    sample_sqrt_gamma,
    sample_truncated_sqrt_gamma,
    upper_inc_gamma,
    upper_inc_gamma_scaled,
)
from .verify import (
    KsResult,
    emit_qq_histogram,
    ks_two_sample,
    sample_edge_exact,
    sample_gig_exact,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundTable",
    "CornerPoint",
    "DegenerateRegionError",
    "EnvelopeSample",
    "Epochs",
    "GammaProcessParams",
    "GhParams",
    "GigParams",
    "JumpSeries",
    "KsResult",
    "ParameterError",
    "ProcessPath",
    "QuadratureError",
    "TemperedStableParams",
    "add_positive_lambda_gamma_term",
    "assign_times",
    "bessel_j",
    "bessel_y",
    "bound_table",
    "corner_point",
    "emit_qq_histogram",
    "evaluate_path",
    "generate_epochs",
    "hankel_sq",
    "ks_two_sample",
    "levy_density_bivariate",
    "lower_inc_gamma",
    "natural_corner",
    "q_a",
    "q_b",
    "q_b_optimized",
    "q_gig_reference",
    "rho_bounds_high",
    "rho_bounds_low",
    "sample_above_corner",
    "sample_below_corner",
    "sample_edge_exact",
    "sample_gamma_process",
    "sample_gh",
    "sample_gh_terminal",
    "sample_gig",
    "sample_gig_exact",
    "sample_gig_terminal",
    "sample_regime_high",
    "sample_regime_low",
    "sample_sqrt_gamma",
    "sample_stable_jumps",
    "sample_truncated_sqrt_gamma",
    "simple_bound",
    "stream",
    "temper_jumps",
    "upper_inc_gamma",
    "upper_inc_gamma_scaled",
]
