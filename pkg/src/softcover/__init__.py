"""Soft-covering bounds for random codebooks over discrete memoryless channels.

Analytical side: total-variation decay exponents, optimized typicality slack,
Chernoff and normal-approximation failure bounds, second-order rate schedules.
Empirical side: exact enumeration and Monte Carlo simulation of random
codebooks, plus a continuous Gaussian synthesis demo. A FastAPI service wraps
the core; the CLI is a thin client of that service.
"""

from .codebook import (
    AtypicalityResult,
    Codebook,
    SoftCoverReport,
    atypical_probability,
    berry_esseen_bound,
    berry_esseen_check,
    induced_distribution,
    sample_codebook,
    soft_cover_report,
)
from .errors import SoftCoverError
from .exponents import (
    ExponentResult,
    SecondOrderPlan,
    gamma_delta,
    qfunc,
    qfunc_inv,
    second_order_plan,
    theorem1_bound,
)
from .gaussian import (
    DensityGrid,
    GaussianSetup,
    emit_density_grid,
    gaussian_mutual_info_bits,
    mixture_tv,
    optimize_codewords,
    sample_gaussian_codebook,
)
from .info import InfoProfile, info_profile, information_density, kl_divergence, renyi_divergence
from .montecarlo import (
    FixedRate,
    SecondOrderRate,
    SweepResult,
    TrialConfig,
    fit_decay,
    run_sweep,
    tail_estimate,
    trial_seed,
)
from .probability import (
    Alphabet,
    Channel,
    FiniteDistribution,
    SequenceIndex,
    joint_distribution,
    make_channel,
    make_distribution,
    output_distribution,
    product_pmf_vector,
    sequence_pmf,
    total_variation,
)
from .specs import bec, bsc, noiseless, parse_channel_spec, uniform

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "AtypicalityResult",
    "Channel",
    "Codebook",
    "DensityGrid",
    "ExponentResult",
    "FiniteDistribution",
    "FixedRate",
    "GaussianSetup",
    "InfoProfile",
    "SecondOrderPlan",
    "SecondOrderRate",
    "SequenceIndex",
    "SoftCoverError",
    "SoftCoverReport",
    "SweepResult",
    "TrialConfig",
    "atypical_probability",
    "bec",
    "berry_esseen_bound",
    "berry_esseen_check",
    "bsc",
    "emit_density_grid",
    "fit_decay",
    "gamma_delta",
    "gaussian_mutual_info_bits",
    "induced_distribution",
    "info_profile",
    "information_density",
    "joint_distribution",
    "kl_divergence",
    "make_channel",
    "make_distribution",
    "mixture_tv",
    "noiseless",
    "optimize_codewords",
    "output_distribution",
    "parse_channel_spec",
    "product_pmf_vector",
    "qfunc",
    "qfunc_inv",
    "renyi_divergence",
    "run_sweep",
    "sample_codebook",
    "sample_gaussian_codebook",
    "second_order_plan",
    "sequence_pmf",
    "soft_cover_report",
    "tail_estimate",
    "theorem1_bound",
    "total_variation",
    "trial_seed",
    "uniform",
]
