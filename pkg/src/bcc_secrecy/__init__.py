"""Secrecy rate regions and finite-blocklength coding experiments for
broadcast channels with two legitimate receivers and an eavesdropper."""

from .channels import (
    BroadcastChannel,
    BudgetExceeded,
    DegradednessReport,
    DimensionMismatch,
    DiscreteChannel,
    InvalidDistribution,
    JointPmf,
    NegativeEntry,
    Pmf,
    SumNotOne,
    cascade,
    check_stochastic_degraded,
    joint_from_input,
    marginal_channel,
    validate_pmf,
)
from .coding import (
    BinningCodebook,
    CodeParams,
    EquivocationReport,
    SuperpositionCodebook,
    TrialResult,
    build_double_binning,
    build_superposition,
    decode_rx1,
    decode_rx2,
    encode_double_binning,
    encode_superposition,
    exact_equivocation,
    run_error_experiment,
    transmit,
)
from .information import (
    AxisOverlap,
    binary_entropy,
    conditional_mutual_information,
    entropy,
    mutual_information,
)
from .regions import (
    AuxGridSpec,
    GaussianParams,
    RatePoint,
    RegionFrontier,
    capacity_fn,
    degraded_rate_pair,
    degraded_region_inner,
    gaussian_region_point,
    gaussian_region_sweep,
    general_inner_bound,
    general_rate_corners,
    simplex_grid,
    upper_right_hull,
    wiretap_secrecy_capacity,
)

__version__ = "0.1.0"

__all__ = [
    "AuxGridSpec",
    "AxisOverlap",
    "BinningCodebook",
    "BroadcastChannel",
    "BudgetExceeded",
    "CodeParams",
    "DegradednessReport",
    "DimensionMismatch",
    "DiscreteChannel",
    "EquivocationReport",
    "GaussianParams",
    "InvalidDistribution",
    "JointPmf",
    "NegativeEntry",
    "Pmf",
    "RatePoint",
    "RegionFrontier",
    "SumNotOne",
    "SuperpositionCodebook",
    "TrialResult",
    "binary_entropy",
    "build_double_binning",
    "build_superposition",
    "capacity_fn",
    "cascade",
    "check_stochastic_degraded",
    "conditional_mutual_information",
    "decode_rx1",
    "decode_rx2",
    "degraded_rate_pair",
    "degraded_region_inner",
    "encode_double_binning",
    "encode_superposition",
    "entropy",
    "exact_equivocation",
    "gaussian_region_point",
    "gaussian_region_sweep",
    "general_inner_bound",
    "general_rate_corners",
    "joint_from_input",
    "marginal_channel",
    "mutual_information",
    "run_error_experiment",
    "simplex_grid",
    "transmit",
    "upper_right_hull",
    "validate_pmf",
    "wiretap_secrecy_capacity",
]
