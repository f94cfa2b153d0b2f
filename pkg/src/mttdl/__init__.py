"""Reliability analysis for erasure-protected disk arrays.

The package computes the mean time to data loss (MTTDL) of protection
groups whose failure, repair and direct data-loss rates may vary with the
number of disks already failed, and compares placement strategies for
striping groups across storage-node pools.

Modules:
    markov_core: the absorbing chain, its closed form, linear solver,
        parity recursion, upper bound and initial-state averaging.
    growth: saturating failure-rate growth and read-cost-derived repair
        rates.
    overhead: average reconstruction read overhead and erasure-code
        profiles.
    hard_error: folding unrecoverable read errors into a model.
    montecarlo: deterministic Monte Carlo estimation (compiled kernel with
        a pure-Python twin).
    allocation: horizontal versus vertical placement across node pools.
    cli: the ``mttdl`` command-line interface.
"""

from .allocation import (
    AllocationScenario,
    NodeSteadyState,
    Policy,
    average_failure_rate,
    horizontal_system_mttdl,
    node_steady_state,
    system_mttdl,
    vertical_epg_mttdl,
    weibull_scale_for_mean,
)
from .errors import (
    DimensionMismatchError,
    DomainError,
    ErrorRateAlreadySetError,
    InvalidDistributionError,
    MalformedProfileError,
    MttdlError,
    NonzeroErrorRateError,
    PolicyMismatchError,
    RateVectorMismatchError,
    SingularMatrixError,
    UnknownCorrectionTermError,
)
from .growth import (
    GrowthSpec,
    RepairSpec,
    build_failure_rates,
    logistic_failure_rate,
    repair_rate,
)
from .hard_error import (
    UcerSpec,
    apply_hard_error,
    device_error_probability,
    rebuild_error_probability,
)
from .markov_core import (
    FailureModel,
    InitialDistribution,
    Method,
    MttdlEstimate,
    TransitionMatrix,
    build_transition_matrix,
    kahan_sum,
    masked_rate_factors,
    mttdl_closed_form,
    mttdl_linear_solve,
    mttdl_recursive_step,
    mttdl_upper_bound,
    mttdl_with_initial_distribution,
    transient_block_determinant,
    transient_block_determinant_lower_bound,
)
from .montecarlo import (
    SimConfig,
    SimResult,
    available_backends,
    default_backend,
    simulate_mttdl,
)
from .overhead import (
    BUILTIN_PROFILE_NAMES,
    AccessPattern,
    CodeProfile,
    asymptotic_overhead,
    avg_read_overhead,
    builtin_profile,
    load_code_profile,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "MttdlError",
    "SingularMatrixError",
    "NonzeroErrorRateError",
    "UnknownCorrectionTermError",
    "DimensionMismatchError",
    "InvalidDistributionError",
    "DomainError",
    "MalformedProfileError",
    "ErrorRateAlreadySetError",
    "RateVectorMismatchError",
    "PolicyMismatchError",
    # markov core
    "Method",
    "FailureModel",
    "TransitionMatrix",
    "MttdlEstimate",
    "InitialDistribution",
    "kahan_sum",
    "build_transition_matrix",
    "mttdl_linear_solve",
    "masked_rate_factors",
    "mttdl_closed_form",
    "transient_block_determinant",
    "transient_block_determinant_lower_bound",
    "mttdl_upper_bound",
    "mttdl_recursive_step",
    "mttdl_with_initial_distribution",
    # growth
    "GrowthSpec",
    "RepairSpec",
    "logistic_failure_rate",
    "build_failure_rates",
    "repair_rate",
    # overhead
    "AccessPattern",
    "CodeProfile",
    "avg_read_overhead",
    "asymptotic_overhead",
    "load_code_profile",
    "builtin_profile",
    "BUILTIN_PROFILE_NAMES",
    # hard errors
    "UcerSpec",
    "device_error_probability",
    "rebuild_error_probability",
    "apply_hard_error",
    # monte carlo
    "SimConfig",
    "SimResult",
    "simulate_mttdl",
    "available_backends",
    "default_backend",
    # allocation
    "Policy",
    "AllocationScenario",
    "NodeSteadyState",
    "weibull_scale_for_mean",
    "horizontal_system_mttdl",
    "node_steady_state",
    "average_failure_rate",
    "vertical_epg_mttdl",
    "system_mttdl",
]
