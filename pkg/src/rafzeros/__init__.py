"""Real zeros of random analytic functions: simulation and verification.

Four classical coefficient ensembles (SP, FAF, HAF, WP), log-space
evaluation of their normalized realizations, adaptive zero counting with
an exact polynomial oracle, and Monte Carlo estimators reproducing the
sqrt(n) zero-count law, the window covariance limit, and the Gaussian
limit process.
"""

from .ensembles import (
    DomainError,
    EnsembleKind,
    GrowthProfile,
    IntervalSpec,
    NumericalError,
    domain_contains,
    expected_zero_rate,
    growth_profile,
    limit_density,
    local_frequency,
    log_variance,
    log_weight,
    log_weight_array,
    validate_interval,
)
from .evaluate import (
    LimitProcessSample,
    SampleFunction,
    basis_matrix,
    eval_limit_process,
    eval_normalized,
    limit_truncation_order,
    make_limit_sample,
    make_sample,
    truncation_order,
)
from .montecarlo import (
    ConfigError,
    CovarianceResult,
    ExperimentConfig,
    ExperimentResult,
    LimitCountResult,
    PerNRow,
    StudyRow,
    convergence_study,
    estimate_covariance,
    estimate_limit_process_zero_count,
    estimate_mean_zero_count,
)
from .sampling import CoeffDistribution, TrialStream, draw_coeffs, stream_seed
from .zeros import (
    AgreementRecord,
    AgreementReport,
    GridParams,
    ZeroCountReport,
    count_zeros_grid,
    count_zeros_oracle,
    oracle_real_roots,
    run_oracle_agreement,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "DomainError",
    "NumericalError",
    "ConfigError",
    # ensembles
    "EnsembleKind",
    "IntervalSpec",
    "GrowthProfile",
    "log_weight",
    "log_weight_array",
    "log_variance",
    "growth_profile",
    "local_frequency",
    "limit_density",
    "expected_zero_rate",
    "domain_contains",
    "validate_interval",
    # sampling
    "CoeffDistribution",
    "TrialStream",
    "stream_seed",
    "draw_coeffs",
    # evaluation
    "SampleFunction",
    "LimitProcessSample",
    "truncation_order",
    "limit_truncation_order",
    "make_sample",
    "make_limit_sample",
    "eval_normalized",
    "eval_limit_process",
    "basis_matrix",
    # zeros
    "GridParams",
    "ZeroCountReport",
    "count_zeros_grid",
    "count_zeros_oracle",
    "oracle_real_roots",
    "AgreementRecord",
    "AgreementReport",
    "run_oracle_agreement",
    # monte carlo
    "ExperimentConfig",
    "ExperimentResult",
    "PerNRow",
    "CovarianceResult",
    "LimitCountResult",
    "StudyRow",
    "estimate_mean_zero_count",
    "estimate_covariance",
    "estimate_limit_process_zero_count",
    "convergence_study",
]
