"""Finite-variation envelopes of cadlag step paths and exact pathwise
Stieltjes integration, with truncated-variation functionals, a stopping-time
integration scheme, and seeded experiments that verify the identities and
exhibit the convergence and divergence phenomena numerically."""

from .errors import (
    BoundViolation,
    CarrierViolation,
    ConfigError,
    EmptyPath,
    GridMismatch,
    GridTooCoarse,
    IdentityViolation,
    InconsistentMarks,
    InvalidSpec,
    LengthMismatch,
    NegativeC,
    NonMonotoneTimes,
    NonPositiveC,
    NonPositiveThreshold,
    PathIntError,
    PathTooLong,
    PhiOutOfRange,
    TimeBeforeOrigin,
)
from .paths import (
    PathGenSpec,
    StepPath,
    combine,
    from_samples,
    gen_path,
    left_limit,
    read_path_csv,
    value_at,
    write_path_csv,
)
from .variation import (
    RunningVariation,
    VariationReport,
    brute_tv_c,
    total_variation,
    truncated_variation,
)
from .truncation import (
    ConditionReport,
    Epoch,
    Ladder,
    SkorohodDecomposition,
    TruncatedPath,
    build_ladder,
    truncate_skorohod,
    truncate_tvmin,
    verify_conditions,
    verify_skorohod,
)
from .integration import (
    BichtelerLadder,
    IntegralPath,
    bichteler,
    bichteler_ladder,
    bichteler_path,
    corrected_target,
    corrected_target_path,
    quadratic_covariation,
    quadratic_covariation_path,
    stieltjes_current,
    stieltjes_left,
)
from .experiments import (
    EXPERIMENT_NAMES,
    ExperimentConfig,
    ExperimentReport,
    ReportRow,
    ScheduleSpec,
    config_from_dict,
    default_config,
    load_config,
    run_as_convergence,
    run_bm_convergence,
    run_cx_y,
    run_cx_z,
    run_experiment,
    run_identity_suite,
    run_step_convergence,
    run_tv_limit,
    write_report_csv,
)

__version__ = "0.1.0"
