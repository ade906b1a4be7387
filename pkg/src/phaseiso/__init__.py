"""Numerical verification and reconstruction of sign-phase-equivalent isometries.

The library checks a chain of norm and inner-product conditions on
sampled maps between finite-dimensional inner product spaces, recovers
the per-point sign function and the underlying linear generator from
tabulated data, and runs exploratory harnesses for l^p norms and
nth-root-of-unity phase sets.
"""

__version__ = "0.1.0"

from .errors import (
    AlreadyReal,
    DimensionMismatch,
    InconsistentCycle,
    InvalidMapSpec,
    MagnitudeMismatch,
    MissingZeroImage,
    NeedsEvaluableMap,
    NotPhaseEquivalent,
    OutOfDomain,
    RankDeficient,
    RealFieldUnsupported,
    SchemaError,
    TooManyNodes,
    ToolkitError,
    UnsupportedNorm,
)
from .space import (
    COMPLEX,
    DEFAULT_ATOL,
    DEFAULT_RTOL,
    GAUSSIAN,
    GRID,
    REAL,
    SPHERE,
    SamplePlan,
    SpaceSpec,
    approx_equal,
    as_vector,
    norm,
    plan_from_json,
    plan_to_json,
    real_inner,
    realify,
    realify_space,
    roots_of_unity,
    sample,
    space_from_json,
    space_to_json,
    unrealify,
    vector_from_json,
    vector_to_json,
)
from .maps import (
    AbsOneDim,
    ConstantSign,
    HalfspaceSign,
    LinearIsometry,
    MapSpec,
    PerturbedLinear,
    PhaseIsometry,
    RatzConjugation,
    Scaled,
    SeededRootPhase,
    SeededSign,
    SignRule,
    Tabulated,
    complex_to_real_matrix,
    conjugation_matrix,
    eval_map,
    map_from_json,
    map_to_json,
    random_orthogonal,
    random_unitary,
    signed_permutation,
    tabulate,
)
from .checker import (
    ConditionId,
    ConditionReport,
    IMPLICATIONS,
    battery_points,
    battery_table,
    check_condition,
    check_eq22,
    implication_bounds,
    pair_residual,
    polarize,
    reports_to_json,
    run_battery,
)
from .recover import (
    BruteForceResult,
    RecoveryResult,
    SignAssignment,
    SignGraph,
    brute_force_signs,
    build_sign_graph,
    certify,
    fit_linear,
    polar_factor,
    propagate_signs,
    recover,
)
from .explore import (
    CandidateResult,
    ExploreConfig,
    ExploreReport,
    config_from_json,
    config_to_json,
    explore,
    explore_p1,
    explore_p2,
)
