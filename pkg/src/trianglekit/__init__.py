"""Chained information-distance inequalities on no-disturbance behaviors."""

__version__ = "0.1.0"

from .behavior import (
    Behavior,
    JointTable,
    ValidationReport,
    correlator,
    deterministic,
    fixture_nc,
    fixture_p1,
    fixture_p2,
    marginal,
    mix,
    sample_no_disturbance,
    uniform,
    validate,
)
from .distance import (
    COVARIANCE,
    ENTROPIC,
    KOLMOGOROV,
    AxiomReport,
    DistanceKind,
    TripleJoint,
    check_axioms,
    covariance_distance,
    entropic_distance,
    kolmogorov_distance,
)
from .errors import (
    CapacityError,
    IncompatibilityError,
    InvalidScenarioError,
    NoJointDistributionError,
    NotAContextError,
    SolverError,
    TriangleKitError,
)
from .inequality import (
    ChainedInequality,
    InequalityResult,
    ch_inequality,
    chained_distance_check,
    correlation_ncycle,
    entropic_ncycle,
    evaluate,
    exclusive_events_inequality,
    metric_extension_feasible,
    specker,
)
from .lp import LinearProgram, LpOutcome, LpStatus, lp_solve
from .monogamy import MonogamyResult, bell_bell_monogamy, chsh_kcbs_monogamy, monogamy_bound_via_lp
from .polytope import JpdVerdict, Objective, decompose_noncontextual, jpd_exists, max_over_no_disturbance
from .quantum import chsh_quantum_behavior, kcbs_quantum_behavior, optimize_quantum_value
from .scenario import (
    Scenario,
    make_bell_cycle,
    make_cycle,
    make_kcbs_chsh_hybrid,
    make_tripartite_chsh,
    triangles,
)
