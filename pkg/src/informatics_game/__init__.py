"""Optimal research-field and topic switching as a dynamic program, plus
content-analysis statistics for coded academic job advertisements."""

__version__ = "0.1.0"

from .distributions import (
    DiscreteDistribution,
    beta_binomial_on_grid,
    inflate_at_zero,
    mean,
    uniform_on_grid,
)
from .estimator import CareerChoiceSolver
from .exceptions import (
    ConfigError,
    GridTooLargeError,
    InvalidParameterError,
    NonConvergenceError,
    OracleMismatchError,
    UndefinedKappaError,
    UnknownTopicError,
)
from .oracle import StationaryPolicy, enumerate_and_maximize, evaluate_policy
from .simulate import CareerTrajectory, compare_policies, simulate_career
from .solver import (
    Action,
    GridSpec,
    ModelConfig,
    SolveResult,
    bellman_backup,
    policy_thresholds,
    solve,
)
from .trends import (
    CodedAd,
    CoderTable,
    TrendMatrix,
    ads_per_issue,
    cohens_kappa,
    trend_matrix,
)
