"""Classical and robust risk premia of proportionally shared i.i.d. risks."""

from .ambiguity import (
    AmbiguityModel,
    ModelEntry,
    RateBounds,
    RobustValue,
    entropy_coherent_risk,
    entropy_convex_risk,
    robust_certainty_equivalent,
    robust_expectation,
    robust_rate_bounds,
)
from .asymptotics import ConvergenceReport, Problem, aitken_limit, check_bounds, dependent_sequence_report, run_rates
from .classical import (
    EXACT,
    Engine,
    certainty_equivalent,
    entropic_risk,
    pratt_limit,
    risk_premium,
    sqrt_n_bound,
)
from .dist import LatticeDistribution, convolve_power, kl_divergence, mean_law, moments, sum_law
from .errors import AlignmentError, DomainError, ImageError, InvariantError, PoolRiskError, SupportCapError
from .io import parse_model_file
from .pooling import Allocation, Criterion, SampleSpace, pareto_gap, pareto_search, proportional_allocation
from .utility import Utility

__version__ = "0.1.0"

__all__ = [
    "aitken_limit",
    "AlignmentError",
    "Allocation",
    "AmbiguityModel",
    "certainty_equivalent",
    "check_bounds",
    "ConvergenceReport",
    "convolve_power",
    "Criterion",
    "dependent_sequence_report",
    "DomainError",
    "Engine",
    "entropic_risk",
    "entropy_coherent_risk",
    "entropy_convex_risk",
    "EXACT",
    "ImageError",
    "InvariantError",
    "kl_divergence",
    "LatticeDistribution",
    "mean_law",
    "ModelEntry",
    "moments",
    "pareto_gap",
    "pareto_search",
    "parse_model_file",
    "PoolRiskError",
    "pratt_limit",
    "Problem",
    "proportional_allocation",
    "RateBounds",
    "risk_premium",
    "robust_certainty_equivalent",
    "robust_expectation",
    "robust_rate_bounds",
    "RobustValue",
    "run_rates",
    "SampleSpace",
    "sqrt_n_bound",
    "sum_law",
    "SupportCapError",
    "Utility",
]
