"""3/2-approximation for metric TSP and shortest covering walks."""

from .errors import (
    CapacityError,
    DefectError,
    InfeasibleError,
    InputError,
    TspApproxError,
)
from .instance import (
    GeneralInstance,
    MetricClosure,
    MetricInstance,
    Tour,
    Walk,
    expand_walk,
    metric_closure,
    validate_metric,
)
from .pipeline import SolveReport, solve_problem_a, solve_problem_b

__all__ = [
    "CapacityError",
    "DefectError",
    "GeneralInstance",
    "InfeasibleError",
    "InputError",
    "MetricClosure",
    "MetricInstance",
    "SolveReport",
    "Tour",
    "TspApproxError",
    "Walk",
    "expand_walk",
    "metric_closure",
    "solve_problem_a",
    "solve_problem_b",
    "validate_metric",
]

__version__ = "0.1.0"
