"""Exact and heat-balance-integral solutions of the one-phase Stefan problem
with a convective boundary condition at the fixed face."""

from .analysis import (
    DEFAULT_BI_GRID,
    ErrorTable,
    RelErrorPoint,
    SweepSeries,
    bi_sweep,
    convergence_gap,
    free_boundary_rel_error,
    solve_method,
    temperature_error_table,
)
from .errors import (
    BracketError,
    ConvergenceError,
    DomainError,
    InvariantViolation,
    NumericalError,
    StefanError,
    ValidationError,
)
from .exact import solve_exact, solve_exact_dirichlet
from .hbim import ResidualReport, residual_suite, solve_approx, solve_approx_limit, xi_bounds
from .model import (
    Boundary,
    DimensionlessParams,
    MethodId,
    PhysicalParams,
    Scheme,
    SimilaritySolution,
    dimensionless_from_physical,
    physical_from_dimensionless,
    preset,
)
from .numerics import Bracket, SolveSettings, solve_bracketed

__all__ = [
    "Boundary", "Bracket", "BracketError", "ConvergenceError", "DEFAULT_BI_GRID", "DimensionlessParams",
    "DomainError", "ErrorTable", "InvariantViolation", "MethodId", "NumericalError", "PhysicalParams",
    "RelErrorPoint", "ResidualReport", "Scheme", "SimilaritySolution", "SolveSettings", "StefanError",
    "SweepSeries", "ValidationError", "bi_sweep", "convergence_gap", "dimensionless_from_physical",
    "free_boundary_rel_error", "physical_from_dimensionless", "preset", "residual_suite", "solve_approx",
    "solve_approx_limit", "solve_bracketed", "solve_exact", "solve_exact_dirichlet", "solve_method",
    "temperature_error_table", "xi_bounds",
]
