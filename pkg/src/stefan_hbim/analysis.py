"""Error analyses: free-boundary relative errors, temperature error tables,
Bi sweeps and Bi -> inf convergence gaps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import exact, hbim
from .errors import ValidationError
from .model import (
    APPROX_SCHEMES,
    Boundary,
    DimensionlessParams,
    MethodId,
    PhysicalParams,
    Scheme,
    SimilaritySolution,
    dimensionless_from_physical,
    preset,
    validate_ste,
)
from .numerics import DEFAULT_SETTINGS, SolveSettings

APPROX_METHODS = tuple(MethodId(s) for s in APPROX_SCHEMES)
LIMIT_METHODS = tuple(MethodId(s, Boundary.DIRICHLET_LIMIT) for s in APPROX_SCHEMES)

# 60 log-spaced points on [0.1, 1e3] plus a tail that shows the Bi -> inf limit
DEFAULT_BI_GRID: tuple[float, ...] = tuple(np.logspace(-1, 3, 60).tolist()) + (1e4, 1e5, 1e6)


@dataclass(frozen=True)
class TablePreset:
    physical: PhysicalParams
    t_probe: float
    positions: tuple[float, ...]


TABLE_PRESETS: dict[str, TablePreset] = {
    "ice-table1": TablePreset(preset("ice"), 10.0, tuple(round(i * 1e-4, 10) for i in range(11))),
    "ice-table2": TablePreset(preset("ice"), 10.0, tuple(round((820 + i) * 1e-6, 10) for i in range(11))),
}


def table_preset(name: str) -> TablePreset:
    try:
        return TABLE_PRESETS[name]
    except KeyError:
        raise ValidationError("preset", f"unknown table preset {name!r} (choose from {', '.join(TABLE_PRESETS)})") from None


def solve_method(
    method: MethodId,
    ste: float,
    bi: Optional[float] = None,
    settings: SolveSettings = DEFAULT_SETTINGS,
) -> SimilaritySolution:
    """Dispatch to the right solver. ``bi`` must be given iff the method is convective."""
    if method.is_limit:
        if bi is not None:
            raise ValidationError("bi", "Dirichlet-limit methods take no Biot number")
        if method.scheme is Scheme.EXACT:
            return exact.solve_exact_dirichlet(ste, settings)
        return hbim.solve_approx_limit(method, ste)
    if bi is None:
        raise ValidationError("bi", f"{method} needs a Biot number")
    params = DimensionlessParams(ste, bi)
    if method.scheme is Scheme.EXACT:
        return exact.solve_exact(params, settings)
    return hbim.solve_approx(method, params, settings)


def temperature(sol: SimilaritySolution, theta_inf: float, alpha: float, x: float, t: float) -> float:
    """Temperature of any solution, extended by 0 beyond its free boundary."""
    if sol.method.scheme is Scheme.EXACT:
        return exact.temperature(exact.TemperatureField(sol, alpha, theta_inf), x, t)
    return hbim.approx_temperature(sol, theta_inf, alpha, x, t)


# -- free boundary ---------------------------------------------------------


@dataclass(frozen=True)
class RelErrorPoint:
    method: MethodId
    ste: float
    bi: Optional[float]
    e_rel: float


def rel_error(sol: SimilaritySolution, reference: SimilaritySolution) -> float:
    # only xi enters: s_i/s = xi_i/xi for every t and alpha
    return abs(sol.xi - reference.xi) / reference.xi


def free_boundary_rel_error(
    method: MethodId,
    ste: float,
    bi: Optional[float] = None,
    settings: SolveSettings = DEFAULT_SETTINGS,
) -> RelErrorPoint:
    """``|xi_method - xi_exact| / xi_exact`` against the exact solution with
    the same boundary variant (convective or Dirichlet limit)."""
    reference = solve_method(MethodId(Scheme.EXACT, method.boundary), ste, bi, settings)
    if method.scheme is Scheme.EXACT:
        return RelErrorPoint(method, reference.ste, bi, 0.0)
    sol = solve_method(method, ste, bi, settings)
    return RelErrorPoint(method, sol.ste, bi, rel_error(sol, reference))


@dataclass(frozen=True)
class SweepSeries:
    method: MethodId
    ste: float
    bi_grid: tuple[float, ...]
    e_rel_values: tuple[float, ...]
    e_rel_limit: float


def _check_grid(name: str, grid: Sequence[float]) -> tuple[float, ...]:
    grid = tuple(float(b) for b in grid)
    if not grid:
        raise ValidationError(name, "grid is empty")
    if any(not (math.isfinite(b) and b > 0) for b in grid):
        raise ValidationError(name, "grid values must be finite and positive")
    if any(b2 <= b1 for b1, b2 in zip(grid, grid[1:])):
        raise ValidationError(name, "grid must be strictly increasing")
    return grid


def bi_sweep(
    method: MethodId,
    ste: float,
    bi_grid: Sequence[float] = DEFAULT_BI_GRID,
    settings: SolveSettings = DEFAULT_SETTINGS,
) -> SweepSeries:
    """Relative free-boundary error of a convective method along ``bi_grid``,
    plus the error of its Dirichlet limit."""
    if method.is_limit:
        raise ValidationError("method", "sweep over Bi needs a convective method")
    ste = validate_ste(ste)
    grid = _check_grid("bi_grid", bi_grid)
    values = tuple(free_boundary_rel_error(method, ste, bi, settings).e_rel for bi in grid)
    limit = free_boundary_rel_error(MethodId(method.scheme, Boundary.DIRICHLET_LIMIT), ste, None, settings)
    return SweepSeries(method, ste, grid, values, limit.e_rel)


def convergence_gap(
    method: MethodId,
    ste: float,
    bi_list: Sequence[float],
    settings: SolveSettings = DEFAULT_SETTINGS,
) -> list[tuple[float, float]]:
    """``[(bi, |xi(bi) - xi_limit|), ...]`` for a convective method."""
    if method.is_limit:
        raise ValidationError("method", "convergence gap needs a convective method")
    grid = _check_grid("bi_list", bi_list)
    limit = solve_method(MethodId(method.scheme, Boundary.DIRICHLET_LIMIT), ste, None, settings)
    return [(bi, abs(solve_method(method, ste, bi, settings).xi - limit.xi)) for bi in grid]


# -- temperature tables ----------------------------------------------------


@dataclass(frozen=True)
class ErrorTable:
    """Absolute temperature errors ``|T(x, t) - T_i(x, t)|`` at one instant.

    ``columns`` maps method labels ("P1".."P4") to one error per position.
    """

    t_probe: float
    positions: tuple[float, ...]
    columns: dict[str, tuple[float, ...]]
    params: PhysicalParams
    solutions: dict[str, SimilaritySolution] = field(default_factory=dict, compare=False)

    def rows(self):
        labels = list(self.columns)
        for j, x in enumerate(self.positions):
            yield x, [self.columns[m][j] for m in labels]


def temperature_error_table(
    t_probe: float,
    positions: Sequence[float],
    physical: PhysicalParams,
    settings: SolveSettings = DEFAULT_SETTINGS,
) -> ErrorTable:
    if not t_probe > 0:
        raise ValidationError("t_probe", "must be > 0")
    positions = tuple(float(x) for x in positions)
    if not positions:
        raise ValidationError("positions", "need at least one position")
    if positions[0] < 0 or any(b <= a for a, b in zip(positions, positions[1:])):
        raise ValidationError("positions", "must be >= 0 and strictly increasing")

    dims, alpha = dimensionless_from_physical(physical)
    theta = physical.theta_inf
    reference = exact.solve_exact(dims, settings)
    exact_t = [temperature(reference, theta, alpha, x, t_probe) for x in positions]

    columns: dict[str, tuple[float, ...]] = {}
    solutions = {"Exact": reference}
    for method in APPROX_METHODS:
        sol = hbim.solve_approx(method, dims, settings)
        solutions[method.label] = sol
        columns[method.label] = tuple(
            abs(te - temperature(sol, theta, alpha, x, t_probe)) for te, x in zip(exact_t, positions)
        )
    return ErrorTable(t_probe, positions, columns, physical, solutions)
