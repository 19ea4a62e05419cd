"""Exact similarity solution for the convective problem and its Dirichlet limit.

The temperature in the solid is ``-A*theta + B*theta*erf(x / (2 sqrt(alpha t)))``
on ``0 <= x <= s(t)`` and is extended by 0 beyond the free boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, NumericalError
from .model import Boundary, DimensionlessParams, MethodId, Scheme, SimilaritySolution, validate_ste
from .numerics import DEFAULT_SETTINGS, Bracket, SolveSettings, central_diff, erf, second_central_diff, solve_positive_root

SQRT_PI = math.sqrt(math.pi)

EXACT = MethodId(Scheme.EXACT, Boundary.CONVECTIVE)
EXACT_LIMIT = MethodId(Scheme.EXACT, Boundary.DIRICHLET_LIMIT)


def xi_equation(ste: float, bi: float | None) -> Callable[[float], float]:
    """Left-hand side ``z exp(z^2) (erf z + 1/(Bi sqrt(pi))) - Ste/sqrt(pi)``.

    ``bi=None`` drops the convective term (Dirichlet limit).
    """
    c = 0.0 if bi is None else 1.0 / (bi * SQRT_PI)
    rhs = ste / SQRT_PI

    def f(z: float) -> float:
        return z * math.exp(z * z) * (erf(z) + c) - rhs

    return f


def _bracket_root(f: Callable[[float], float], ste: float) -> Bracket:
    lo, hi = 1e-12, max(1.0, math.sqrt(ste))
    # f(0+) = -Ste/sqrt(pi) < 0, but at tiny Ste*Bi the root may sit below 1e-12
    while f(lo) >= 0.0:
        lo *= 1e-6
        if lo < 1e-300:
            raise NumericalError(f"cannot isolate xi from below for ste={ste!r}")
    for _ in range(64):
        try:
            if f(hi) > 0.0:
                return Bracket(lo, hi)
        except OverflowError:
            break
        hi *= 2.0
    raise NumericalError(f"bracket expansion failed for ste={ste!r}")


def _solve_xi(ste: float, bi: float | None, settings: SolveSettings) -> float:
    f = xi_equation(ste, bi)
    return solve_positive_root(f, _bracket_root(f, ste), settings)


def solve_exact(params: DimensionlessParams, settings: SolveSettings = DEFAULT_SETTINGS) -> SimilaritySolution:
    xi = _solve_xi(params.ste, params.bi, settings)
    b = 1.0 / (1.0 / (params.bi * SQRT_PI) + erf(xi))
    return SimilaritySolution(EXACT, xi, erf(xi) * b, b, params.ste, params.bi)


def solve_exact_dirichlet(ste: float, settings: SolveSettings = DEFAULT_SETTINGS) -> SimilaritySolution:
    ste = validate_ste(ste)
    xi = _solve_xi(ste, None, settings)
    return SimilaritySolution(EXACT_LIMIT, xi, 1.0, 1.0 / erf(xi), ste, None)


def equation_residual(sol: SimilaritySolution) -> float:
    """``|f(xi)|`` relative to ``Ste/sqrt(pi)``."""
    return abs(xi_equation(sol.ste, sol.bi)(sol.xi)) / (sol.ste / SQRT_PI)


def free_boundary_position(sol: SimilaritySolution, alpha: float, t: float) -> float:
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t!r}")
    return 2.0 * sol.xi * math.sqrt(alpha * t)


@dataclass(frozen=True)
class TemperatureField:
    solution: SimilaritySolution
    alpha: float
    theta_inf: float

    def __post_init__(self):
        if self.solution.method.scheme is not Scheme.EXACT:
            raise ValueError(f"TemperatureField needs an exact solution, got {self.solution.method}")

    def unclipped(self, x: float, t: float) -> float:
        # erf profile continued past s(t) and to x < 0; used by residual checks
        sol = self.solution
        return self.theta_inf * (-sol.coeff_a + sol.coeff_b * erf(x / (2.0 * math.sqrt(self.alpha * t))))


def temperature(field: TemperatureField, x: float, t: float) -> float:
    if not t > 0:
        raise DomainError(f"time must be > 0, got {t!r}")
    if x < 0:
        raise DomainError(f"position must be >= 0, got {x!r}")
    if x > free_boundary_position(field.solution, field.alpha, t):
        return 0.0
    return field.unclipped(x, t)


def residuals(field: TemperatureField, x: float, t: float) -> dict[str, float]:
    """Relative residuals of the defining conditions at ``(x, t)``.

    Keys: ``convective`` (or ``dirichlet`` for the limit solution), ``stefan``
    and ``heat`` (heat equation at interior point ``x``). Spatial and time
    derivatives are central differences; ``ds/dt`` is analytic.
    """
    sol = field.solution
    alpha, theta = field.alpha, field.theta_inf
    length = 2.0 * math.sqrt(alpha * t)
    hx = 1e-5 * length
    out: dict[str, float] = {}

    T0 = field.unclipped(0.0, t)
    if sol.bi is None:
        out["dirichlet"] = abs(T0 + theta) / theta
    else:
        dT0 = central_diff(lambda y: field.unclipped(y, t), 0.0, hx)
        # k T_x = (h/sqrt t)(T + theta) with h/k = Bi/sqrt(alpha)
        robin = sol.bi / math.sqrt(alpha * t) * (T0 + theta)
        out["convective"] = _rel(dT0 - robin, dT0, robin)

    s = free_boundary_position(sol, alpha, t)
    dTs = central_diff(lambda y: field.unclipped(y, t), s, hx)
    sdot = sol.xi * math.sqrt(alpha / t)
    # k T_x = rho lambda sdot  <=>  T_x = theta / (Ste alpha) * sdot
    latent = theta / (sol.ste * alpha) * sdot
    out["stefan"] = _rel(dTs - latent, dTs, latent)

    ht = 1e-4 * t
    dTdt = central_diff(lambda tau: field.unclipped(x, tau), t, ht)
    d2T = alpha * second_central_diff(lambda y: field.unclipped(y, t), x, 1e-3 * length)
    out["heat"] = _rel(dTdt - d2T, dTdt, d2T)
    return out


def _rel(diff: float, *terms: float) -> float:
    scale = max(abs(v) for v in terms)
    return abs(diff) / scale if scale > 0 else abs(diff)
