"""Invariant suite over a (Ste, Bi) grid, used by ``stefan-hbim verify``."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from . import exact, hbim
from .analysis import APPROX_METHODS, convergence_gap
from .errors import StefanError
from .model import Boundary, DimensionlessParams, MethodId, Scheme

STE_GRID = (1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2)
BI_GRID = (1e-1, 1.0, 1e1, 1e2, 1e3, 1e6)
QUICK_STE_GRID = (1e-2, 1.0, 1e1)
QUICK_BI_GRID = (1.0, 1e2, 1e6)
CONVERGENCE_BI = (1e1, 1e2, 1e3, 1e4, 1e5, 1e6)

RESIDUAL_TOL = 1e-6
POLY_TOL = 1e-10
GAP_TOL = 1e-4
EXACT_EQ_TOL = 1e-10
EXACT_BC_TOL = 1e-8
EXACT_HEAT_TOL = 1e-5

# probe points in units of the free boundary, and unit scales for T and x
_FRACTIONS = (0.1, 0.5, 0.9)
_THETA, _ALPHA, _T = 1.0, 1.0, 1.0


@dataclass
class CheckResult:
    name: str
    total: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.total > 0 and not self.failures

    def record(self, ok: bool, where: str) -> None:
        self.total += 1
        if not ok:
            self.failures.append(where)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} ({self.total - len(self.failures)}/{self.total})"


@dataclass
class VerifyReport:
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            out.append(c.line())
            out.extend(f"  - {w}" for w in c.failures)
        n_fail = sum(not c.passed for c in self.checks)
        out.append(f"{'OK' if n_fail == 0 else 'FAILED'}: {len(self.checks) - n_fail}/{len(self.checks)} checks passed")
        return out


def _where(method: MethodId, ste: float, bi) -> str:
    return f"{method.label} ste={ste:g} bi={'inf' if bi is None else format(bi, 'g')}"


def _guard(check: CheckResult, where: str, fn: Callable[[], bool]) -> None:
    try:
        ok = fn()
    except StefanError as exc:
        check.record(False, f"{where}: {exc}")
        return
    check.record(bool(ok), where)


def run(
    ste_grid: Sequence[float] = STE_GRID,
    bi_grid: Sequence[float] = BI_GRID,
    methods: Iterable[MethodId] = APPROX_METHODS,
) -> VerifyReport:
    """Run every check; never raises on a failed invariant."""
    methods = tuple(methods)
    checks: dict[str, CheckResult] = {}

    def get(name: str) -> CheckResult:
        if name not in checks:
            checks[name] = CheckResult(name)
        return checks[name]

    for method in methods:
        scheme = method.scheme
        for ste in ste_grid:
            for bi in bi_grid:
                where = _where(method, ste, bi)
                params = DimensionlessParams(ste, bi)

                def endpoint_ok() -> bool:
                    if scheme in (Scheme.P1, Scheme.P2):
                        b = hbim.xi_bounds(params)
                        lo, hi = b.xi_min, b.xi_max
                    else:
                        lo, hi = 0.0, hbim.SQRT3
                    coeffs = hbim.polynomial_coefficients(scheme, ste, bi)
                    s_lo, s_hi = hbim.ENDPOINT_SIGNS[scheme]
                    return hbim.horner(coeffs, lo) * s_lo > 0 and hbim.horner(coeffs, hi) * s_hi > 0

                _guard(get(f"endpoint-sign {method.label}"), where, endpoint_ok)

                try:
                    sol = hbim.solve_approx(method, params)
                except StefanError as exc:
                    for name in ("interval", "positivity", "a-plus-b", "residual-suite", "polynomial-residual"):
                        get(f"{name} {method.label}").record(False, f"{where}: {exc}")
                    continue

                if scheme in (Scheme.P1, Scheme.P2):
                    b = hbim.xi_bounds(params)
                    lo, hi = b.xi_min, b.xi_max
                else:
                    lo, hi = 0.0, hbim.SQRT3
                get(f"interval {method.label}").record(lo < sol.xi < hi, where)
                get(f"positivity {method.label}").record(sol.coeff_a > 0 and sol.coeff_b > 0, where)
                get(f"a-plus-b {method.label}").record(sol.coeff_a + sol.coeff_b < 1, where)
                _guard(
                    get(f"residual-suite {method.label}"), where,
                    lambda: hbim.residual_suite(method, sol, _THETA, _ALPHA, _T).worst <= RESIDUAL_TOL,
                )
                get(f"polynomial-residual {method.label}").record(hbim.polynomial_residual(sol) <= POLY_TOL, where)

        for ste in ste_grid:
            limit_method = MethodId(scheme, Boundary.DIRICHLET_LIMIT)
            where = _where(limit_method, ste, None)

            def limit_ok() -> bool:
                sol = hbim.solve_approx_limit(limit_method, ste)
                report = hbim.residual_suite(limit_method, sol, _THETA, _ALPHA, _T)
                return 0 < sol.xi < hbim.SQRT3 and sol.coeff_a > 0 and sol.coeff_b > 0 and report.worst <= RESIDUAL_TOL

            _guard(get(f"limit-suite {method.label}"), where, limit_ok)

            def convergence_ok() -> bool:
                gaps = [g for _, g in convergence_gap(method, ste, CONVERGENCE_BI)]
                decreasing = all(b < a for a, b in zip(gaps, gaps[1:]))
                return decreasing and gaps[-1] <= GAP_TOL

            _guard(get(f"convergence {method.label}"), f"{method.label} ste={ste:g}", convergence_ok)

    for ste in ste_grid:
        for bi in (*bi_grid, None):
            where = _where(exact.EXACT if bi is not None else exact.EXACT_LIMIT, ste, bi)

            def exact_ok() -> bool:
                if bi is None:
                    sol = exact.solve_exact_dirichlet(ste)
                else:
                    sol = exact.solve_exact(DimensionlessParams(ste, bi))
                if exact.equation_residual(sol) > EXACT_EQ_TOL:
                    return False
                fld = exact.TemperatureField(sol, _ALPHA, _THETA)
                s = exact.free_boundary_position(sol, _ALPHA, _T)
                for frac in _FRACTIONS:
                    res = exact.residuals(fld, frac * s, _T)
                    bc = res.get("convective", res.get("dirichlet"))
                    if not (bc <= EXACT_BC_TOL and res["stefan"] <= EXACT_BC_TOL and res["heat"] <= EXACT_HEAT_TOL):
                        return False
                return True

            _guard(get("exact-solution"), where, exact_ok)

    return VerifyReport(list(checks.values()))


def run_quick() -> VerifyReport:
    return run(QUICK_STE_GRID, QUICK_BI_GRID)

