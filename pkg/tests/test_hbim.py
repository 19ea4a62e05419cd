import math

import pytest
from hypothesis import given, settings, strategies as st

from stefan_hbim import hbim
from stefan_hbim.errors import DomainError, InvariantViolation, ValidationError
from stefan_hbim.exact import solve_exact
from stefan_hbim.model import Boundary, DimensionlessParams, MethodId, Scheme

import oracles

SCHEMES = [Scheme.P1, Scheme.P2, Scheme.P3, Scheme.P4]
STES = (1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2)
BIS = (0.1, 1.0, 10.0, 100.0, 1e3, 1e6)
GRID = [(ste, bi) for ste in STES for bi in BIS]


def conv(scheme):
    return MethodId(scheme, Boundary.CONVECTIVE)


def lim(scheme):
    return MethodId(scheme, Boundary.DIRICHLET_LIMIT)


def interval(scheme, params):
    if scheme in (Scheme.P1, Scheme.P2):
        b = hbim.xi_bounds(params)
        return b.xi_min, b.xi_max
    return 0.0, math.sqrt(3)


def test_xi_bounds_at_unit_parameters():
    b = hbim.xi_bounds(DimensionlessParams(1.0, 1.0))
    assert b.xi_min == pytest.approx((math.sqrt(13) - 1) / 6, rel=1e-15)
    assert b.xi_max == pytest.approx((math.sqrt(57) - 3) / 8, rel=1e-15)


def test_xi_bounds_large_bi_limit():
    b = hbim.xi_bounds(DimensionlessParams(1.0, 1e9))
    assert abs(b.xi_min - math.sqrt(1 / 3)) <= 1e-6
    assert abs(b.xi_max - math.sqrt(3 / 4)) <= 1e-6
    assert hbim.limit_xi_interval(1.0) == pytest.approx((math.sqrt(1 / 3), math.sqrt(3 / 4)), rel=1e-15)


@pytest.mark.parametrize("ste,bi", GRID)
def test_xi_bounds_ordered_and_match_high_precision(ste, bi):
    b = hbim.xi_bounds(DimensionlessParams(ste, bi))
    assert b.xi_min < b.xi_max
    lo, hi = oracles.admissible_interval("p1", ste, bi)
    assert b.xi_min == pytest.approx(lo, rel=1e-14)
    assert b.xi_max == pytest.approx(hi, rel=1e-14)


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize("ste,bi", GRID)
def test_solution_invariants(scheme, ste, bi):
    params = DimensionlessParams(ste, bi)
    sol = hbim.solve_approx(conv(scheme), params)
    lo, hi = interval(scheme, params)
    assert lo < sol.xi < hi
    assert sol.coeff_a > 0 and sol.coeff_b > 0
    assert sol.coeff_a + sol.coeff_b < 1
    assert hbim.polynomial_residual(sol) <= 1e-10
    assert sol.xi == pytest.approx(oracles.approx_xi(scheme.value, ste, bi), rel=1e-9)


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize("ste,bi", GRID)
def test_endpoint_signs(scheme, ste, bi):
    params = DimensionlessParams(ste, bi)
    coeffs = hbim.polynomial_coefficients(scheme, ste, bi)
    lo, hi = interval(scheme, params)
    s_lo, s_hi = hbim.ENDPOINT_SIGNS[scheme]
    assert hbim.horner(coeffs, lo) * s_lo > 0
    assert hbim.horner(coeffs, hi) * s_hi > 0


def test_p3_and_p4_endpoint_values():
    ste, bi = 0.7, 3.0
    p3 = hbim.polynomial_coefficients(Scheme.P3, ste, bi)
    p4 = hbim.polynomial_coefficients(Scheme.P4, ste, bi)
    r3 = math.sqrt(3)
    assert hbim.horner(p3, 0.0) == -3 * ste
    assert hbim.horner(p3, r3) == pytest.approx(6 * r3 / bi + 18, rel=1e-14)
    assert hbim.horner(p4, 0.0) == 9 * ste
    assert hbim.horner(p4, r3) == pytest.approx(-6 * r3 / bi - 18, rel=1e-14)


def test_p3_unit_parameters_against_oracle():
    sol = hbim.solve_approx(conv(Scheme.P3), DimensionlessParams(1.0, 1.0))
    # z^3 + 7 z^2 + 3 z - 3 = 0
    assert abs(sol.xi**3 + 7 * sol.xi**2 + 3 * sol.xi - 3) <= 1e-12
    assert sol.xi == pytest.approx(oracles.approx_xi("p3", 1.0, 1.0), abs=1e-9)


def test_special_bi_needs_no_branch():
    sol = hbim.solve_approx(conv(Scheme.P1), DimensionlessParams(1.0, math.sqrt(3) / 3))
    assert sol.xi == pytest.approx(oracles.approx_xi("p1", 1.0, math.sqrt(3) / 3), rel=1e-9)


def test_p2_large_bi_close_to_limit():
    conv_xi = hbim.solve_approx(conv(Scheme.P2), DimensionlessParams(1.0, 1e6)).xi
    assert abs(conv_xi - hbim.solve_approx_limit(lim(Scheme.P2), 1.0).xi) <= 1e-5


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize("ste", (1e-3, 1e-1, 1.0, 10.0))
def test_limit_consistency(scheme, ste):
    far = hbim.solve_approx(conv(scheme), DimensionlessParams(ste, 1e6))
    closed = hbim.solve_approx_limit(lim(scheme), ste)
    assert abs(far.xi - closed.xi) <= 1e-4


@pytest.mark.parametrize(
    "scheme,ste,xi",
    [(Scheme.P1, 4.0, math.sqrt(1.125)), (Scheme.P3, 6.0, math.sqrt(1.5)), (Scheme.P4, 4.0, math.sqrt(1.5))],
)
def test_closed_form_spot_values(scheme, ste, xi):
    sol = hbim.solve_approx_limit(lim(scheme), ste)
    assert sol.xi == pytest.approx(xi, abs=1e-12)
    assert sol.coeff_a == pytest.approx(0.5, abs=1e-12)
    assert sol.coeff_b == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("scheme", SCHEMES)
@given(ste=st.floats(1e-4, 1e3))
@settings(max_examples=50, deadline=None)
def test_limit_closed_forms_solve_limit_polynomials(scheme, ste):
    sol = hbim.solve_approx_limit(lim(scheme), ste)
    assert hbim.polynomial_residual(sol) <= 1e-12
    assert 0 < sol.xi < math.sqrt(3)
    assert sol.coeff_a > 0 and sol.coeff_b > 0
    # with T(0) = -theta the fixed-face value is exact
    assert sol.coeff_a + sol.coeff_b == pytest.approx(1.0, rel=1e-12)
    if scheme in (Scheme.P1, Scheme.P2):
        lo, hi = hbim.limit_xi_interval(ste)
        assert lo < sol.xi < hi
    if scheme in (Scheme.P1, Scheme.P4):
        assert sol.coeff_a == pytest.approx((math.sqrt(2 * ste + 1) - 1) / ste, rel=1e-10)


@pytest.mark.parametrize("scheme", SCHEMES)
@given(ste=st.floats(1e-3, 1e2), bi=st.floats(1e-1, 1e6))
@settings(max_examples=40, deadline=None)
def test_root_coefficients_agree_with_formulas(scheme, ste, bi):
    sol = hbim.solve_approx(conv(scheme), DimensionlessParams(ste, bi))
    a, b = hbim.coefficients(scheme, sol.xi, ste, bi)
    # away from cancellation the two routes coincide
    assert sol.coeff_a == pytest.approx(a, rel=1e-6, abs=1e-9)


def test_cancellation_regime_keeps_b_positive():
    # the rational B formula collapses to rounding noise here
    sol = hbim.solve_approx(conv(Scheme.P1), DimensionlessParams(1e-3, 0.1))
    assert sol.coeff_b > 0
    report = hbim.residual_suite(sol.method, sol, 1.0, 1.0, 1.0)
    assert report.worst <= 1e-6


def test_approx_temperature_profile_values():
    theta, alpha, t = 5.0, 1.15e-6, 10.0
    sol = hbim.solve_approx(conv(Scheme.P3), DimensionlessParams(0.5, 2.0))
    s = hbim.free_boundary_position(sol, alpha, t)
    assert hbim.approx_temperature(sol, theta, alpha, s, t) == 0.0
    assert hbim.approx_temperature(sol, theta, alpha, 0.0, t) == pytest.approx(-(sol.coeff_a + sol.coeff_b) * theta)
    assert hbim.approx_temperature(sol, theta, alpha, s / 2, t) == pytest.approx(
        -theta * (sol.coeff_a / 2 + sol.coeff_b / 4), rel=1e-14
    )
    assert hbim.approx_temperature(sol, theta, alpha, 3 * s, t) == 0.0
    with pytest.raises(DomainError):
        hbim.approx_temperature(sol, theta, alpha, 0.0, 0.0)


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize("ste,bi", [(1e-3, 0.1), (1e-2, 1e3), (1.0, 1.0), (10.0, 1e6), (1e2, 0.1)])
def test_residual_suite_defining_conditions(scheme, ste, bi):
    sol = hbim.solve_approx(conv(scheme), DimensionlessParams(ste, bi))
    report = hbim.residual_suite(sol.method, sol, 5.0, 1.15e-6, 10.0)
    assert report.worst <= 1e-6
    present = set(report.present())
    assert "convective" in present
    if scheme in (Scheme.P1, Scheme.P2):
        assert "heat_balance" in present and "refined_balance" not in present
    else:
        assert "refined_balance" in present and "heat_balance" not in present
    if scheme in (Scheme.P2, Scheme.P3):
        assert "stefan" in present and "pseudo_stefan" not in present
    else:
        assert "pseudo_stefan" in present and "stefan" not in present
    if scheme is Scheme.P1:
        assert report.interface_temp == 0.0


def test_residual_suite_detects_wrong_solution():
    good = hbim.solve_approx(conv(Scheme.P2), DimensionlessParams(1.0, 1.0))
    bad = type(good)(good.method, good.xi * 1.01, good.coeff_a, good.coeff_b, good.ste, good.bi)
    assert hbim.residual_suite(bad.method, bad, 1.0, 1.0, 1.0).worst > 1e-3


def test_residual_suite_argument_errors():
    sol = hbim.solve_approx(conv(Scheme.P2), DimensionlessParams(1.0, 1.0))
    with pytest.raises(ValueError):
        hbim.residual_suite(conv(Scheme.P3), sol, 1.0, 1.0, 1.0)
    exact_sol = solve_exact(DimensionlessParams(1.0, 1.0))
    with pytest.raises(ValueError):
        hbim.residual_suite(exact_sol.method, exact_sol, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        hbim.residual_suite(sol.method, sol, 1.0, 1.0, 0.0)


def test_invariant_violation_carries_context(monkeypatch):
    real = hbim.polynomial_coefficients

    def flipped(scheme, ste, bi):
        c = list(real(scheme, ste, bi))
        c[-1] = -c[-1]
        return tuple(c)

    monkeypatch.setattr(hbim, "polynomial_coefficients", flipped)
    with pytest.raises(InvariantViolation) as info:
        hbim.solve_approx(conv(Scheme.P3), DimensionlessParams(1.0, 2.0))
    ctx = info.value.context
    assert ctx["method"] == "P3" and ctx["ste"] == 1.0 and ctx["bi"] == 2.0
    assert {"p_lo", "p_hi"} <= set(ctx)


def test_rejects_wrong_method_kind():
    with pytest.raises(ValueError):
        hbim.solve_approx(lim(Scheme.P1), DimensionlessParams(1.0, 1.0))
    with pytest.raises(ValueError):
        hbim.solve_approx_limit(conv(Scheme.P1), 1.0)
    with pytest.raises(ValidationError):
        hbim.solve_approx_limit(lim(Scheme.P1), 0.0)
