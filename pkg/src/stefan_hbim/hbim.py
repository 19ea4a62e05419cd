"""Quadratic-profile approximations P1..P4 and their Dirichlet limits.

Every scheme uses the profile

    T_i(x, t) = -A_i theta (1 - x/s_i) - B_i theta (1 - x/s_i)^2,   s_i = 2 xi_i sqrt(alpha t)

and differs only in which integral condition replaces the heat equation and
whether the true or the pseudo-Stefan condition is imposed at the front:

    P1  heat balance integral    + pseudo-Stefan
    P2  heat balance integral    + Stefan
    P3  refined (double) integral + Stefan
    P4  refined (double) integral + pseudo-Stefan

For finite Bi, xi_i is the unique root of a cubic/quartic inside an interval
where A_i, B_i > 0 is guaranteed; for Bi -> inf everything is closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Optional

import numpy as np

from .errors import DomainError, InvariantViolation
from .model import (
    APPROX_SCHEMES,
    Boundary,
    DimensionlessParams,
    MethodId,
    Scheme,
    SimilaritySolution,
    validate_ste,
)
from .numerics import DEFAULT_SETTINGS, Bracket, SolveSettings, central_diff, integrate, second_central_diff, solve_positive_root

SQRT3 = math.sqrt(3.0)
_FULL_PRECISION = 4 * np.finfo(float).eps

# expected signs of p(lo), p(hi) on the proved bracket
ENDPOINT_SIGNS = {
    Scheme.P1: (+1, -1),
    Scheme.P2: (-1, +1),
    Scheme.P3: (-1, +1),
    Scheme.P4: (+1, -1),
}


@dataclass(frozen=True)
class XiBounds:
    xi_min: float
    xi_max: float
    delta_min: float
    delta_max: float


def xi_bounds(params: DimensionlessParams) -> XiBounds:
    """Interval on which the P1/P2 coefficients A, B are both positive.

    Uses the rationalised forms ``2 Ste / (sqrt(Dmin) + 1/Bi)`` and
    ``6 Ste / (sqrt(Dmax) + 3/Bi)``, which avoid the cancellation in
    ``sqrt(D) - c/Bi`` when Ste*Bi is small.
    """
    ste, inv_bi = params.ste, 1.0 / params.bi
    d_min = 4 * ste**2 + 8 * ste + inv_bi**2
    d_max = 12 * ste**2 + 36 * ste + 9 * inv_bi**2
    return XiBounds(
        xi_min=2 * ste / (math.sqrt(d_min) + inv_bi),
        xi_max=6 * ste / (math.sqrt(d_max) + 3 * inv_bi),
        delta_min=d_min,
        delta_max=d_max,
    )


def limit_xi_interval(ste: float) -> tuple[float, float]:
    """Bi -> inf limit of :func:`xi_bounds`: ``(sqrt(S/(2+S)), sqrt(3S/(3+S)))``."""
    return math.sqrt(ste / (2 + ste)), math.sqrt(3 * ste / (3 + ste))


def polynomial_coefficients(scheme: Scheme, ste: float, bi: Optional[float]) -> tuple[float, ...]:
    """Coefficients (highest degree first) of the xi-polynomial of ``scheme``.

    ``bi=None`` gives the Dirichlet-limit polynomial (all 1/Bi terms dropped).
    """
    s = ste
    ib = 0.0 if bi is None else 1.0 / bi
    if scheme is Scheme.P1:
        return (
            12 + 9 * s + 2 * s * s,
            (21 + 6 * s) * ib,
            12 * ib * ib - 42 * s - 12 * s * s - 18,
            -(30 * s + 9) * ib,
            9 * s * (1 + 2 * s),
        )
    if scheme is Scheme.P2:
        return (1.0, 2 * ib, 6 + s, 3 * ib, -3 * s)
    if scheme is Scheme.P3:
        return (ib, 6 + s, 3 * ib, -3 * s)
    if scheme is Scheme.P4:
        return (s, -ib, -6 * (1 + s), -3 * ib, 9 * s)
    raise ValueError(f"no polynomial for scheme {scheme}")


def horner(coeffs: tuple[float, ...], z: float) -> float:
    acc = 0.0
    for c in coeffs:
        acc = acc * z + c
    return acc


def _scaled_residual(coeffs: tuple[float, ...], z: float) -> float:
    # |p(z)| over the sum of term magnitudes; immune to a tiny leading coefficient
    n = len(coeffs) - 1
    scale = sum(abs(c) * abs(z) ** (n - i) for i, c in enumerate(coeffs))
    return abs(horner(coeffs, z)) / scale if scale else 0.0


def polynomial_residual(sol: SimilaritySolution) -> float:
    return _scaled_residual(polynomial_coefficients(sol.method.scheme, sol.ste, sol.bi), sol.xi)


def coefficients(scheme: Scheme, xi: float, ste: float, bi: Optional[float]) -> tuple[float, float]:
    """``(A_i, B_i)`` as functions of ``xi`` from the integral + boundary conditions."""
    ib = 0.0 if bi is None else 1.0 / bi
    z = xi
    if scheme in (Scheme.P1, Scheme.P2):
        den = ste * (z * z + 2 * ib * z + 3)
        a = (6 * ste - (6 + 2 * ste) * z * z - 6 * ib * z) / den
        b = ((3 * ste + 6) * z * z + 3 * ib * z - 3 * ste) / den
        return a, b
    if scheme in (Scheme.P3, Scheme.P4):
        den = ib * z * z + 6 * z + 3 * ib
        return 2 * z * (3 - z * z) / den, 2 * z**3 / den
    raise ValueError(f"no coefficients for scheme {scheme}")


# below this fraction of surviving digits in the B numerator, switch formulas
_CANCELLATION = 1e-3


def root_coefficients(scheme: Scheme, xi: float, ste: float, bi: Optional[float]) -> tuple[float, float]:
    """``(A_i, B_i)`` at a root ``xi`` of the scheme's polynomial.

    Same values as :func:`coefficients` whenever ``xi`` is a root. For P1/P2
    the B numerator ``(3 Ste + 6) xi^2 + 3 xi/Bi - 3 Ste`` vanishes at
    xi_min, and when Ste*Bi is small the root lies within ~1e-13 of xi_min,
    so the numerator is pure rounding noise. In that case the front
    condition gives cancellation-free forms:

        P2 (Stefan):         A = 2 xi^2 / Ste,  B = 3 xi^4 / (Ste (3 - xi^2))
        P1 (pseudo-Stefan):  B = Ste A^2 / 2, with A the positive root of
                             Ste (3 - xi^2) A^2 + 3 (1 - xi^2) A - 6 xi^2 / Ste = 0

    Otherwise the convective-condition forms are kept, because at large Bi
    they are what keeps ``1 - A - B`` (of order 1/Bi) accurate.
    """
    if scheme not in (Scheme.P1, Scheme.P2):
        return coefficients(scheme, xi, ste, bi)
    ib = 0.0 if bi is None else 1.0 / bi
    z2 = xi * xi
    terms = ((3 * ste + 6) * z2, 3 * ib * xi, -3 * ste)
    if abs(sum(terms)) >= _CANCELLATION * sum(abs(v) for v in terms):
        return coefficients(scheme, xi, ste, bi)
    if scheme is Scheme.P2:
        return 2 * z2 / ste, 3 * z2 * z2 / (ste * (3 - z2))
    qa, qb, qc = ste * (3 - z2), 3 * (1 - z2), 6 * z2 / ste
    root = math.sqrt(qb * qb + 4 * qa * qc)
    a = 2 * qc / (qb + root) if qb >= 0 else (root - qb) / (2 * qa)
    return a, ste * a * a / 2


def solve_approx(
    method: MethodId,
    params: DimensionlessParams,
    settings: SolveSettings = DEFAULT_SETTINGS,
) -> SimilaritySolution:
    """Solve P1..P4 for finite Bi.

    Raises:
        InvariantViolation: the polynomial does not take the proved signs at
            the bracket endpoints.
    """
    if method.scheme not in APPROX_SCHEMES or method.boundary is not Boundary.CONVECTIVE:
        raise ValueError(f"solve_approx needs a convective P1..P4 method, got {method}")
    scheme, ste, bi = method.scheme, params.ste, params.bi
    if scheme in (Scheme.P1, Scheme.P2):
        bounds = xi_bounds(params)
        lo, hi = bounds.xi_min, bounds.xi_max
    else:
        lo, hi = 0.0, SQRT3

    coeffs = polynomial_coefficients(scheme, ste, bi)
    p_lo, p_hi = horner(coeffs, lo), horner(coeffs, hi)
    sign_lo, sign_hi = ENDPOINT_SIGNS[scheme]
    if not (p_lo * sign_lo > 0 and p_hi * sign_hi > 0):
        raise InvariantViolation(
            "endpoint sign assertion failed",
            method=method.label, ste=ste, bi=bi, p_lo=p_lo, p_hi=p_hi,
        )

    poly = lambda z: horner(coeffs, z)  # noqa: E731
    xi = solve_positive_root(poly, Bracket(lo, hi), settings)
    if not lo < xi < hi:
        # the root is strictly interior; it can sit within rel_tol of xi_min
        # (Ste=1e-3, Bi=0.1 gives a 1e-13 gap), so resolve it to full precision
        xi = solve_positive_root(poly, Bracket(lo, hi), replace(settings, rel_tol=_FULL_PRECISION, abs_tol=1e-300))
    a, b = root_coefficients(scheme, xi, ste, bi)
    return SimilaritySolution(method, xi, a, b, ste, bi)


def solve_approx_limit(method: MethodId, ste: float) -> SimilaritySolution:
    """Closed-form Dirichlet-limit (Bi -> inf) solution of P1..P4.

    The expressions are algebraically rearranged so that nothing of the form
    ``sqrt(1 + 2 Ste) - 1`` is formed; small Ste stays accurate.
    """
    if method.scheme not in APPROX_SCHEMES or method.boundary is not Boundary.DIRICHLET_LIMIT:
        raise ValueError(f"solve_approx_limit needs a Dirichlet-limit P1..P4 method, got {method}")
    s = validate_ste(ste)
    r = math.sqrt(2 * s + 1)
    if method.scheme is Scheme.P1:
        xi = math.sqrt(3 * s * r / (r * (s + 3) + 2 * s + 3))
        a = 2 / (r + 1)
        b = s / (1 + s + r)
    elif method.scheme is Scheme.P2:
        q = math.sqrt((6 + s) ** 2 + 12 * s)
        xi2 = 6 * s / (q + 6 + s)
        xi = math.sqrt(xi2)
        b = xi2 * (1 + (s + 24) / (q + 6)) / 6
        a = 1 - b
    elif method.scheme is Scheme.P3:
        xi = math.sqrt(3 * s / (6 + s))
        a, b = 6 / (6 + s), s / (6 + s)
    else:
        xi = math.sqrt(3 * s / (1 + s + r))
        a = 2 / (r + 1)
        b = s / (1 + s + r)
    return SimilaritySolution(method, xi, a, b, s, None)


def free_boundary_position(sol: SimilaritySolution, alpha: float, t: float) -> float:
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t!r}")
    return 2.0 * sol.xi * math.sqrt(alpha * t)


def _profile(sol: SimilaritySolution, theta_inf: float, alpha: float, x, t):
    # quadratic profile without the zero extension; accepts arrays
    u = 1.0 - x / (2.0 * sol.xi * np.sqrt(alpha * t))
    return -theta_inf * (sol.coeff_a * u + sol.coeff_b * u * u)


def approx_temperature(sol: SimilaritySolution, theta_inf: float, alpha: float, x: float, t: float) -> float:
    if not t > 0:
        raise DomainError(f"time must be > 0, got {t!r}")
    if x < 0:
        raise DomainError(f"position must be >= 0, got {x!r}")
    if x > free_boundary_position(sol, alpha, t):
        return 0.0
    return float(_profile(sol, theta_inf, alpha, x, t))


@dataclass(frozen=True)
class ResidualReport:
    """Relative residuals of the conditions defining a scheme.

    ``convective`` holds the fixed-face condition: the Robin condition for
    finite Bi, ``T(0, t) = -theta`` for Dirichlet-limit methods. Conditions
    that do not belong to the method's problem are ``None``.
    """

    heat_balance: Optional[float] = None
    refined_balance: Optional[float] = None
    convective: Optional[float] = None
    stefan: Optional[float] = None
    pseudo_stefan: Optional[float] = None
    interface_temp: Optional[float] = None

    def present(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self) if getattr(self, f.name) is not None}

    @property
    def worst(self) -> float:
        return max(self.present().values())


def _rel(diff: float, *terms: float) -> float:
    scale = max(abs(v) for v in terms)
    return abs(diff) / scale if scale > 0 else abs(diff)


def residual_suite(
    method: MethodId,
    sol: SimilaritySolution,
    theta_inf: float,
    alpha: float,
    t_probe: float,
) -> ResidualReport:
    """Check ``sol`` against exactly the conditions that define ``method``.

    Integrals use composite Simpson, derivatives central differences. The
    time derivative of the heat-balance integral is taken analytically
    (the integral scales like sqrt(t)) and cross-checked by a central
    difference in t; the larger of the two residuals is reported.
    """
    if sol.method != method:
        raise ValueError(f"solution was produced by {sol.method}, not {method}")
    if method.scheme not in APPROX_SCHEMES:
        raise ValueError(f"residual_suite covers P1..P4, got {method}")
    if not t_probe > 0:
        raise DomainError(f"t_probe must be > 0, got {t_probe!r}")

    t = t_probe
    theta, ste = theta_inf, sol.ste
    s = free_boundary_position(sol, alpha, t)
    sdot = sol.xi * math.sqrt(alpha / t)
    # the profile is quadratic in x, so central differences are exact for any
    # step; a wide one keeps rounding small when B << A
    hx = s
    ht = 1e-4 * t
    latent = theta / ste  # lambda / c

    def T(x, tau=t):
        return _profile(sol, theta, alpha, x, tau)

    def T_x(x):
        return central_diff(T, x, hx)

    out: dict[str, float] = {}
    T0, dT0 = float(T(0.0)), T_x(0.0)

    if method.is_limit:
        out["convective"] = abs(T0 + theta) / theta
    else:
        robin = sol.bi / math.sqrt(alpha * t) * (T0 + theta)
        out["convective"] = _rel(dT0 - robin, dT0, robin)

    out["interface_temp"] = abs(float(T(s))) / theta

    if method.scheme in (Scheme.P1, Scheme.P2):
        def heat_integral(tau):
            return integrate(lambda x: T(x, tau), 0.0, free_boundary_position(sol, alpha, tau))

        rhs_front, rhs_face = latent * sdot, alpha * dT0
        rhs = rhs_front - rhs_face
        analytic = heat_integral(t) / (2 * t)
        by_fd = central_diff(heat_integral, t, ht)
        out["heat_balance"] = max(
            _rel(analytic - rhs, analytic, rhs_front, rhs_face),
            _rel(by_fd - rhs, by_fd, rhs_front, rhs_face),
        )
    else:
        # int_0^s int_0^x T_t dxi dx == int_0^s (s - xi) T_t(xi) dxi
        def weighted_rate(x):
            return (s - x) * (T(x, t + ht) - T(x, t - ht)) / (2 * ht)

        lhs = integrate(weighted_rate, 0.0, s)
        face, flux = alpha * T0, alpha * dT0 * s
        out["refined_balance"] = _rel(lhs + face + flux, lhs, face, flux)

    dTs = T_x(s)
    if method.scheme in (Scheme.P2, Scheme.P3):
        stefan_rhs = latent / alpha * sdot
        out["stefan"] = _rel(dTs - stefan_rhs, dTs, stefan_rhs)
    else:
        curvature = latent * second_central_diff(T, s, hx)
        out["pseudo_stefan"] = _rel(dTs * dTs + curvature, dTs * dTs, curvature)

    return ResidualReport(**out)
