"""Parameter types and the dimensional -> dimensionless conversion."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields
from typing import Optional

from .errors import ValidationError

# Ste or Bi below this is treated as numerically degenerate
DEGENERATE = 1e-12


class Scheme(enum.Enum):
    EXACT = "exact"
    P1 = "p1"  # classical heat balance integral
    P2 = "p2"  # heat balance integral, true Stefan condition kept
    P3 = "p3"  # refined integral method
    P4 = "p4"  # refined integral method, pseudo-Stefan condition


class Boundary(enum.Enum):
    CONVECTIVE = "convective"
    DIRICHLET_LIMIT = "dirichlet"


APPROX_SCHEMES = (Scheme.P1, Scheme.P2, Scheme.P3, Scheme.P4)


@dataclass(frozen=True)
class MethodId:
    scheme: Scheme
    boundary: Boundary = Boundary.CONVECTIVE

    @classmethod
    def parse(cls, name: str, limit: bool = False) -> "MethodId":
        """``MethodId.parse("p3")`` or ``MethodId.parse("exact", limit=True)``."""
        try:
            scheme = Scheme(name.lower())
        except ValueError:
            choices = ", ".join(s.value for s in Scheme)
            raise ValidationError("method", f"unknown method {name!r} (choose from {choices})") from None
        return cls(scheme, Boundary.DIRICHLET_LIMIT if limit else Boundary.CONVECTIVE)

    @property
    def is_limit(self) -> bool:
        return self.boundary is Boundary.DIRICHLET_LIMIT

    @property
    def label(self) -> str:
        base = "Exact" if self.scheme is Scheme.EXACT else self.scheme.name
        return base + ("inf" if self.is_limit else "")

    def __str__(self) -> str:
        return self.label


def _check_positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ValidationError(name, f"must be a finite positive number, got {value!r}")
    return value


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional data of the solidification problem (SI units).

    ``transfer_h`` multiplies ``1/sqrt(t)`` in the convective condition, so
    its unit is W s^(1/2) / (m^2 degC). ``theta_inf`` is the magnitude of the
    (negative) ambient temperature at the fixed face.
    """

    conductivity_k: float
    density_rho: float
    specific_heat_c: float
    latent_heat_lambda: float
    transfer_h: float
    theta_inf: float

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, _check_positive(f.name, getattr(self, f.name)))

    @property
    def alpha(self) -> float:
        return self.conductivity_k / (self.density_rho * self.specific_heat_c)


@dataclass(frozen=True)
class DimensionlessParams:
    ste: float
    bi: float

    def __post_init__(self):
        for name in ("ste", "bi"):
            value = _check_positive(name, getattr(self, name))
            if value < DEGENERATE:
                raise ValidationError(name, f"{value!r} is below {DEGENERATE} (numerically degenerate)")
            object.__setattr__(self, name, value)


def validate_ste(ste: float) -> float:
    return DimensionlessParams(ste, 1.0).ste


@dataclass(frozen=True)
class SimilaritySolution:
    """Coefficients of a similarity solution ``s(t) = 2 xi sqrt(alpha t)``.

    For the exact scheme ``coeff_a``/``coeff_b`` are the A, B of the erf
    profile; for P1..P4 they weight the linear and quadratic terms of the
    quadratic profile. ``bi`` is ``None`` for Dirichlet-limit solutions.
    """

    method: MethodId
    xi: float
    coeff_a: float
    coeff_b: float
    ste: float
    bi: Optional[float]

    @property
    def bi_label(self) -> str:
        return "inf" if self.bi is None else repr(self.bi)


def dimensionless_from_physical(p: PhysicalParams) -> tuple[DimensionlessParams, float]:
    """Return ``(DimensionlessParams(ste, bi), alpha)`` for physical data ``p``."""
    alpha = p.alpha
    ste = p.specific_heat_c * p.theta_inf / p.latent_heat_lambda
    bi = p.transfer_h * math.sqrt(alpha) / p.conductivity_k
    return DimensionlessParams(ste, bi), alpha


def physical_from_dimensionless(
    dims: DimensionlessParams,
    conductivity_k: float,
    density_rho: float,
    specific_heat_c: float,
    latent_heat_lambda: float,
) -> PhysicalParams:
    """Material data plus ``(ste, bi)`` -> the implied ``theta_inf`` and ``h``."""
    alpha = conductivity_k / (density_rho * specific_heat_c)
    return PhysicalParams(
        conductivity_k=conductivity_k,
        density_rho=density_rho,
        specific_heat_c=specific_heat_c,
        latent_heat_lambda=latent_heat_lambda,
        transfer_h=dims.bi * conductivity_k / math.sqrt(alpha),
        theta_inf=dims.ste * latent_heat_lambda / specific_heat_c,
    )


def _ice() -> PhysicalParams:
    k, c, alpha = 2.219, 2097.6, 1.15e-6
    # rho is not tabulated for ice; it follows from alpha = k/(rho c).
    # h is pinned to Bi = 80 exactly (1.655e5, quoted as 1.65e5 after rounding).
    return PhysicalParams(
        conductivity_k=k,
        density_rho=k / (c * alpha),
        specific_heat_c=c,
        latent_heat_lambda=3.33e5,
        transfer_h=80.0 * k / math.sqrt(alpha),
        theta_inf=5.0,
    )


PRESETS: dict[str, PhysicalParams] = {"ice": _ice()}


def preset(name: str) -> PhysicalParams:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValidationError("preset", f"unknown preset {name!r} (choose from {', '.join(PRESETS)})") from None
