"""Delta-shock solutions for data past the classical two-contact range.

When the normal velocity jump u = v_{-2} - v_{+2} reaches 1/rho_- + 1/rho_+,
the middle density blows up and mass concentrates on a line x2 = sigma t. The
solution consists of the two outer states plus a weighted Dirac mass omega(t)
carrying velocity (xi, sigma) on that line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import RiemannData, density_jump_is_zero
from .errors import DomainError, RegimeError
from .riemann1d import RegimeKind, classify


@dataclass(frozen=True)
class DeltaShockSolution:
    """Concentration with mass omega(t) = omega_slope * t on the line x2 = sigma t."""

    omega_slope: float
    sigma: float  # shock speed; also the normal velocity carried by the line
    xi: float  # tangential velocity carried by the line

    def __post_init__(self):
        if not self.omega_slope >= 0.0:
            raise DomainError(
                f"concentrated mass must grow, got omega_slope={self.omega_slope!r}"
            )


def solve_delta(data: RiemannData) -> DeltaShockSolution:
    """Closed-form delta shock; requires u >= 1/rho_- + 1/rho_+ (boundary included)."""
    tag = classify(data)
    if tag.kind is not RegimeKind.DELTA_SHOCK:
        raise RegimeError(
            f"delta shock requires u >= 1/rho_- + 1/rho_+, data is {tag.kind.value}"
        )
    lft, rgt = data.left, data.right
    if density_jump_is_zero(lft.rho, rgt.rho):
        # limits of the generic formulas as rho_- -> rho_+
        slope = lft.rho * lft.v2 - rgt.rho * rgt.v2
        return DeltaShockSolution(
            slope, 0.5 * (rgt.v2 + lft.v2), 0.5 * (rgt.v1 + lft.v1)
        )
    u = data.u
    big_r = lft.rho - rgt.rho
    radicand = lft.rho * rgt.rho * u * u - big_r * big_r / (lft.rho * rgt.rho)
    s = math.sqrt(radicand)
    sigma = (rgt.rho * rgt.v2 - lft.rho * lft.v2 + s) / (rgt.rho - lft.rho)
    xi = (
        (rgt.rho * rgt.v1 - lft.rho * lft.v1) * s
        + lft.rho * rgt.rho * (rgt.v2 - lft.v2) * (rgt.v1 - lft.v1)
    ) / ((rgt.rho - lft.rho) * s)
    return DeltaShockSolution(s, sigma, xi)


def generalized_rh_residual(
    data: RiemannData, ds: DeltaShockSolution
) -> tuple[float, float, float]:
    """Residuals of the generalized Rankine-Hugoniot system for omega(t) = omega_slope t.

    Jumps are taken plus minus minus; the inverse density is set to zero on the
    shock line itself, so the x2-momentum flux jump keeps only the bulk -1/rho
    terms. All three residuals vanish exactly for the closed-form solution.
    """
    lft, rgt = data.left, data.right
    d_rho = rgt.rho - lft.rho
    d_m1 = rgt.rho * rgt.v1 - lft.rho * lft.v1
    d_m2 = rgt.rho * rgt.v2 - lft.rho * lft.v2
    d_f2 = (
        rgt.rho * rgt.v2 * rgt.v2
        - 1.0 / rgt.rho
        - lft.rho * lft.v2 * lft.v2
        + 1.0 / lft.rho
    )
    r1 = ds.omega_slope - (ds.sigma * d_rho - d_m2)
    r2 = ds.omega_slope * ds.xi - (ds.sigma * d_m1 - (rgt.rho * rgt.v1 * rgt.v2 - lft.rho * lft.v1 * lft.v2))
    r3 = ds.omega_slope * ds.sigma - (ds.sigma * d_m2 - d_f2)
    return (r1, r2, r3)


def galilean_shift(
    data: RiemannData, ds: DeltaShockSolution, c: tuple[float, float]
) -> tuple[RiemannData, DeltaShockSolution]:
    """Shift every velocity by c; the concentrated mass slope is invariant."""
    c1, c2 = c
    return (
        data.shifted(c1, c2),
        DeltaShockSolution(ds.omega_slope, ds.sigma + c2, ds.xi + c1),
    )


@dataclass(frozen=True)
class DeltaEnergyReport:
    """Energy admissibility of a delta shock, checked in its rest frame.

    After shifting the shock to sigma = xi = 0, admissibility reduces to two
    exact balances (cross and flux residuals), one cubic flux inequality, and
    the endpoint inequalities v_{+2} <= -1/rho_+, v_{-2} >= 1/rho_-.
    """

    shift: tuple[float, float]
    cross_residual: float  # rho_+ v_{+1} v_{+2} - rho_- v_{-1} v_{-2}
    flux_residual: float  # rho_+ v_{+2}^2 - rho_- v_{-2}^2 - 1/rho_+ + 1/rho_-
    cubic_margin: float  # >= 0 up to tolerance
    endpoint_minus: float  # v_{-2} - 1/rho_-   >= 0
    endpoint_plus: float  # -1/rho_+ - v_{+2}  >= 0
    tolerance: float = 1e-10

    @property
    def passed(self) -> bool:
        return (
            abs(self.cross_residual) <= self.tolerance
            and abs(self.flux_residual) <= self.tolerance
            and self.cubic_margin >= -self.tolerance
            and self.endpoint_minus >= -self.tolerance
            and self.endpoint_plus >= -self.tolerance
        )


def delta_energy_margin(data: RiemannData, ds: DeltaShockSolution) -> DeltaEnergyReport:
    """Evaluate the energy-admissibility balances of a delta shock."""
    tag = classify(data)
    if tag.kind is not RegimeKind.DELTA_SHOCK:
        raise RegimeError(
            f"energy margins are defined for delta shocks only, data is {tag.kind.value}"
        )
    shift = (-ds.xi, -ds.sigma)
    shifted, _ = galilean_shift(data, ds, shift)
    lft, rgt = shifted.left, shifted.right
    cross = rgt.rho * rgt.v1 * rgt.v2 - lft.rho * lft.v1 * lft.v2
    flux = (
        rgt.rho * rgt.v2 * rgt.v2
        - lft.rho * lft.v2 * lft.v2
        - 1.0 / rgt.rho
        + 1.0 / lft.rho
    )
    cubic = -(
        rgt.rho * rgt.v2**3
        - lft.rho * lft.v2**3
        - rgt.v2 / rgt.rho
        + lft.v2 / lft.rho
        + rgt.rho * rgt.v1 * rgt.v1 * rgt.v2
        - lft.rho * lft.v1 * lft.v1 * lft.v2
    )
    return DeltaEnergyReport(
        shift=shift,
        cross_residual=cross,
        flux_residual=flux,
        cubic_margin=cubic,
        endpoint_minus=lft.v2 - 1.0 / lft.rho,
        endpoint_plus=-1.0 / rgt.rho - rgt.v2,
    )
