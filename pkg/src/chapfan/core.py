"""Chaplygin-gas constitutive relations, state types, and wave-curve algebra.

The system is the 2D isentropic Euler system with pressure law p(rho) = -1/rho,
reduced to planar Riemann data (two constant states separated by x2 = 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

# Densities below this threshold are numerically indistinguishable from vacuum:
# 1/rho and 1/rho^2 must stay finite in double precision.
MIN_DENSITY = 1e-300

# Relative density-jump threshold below which the R = rho_- - rho_+ denominators
# lose all precision and the equal-density closed forms are used instead.
EQUAL_DENSITY_RTOL = 1e-10


def _check_density(rho: float) -> float:
    # "not (rho >= MIN_DENSITY)" also rejects NaN
    if not (rho >= MIN_DENSITY) or math.isinf(rho):
        raise DomainError(f"density must be positive and finite, got {rho!r}")
    return rho


def density_jump_is_zero(rho_minus: float, rho_plus: float) -> bool:
    """True when rho_- and rho_+ are too close for the 1/(rho_- - rho_+) branch."""
    return abs(rho_minus - rho_plus) <= EQUAL_DENSITY_RTOL * max(rho_minus, rho_plus)


@dataclass(frozen=True)
class State2D:
    """Constant gas state: density and the two velocity components."""

    rho: float
    v1: float
    v2: float

    def __post_init__(self):
        _check_density(self.rho)

    @property
    def speed2(self) -> float:
        """|v|^2."""
        return self.v1 * self.v1 + self.v2 * self.v2

    def shifted(self, c1: float, c2: float) -> "State2D":
        """Galilean shift of the velocity by (c1, c2)."""
        return State2D(self.rho, self.v1 + c1, self.v2 + c2)


@dataclass(frozen=True)
class RiemannData:
    """Planar Riemann data: `left` fills x2 < 0, `right` fills x2 > 0 at t = 0."""

    left: State2D
    right: State2D

    @property
    def u(self) -> float:
        """Normal velocity jump v_{-2} - v_{+2} (positive for approaching streams)."""
        return self.left.v2 - self.right.v2

    def shifted(self, c1: float, c2: float) -> "RiemannData":
        return RiemannData(self.left.shifted(c1, c2), self.right.shifted(c1, c2))

    def mirrored(self) -> "RiemannData":
        """Reflection x2 -> -x2: swaps the sides and negates normal velocities."""
        lft, rgt = self.left, self.right
        return RiemannData(
            State2D(rgt.rho, rgt.v1, -rgt.v2),
            State2D(lft.rho, lft.v1, -lft.v2),
        )


@dataclass(frozen=True)
class NotationBundle:
    """Jump quantities shared by the delta-shock and subsolution closed forms."""

    R: float  # density jump rho_- - rho_+
    A: float  # normal momentum jump rho_- v_{-2} - rho_+ v_{+2}
    u: float  # normal velocity jump v_{-2} - v_{+2}
    B: float  # rho_- rho_+ u^2 - R^2/(rho_- rho_+); > 0 off the contact curves


def pressure(rho: float) -> float:
    """Chaplygin pressure p(rho) = -1/rho."""
    return -1.0 / _check_density(rho)


def internal_energy(rho: float) -> float:
    """Specific internal energy e(rho) = 1/(2 rho^2); satisfies p = rho^2 e'."""
    rho = _check_density(rho)
    return 0.5 / (rho * rho)


def energy_density(state: State2D) -> float:
    """Total energy density rho e(rho) + rho |v|^2 / 2 (the system's entropy)."""
    return 0.5 / state.rho + 0.5 * state.rho * state.speed2


def energy_flux_x2(state: State2D) -> float:
    """x2 component of the energy flux, (eta + p) v2."""
    return (energy_density(state) + pressure(state.rho)) * state.v2


def eigenvalues(state: State2D) -> tuple[float, float, float]:
    """Characteristic speeds (v2 - 1/rho, v2, v2 + 1/rho), strictly ordered."""
    c = 1.0 / state.rho
    return (state.v2 - c, state.v2, state.v2 + c)


def on_wave_curve(anchor: State2D, probe: tuple[float, float], family: int) -> float:
    """Residual of the family-1 or family-3 contact curve through `anchor`.

    Family 1 keeps v2 - 1/rho constant, family 3 keeps v2 + 1/rho constant;
    the residual (v2 - v2_a) -/+ (1/rho - 1/rho_a) vanishes exactly when the
    probe point (rho, v2) lies on the corresponding curve.
    """
    rho, v2 = probe
    rho = _check_density(rho)
    if family == 1:
        sign = -1.0
    elif family == 3:
        sign = 1.0
    else:
        raise DomainError(f"family must be 1 or 3, got {family!r}")
    return (v2 - anchor.v2) + sign * (1.0 / rho - 1.0 / anchor.rho)


def chaplygin_P(r: float, s: float) -> float:
    """p(r) + p(s) - 2 r s (e(r) - e(s))/(r - s); identically zero for this gas.

    The vanishing of this combination is what makes every middle-interface
    admissibility balance collapse to an equality.
    """
    r = _check_density(r)
    s = _check_density(s)
    if r == s:
        raise DomainError("chaplygin_P requires r != s (the singularity is removable)")
    return (
        pressure(r)
        + pressure(s)
        - 2.0 * r * s * (internal_energy(r) - internal_energy(s)) / (r - s)
    )
