"""Regime classification and classical contact-fan solutions of the Riemann problem.

All three characteristic fields are linearly degenerate, so every classical
wave is a contact discontinuity: the solution is a fan of at most three jumps
(a family-1 contact, a slip line carrying only v1, and a family-3 contact).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import RiemannData, State2D, on_wave_curve, pressure
from .errors import DomainError, RegimeError


class RegimeKind(enum.Enum):
    CONSTANT = "constant"
    SINGLE_CONTACT = "single_contact"
    TWO_CONTACTS = "two_contacts"
    DELTA_SHOCK = "delta_shock"


@dataclass(frozen=True)
class RegimeTag:
    kind: RegimeKind
    family: int | None = None  # populated for SINGLE_CONTACT only (1, 2, or 3)
    thm2_window: bool = False  # max(1/rho_-, 1/rho_+) < u < 1/rho_- + 1/rho_+

    def __post_init__(self):
        if self.thm2_window and self.kind is not RegimeKind.TWO_CONTACTS:
            raise DomainError("thm2_window is a sub-case of the two-contacts regime")
        if (self.family is not None) != (self.kind is RegimeKind.SINGLE_CONTACT):
            raise DomainError("family is set exactly for single-contact tags")


def curve_tolerance(data: RiemannData) -> float:
    """Absolute tolerance for wave-curve membership, scaled to the data."""
    lft, rgt = data.left, data.right
    return 1e-9 * (
        1.0 + max(abs(lft.v2), abs(rgt.v2)) + max(1.0 / lft.rho, 1.0 / rgt.rho)
    )


def delta_threshold(data: RiemannData) -> float:
    """Critical jump 1/rho_- + 1/rho_+; at or above it no classical fan exists."""
    return 1.0 / data.left.rho + 1.0 / data.right.rho


def classify(data: RiemannData) -> RegimeTag:
    """Assign the data to one of the four mutually exclusive regimes."""
    lft, rgt = data.left, data.right
    tol = curve_tolerance(data)
    res1 = on_wave_curve(lft, (rgt.rho, rgt.v2), 1)
    res3 = on_wave_curve(lft, (rgt.rho, rgt.v2), 3)

    if abs(res1) <= tol and abs(res3) <= tol:
        # rho and v2 agree on both sides; only v1 may jump (slip contact)
        if lft.v1 == rgt.v1:
            return RegimeTag(RegimeKind.CONSTANT)
        return RegimeTag(RegimeKind.SINGLE_CONTACT, family=2)
    if abs(res1) <= tol:
        return RegimeTag(RegimeKind.SINGLE_CONTACT, family=1)
    if abs(res3) <= tol:
        return RegimeTag(RegimeKind.SINGLE_CONTACT, family=3)

    u = data.u
    threshold = delta_threshold(data)
    if u >= threshold:
        # the boundary case u = threshold already concentrates mass
        return RegimeTag(RegimeKind.DELTA_SHOCK)
    window = max(1.0 / lft.rho, 1.0 / rgt.rho) < u < threshold
    return RegimeTag(RegimeKind.TWO_CONTACTS, thm2_window=window)


def middle_state(data: RiemannData) -> tuple[float, float]:
    """Middle state (rho_m, v_m2) of the decoupled (rho, rho v2) subsystem.

    It is the intersection of the family-1 curve through the left state with
    the family-3 curve through the right state; rho_m > 0 exactly when the
    data admit a classical fan (u below the delta threshold), so the Chaplygin
    gas never produces vacuum.
    """
    tag = classify(data)
    if tag.kind is not RegimeKind.TWO_CONTACTS:
        raise RegimeError(f"middle state requires the two-contacts regime, got {tag.kind.value}")
    lft, rgt = data.left, data.right
    inv_m = 0.5 * (rgt.v2 - lft.v2) + 0.5 * (1.0 / rgt.rho + 1.0 / lft.rho)
    v_m2 = 0.5 * (rgt.v2 + lft.v2) + 0.5 * (1.0 / rgt.rho - 1.0 / lft.rho)
    return 1.0 / inv_m, v_m2


@dataclass(frozen=True)
class Wave:
    """Single contact discontinuity between two constant states."""

    speed: float
    left: State2D
    right: State2D
    family: int  # 1, 2 (slip), or 3

    def __post_init__(self):
        if self.family not in (1, 2, 3):
            raise DomainError(f"wave family must be 1, 2 or 3, got {self.family!r}")


@dataclass(frozen=True)
class ClassicalSolution1D:
    """Self-similar fan of contacts; `waves` is ordered by strictly increasing speed."""

    data: RiemannData
    waves: tuple[Wave, ...]
    middle: tuple[float, float] | None  # (rho_m, v_m2), None for constant data

    def __post_init__(self):
        speeds = [w.speed for w in self.waves]
        if any(b <= a for a, b in zip(speeds, speeds[1:])):
            raise DomainError("wave speeds must be strictly increasing")


def solve_classical(data: RiemannData) -> ClassicalSolution1D:
    """Exact BV solution of the Riemann problem below the delta threshold."""
    tag = classify(data)
    if tag.kind is RegimeKind.DELTA_SHOCK:
        raise RegimeError(
            "u >= 1/rho_- + 1/rho_+: no classical fan exists; use the delta_shock module"
        )
    lft, rgt = data.left, data.right
    if tag.kind is RegimeKind.CONSTANT:
        return ClassicalSolution1D(data, (), None)

    if tag.kind is RegimeKind.SINGLE_CONTACT:
        if tag.family == 2:
            return ClassicalSolution1D(
                data, (Wave(lft.v2, lft, rgt, 2),), (lft.rho, lft.v2)
            )
        if tag.family == 1:
            rho_m, v_m2 = rgt.rho, rgt.v2  # family-3 jump degenerates
        else:
            rho_m, v_m2 = lft.rho, lft.v2  # family-1 jump degenerates
    else:
        rho_m, v_m2 = middle_state(data)

    waves: list[Wave] = []
    has_slip = lft.v1 != rgt.v1
    state = lft
    if tag.kind is RegimeKind.TWO_CONTACTS or tag.family == 1:
        nxt = State2D(rho_m, lft.v1, v_m2)
        waves.append(Wave(lft.v2 - 1.0 / lft.rho, state, nxt, 1))
        state = nxt
    if has_slip:
        nxt = State2D(state.rho, rgt.v1, state.v2)
        waves.append(Wave(v_m2, state, nxt, 2))
        state = nxt
    if tag.kind is RegimeKind.TWO_CONTACTS or tag.family == 3:
        waves.append(Wave(rgt.v2 + 1.0 / rgt.rho, state, rgt, 3))
    return ClassicalSolution1D(data, tuple(waves), (rho_m, v_m2))


def sample_profile(
    sol: ClassicalSolution1D, data: RiemannData, t: float, x2: float
) -> State2D:
    """Constant state of the fan sector containing x2/t (right-continuous at waves)."""
    if not t > 0.0:
        raise DomainError(f"profile sampling requires t > 0, got {t!r}")
    xi = x2 / t
    state = data.left
    for wave in sol.waves:
        if xi >= wave.speed:
            state = wave.right
        else:
            break
    return state


def check_rh_jump(left: State2D, right: State2D, speed: float) -> tuple[float, float, float]:
    """Rankine-Hugoniot residuals (continuity, x1-momentum, x2-momentum).

    Jumps are taken right minus left; all three vanish exactly on contacts.
    """
    d_rho = right.rho - left.rho
    d_m1 = right.rho * right.v1 - left.rho * left.v1
    d_m2 = right.rho * right.v2 - left.rho * left.v2
    r1 = speed * d_rho - d_m2
    r2 = speed * d_m1 - (
        right.rho * right.v1 * right.v2 - left.rho * left.v1 * left.v2
    )
    r3 = speed * d_m2 - (
        right.rho * right.v2 * right.v2
        + pressure(right.rho)
        - left.rho * left.v2 * left.v2
        - pressure(left.rho)
    )
    return (r1, r2, r3)
