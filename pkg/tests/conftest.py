"""Shared seeded generators for the test suite.

All randomness flows through numpy Generators seeded per test so failures
reproduce.  Desk-scale bounds (densities in a decade around 1, velocities of
order unity) keep floating-point noise far below the certified tolerances.
"""

from __future__ import annotations

import numpy as np

from chapfan import RiemannData, State2D, delta_threshold


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_state(rng, rho_lo=0.3, rho_hi=3.0, v_span=3.0) -> State2D:
    return State2D(
        rho=float(rng.uniform(rho_lo, rho_hi)),
        v1=float(rng.uniform(-v_span, v_span)),
        v2=float(rng.uniform(-v_span, v_span)),
    )


def _with_u(rng, rho_minus, rho_plus, u, v_span=3.0) -> RiemannData:
    # split u = v_-2 - v_+2 around a random centre so both speeds stay desk scale
    centre = float(rng.uniform(-v_span, v_span))
    return RiemannData(
        left=State2D(rho_minus, float(rng.uniform(-v_span, v_span)), centre + u / 2),
        right=State2D(rho_plus, float(rng.uniform(-v_span, v_span)), centre - u / 2),
    )


def random_delta_data(rng, rho_lo=0.3, rho_hi=3.0, boundary=False) -> RiemannData:
    """Data in the concentration regime: u >= 1/rho_- + 1/rho_+."""
    rm = float(rng.uniform(rho_lo, rho_hi))
    rp = float(rng.uniform(rho_lo, rho_hi))
    thr = 1.0 / rm + 1.0 / rp
    u = thr if boundary else thr * float(rng.uniform(1.0 + 1e-6, 3.0))
    return _with_u(rng, rm, rp, u)


def random_thm2_data(rng, rho_lo=0.3, rho_hi=3.0, frac_lo=0.05, frac_hi=0.95) -> RiemannData:
    """Data strictly inside the window max(1/rho_-, 1/rho_+) < u < 1/rho_- + 1/rho_+."""
    rm = float(rng.uniform(rho_lo, rho_hi))
    rp = float(rng.uniform(rho_lo, rho_hi))
    lo = max(1.0 / rm, 1.0 / rp)
    hi = 1.0 / rm + 1.0 / rp
    u = lo + (hi - lo) * float(rng.uniform(frac_lo, frac_hi))
    return _with_u(rng, rm, rp, u)


def random_two_contacts_data(rng, rho_lo=0.3, rho_hi=3.0) -> RiemannData:
    """Data below the concentration threshold (generic: rarefactive or mild)."""
    rm = float(rng.uniform(rho_lo, rho_hi))
    rp = float(rng.uniform(rho_lo, rho_hi))
    thr = 1.0 / rm + 1.0 / rp
    u = float(rng.uniform(-3.0, thr * 0.95))
    return _with_u(rng, rm, rp, u)


def random_any_data(rng) -> RiemannData:
    return RiemannData(left=random_state(rng), right=random_state(rng))


def random_equal_density_window(rng, rho_lo=0.5, rho_hi=2.0, frac_lo=0.1, frac_hi=0.9) -> RiemannData:
    """Equal densities with u in the open window: the equality-branch habitat."""
    r = float(rng.uniform(rho_lo, rho_hi))
    lo, hi = 1.0 / r, 2.0 / r
    u = lo + (hi - lo) * float(rng.uniform(frac_lo, frac_hi))
    return _with_u(rng, r, r, u, v_span=2.0)


def random_equal_density_delta(rng, rho_lo=0.5, rho_hi=2.0) -> RiemannData:
    r = float(rng.uniform(rho_lo, rho_hi))
    u = (2.0 / r) * float(rng.uniform(1.0 + 1e-6, 2.5))
    return _with_u(rng, r, r, u, v_span=2.0)


def feasible_rho1(rng, data, frac_lo=0.1, frac_hi=0.9) -> float:
    """A middle density inside (max density, rho_max), capped for the
    unbounded concentration-regime window."""
    from chapfan import rho_max

    lo = max(data.left.rho, data.right.rho)
    hi = rho_max(data)
    if not np.isfinite(hi):
        hi = 5.0 * lo
    return lo + (hi - lo) * float(rng.uniform(frac_lo, frac_hi))


def assert_close(a, b, tol, label=""):
    assert abs(a - b) <= tol, f"{label} |{a!r} - {b!r}| = {abs(a - b):.3e} > {tol:.1e}"


__all__ = [
    "rng_for",
    "random_state",
    "random_delta_data",
    "random_thm2_data",
    "random_two_contacts_data",
    "random_any_data",
    "random_equal_density_window",
    "random_equal_density_delta",
    "feasible_rho1",
    "assert_close",
    "delta_threshold",
]
