"""Independent certification: oracle root-finding, weak-form quadrature, dissipation.

Everything here re-derives properties of solutions and subsolutions without
reusing the closed forms that produced them: a damped Newton oracle solves the
reduced interface system from random starts, compactly supported test
functions probe the weak equations by exact piecewise Gauss quadrature, and
the energy dissipation of competing fans is compared on finite boxes.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from .core import RiemannData, State2D, pressure
from .delta_shock import (
    DeltaEnergyReport,
    DeltaShockSolution,
    delta_energy_margin,
    solve_delta,
)
from .errors import DomainError
from .riemann1d import ClassicalSolution1D, RegimeKind, classify
from .subsolution import FanSubsolution, MiddleState

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(32)
_BUMP_MASS = 256.0 / 315.0  # integral of (1 - s^2)^4 over [-1, 1]


# --- unified sector representation ------------------------------------------


@dataclass(frozen=True)
class FanSector:
    """Constant sector of a self-similar fan, classical or relaxed.

    `kinetic` is |v|^2/2 on exact sectors and C/2 on relaxed middle sectors;
    u12/u22 are the entries of the momentum tensor v (x) v - |v|^2/2 Id on
    exact sectors and of U on relaxed ones. With these identifications both
    kinds share one set of conserved densities and x2 fluxes.
    """

    rho: float
    v1: float
    v2: float
    kinetic: float
    u12: float
    u22: float

    @classmethod
    def from_state(cls, s: State2D) -> "FanSector":
        k = 0.5 * s.speed2
        return cls(s.rho, s.v1, s.v2, k, s.v1 * s.v2, s.v2 * s.v2 - k)

    @classmethod
    def from_middle(cls, ms: MiddleState) -> "FanSector":
        return cls(ms.rho, ms.alpha, ms.beta, 0.5 * ms.C, ms.delta, -ms.gamma)

    def densities(self) -> tuple[float, float, float]:
        """Conserved densities (rho, rho v1, rho v2)."""
        return (self.rho, self.rho * self.v1, self.rho * self.v2)

    def fluxes(self) -> tuple[float, float, float]:
        """x2 fluxes of the three conservation laws."""
        return (
            self.rho * self.v2,
            self.rho * self.u12,
            self.rho * self.u22 + pressure(self.rho) + self.rho * self.kinetic,
        )

    @property
    def eta_tilde(self) -> float:
        """(Relaxed) energy density rho e(rho) + rho kinetic."""
        return 0.5 / self.rho + self.rho * self.kinetic

    @property
    def q_tilde(self) -> float:
        """(Relaxed) energy flux (rho e + p) v2 + rho v2 kinetic."""
        return (self.eta_tilde + pressure(self.rho)) * self.v2


def _rest_frame_sector(sec: FanSector, ref: float) -> FanSector:
    """Galilean shift by (0, -ref); kinetic transforms like |v - (0, ref)|^2/2."""
    return FanSector(
        rho=sec.rho,
        v1=sec.v1,
        v2=sec.v2 - ref,
        kinetic=sec.kinetic - sec.v2 * ref + 0.5 * ref * ref,
        u12=sec.u12 - sec.v1 * ref,
        u22=sec.u22 - sec.v2 * ref + 0.5 * ref * ref,
    )


def interface_dissipation(left: FanSector, right: FanSector, speed: float) -> float:
    """Energy dissipated per unit interface length, nu [eta] - [q] (>= 0 when admissible).

    Evaluated in a factored jump form that cancels exactly when both sides
    share speed, normal velocity and density — the middle-interface identity.
    """
    d_eta = right.eta_tilde - left.eta_tilde
    d_p = pressure(right.rho) - pressure(left.rho)
    d_flux_pot = d_eta + d_p
    e_left = left.eta_tilde + pressure(left.rho)
    d_q = right.v2 * d_flux_pot + e_left * (right.v2 - left.v2)
    return speed * d_eta - d_q


@dataclass(frozen=True)
class PiecewiseFanField:
    """Self-similar piecewise-constant field: n interface speeds, n+1 sectors."""

    speeds: tuple[float, ...]
    sectors: tuple[FanSector, ...]
    kind: str  # "classical" or "subsolution"

    def __post_init__(self):
        if len(self.sectors) != len(self.speeds) + 1:
            raise DomainError("need exactly one more sector than interface speeds")
        if any(b <= a for a, b in zip(self.speeds, self.speeds[1:])):
            raise DomainError("interface speeds must be strictly increasing")

    def sector_at(self, xi: float) -> FanSector:
        """Sector containing the ray x2/t = xi (right-continuous at interfaces)."""
        return self.sectors[bisect.bisect_right(self.speeds, xi)]

    def interface_dissipations(self) -> tuple[float, ...]:
        """Per-interface energy dissipation line densities.

        Subsolution fields are evaluated in the fan's rest frame (moving with
        the middle interface): the relaxed energy flux is not Galilean
        covariant, so only this frame carries the certified per-interface
        split; the total dissipation is frame-invariant.
        """
        ref = 0.0
        if self.kind == "subsolution" and len(self.speeds) == 3:
            ref = self.speeds[1]
        if ref == 0.0:
            return tuple(
                interface_dissipation(self.sectors[i], self.sectors[i + 1], s)
                for i, s in enumerate(self.speeds)
            )
        secs = [_rest_frame_sector(sec, ref) for sec in self.sectors]
        return tuple(
            interface_dissipation(secs[i], secs[i + 1], s - ref)
            for i, s in enumerate(self.speeds)
        )


def classical_fan_field(sol: ClassicalSolution1D) -> PiecewiseFanField:
    sectors = [FanSector.from_state(sol.data.left)]
    sectors.extend(FanSector.from_state(w.right) for w in sol.waves)
    return PiecewiseFanField(
        tuple(w.speed for w in sol.waves), tuple(sectors), "classical"
    )


def subsolution_fan_field(sub: FanSubsolution) -> PiecewiseFanField:
    return PiecewiseFanField(
        (sub.nu_minus, sub.nu0, sub.nu_plus),
        (
            FanSector.from_state(sub.data.left),
            FanSector.from_middle(sub.state1),
            FanSector.from_middle(sub.state2),
            FanSector.from_state(sub.data.right),
        ),
        "subsolution",
    )


# --- oracle for the reduced interface system ---------------------------------


@dataclass(frozen=True)
class OracleResult:
    """Root of the reduced interface system found by damped Newton iteration."""

    converged: bool
    nu_minus: float
    nu_plus: float
    beta: float
    eps1: float
    residual_norm: float
    restarts_used: int


def _reduced_system(data: RiemannData, rho1: float, x: np.ndarray) -> np.ndarray:
    nm, np_, b, e1 = x
    lft, rgt = data.left, data.right
    p_l, p_r, p_1 = pressure(lft.rho), pressure(rgt.rho), pressure(rho1)
    f1 = nm * (lft.rho - rho1) - (lft.rho * lft.v2 - rho1 * b)
    f2 = nm * (lft.rho * lft.v2 - rho1 * b) - (
        lft.rho * lft.v2 * lft.v2 - rho1 * (b * b + e1) + p_l - p_1
    )
    f3 = np_ * (rho1 - rgt.rho) - (rho1 * b - rgt.rho * rgt.v2)
    f4 = np_ * (rho1 * b - rgt.rho * rgt.v2) - (
        rho1 * (b * b + e1) - rgt.rho * rgt.v2 * rgt.v2 + p_1 - p_r
    )
    return np.array([f1, f2, f3, f4])


def oracle_interface_system(
    data: RiemannData, rho1: float, init_seed: int = 0, max_restarts: int = 20
) -> OracleResult:
    """Solve the reduced interface system independently of the closed forms.

    Damped Newton iteration (finite-difference Jacobian, backtracking factor
    0.5) from seeded random starting points; roots with nu_- >= nu_+ are
    rejected and trigger a restart. Non-convergence is reported, not raised.
    """
    rng = np.random.default_rng(init_seed)
    lft, rgt = data.left, data.right
    scale = 1.0 + abs(lft.v2) + abs(rgt.v2)
    best = None
    for restart in range(max_restarts):
        x = np.array(
            [
                rng.uniform(rgt.v2 - 2.0 * scale, 0.5 * (lft.v2 + rgt.v2)),
                rng.uniform(0.5 * (lft.v2 + rgt.v2), lft.v2 + 2.0 * scale),
                rng.uniform(rgt.v2 - scale, lft.v2 + scale),
                rng.uniform(1e-3, 1.0 + data.u * data.u),
            ]
        )
        f = _reduced_system(data, rho1, x)
        norm = float(np.linalg.norm(f))
        for _ in range(80):
            if norm <= 1e-12:
                break
            jac = np.empty((4, 4))
            for j in range(4):
                h = 1e-7 * (1.0 + abs(x[j]))
                xh = x.copy()
                xh[j] += h
                jac[:, j] = (_reduced_system(data, rho1, xh) - f) / h
            try:
                step = np.linalg.solve(jac, -f)
            except np.linalg.LinAlgError:
                break
            lam = 1.0
            while lam > 1e-6:
                x_new = x + lam * step
                f_new = _reduced_system(data, rho1, x_new)
                norm_new = float(np.linalg.norm(f_new))
                if norm_new < norm:
                    break
                lam *= 0.5
            else:
                break
            x, f, norm = x_new, f_new, norm_new
        if norm <= 1e-12 and x[0] < x[1]:
            return OracleResult(True, x[0], x[1], x[2], x[3], norm, restart + 1)
        if best is None or norm < best[1]:
            best = (x, norm, restart + 1)
    x, norm, used = best
    return OracleResult(False, x[0], x[1], x[2], x[3], norm, used)


# --- weak-form quadrature -----------------------------------------------------


def _bump(s: float) -> float:
    if abs(s) >= 1.0:
        return 0.0
    w = 1.0 - s * s
    return w**4


def _dbump(s: float) -> float:
    if abs(s) >= 1.0:
        return 0.0
    w = 1.0 - s * s
    return -8.0 * s * w**3


def _test_boxes(
    speeds: tuple[float, ...], count: int, rng: np.random.Generator
) -> list[tuple[float, float, float, float]]:
    """Space-time boxes (tc, ht, xc, hx) straddling interfaces and the origin fan."""
    targets = list(speeds) if speeds else [0.0]
    n_kinds = len(targets) + 1
    boxes = []
    for i in range(count):
        k = i % n_kinds
        if k < len(targets):
            nu = targets[k]
            tc = rng.uniform(0.4, 1.6)
            ht = tc * rng.uniform(0.2, 0.45)
            hx = rng.uniform(0.3, 1.2)
            xc = nu * tc + rng.uniform(-0.4, 0.4) * hx
        else:
            # small times, wide box: sees every interface of the fan at once
            ht = rng.uniform(0.05, 0.2)
            tc = ht * rng.uniform(1.1, 1.6)
            span = max(abs(s) for s in targets)
            hx = span * (tc + ht) * 1.5 + rng.uniform(0.5, 1.0)
            xc = rng.uniform(-0.2, 0.2)
        boxes.append((tc, ht, xc, hx))
    return boxes


def _t_segments(
    speeds: tuple[float, ...], t0: float, t1: float, x0: float, x1: float
) -> list[tuple[float, float]]:
    # cut the time range where an interface line crosses a vertical box edge,
    # so every sub-integrand is a polynomial and the Gauss panels are exact
    cuts = {t0, t1}
    for nu in speeds:
        if nu != 0.0:
            for edge in (x0, x1):
                t_cross = edge / nu
                if t0 < t_cross < t1:
                    cuts.add(t_cross)
    ordered = sorted(cuts)
    return list(zip(ordered, ordered[1:]))


def _box_weak_integrals(
    field: PiecewiseFanField, tc: float, ht: float, xc: float, hx: float
) -> list[float]:
    t0, t1 = tc - ht, tc + ht
    x0, x1 = xc - hx, xc + hx
    acc = [0.0, 0.0, 0.0]
    for ta, tb in _t_segments(field.speeds, t0, t1, x0, x1):
        mid_t, half_t = 0.5 * (ta + tb), 0.5 * (tb - ta)
        for node_t, weight_t in zip(_GAUSS_NODES, _GAUSS_WEIGHTS):
            t = mid_t + half_t * node_t
            w_t = weight_t * half_t
            bump_t = _bump((t - tc) / ht)
            dbump_t = _dbump((t - tc) / ht) / ht
            x_cuts = sorted(
                {x0, x1} | {nu * t for nu in field.speeds if x0 < nu * t < x1}
            )
            for xa, xb in zip(x_cuts, x_cuts[1:]):
                sector = field.sector_at(0.5 * (xa + xb) / t)
                dens = sector.densities()
                flux = sector.fluxes()
                mid_x, half_x = 0.5 * (xa + xb), 0.5 * (xb - xa)
                xs = (mid_x + half_x * _GAUSS_NODES - xc) / hx
                w2 = 1.0 - xs * xs
                w2 = np.where(np.abs(xs) < 1.0, w2, 0.0)
                bump_sum = float(np.dot(_GAUSS_WEIGHTS, w2**4)) * half_x
                dbump_sum = (
                    float(np.dot(_GAUSS_WEIGHTS, -8.0 * xs * w2**3)) * half_x / hx
                )
                for i in range(3):
                    acc[i] += w_t * (
                        dens[i] * dbump_t * bump_sum + flux[i] * bump_t * dbump_sum
                    )
    return acc


def weak_residual(field: PiecewiseFanField, family_size: int = 50, *, seed: int = 0) -> float:
    """Largest normalized weak-form residual over a family of test functions.

    For each randomized (seeded) space-time box, integrates density * d_t phi
    + flux * d_x phi for all three conservation laws against the tensor bump
    phi = (1-s^2)^4 (x) (1-s^2)^4 and normalizes by the W^{1,1} norm of phi.
    Zero (to quadrature accuracy) exactly when the field is a weak solution of
    the (possibly relaxed) system.
    """
    if family_size < 1:
        raise DomainError("family_size must be at least 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for tc, ht, xc, hx in _test_boxes(field.speeds, family_size, rng):
        vals = _box_weak_integrals(field, tc, ht, xc, hx)
        norm = 2.0 * _BUMP_MASS * (ht + hx)
        worst = max(worst, max(abs(v) for v in vals) / norm)
    return worst


def delta_weak_residual(
    data: RiemannData,
    ds: DeltaShockSolution,
    family_size: int = 20,
    *,
    seed: int = 0,
) -> float:
    """Weak-form check of a delta shock including its concentration terms.

    The bulk states contribute the usual piecewise-constant integrals; the
    line x2 = sigma t carries densities omega(t) (1, xi, sigma) and fluxes
    sigma omega(t) (1, xi, sigma), with 1/rho taken as zero on the line. The
    residual vanishes exactly when the generalized jump conditions hold.
    """
    bulk = PiecewiseFanField(
        (ds.sigma,),
        (FanSector.from_state(data.left), FanSector.from_state(data.right)),
        "classical",
    )
    line_dens = (1.0, ds.xi, ds.sigma)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for tc, ht, xc, hx in _test_boxes(bulk.speeds, family_size, rng):
        t0, t1 = tc - ht, tc + ht
        x0, x1 = xc - hx, xc + hx
        vals = _box_weak_integrals(bulk, tc, ht, xc, hx)
        # clip the line x2 = sigma t to the box
        if ds.sigma > 0.0:
            ta, tb = max(t0, x0 / ds.sigma), min(t1, x1 / ds.sigma)
        elif ds.sigma < 0.0:
            ta, tb = max(t0, x1 / ds.sigma), min(t1, x0 / ds.sigma)
        else:
            ta, tb = (t0, t1) if x0 < 0.0 < x1 else (t0, t0)
        if tb > ta:
            mid_t, half_t = 0.5 * (ta + tb), 0.5 * (tb - ta)
            for node_t, weight_t in zip(_GAUSS_NODES, _GAUSS_WEIGHTS):
                t = mid_t + half_t * node_t
                w_t = weight_t * half_t
                omega = ds.omega_slope * t
                phi_t = _dbump((t - tc) / ht) / ht * _bump((ds.sigma * t - xc) / hx)
                phi_x = _bump((t - tc) / ht) * _dbump((ds.sigma * t - xc) / hx) / hx
                pair = phi_t + ds.sigma * phi_x
                for i in range(3):
                    vals[i] += w_t * omega * line_dens[i] * pair
        norm = 2.0 * _BUMP_MASS * (ht + hx)
        worst = max(worst, max(abs(v) for v in vals) / norm)
    return worst


# --- dissipation and the admissibility comparison ----------------------------

DOMINANCE_TOL = 1e-12


def dissipation_rate(field: PiecewiseFanField, t: float, L: float) -> float:
    """Energy decay rate D_L of the fan on the box (-L, L)^2 at time t.

    Requires the box to contain all interfaces; the rate is then the boundary
    energy influx minus the total interface dissipation, independent of t.
    """
    if not t > 0.0 or not L > 0.0:
        raise DomainError("dissipation_rate requires t > 0 and L > 0")
    if field.speeds and max(abs(s) for s in field.speeds) * t >= L:
        raise DomainError(
            f"box |x| < {L!r} must contain every interface at time {t!r}"
        )
    flux_in = field.sectors[0].q_tilde - field.sectors[-1].q_tilde
    return 2.0 * L * flux_in - 2.0 * L * sum(field.interface_dissipations())


@dataclass(frozen=True)
class DissipationReport:
    """Side-by-side energy dissipation of a classical fan and a subsolution."""

    regime: str
    t: float
    L: float
    sub_d: tuple[float, ...]
    sub_rate: float
    classical_d: tuple[float, ...] | None = None
    classical_rate: float | None = None
    difference: float | None = None  # D_L(sub) - D_L(classical) = -2L sum d(sub)
    classical_dominated: bool | None = None
    delta_energy: DeltaEnergyReport | None = None

    def as_dict(self) -> dict:
        out = {
            "regime": self.regime,
            "t": self.t,
            "L": self.L,
            "sub_interface_dissipation": list(self.sub_d),
            "sub_rate": self.sub_rate,
        }
        if self.classical_d is not None:
            out["classical_interface_dissipation"] = list(self.classical_d)
            out["classical_rate"] = self.classical_rate
            out["difference"] = self.difference
            out["classical_dominated"] = self.classical_dominated
        if self.delta_energy is not None:
            de = self.delta_energy
            out["delta_energy"] = {
                "cross_residual": de.cross_residual,
                "flux_residual": de.flux_residual,
                "cubic_margin": de.cubic_margin,
                "endpoint_minus": de.endpoint_minus,
                "endpoint_plus": de.endpoint_plus,
                "passed": de.passed,
            }
        return out


def compare_admissibility(
    data: RiemannData,
    classical: PiecewiseFanField | None,
    sub: PiecewiseFanField,
    t: float,
    L: float,
) -> DissipationReport:
    """Compare the energy decay of a subsolution against the classical fan.

    Below the delta threshold both fields are required and must share far
    states; the verdict 'classical dominated' holds iff the subsolution
    dissipates strictly on both outer interfaces and nowhere produces energy
    (the middle interface is an exact equality for every fan subsolution, and
    classical contacts dissipate nothing), so that D_L(sub) < D_L(classical)
    for every box size. In the delta-shock regime no classical fan exists:
    classical must be None and the report carries the delta-shock energy
    margins instead.
    """
    tag = classify(data)
    sub_d = sub.interface_dissipations()
    sub_rate = dissipation_rate(sub, t, L)
    if tag.kind is RegimeKind.DELTA_SHOCK:
        if classical is not None:
            raise DomainError(
                "no classical fan exists in the delta-shock regime; pass classical=None"
            )
        ds = solve_delta(data)
        return DissipationReport(
            regime=tag.kind.value,
            t=t,
            L=L,
            sub_d=sub_d,
            sub_rate=sub_rate,
            delta_energy=delta_energy_margin(data, ds),
        )
    if classical is None:
        raise DomainError("classical field is required below the delta threshold")
    for a, b in ((classical.sectors[0], sub.sectors[0]), (classical.sectors[-1], sub.sectors[-1])):
        scale = 1.0 + abs(a.v1) + abs(a.v2) + a.rho
        if (
            abs(a.rho - b.rho) > 1e-12 * scale
            or abs(a.v1 - b.v1) > 1e-12 * scale
            or abs(a.v2 - b.v2) > 1e-12 * scale
        ):
            raise DomainError("the two fields must share their far states")
    classical_d = classical.interface_dissipations()
    classical_rate = dissipation_rate(classical, t, L)
    difference = -2.0 * L * (sum(sub_d) - sum(classical_d))
    dominated = (
        min(sub_d) >= -DOMINANCE_TOL
        and sub_d[0] > DOMINANCE_TOL
        and sub_d[-1] > DOMINANCE_TOL
    )
    return DissipationReport(
        regime=tag.kind.value,
        t=t,
        L=L,
        sub_d=sub_d,
        sub_rate=sub_rate,
        classical_d=classical_d,
        classical_rate=classical_rate,
        difference=difference,
        classical_dominated=dominated,
    )
