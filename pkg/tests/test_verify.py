"""Oracle, weak-form quadrature, and dissipation comparators."""

import math

import pytest

from chapfan import (
    ConstructionOptions,
    DomainError,
    FanSector,
    OracleResult,
    RiemannData,
    State2D,
    beta,
    classical_fan_field,
    compare_admissibility,
    construct,
    delta_weak_residual,
    dissipation_rate,
    epsilon1,
    interface_dissipation,
    interface_speeds,
    oracle_interface_system,
    PiecewiseFanField,
    solve_classical,
    solve_delta,
    subsolution_fan_field,
    weak_residual,
)
from conftest import feasible_rho1, random_delta_data, random_thm2_data, rng_for

SYM_DELTA = RiemannData(State2D(1, 0, 2), State2D(1, 0, -2))
ASYM_DELTA = RiemannData(State2D(2, 0, 1), State2D(1, 0, -1))
WINDOW = RiemannData(State2D(1, 0, 0.75), State2D(1, 0, -0.75))


def half_sub(data, rho1=None):
    return construct(data, ConstructionOptions(rho1=rho1))


class TestFanSector:
    def test_from_state(self):
        s = FanSector.from_state(State2D(2.0, 1.0, -2.0))
        assert s.kinetic == 2.5
        assert s.u12 == -2.0
        assert s.u22 == 4.0 - 2.5
        assert s.eta_tilde == 0.25 + 2.0 * 2.5
        assert s.q_tilde == (s.eta_tilde - 0.5) * -2.0

    def test_fluxes_and_densities(self):
        s = FanSector.from_state(State2D(1.0, 0.0, 2.0))
        assert s.densities() == (1.0, 0.0, 2.0)
        q1, q2, q3 = s.fluxes()
        assert q1 == 2.0
        assert q2 == 0.0
        assert q3 == 4.0 - 1.0  # rho v2^2 + p

    def test_from_middle_uses_relaxed_kinetic(self):
        sub = half_sub(SYM_DELTA, 3.0)
        sec = FanSector.from_middle(sub.state1)
        assert sec.kinetic == sub.state1.C / 2
        assert sec.u22 == -sub.state1.gamma
        assert sec.u12 == sub.state1.delta


class TestPiecewiseField:
    def test_validation(self):
        one = FanSector.from_state(State2D(1, 0, 0))
        with pytest.raises(DomainError):
            PiecewiseFanField((0.0,), (one,), "classical")
        with pytest.raises(DomainError):
            PiecewiseFanField((0.5, 0.5), (one, one, one), "classical")

    def test_sector_lookup(self):
        f = classical_fan_field(solve_classical(WINDOW))
        assert f.sector_at(-1.0).rho == 1.0
        assert f.sector_at(0.0).rho == 4.0
        assert f.sector_at(-0.25).rho == 4.0  # right continuous
        assert f.sector_at(0.25).rho == 1.0

    def test_classical_dissipations_vanish(self):
        rng = rng_for(127)
        from conftest import random_two_contacts_data

        for _ in range(200):
            d = random_two_contacts_data(rng)
            f = classical_fan_field(solve_classical(d))
            for di in f.interface_dissipations():
                assert abs(di) <= 1e-10

    def test_sub_dissipations_fixture(self):
        # Fraction 1/2 of the bound on the symmetric concentration data:
        # outer interfaces dissipate 4/3 each, middle exactly nothing
        sub = half_sub(SYM_DELTA, 3.0)
        f = subsolution_fan_field(sub)
        d = f.interface_dissipations()
        assert abs(d[0] - 4.0 / 3.0) <= 1e-12
        assert d[1] == 0.0
        assert abs(d[2] - 4.0 / 3.0) <= 1e-12

    def test_equality_dissipations_vanish(self):
        sub = construct(SYM_DELTA, ConstructionOptions(rho1=3.0, epsilon2="equality"))
        for di in subsolution_fan_field(sub).interface_dissipations():
            assert abs(di) <= 1e-12

    def test_split_is_frame_independent(self):
        # the rest-frame evaluation makes the reported split invariant under
        # shifts of the data
        rng = rng_for(131)
        for _ in range(100):
            d = random_delta_data(rng)
            c2 = float(rng.uniform(-3, 3))
            d0 = subsolution_fan_field(construct(d)).interface_dissipations()
            d1 = subsolution_fan_field(construct(d.shifted(0.0, c2))).interface_dissipations()
            for a, b in zip(d0, d1):
                assert abs(a - b) <= 1e-9 * (1.0 + abs(a))


class TestInterfaceDissipation:
    def test_identical_sectors_exact_zero(self):
        s = FanSector.from_state(State2D(1.3, 0.4, -0.7))
        assert interface_dissipation(s, s, 0.31) == 0.0

    def test_left_interface_value(self):
        # eta~_1 = 1/6 + 3*(8/3)/2 = 25/6, q~_1 = 0; eta_- = 2.5, q_- = 3
        sub = half_sub(SYM_DELTA, 3.0)
        left = FanSector.from_state(SYM_DELTA.left)
        mid = FanSector.from_middle(sub.state1)
        assert abs(mid.eta_tilde - 25.0 / 6.0) <= 1e-12
        got = interface_dissipation(left, mid, sub.nu_minus)
        assert abs(got - 4.0 / 3.0) <= 1e-12


class TestOracle:
    def test_symmetric(self):
        res = oracle_interface_system(SYM_DELTA, 3.0)
        assert res.converged
        assert abs(res.nu_minus - (-1.0)) <= 1e-10
        assert abs(res.nu_plus - 1.0) <= 1e-10
        assert abs(res.beta) <= 1e-10
        assert abs(res.eps1 - 16.0 / 9.0) <= 1e-10
        assert res.residual_norm <= 1e-12
        assert res.restarts_used >= 1

    def test_matches_closed_forms(self):
        res = oracle_interface_system(ASYM_DELTA, 5.0)
        assert res.converged
        nm, np_ = interface_speeds(ASYM_DELTA, 5.0)
        b = beta(ASYM_DELTA, 5.0)
        e1 = epsilon1(ASYM_DELTA.shifted(0.0, -b), 5.0)
        assert abs(res.nu_minus - nm) <= 1e-8
        assert abs(res.nu_plus - np_) <= 1e-8
        assert abs(res.beta - b) <= 1e-8
        assert abs(res.eps1 - e1) <= 1e-8

    def test_random_equivalence(self):
        rng = rng_for(137)
        for maker in (random_delta_data, random_thm2_data):
            for _ in range(25):
                d = maker(rng)
                rho1 = feasible_rho1(rng, d)
                res = oracle_interface_system(d, rho1)
                assert res.converged, (d, rho1)
                nm, np_ = interface_speeds(d, rho1)
                b = beta(d, rho1)
                e1 = epsilon1(d.shifted(0.0, -b), rho1)
                assert abs(res.nu_minus - nm) <= 1e-8
                assert abs(res.nu_plus - np_) <= 1e-8
                assert abs(res.beta - b) <= 1e-8
                assert abs(res.eps1 - e1) <= 1e-8

    def test_boundary_reported_not_raised(self):
        res = oracle_interface_system(SYM_DELTA, 1.0, max_restarts=3)
        assert isinstance(res, OracleResult)  # may or may not converge


class TestWeakResidual:
    def test_constant_field(self):
        d = RiemannData(State2D(1, 0, 1), State2D(1, 0, 1))
        f = classical_fan_field(solve_classical(d))
        assert weak_residual(f, family_size=10) <= 1e-14

    def test_classical(self):
        f = classical_fan_field(solve_classical(WINDOW))
        assert weak_residual(f) <= 1e-8

    def test_classical_three_waves(self):
        d = RiemannData(State2D(1, 1, 0.75), State2D(1, -1, -0.75))
        f = classical_fan_field(solve_classical(d))
        assert weak_residual(f) <= 1e-8

    def test_subsolution(self):
        f = subsolution_fan_field(half_sub(SYM_DELTA, 3.0))
        assert weak_residual(f) <= 1e-8
        f = subsolution_fan_field(half_sub(ASYM_DELTA, 5.0))
        assert weak_residual(f) <= 1e-8

    def test_tamper_detected(self):
        sub = half_sub(SYM_DELTA, 3.0)
        f = subsolution_fan_field(sub)
        bad = PiecewiseFanField(
            f.speeds,
            tuple(
                FanSector(s.rho + 1e-3, s.v1, s.v2, s.kinetic, s.u12, s.u22)
                if i == 1
                else s
                for i, s in enumerate(f.sectors)
            ),
            f.kind,
        )
        assert weak_residual(bad) > 1e-5

    def test_determinism_and_validation(self):
        f = classical_fan_field(solve_classical(WINDOW))
        assert weak_residual(f, seed=7) == weak_residual(f, seed=7)
        assert weak_residual(f, seed=7) != weak_residual(f, seed=8)
        with pytest.raises(DomainError):
            weak_residual(f, family_size=0)


class TestDeltaWeakResidual:
    def test_solutions_pass(self):
        for d in (SYM_DELTA, ASYM_DELTA):
            assert delta_weak_residual(d, solve_delta(d)) <= 1e-8

    def test_tamper_detected(self):
        ds = solve_delta(SYM_DELTA)
        from chapfan import DeltaShockSolution

        bad = DeltaShockSolution(ds.omega_slope, ds.sigma + 1e-3, ds.xi)
        assert delta_weak_residual(SYM_DELTA, bad) > 1e-5


class TestDissipationRate:
    def test_classical_rate(self):
        f = classical_fan_field(solve_classical(WINDOW))
        for L in (1.0, 10.0, 100.0):
            assert abs(dissipation_rate(f, 1.0, L) - (-0.65625 * L)) <= 1e-10 * L

    def test_sub_rate_fixture(self):
        f = subsolution_fan_field(half_sub(SYM_DELTA, 3.0))
        got = dissipation_rate(f, 1.0, 10.0)
        assert abs(got - (120.0 - 160.0 / 3.0)) <= 1e-9

    def test_equality_rate(self):
        sub = construct(SYM_DELTA, ConstructionOptions(rho1=3.0, epsilon2="equality"))
        got = dissipation_rate(subsolution_fan_field(sub), 1.0, 10.0)
        assert abs(got - 120.0) <= 1e-9

    def test_linear_in_L(self):
        f = subsolution_fan_field(half_sub(ASYM_DELTA, 5.0))
        base = dissipation_rate(f, 0.5, 1.0)
        for L in (2.0, 10.0, 100.0):
            assert abs(dissipation_rate(f, 0.5, L) / L - base) <= 1e-12 * max(1.0, abs(base))

    def test_containment_enforced(self):
        f = subsolution_fan_field(half_sub(SYM_DELTA, 3.0))
        with pytest.raises(DomainError):
            dissipation_rate(f, 20.0, 10.0)
        with pytest.raises(DomainError):
            dissipation_rate(f, 0.0, 10.0)


class TestCompareAdmissibility:
    def test_thm2_fixture(self):
        sub = half_sub(WINDOW, 3.0)
        f_cl = classical_fan_field(solve_classical(WINDOW))
        f_sub = subsolution_fan_field(sub)
        for L in (1.0, 10.0, 100.0):
            rep = compare_admissibility(WINDOW, f_cl, f_sub, 0.005, L)
            assert rep.classical_dominated
            assert rep.difference < 0.0
            total = sum(rep.sub_d) - sum(rep.classical_d)
            assert abs(rep.difference - (-2.0 * L * total)) <= 1e-10 * max(1.0, abs(rep.difference))
            assert abs(rep.difference - (rep.sub_rate - rep.classical_rate)) <= 1e-9 * max(
                1.0, abs(rep.difference)
            )
            for dc in rep.classical_d:
                assert abs(dc) <= 1e-10

    def test_equality_not_dominated(self):
        sub = construct(WINDOW, ConstructionOptions(rho1=3.0, epsilon2="equality"))
        f_cl = classical_fan_field(solve_classical(WINDOW))
        rep = compare_admissibility(WINDOW, f_cl, subsolution_fan_field(sub), 0.005, 1.0)
        assert not rep.classical_dominated
        assert abs(rep.difference) <= 1e-10

    def test_delta_regime_routing(self):
        sub = half_sub(SYM_DELTA, 3.0)
        f_sub = subsolution_fan_field(sub)
        rep = compare_admissibility(SYM_DELTA, None, f_sub, 0.1, 10.0)
        assert rep.regime == "delta_shock"
        assert rep.classical_d is None
        assert rep.delta_energy is not None and rep.delta_energy.passed
        f_cl = classical_fan_field(solve_classical(WINDOW))
        with pytest.raises(DomainError):
            compare_admissibility(SYM_DELTA, f_cl, f_sub, 0.1, 10.0)

    def test_classical_required_below_threshold(self):
        sub = half_sub(WINDOW, 3.0)
        with pytest.raises(DomainError):
            compare_admissibility(WINDOW, None, subsolution_fan_field(sub), 0.005, 1.0)

    def test_far_state_mismatch(self):
        sub = half_sub(WINDOW, 3.0)
        other = RiemannData(State2D(1, 0, 0.7), State2D(1, 0, -0.7))
        f_cl = classical_fan_field(solve_classical(other))
        with pytest.raises(DomainError):
            compare_admissibility(WINDOW, f_cl, subsolution_fan_field(sub), 0.005, 1.0)

    def test_report_dict(self):
        sub = half_sub(WINDOW, 3.0)
        f_cl = classical_fan_field(solve_classical(WINDOW))
        rep = compare_admissibility(WINDOW, f_cl, subsolution_fan_field(sub), 0.005, 1.0)
        d = rep.as_dict()
        assert d["classical_dominated"] is True
        assert len(d["sub_interface_dissipation"]) == 3
        assert d["difference"] < 0.0


def test_random_certified_fields_have_small_weak_residual():
    rng = rng_for(139)
    for maker in (random_delta_data, random_thm2_data):
        for _ in range(6):
            d = maker(rng)
            try:
                sub = construct(d)
            except Exception:
                continue
            assert weak_residual(subsolution_fan_field(sub), family_size=20) <= 1e-8
