"""Riemann solver, delta shocks, and admissible fan subsolutions for the
2D isentropic Chaplygin-gas Euler system, with independent numerical
certification of every jump condition and admissibility inequality."""

from .core import (
    NotationBundle,
    RiemannData,
    State2D,
    chaplygin_P,
    eigenvalues,
    energy_density,
    energy_flux_x2,
    internal_energy,
    on_wave_curve,
    pressure,
)
from .delta_shock import (
    DeltaEnergyReport,
    DeltaShockSolution,
    delta_energy_margin,
    galilean_shift,
    generalized_rh_residual,
    solve_delta,
)
from .errors import ChapfanError, DomainError, InfeasibleError, RegimeError
from .riemann1d import (
    ClassicalSolution1D,
    RegimeKind,
    RegimeTag,
    Wave,
    check_rh_jump,
    classify,
    delta_threshold,
    middle_state,
    sample_profile,
    solve_classical,
)
from .subsolution import (
    ConstructionOptions,
    FanSubsolution,
    MiddleState,
    TracelessSym2,
    VerificationReport,
    beta,
    construct,
    default_rho1,
    epsilon1,
    epsilon2_bound,
    interface_speeds,
    notation,
    rho_max,
    verify_fan,
)
from .verify import (
    DissipationReport,
    FanSector,
    OracleResult,
    PiecewiseFanField,
    classical_fan_field,
    compare_admissibility,
    delta_weak_residual,
    dissipation_rate,
    interface_dissipation,
    oracle_interface_system,
    subsolution_fan_field,
    weak_residual,
)

__version__ = "0.1.0"

__all__ = [
    "ChapfanError",
    "ClassicalSolution1D",
    "ConstructionOptions",
    "DeltaEnergyReport",
    "DeltaShockSolution",
    "DissipationReport",
    "DomainError",
    "FanSector",
    "FanSubsolution",
    "InfeasibleError",
    "MiddleState",
    "NotationBundle",
    "OracleResult",
    "PiecewiseFanField",
    "RegimeError",
    "RegimeKind",
    "RegimeTag",
    "RiemannData",
    "State2D",
    "TracelessSym2",
    "VerificationReport",
    "Wave",
    "beta",
    "chaplygin_P",
    "check_rh_jump",
    "classical_fan_field",
    "classify",
    "compare_admissibility",
    "construct",
    "default_rho1",
    "delta_energy_margin",
    "delta_threshold",
    "delta_weak_residual",
    "dissipation_rate",
    "eigenvalues",
    "energy_density",
    "energy_flux_x2",
    "epsilon1",
    "epsilon2_bound",
    "galilean_shift",
    "generalized_rh_residual",
    "interface_dissipation",
    "interface_speeds",
    "internal_energy",
    "middle_state",
    "notation",
    "on_wave_curve",
    "oracle_interface_system",
    "pressure",
    "rho_max",
    "sample_profile",
    "solve_classical",
    "solve_delta",
    "subsolution_fan_field",
    "verify_fan",
    "weak_residual",
]
