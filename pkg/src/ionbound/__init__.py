"""Feasibility estimates for cold-trapped-ion quantum computation.

Given an ion species (charge, mass, qubit wavelength, upper-level
lifetime) and trap optics (f-number, safety factor), the package computes
equilibrium ion-chain geometry, sideband pulse timing, decoherence-limited
pulse budgets, and the largest integer such a machine could factor, along
with the wall-clock time the computation would take.
"""

__version__ = "1.0.0"

from .constants import CODATA2018, DAY_S, PRINTED, PhysicalConstants, Prefactors
from .species import (
    IonSpecies,
    SpeciesError,
    SpeciesFileError,
    SpeciesRegistry,
    TrapConfig,
    UnknownSpeciesError,
    builtin_registry,
    load_registry,
    parse_species_text,
    registry_to_text,
)
from .chain import (
    ChainSolution,
    ChainSolverError,
    SpacingFit,
    equilibrium_positions,
    fit_min_spacing,
    length_scale,
    min_spacing_meters,
    solve_chain_range,
)
from .pulse import (
    PulseTiming,
    SidebandState,
    axial_frequency_max,
    derive_timing_constant,
    derived_prefactors,
    lamb_dicke,
    pulse_timing,
    sideband_evolve,
    u_pulse_duration,
    validity_ratio,
)
from .decoherence import (
    SurvivalEstimate,
    coherence_time,
    estimate_survival,
    simulate_trajectories,
    survival_exact,
    survival_linear,
)
from .bounds import (
    MODE_COMBINED,
    MODE_EXPERIMENTAL,
    MODE_INTRINSIC,
    TAU_E_HEATING,
    TAU_E_LASER_PHASE,
    FeasibilityResult,
    ResourcePoint,
    Table,
    experimental_pulse_budget,
    fig1_curves,
    fig2_curves,
    intrinsic_pulse_budget,
    max_factorable_bits,
    shor_ions_interleaved,
    shor_resources,
    total_time,
)

__all__ = [
    "__version__",
    "CODATA2018",
    "DAY_S",
    "PRINTED",
    "PhysicalConstants",
    "Prefactors",
    "IonSpecies",
    "SpeciesError",
    "SpeciesFileError",
    "SpeciesRegistry",
    "TrapConfig",
    "UnknownSpeciesError",
    "builtin_registry",
    "load_registry",
    "parse_species_text",
    "registry_to_text",
    "ChainSolution",
    "ChainSolverError",
    "SpacingFit",
    "equilibrium_positions",
    "fit_min_spacing",
    "length_scale",
    "min_spacing_meters",
    "solve_chain_range",
    "PulseTiming",
    "SidebandState",
    "axial_frequency_max",
    "derive_timing_constant",
    "derived_prefactors",
    "lamb_dicke",
    "pulse_timing",
    "sideband_evolve",
    "u_pulse_duration",
    "validity_ratio",
    "SurvivalEstimate",
    "coherence_time",
    "estimate_survival",
    "simulate_trajectories",
    "survival_exact",
    "survival_linear",
    "MODE_COMBINED",
    "MODE_EXPERIMENTAL",
    "MODE_INTRINSIC",
    "TAU_E_HEATING",
    "TAU_E_LASER_PHASE",
    "FeasibilityResult",
    "ResourcePoint",
    "Table",
    "experimental_pulse_budget",
    "fig1_curves",
    "fig2_curves",
    "intrinsic_pulse_budget",
    "max_factorable_bits",
    "shor_ions_interleaved",
    "shor_resources",
    "total_time",
]
