"""Quantum Otto engine with a relativistically moving hot thermal bath.

The package models a four-stroke Otto cycle whose hot reservoir moves at
a constant fraction ``u`` of the speed of light relative to the working
medium (a qubit or a harmonic oscillator).  The motion Doppler-smears
the thermal spectrum: the medium sees a band average of Planck
occupations instead of a single one, which lowers the produced work and
the efficiency at maximum work while leaving the Otto efficiency
``1 - omega_c/omega_h`` untouched.

Natural units ``hbar = k_B = 1`` are used throughout; temperatures enter
as inverse temperatures ``beta`` and spectra through the dimensionless
gap ``x = beta * omega``.
"""

from .bath import (
    U_MAX,
    BathSpec,
    band_average_occupation_oracle,
    dimensionless_gap,
    doppler_log_factor,
    moving_occupation,
    occupation_asymptote,
    planck_occupation,
)
from .cycle import (
    CycleSpec,
    LimitWork,
    RegimeValidityWarning,
    StrokeLedger,
    cycle_ledger,
    efficiency,
    engine_condition,
    limit_work,
    stroke_energies,
)
from .dynamics import (
    ConvergenceError,
    IntegrationError,
    LindbladSpec,
    TrajectoryRecord,
    evolve_oscillator,
    evolve_qubit,
    relax_to_steady,
    sample_relaxation,
    state_distance,
    steady_state_for,
)
from .media import (
    MediumKind,
    OscillatorState,
    QubitState,
    TruncationError,
    asymptotic_oscillator_state,
    asymptotic_qubit_state,
    fock_truncation_bound,
    oscillator_mean_energy,
    qubit_mean_energy,
)
from .optimize import (
    EffectiveTemperatureReport,
    NonEngineError,
    NonEngineWarning,
    OptimizationResult,
    effective_temperature_fit,
    efficiency_at_max_work_limit,
    golden_section_maximize,
    maximize_work_numeric,
    optimal_hot_frequency_limit,
    reference_bounds,
)

__version__ = "0.1.0"

__all__ = [
    "U_MAX",
    "BathSpec",
    "ConvergenceError",
    "CycleSpec",
    "EffectiveTemperatureReport",
    "IntegrationError",
    "LimitWork",
    "LindbladSpec",
    "MediumKind",
    "NonEngineError",
    "NonEngineWarning",
    "OptimizationResult",
    "OscillatorState",
    "QubitState",
    "RegimeValidityWarning",
    "StrokeLedger",
    "TrajectoryRecord",
    "TruncationError",
    "asymptotic_oscillator_state",
    "asymptotic_qubit_state",
    "band_average_occupation_oracle",
    "cycle_ledger",
    "dimensionless_gap",
    "doppler_log_factor",
    "effective_temperature_fit",
    "efficiency",
    "efficiency_at_max_work_limit",
    "engine_condition",
    "evolve_oscillator",
    "evolve_qubit",
    "fock_truncation_bound",
    "golden_section_maximize",
    "limit_work",
    "maximize_work_numeric",
    "moving_occupation",
    "occupation_asymptote",
    "optimal_hot_frequency_limit",
    "oscillator_mean_energy",
    "planck_occupation",
    "qubit_mean_energy",
    "reference_bounds",
    "relax_to_steady",
    "sample_relaxation",
    "state_distance",
    "steady_state_for",
    "stroke_energies",
    "__version__",
]
