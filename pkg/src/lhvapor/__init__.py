"""Negative-refraction spectroscopy of a coherently driven four-level vapor.

The package solves the stationary density matrix of a quasi-lambda
four-level atom driven by a strong two-component coupling beam and a weak
probe, converts the probe-transition coherences into local-field-corrected
permittivity and permeability, and sweeps the probe detuning to locate
left-handed (simultaneously negative) bands, the complex refractive index
and the figure of merit.
"""

from ._version import __version__
from .core import (
    CODATA2018,
    AtomParameters,
    DensityMatrix,
    DriveParameters,
    PhysicalConstants,
    angular,
    density_from_cm3,
    validate,
)
from .dynamics import (
    EquationVariant,
    LiouvillianSystem,
    SingularSteadySystem,
    StepTooLarge,
    build_liouvillian,
    evolve,
    rhs,
    solve_steady,
    steady_residual,
)
from .response import (
    BranchMode,
    ProbeFieldAmplitudes,
    ProbeZero,
    ResponseSample,
    electric_polarizability,
    figure_of_merit,
    magnetic_polarizability,
    permeability,
    refractive_index,
    sample_response,
    susceptibility_e,
)
from .sweep import (
    Band,
    BandPredicate,
    ResponseSpectrum,
    SummaryReport,
    SweepConfig,
    find_bands,
    scan,
    summarize,
)

__all__ = [
    "CODATA2018",
    "AtomParameters",
    "DensityMatrix",
    "DriveParameters",
    "PhysicalConstants",
    "angular",
    "density_from_cm3",
    "validate",
    "EquationVariant",
    "LiouvillianSystem",
    "SingularSteadySystem",
    "StepTooLarge",
    "build_liouvillian",
    "evolve",
    "rhs",
    "solve_steady",
    "steady_residual",
    "BranchMode",
    "ProbeFieldAmplitudes",
    "ProbeZero",
    "ResponseSample",
    "electric_polarizability",
    "figure_of_merit",
    "magnetic_polarizability",
    "permeability",
    "refractive_index",
    "sample_response",
    "susceptibility_e",
    "Band",
    "BandPredicate",
    "ResponseSpectrum",
    "SummaryReport",
    "SweepConfig",
    "find_bands",
    "scan",
    "summarize",
    "__version__",
]
