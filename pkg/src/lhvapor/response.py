"""Macroscopic electromagnetic response derived from steady-state coherences.

The coherence on the probe (electric dipole) transition yields the electric
polarizability; the coherence on the magnetic dipole transition yields the
magnetic one.  Both are mapped to relative permittivity and permeability
through their local-field (Clausius-Mossotti) relations, and combined into
a complex refractive index and a figure of merit.

This module owns the only gamma-to-SI conversion in the pipeline: the probe
Rabi frequency enters the polarizabilities in SI rad/s.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .core import AtomParameters, DriveParameters, PhysicalConstants, angular
from .dynamics import EquationVariant, solve_steady

# Relative tolerance for flagging a Clausius-Mossotti denominator as a pole.
POLE_RTOL = 1e-12
# Below this the imaginary part of n is numerical noise and the figure of
# merit is reported as a lossless sentinel instead of a ratio.
FOM_IM_FLOOR = 1e-15
# Steady states with an eigenvalue below this get a positivity warning;
# the component equations do not guarantee complete positivity.
POSITIVITY_FLOOR = -1e-6

FLAG_EM_POLE = "em_pole"
FLAG_MM_POLE = "mm_pole"
FLAG_POSITIVITY = "positivity_warning"
FLAG_SINGULAR = "singular"


class ProbeZero(ValueError):
    """The probe Rabi frequency is zero; polarizabilities are undefined."""


class BranchMode(enum.Enum):
    """Square-root branch used for the refractive index.

    ``LITERAL`` negates the principal root, which always lands on a
    nonpositive real part.  ``PASSIVE`` picks the root with nonnegative
    imaginary part (no extra negation), the passive-medium convention;
    exact ties resolve to the root with nonpositive real part.
    """

    LITERAL = "literal"
    PASSIVE = "passive"


@dataclass(frozen=True)
class ProbeFieldAmplitudes:
    """Local probe field amplitudes implied by the probe Rabi frequency."""

    E_p: float  # V/m
    B_p: float  # T

    @classmethod
    def from_drive(
        cls, drive: DriveParameters, atom: AtomParameters, consts: PhysicalConstants
    ) -> "ProbeFieldAmplitudes":
        omega_p_si = angular(drive, "omega_p")
        if omega_p_si == 0.0:
            raise ProbeZero("probe Rabi frequency must be positive")
        e_p = consts.hbar * omega_p_si / atom.d43
        return cls(E_p=e_p, B_p=e_p / consts.c)


@dataclass(frozen=True)
class ResponseSample:
    """Electromagnetic response at one probe detuning.

    Value fields are ``None`` when the sample is flagged (pole of a
    local-field relation, or a singular steady state); the figure of merit
    uses ``math.inf`` as the lossless sentinel.
    """

    delta_p: float
    gamma_e: complex | None
    gamma_m: complex | None
    chi_e: complex | None
    eps_r: complex | None
    mu_r: complex | None
    n: complex | None
    fom: float | None
    flags: frozenset[str]
    variant: EquationVariant
    mode: BranchMode

    @property
    def blocked(self) -> bool:
        """True when the sample cannot contribute values to a band."""
        return bool(self.flags & {FLAG_EM_POLE, FLAG_MM_POLE, FLAG_SINGULAR})


def electric_polarizability(
    rho34: complex,
    drive: DriveParameters,
    atom: AtomParameters,
    consts: PhysicalConstants,
) -> complex:
    """Electric polarizability (m^3) from the probe-transition coherence."""
    omega_p_si = angular(drive, "omega_p")
    if omega_p_si == 0.0:
        raise ProbeZero("probe Rabi frequency must be positive")
    return 2.0 * atom.d43**2 * rho34 / (consts.epsilon0 * consts.hbar * omega_p_si)


def magnetic_polarizability(
    rho24: complex,
    drive: DriveParameters,
    atom: AtomParameters,
    consts: PhysicalConstants,
) -> complex:
    """Magnetic polarizability (m^3) from the magnetic-transition coherence.

    The local magnetic amplitude is the electric one over c, which turns
    the ratio into the closed form used here.
    """
    omega_p_si = angular(drive, "omega_p")
    if omega_p_si == 0.0:
        raise ProbeZero("probe Rabi frequency must be positive")
    return 2.0 * consts.mu0 * atom.mu42 * consts.c * atom.d43 * rho24 / (consts.hbar * omega_p_si)


def _pole(denominator: complex, scale: complex) -> bool:
    return abs(denominator) < POLE_RTOL * max(1.0, abs(scale))


def susceptibility_e(gamma_e: complex, density_N: float) -> complex | None:
    """Local-field-corrected electric susceptibility; ``None`` at the pole."""
    x = density_N * gamma_e / 3.0
    if _pole(1.0 - x, x):
        return None
    return density_N * gamma_e / (1.0 - x)


def permeability(gamma_m: complex, density_N: float) -> complex | None:
    """Local-field-corrected relative permeability; ``None`` at the pole."""
    x = density_N * gamma_m / 3.0
    if _pole(1.0 - x, x):
        return None
    return (1.0 + 2.0 * x) / (1.0 - x)


def refractive_index(eps_r: complex, mu_r: complex, mode: BranchMode = BranchMode.LITERAL) -> complex:
    """Complex refractive index from the product of the two responses."""
    root = cmath.sqrt(eps_r * mu_r)  # principal: Re >= 0
    if mode is BranchMode.LITERAL:
        return -root
    if root.imag > 0.0:
        return root
    if root.imag < 0.0:
        return -root
    # real product of roots: tie, keep the nonpositive real part
    return -root if root.real > 0.0 else root


def figure_of_merit(n: complex) -> float:
    """Ratio of negative refraction to absorption, ``inf`` when lossless."""
    if abs(n.imag) >= FOM_IM_FLOOR:
        return -n.real / abs(n.imag)
    return math.inf if n.real < 0.0 else 0.0


def sample_response(
    drive: DriveParameters,
    atom: AtomParameters,
    consts: PhysicalConstants,
    variant: EquationVariant = EquationVariant.CORRECTED,
    mode: BranchMode = BranchMode.LITERAL,
) -> ResponseSample:
    """Full pipeline at one detuning: steady state to refractive index.

    Propagates :class:`~lhvapor.dynamics.SingularSteadySystem`; pole
    conditions are carried as flags on the sample, not raised.
    """
    rho = solve_steady(drive, variant)
    flags = set()
    if rho.min_eigenvalue() < POSITIVITY_FLOOR:
        flags.add(FLAG_POSITIVITY)

    gamma_e = electric_polarizability(rho[3, 4], drive, atom, consts)
    gamma_m = magnetic_polarizability(rho[2, 4], drive, atom, consts)

    chi_e = susceptibility_e(gamma_e, atom.density_N)
    if chi_e is None:
        flags.add(FLAG_EM_POLE)
    eps_r = None if chi_e is None else 1.0 + chi_e

    mu_r = permeability(gamma_m, atom.density_N)
    if mu_r is None:
        flags.add(FLAG_MM_POLE)

    if eps_r is not None and mu_r is not None:
        n = refractive_index(eps_r, mu_r, mode)
        fom = figure_of_merit(n)
    else:
        n = None
        fom = None

    return ResponseSample(
        delta_p=drive.delta_p,
        gamma_e=gamma_e,
        gamma_m=gamma_m,
        chi_e=chi_e,
        eps_r=eps_r,
        mu_r=mu_r,
        n=n,
        fom=fom,
        flags=frozenset(flags),
        variant=variant,
        mode=mode,
    )
