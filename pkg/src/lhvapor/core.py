"""Domain types, physical constants and unit conversions shared by all modules.

Solver-side frequencies (decay rates, detunings, Rabi magnitudes) are kept
as dimensionless multiples of the frequency scale ``gamma_unit``; SI values
enter only where polarizabilities are formed.  Levels are numbered 1..4 in
every public interface.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

# Off-diagonal elements stored explicitly; the lower triangle is always the
# conjugate of these.
UPPER_PAIRS: tuple[tuple[int, int], ...] = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))

TRACE_TOL = 1e-12
HERMITICITY_TOL = 1e-12
DIAG_IMAG_TOL = 1e-12

# Fields of DriveParameters expressed in units of gamma_unit.
GAMMA_SCALED_FIELDS = frozenset(
    {"gamma1", "gamma2", "gamma3", "delta1", "delta2", "delta_p", "omega_mag", "omega_p"}
)


@dataclass(frozen=True)
class PhysicalConstants:
    """Vacuum constants in SI units."""

    hbar: float = 1.054571817e-34  # J*s
    epsilon0: float = 8.854187813e-12  # F/m
    mu0: float = 1.256637062e-6  # H/m
    c: float = 299792458.0  # m/s

    def violations(self) -> list[str]:
        out = []
        for name in ("hbar", "epsilon0", "mu0", "c"):
            if not getattr(self, name) > 0:
                out.append(f"constant {name} must be positive")
        if not out:
            defect = abs(self.c**2 * self.epsilon0 * self.mu0 - 1.0)
            if defect > 1e-9:
                out.append(
                    f"inconsistent constants: c^2*epsilon0*mu0 deviates from 1 by {defect:.3e}"
                )
        return out


#: CODATA-2018 values, 10 significant digits.
CODATA2018 = PhysicalConstants()


@dataclass(frozen=True)
class AtomParameters:
    """Transition dipole moments and number density of the vapor."""

    d43: float  # electric dipole moment of the probe transition, C*m
    mu42: float  # magnetic dipole moment of the 2-4 transition, A*m^2
    density_N: float  # number density, m^-3

    def violations(self) -> list[str]:
        out = []
        if not self.d43 > 0:
            out.append("electric dipole moment d43 must be positive")
        if not self.mu42 > 0:
            out.append("magnetic dipole moment mu42 must be positive")
        if not self.density_N > 0:
            out.append("density must be positive")
        return out


@dataclass(frozen=True)
class DriveParameters:
    """Drive strengths, detunings and decay rates, scaled by ``gamma_unit``.

    ``gamma1..3`` are the population decay rates out of the upper level into
    levels 1..3  below it; ``omega_mag`` and ``phi`` define the two equal
    complex coupling drives ``omega_mag * exp(i*phi)``; ``omega_p`` is the
    (real) probe Rabi frequency.
    """

    gamma_unit: float  # s^-1, the frequency scale
    gamma1: float = 1.0
    gamma2: float = 1.0
    gamma3: float = 1.0
    delta1: float = 0.0
    delta2: float = 0.0
    delta_p: float = 0.0
    omega_mag: float = 0.0
    phi: float = 0.0
    omega_p: float = 0.0

    @property
    def omega1(self) -> complex:
        return self.omega_mag * cmath.exp(1j * self.phi)

    @property
    def omega2(self) -> complex:
        return self.omega_mag * cmath.exp(1j * self.phi)

    def violations(self) -> list[str]:
        out = []
        if not self.gamma_unit > 0:
            out.append("frequency scale gamma_unit must be positive")
        for name in ("gamma1", "gamma2", "gamma3"):
            if getattr(self, name) < 0:
                out.append(f"decay rate {name} must be nonnegative")
        if self.omega_mag < 0:
            out.append("coupling magnitude omega_mag must be nonnegative")
        if self.omega_p < 0:
            out.append("probe Rabi frequency omega_p must be nonnegative")
        return out


def validate(atom: AtomParameters, drive: DriveParameters) -> list[str]:
    """Collect every violated invariant; an empty list means the set is usable.

    Violations are data, not exceptions.  Beyond the per-type sign
    constraints, a strictly positive probe is required because the
    polarizabilities divide by it.
    """
    out = atom.violations() + drive.violations()
    if not drive.omega_p > 0:
        out.append("probe Rabi frequency must be positive")
    return out


def density_from_cm3(n_cm3: float) -> float:
    """Convert a number density from cm^-3 to m^-3."""
    if n_cm3 < 0:
        raise ValueError(f"density must be nonnegative, got {n_cm3}")
    return n_cm3 * 1e6


def angular(drive: DriveParameters, name: str) -> float:
    """Return a gamma-scaled drive field in SI units (s^-1)."""
    if name not in GAMMA_SCALED_FIELDS:
        raise ValueError(f"{name!r} is not a gamma-scaled field of DriveParameters")
    return getattr(drive, name) * drive.gamma_unit


@dataclass(frozen=True)
class DensityMatrix:
    """A 4x4 complex density matrix, Hermitian with unit trace.

    ``matrix`` is stored read-only; element access is 1-based to match the
    level numbering used everywhere in the interfaces.
    """

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"density matrix must be 4x4, got shape {m.shape}")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_populations(cls, p1: float, p2: float, p3: float, p4: float) -> "DensityMatrix":
        return cls(np.diag([p1, p2, p3, p4]).astype(complex))

    def __getitem__(self, ij: tuple[int, int]) -> complex:
        i, j = ij
        if not (1 <= i <= 4 and 1 <= j <= 4):
            raise IndexError(f"level indices run 1..4, got ({i}, {j})")
        return complex(self.matrix[i - 1, j - 1])

    def population(self, level: int) -> float:
        return self[level, level].real

    def populations(self) -> np.ndarray:
        return np.diag(self.matrix).real.copy()

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def hermiticity_defect(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix).min())

    def violations(
        self,
        trace_tol: float = TRACE_TOL,
        hermiticity_tol: float = HERMITICITY_TOL,
        diag_imag_tol: float = DIAG_IMAG_TOL,
    ) -> list[str]:
        out = []
        defect = self.hermiticity_defect()
        if defect > hermiticity_tol:
            out.append(f"not Hermitian: max |rho - rho^dagger| = {defect:.3e}")
        tr = self.trace()
        if abs(tr - 1.0) > trace_tol:
            out.append(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
        diag_imag = float(np.abs(np.diag(self.matrix).imag).max())
        if diag_imag > diag_imag_tol:
            out.append(f"diagonal has imaginary part up to {diag_imag:.3e}")
        return out

    def __iter__(self) -> Iterator[complex]:
        return iter(self.matrix.ravel())
