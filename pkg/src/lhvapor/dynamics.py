"""Equations of motion of the driven four-level vapor and their steady state.

Two independent realizations of the same dynamics are kept deliberately:

* :func:`rhs` evaluates the nine component equations term by term on a
  4x4 complex matrix (the reference route);
* :func:`build_liouvillian` stamps the coefficients of the equivalent
  16-real-unknown linear system directly (the solver route).

The two are cross-checked against each other in the test suite; the time
integrator :func:`evolve` is driven by :func:`rhs` alone so that it stays
an independent check on the linear-solve steady state.

The missing population equation for the fourth level is closed by trace
conservation: its derivative is minus the sum of the other three.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from .core import UPPER_PAIRS, DensityMatrix, DriveParameters

logger = logging.getLogger(__name__)

RHS_HERMITICITY_TOL = 1e-10
# Relative smallest-singular-value threshold below which the constrained
# steady-state system is reported as rank deficient.
SINGULAR_RTOL = 1e-12
STEADY_RESIDUAL_TOL = 1e-10

# Population envelope used by evolve() as an instability signal.  The
# component equations are not completely positive, so stable trajectories
# at realistic parameters transiently push populations to about -0.7 and
# +1.2; the envelope is set an order of magnitude wider so that only
# genuine exponential blow-up trips it.
POPULATION_ENVELOPE = (-10.0, 11.0)

DEFAULT_DT = 1e-3
DEFAULT_T_FINAL = 2000.0
MAX_DT = 0.01

#: Default initial state for time integration: both ground levels equally
#: populated.  The steady state does not depend on this choice.
DEFAULT_RHO0 = DensityMatrix.from_populations(0.5, 0.5, 0.0, 0.0)


class EquationVariant(enum.Enum):
    """Which reading of the coherence equation between levels 2 and 4 to use.

    ``AS_PRINTED`` keeps the self-coupling of that coherence through the
    second coupling drive; ``CORRECTED`` couples it to the probe-transition
    coherence instead, restoring the ladder structure every other equation
    follows.  Both are first-class; every output records the choice.
    """

    AS_PRINTED = "as_printed"
    CORRECTED = "corrected"


class SingularSteadySystem(Exception):
    """The constrained steady-state system is rank deficient.

    Raised when the steady state is not unique (e.g. with all drives off the
    ground populations are undetermined).  Carries a condition estimate.
    """

    def __init__(self, message: str, condition: float):
        super().__init__(f"{message} (condition estimate {condition:.3e})")
        self.condition = condition


class StepTooLarge(Exception):
    """A population left the stability envelope during time integration."""


def _as_array(rho: DensityMatrix | np.ndarray) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


def rhs(
    drive: DriveParameters,
    rho: DensityMatrix | np.ndarray,
    variant: EquationVariant = EquationVariant.CORRECTED,
) -> np.ndarray:
    """Time derivative of the density matrix, term by term, in gamma units.

    Expects ``rho`` Hermitian; returns the full 4x4 derivative with the
    lower triangle completed by conjugation and the fourth population
    closed by trace conservation.
    """
    m = _as_array(rho)
    defect = float(np.abs(m - m.conj().T).max())
    if defect > RHS_HERMITICITY_TOL:
        raise ValueError(f"rho must be Hermitian within {RHS_HERMITICITY_TOL:g}, defect {defect:.3e}")

    o1 = drive.omega1
    o2 = drive.omega2
    op = drive.omega_p
    g1, g2, g3 = drive.gamma1, drive.gamma2, drive.gamma3
    d1, d2, dp = drive.delta1, drive.delta2, drive.delta_p
    gsum = g1 + g2 + g3
    ghalf = 0.5 * gsum

    def r(i: int, j: int) -> complex:
        return complex(m[i - 1, j - 1])

    def hc(z: complex) -> complex:
        return z + z.conjugate()

    d11 = g1 * r(3, 3) + hc(-1j * o1.conjugate() * r(3, 1))
    d22 = g2 * r(3, 3) + hc(-1j * o2.conjugate() * r(3, 2))
    d33 = -gsum * r(3, 3) + hc(
        1j * o1.conjugate() * r(3, 1) + 1j * o2.conjugate() * r(3, 2) + 1j * op * r(3, 4)
    )
    d44 = -(d11 + d22 + d33)

    d12 = 1j * ((d1 - d2) * r(1, 2) + o2 * r(1, 3) - o1.conjugate() * r(3, 2))
    d13 = (
        -ghalf * r(1, 3)
        + 1j * o1.conjugate() * (r(1, 1) - r(3, 3))
        + 1j * (o2.conjugate() * r(1, 2) + d1 * r(1, 3) + op * r(1, 4))
    )
    d14 = 1j * ((d1 - dp) * r(1, 4) + op * r(1, 3) - o1.conjugate() * r(3, 4))
    d23 = (
        -ghalf * r(2, 3)
        + 1j * o1 * (r(2, 2) - r(3, 3))
        + 1j * (o1.conjugate() * r(2, 1) + d2 * r(2, 3) + op * r(2, 4))
    )
    tail24 = r(2, 4) if variant is EquationVariant.AS_PRINTED else r(3, 4)
    d24 = 1j * ((d2 - dp) * r(2, 4) + op * r(2, 3) - o2.conjugate() * tail24)
    d34 = (
        -ghalf * r(3, 4)
        - 1j * op * (r(4, 4) - r(3, 3))
        - 1j * (o1 * r(1, 4) + o2 * r(2, 4))
        - 1j * dp * r(3, 4)
    )

    out = np.zeros((4, 4), dtype=complex)
    out[0, 0], out[1, 1], out[2, 2], out[3, 3] = d11, d22, d33, d44
    upper = {(1, 2): d12, (1, 3): d13, (1, 4): d14, (2, 3): d23, (2, 4): d24, (3, 4): d34}
    for (i, j), v in upper.items():
        out[i - 1, j - 1] = v
        out[j - 1, i - 1] = v.conjugate()
    return out


# ---------------------------------------------------------------------------
# Real-valued stacking: (p11, p22, p33, p44, Re/Im of 12, 13, 14, 23, 24, 34).

N_REAL = 16
_COHERENCE_COL = {pair: 4 + 2 * k for k, pair in enumerate(UPPER_PAIRS)}


def stack(rho: DensityMatrix | np.ndarray) -> np.ndarray:
    """Flatten a Hermitian matrix into the 16-real-unknown vector."""
    m = _as_array(rho)
    v = np.empty(N_REAL)
    for k in range(4):
        v[k] = m[k, k].real
    for (i, j), col in _COHERENCE_COL.items():
        v[col] = m[i - 1, j - 1].real
        v[col + 1] = m[i - 1, j - 1].imag
    return v


def unstack(v: np.ndarray) -> np.ndarray:
    """Rebuild the Hermitian 4x4 matrix from the 16-real vector."""
    m = np.zeros((4, 4), dtype=complex)
    for k in range(4):
        m[k, k] = v[k]
    for (i, j), col in _COHERENCE_COL.items():
        z = v[col] + 1j * v[col + 1]
        m[i - 1, j - 1] = z
        m[j - 1, i - 1] = z.conjugate()
    return m


@dataclass(frozen=True)
class LiouvillianSystem:
    """Linear generator of the dynamics over the 16-real-unknown stacking.

    ``matrix`` applies the full equations of motion; ``constraint_row``
    (with right-hand side 1) replaces the closure population row when
    solving for the steady state.
    """

    matrix: np.ndarray = field(repr=False)
    constraint_row: np.ndarray = field(repr=False)
    variant: EquationVariant = EquationVariant.CORRECTED

    def apply(self, rho: DensityMatrix | np.ndarray) -> np.ndarray:
        """Derivative of ``rho`` under the assembled linear system."""
        return unstack(self.matrix @ stack(rho))

    def constrained(self) -> tuple[np.ndarray, np.ndarray]:
        """Steady-state system: generator rows with the trace constraint."""
        a = self.matrix.copy()
        a[3, :] = self.constraint_row
        b = np.zeros(N_REAL)
        b[3] = 1.0
        return a, b


def build_liouvillian(
    drive: DriveParameters,
    variant: EquationVariant = EquationVariant.CORRECTED,
) -> LiouvillianSystem:
    """Stamp the coefficient matrix of the equations of motion.

    Each component equation is entered as (row, column, coefficient,
    conjugated?) terms over the complex stacking (populations, then upper
    coherences); conjugated couplings are folded into the real expansion.
    The closure population row is the negative sum of the other three, so
    the assembled generator conserves the trace exactly.
    """
    o1 = drive.omega1
    o2 = drive.omega2
    op = complex(drive.omega_p)
    g1, g2, g3 = drive.gamma1, drive.gamma2, drive.gamma3
    d1, d2, dp = drive.delta1, drive.delta2, drive.delta_p
    gsum = g1 + g2 + g3
    ghalf = 0.5 * gsum

    c1s, c2s, cps = o1.conjugate(), o2.conjugate(), op.conjugate()
    P11, P22, P33, P44, C12, C13, C14, C23, C24, C34 = range(10)

    # (row, col, coefficient, acts on conjugate of col?)
    terms: list[tuple[int, int, complex, bool]] = [
        (P11, P33, g1, False),
        (P11, C13, -1j * c1s, True),
        (P11, C13, 1j * o1, False),
        (P22, P33, g2, False),
        (P22, C23, -1j * c2s, True),
        (P22, C23, 1j * o2, False),
        (P33, P33, -gsum, False),
        (P33, C13, 1j * c1s, True),
        (P33, C13, -1j * o1, False),
        (P33, C23, 1j * c2s, True),
        (P33, C23, -1j * o2, False),
        (P33, C34, 1j * cps, False),
        (P33, C34, -1j * op, True),
        (C12, C12, 1j * (d1 - d2), False),
        (C12, C13, 1j * o2, False),
        (C12, C23, -1j * c1s, True),
        (C13, C13, -ghalf + 1j * d1, False),
        (C13, P11, 1j * c1s, False),
        (C13, P33, -1j * c1s, False),
        (C13, C12, 1j * c2s, False),
        (C13, C14, 1j * cps, False),
        (C14, C14, 1j * (d1 - dp), False),
        (C14, C13, 1j * op, False),
        (C14, C34, -1j * c1s, False),
        (C23, C23, -ghalf + 1j * d2, False),
        (C23, P22, 1j * o1, False),
        (C23, P33, -1j * o1, False),
        (C23, C12, 1j * c1s, True),
        (C23, C24, 1j * cps, False),
        (C24, C24, 1j * (d2 - dp), False),
        (C24, C23, 1j * op, False),
        (C34, C34, -ghalf - 1j * dp, False),
        (C34, P44, -1j * op, False),
        (C34, P33, 1j * op, False),
        (C34, C14, -1j * o1, False),
        (C34, C24, -1j * o2, False),
    ]
    if variant is EquationVariant.AS_PRINTED:
        terms.append((C24, C24, -1j * c2s, False))
    else:
        terms.append((C24, C34, -1j * c2s, False))

    m = np.zeros((N_REAL, N_REAL))
    for row, col, coef, conjugated in terms:
        a, b = coef.real, coef.imag
        # column expansion: populations are real-only
        if col < 4:
            xc, yc = col, None
        else:
            xc = 4 + 2 * (col - 4)
            yc = xc + 1
        if row < 4:
            # population rows: the imaginary part cancels identically
            m[row, xc] += a
            if yc is not None:
                m[row, yc] += b if conjugated else -b
        else:
            r_re = 4 + 2 * (row - 4)
            r_im = r_re + 1
            m[r_re, xc] += a
            m[r_im, xc] += b
            if yc is not None:
                if conjugated:
                    m[r_re, yc] += b
                    m[r_im, yc] += -a
                else:
                    m[r_re, yc] += -b
                    m[r_im, yc] += a

    # closure row: trace conservation defines the fourth population equation
    m[3, :] = -(m[0, :] + m[1, :] + m[2, :])

    constraint = np.zeros(N_REAL)
    constraint[:4] = 1.0
    return LiouvillianSystem(matrix=m, constraint_row=constraint, variant=variant)


def solve_steady(
    drive: DriveParameters,
    variant: EquationVariant = EquationVariant.CORRECTED,
) -> DensityMatrix:
    """Stationary density matrix of the driven system.

    Solves the trace-constrained linear system; raises
    :class:`SingularSteadySystem` when it is rank deficient (non-unique
    steady state) or too ill-conditioned to meet the residual contract.
    """
    system = build_liouvillian(drive, variant)
    a, b = system.constrained()
    s = np.linalg.svd(a, compute_uv=False)
    if s[-1] <= s[0] * SINGULAR_RTOL:
        cond = float(np.inf if s[-1] == 0.0 else s[0] / s[-1])
        raise SingularSteadySystem("steady state is not unique", cond)
    v = np.linalg.solve(a, b)
    rho = DensityMatrix(unstack(v))
    residual = steady_residual(drive, rho, variant)
    if residual > STEADY_RESIDUAL_TOL:
        raise SingularSteadySystem(
            f"steady-state residual {residual:.3e} exceeds {STEADY_RESIDUAL_TOL:g}",
            float(s[0] / s[-1]),
        )
    return rho


def steady_residual(
    drive: DriveParameters,
    rho: DensityMatrix | np.ndarray,
    variant: EquationVariant = EquationVariant.CORRECTED,
) -> float:
    """Max-norm of the time derivative at ``rho``, in gamma units."""
    return float(np.abs(rhs(drive, rho, variant)).max())


def _generator_from_rhs(drive: DriveParameters, variant: EquationVariant) -> np.ndarray:
    """Probe the (linear) term-by-term equations on the 16 basis states.

    Kept separate from :func:`build_liouvillian` on purpose: the integrator
    below must exercise the reference equations, not the stamped matrix.
    """
    m = np.empty((N_REAL, N_REAL))
    for k in range(N_REAL):
        e = np.zeros(N_REAL)
        e[k] = 1.0
        m[:, k] = stack(rhs(drive, unstack(e), variant))
    return m


def evolve(
    drive: DriveParameters,
    rho0: DensityMatrix,
    t_final: float = DEFAULT_T_FINAL,
    dt: float = DEFAULT_DT,
    variant: EquationVariant = EquationVariant.CORRECTED,
) -> DensityMatrix:
    """Classical 4th-order fixed-step integration of the equations of motion.

    Because the generator is linear and time independent, one RK4 step is
    exactly the degree-4 Taylor polynomial of the step operator; the
    integration applies that one-step operator repeatedly.  Populations are
    checked against the stability envelope at intervals of at most one
    1/gamma (and at least once); leaving it raises :class:`StepTooLarge`.
    Hermiticity is preserved by construction; the trace is renormalized
    only if its drift exceeds 1e-9, and the drift is logged.
    """
    if t_final == 0.0:
        return DensityMatrix(rho0.matrix.copy())
    if not 0 < dt <= MAX_DT:
        raise ValueError(f"dt must be in (0, {MAX_DT}] (units 1/gamma), got {dt}")
    if t_final < dt:
        raise ValueError(f"t_final must be at least dt, got {t_final} < {dt}")

    bad = rho0.violations()
    if bad:
        raise ValueError("invalid initial state: " + "; ".join(bad))

    m = _generator_from_rhs(drive, variant)
    n_steps = max(1, int(round(t_final / dt)))

    hm = dt * m
    step = np.eye(N_REAL) + hm
    power = hm
    for k in (2.0, 3.0, 4.0):
        power = power @ hm / k
        step = step + power

    block = max(1, min(n_steps, int(round(1.0 / dt))))
    n_blocks, rem = divmod(n_steps, block)
    step_block = np.linalg.matrix_power(step, block)

    lo, hi = POPULATION_ENVELOPE
    v = stack(rho0)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n_blocks):
            v = step_block @ v
            pops = v[:4]
            if not (np.all(pops >= lo) and np.all(pops <= hi)):
                raise StepTooLarge(
                    f"population left [{lo}, {hi}] during integration "
                    f"(min {pops.min():.3g}, max {pops.max():.3g}); "
                    "the dynamics is unstable at this step size"
                )
        if rem:
            v = np.linalg.matrix_power(step, rem) @ v

    trace_drift = abs(v[:4].sum() - 1.0)
    if trace_drift > 1e-9:
        logger.warning("trace drifted by %.3e during integration; renormalizing", trace_drift)
        v = v / v[:4].sum()
    return DensityMatrix(unstack(v))
