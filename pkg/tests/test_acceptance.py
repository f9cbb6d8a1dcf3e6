"""Acceptance suite: exit criteria for the simulator, one check per test.

Each test prints a single ``[ACCEPTANCE] PASS/FAIL`` line (on the real
stdout, bypassing capture) so a full run reads as a checklist.  The
oracle-equivalence check of the as-printed equation reading fails by
construction: at the default coupling phase that reading anti-damps the
2-4 coherence (generator eigenvalue with real part about +1.77 in gamma
units), so no time integration can reach its formal stationary point.
The failure is asserted honestly rather than papered over.
"""

import dataclasses
import math
import time

import numpy as np
import pytest

from lhvapor import (
    CODATA2018,
    BandPredicate,
    BranchMode,
    EquationVariant,
    StepTooLarge,
    SweepConfig,
    evolve,
    figure_of_merit,
    find_bands,
    permeability,
    refractive_index,
    scan,
    solve_steady,
    steady_residual,
    summarize,
    susceptibility_e,
)
from lhvapor.cli import DEFAULT_ATOM, DEFAULT_DRIVE, spectrum_csv
from lhvapor.core import DensityMatrix
from lhvapor.dynamics import DEFAULT_RHO0
from lhvapor.sweep import mu_sign_edges

ORACLE_GRID = np.linspace(-2.5, 2.5, 25)
ORACLE_TOL = 1e-8
TRACE_TOL = 1e-12
HERMITICITY_TOL = 1e-12
RESIDUAL_TOL = 1e-10
INDEX_RANGE = (-3.0, -1.0)
FOM_FLOOR = 100.0
MU_EDGE_REFERENCES = (-1.452, 1.495, 1.525)
MU_EDGE_TOL = 0.15
VACUUM_TOL = 1e-15
SATURATION_TOL = 0.01
SATURATION_INDEX_TOL = 0.02
DECAY_TOL = 1e-9
SWEEP_BUDGET_S = 2.0
PERF_BUDGET_S = 1.0
ORACLE_BUDGET_S = 30.0


@pytest.fixture
def report(capsys):
    """One visible checklist line per criterion, bypassing output capture."""

    def _line(name: str, ok: bool, detail: str) -> None:
        status = "PASS" if ok else "FAIL"
        with capsys.disabled():
            print(f"[ACCEPTANCE] {status} {name}: {detail}", flush=True)

    return _line


def default_drive(dp: float = 0.0):
    return dataclasses.replace(DEFAULT_DRIVE, delta_p=dp)


def run_default_sweep(variant=EquationVariant.CORRECTED, threads: int = 1):
    cfg = SweepConfig(variant=variant)
    return scan(DEFAULT_DRIVE, DEFAULT_ATOM, CODATA2018, cfg, threads=threads)


def oracle_deviation(variant: EquationVariant) -> float:
    worst = 0.0
    for dp in ORACLE_GRID:
        drive = default_drive(dp)
        rho_ss = solve_steady(drive, variant)
        rho_t = evolve(drive, DEFAULT_RHO0, t_final=2000.0, dt=1e-3, variant=variant)
        worst = max(worst, float(np.abs(rho_ss.matrix - rho_t.matrix).max()))
    return worst


def test_oracle_equivalence_corrected(report):
    t0 = time.perf_counter()
    worst = oracle_deviation(EquationVariant.CORRECTED)
    elapsed = time.perf_counter() - t0
    ok = worst <= ORACLE_TOL and elapsed < ORACLE_BUDGET_S
    report(
        "oracle-equivalence[corrected]",
        ok,
        f"max |steady - evolved| = {worst:.3e} (tol {ORACLE_TOL:g}), {elapsed:.2f}s",
    )
    assert worst <= ORACLE_TOL
    assert elapsed < ORACLE_BUDGET_S


def test_oracle_equivalence_as_printed(report):
    try:
        worst = oracle_deviation(EquationVariant.AS_PRINTED)
    except StepTooLarge as exc:
        detail = (
            "time integration diverges (anti-damped 2-4 coherence, growth rate "
            f"~+1.77/gamma at the default phase): {exc}"
        )
        report("oracle-equivalence[as_printed]", False, detail)
        pytest.fail(
            "as-printed oracle equivalence is unattainable at the default "
            "parameters; the stationary point exists but is dynamically "
            "unstable, so evolve() correctly aborts. " + detail
        )
    ok = worst <= ORACLE_TOL
    report("oracle-equivalence[as_printed]", ok, f"max |steady - evolved| = {worst:.3e}")
    assert ok


def test_invariant_suite_default_sweep(report):
    t0 = time.perf_counter()
    spectrum = run_default_sweep()
    sweep_elapsed = time.perf_counter() - t0

    worst_trace = worst_herm = worst_resid = 0.0
    checked = 0
    for sample in spectrum.samples:
        if sample.blocked:
            continue
        drive = default_drive(sample.delta_p)
        rho = solve_steady(drive, spectrum.config.variant)
        worst_trace = max(worst_trace, abs(rho.trace() - 1.0))
        worst_herm = max(worst_herm, rho.hermiticity_defect())
        worst_resid = max(worst_resid, steady_residual(drive, rho, spectrum.config.variant))
        checked += 1
    ok = (
        checked == 1001
        and worst_trace <= TRACE_TOL
        and worst_herm <= HERMITICITY_TOL
        and worst_resid <= RESIDUAL_TOL
        and sweep_elapsed < SWEEP_BUDGET_S
    )
    report(
        "invariant-suite",
        ok,
        f"{checked} states: |trace-1| <= {worst_trace:.2e}, hermiticity <= {worst_herm:.2e}, "
        f"residual <= {worst_resid:.2e} gamma, sweep {sweep_elapsed:.2f}s",
    )
    assert checked == 1001
    assert worst_trace <= TRACE_TOL
    assert worst_herm <= HERMITICITY_TOL
    assert worst_resid <= RESIDUAL_TOL
    assert sweep_elapsed < SWEEP_BUDGET_S


def test_left_handed_band_exists(report):
    passing = []
    bands_by_variant = {}
    for variant in EquationVariant:
        bands = find_bands(run_default_sweep(variant), BandPredicate.LEFT_HANDED)
        bands_by_variant[variant] = bands
        if bands and all(-2.5 <= b.lo < b.hi <= 2.5 for b in bands):
            passing.append(variant.value)
    ok = bool(passing)
    spans = [
        (b.lo, b.hi)
        for v in passing
        for b in bands_by_variant[EquationVariant(v)]
    ]
    report(
        "left-handed-band-existence",
        ok,
        f"passing variant(s): {passing or 'none'}; bands: "
        + ", ".join(f"[{lo:+.3f}, {hi:+.3f}]" for lo, hi in spans),
    )
    assert ok


def test_index_level_inside_band(report):
    report_data = summarize(run_default_sweep())
    ok = report_data.min_re_n is not None and INDEX_RANGE[0] <= report_data.min_re_n <= INDEX_RANGE[1]
    report(
        "index-level",
        ok,
        f"min Re(n) inside left-handed bands = {report_data.min_re_n:.4f} "
        f"(required within [{INDEX_RANGE[0]}, {INDEX_RANGE[1]}])",
    )
    assert ok


def test_low_absorption_inside_band(report):
    report_data = summarize(run_default_sweep())
    ok = report_data.max_finite_fom is not None and report_data.max_finite_fom >= FOM_FLOOR
    report(
        "low-absorption",
        ok,
        f"max finite FOM = {report_data.max_finite_fom:.1f} at detuning "
        f"{report_data.max_finite_fom_delta_p:+.3f} (floor {FOM_FLOOR}); "
        f"lossless-sentinel points: {report_data.sentinel_fom_count}",
    )
    assert ok


def test_band_edges_soft_check(report):
    edges = mu_sign_edges(run_default_sweep())
    lines = []
    for ref in MU_EDGE_REFERENCES:
        if edges:
            nearest = min(edges, key=lambda e: abs(e - ref))
            delta = abs(nearest - ref)
            verdict = "pass" if delta <= MU_EDGE_TOL else "disagree"
            lines.append(f"{ref:+.3f} -> nearest computed {nearest:+.4f} ({verdict}, d={delta:.3f})")
        else:
            lines.append(f"{ref:+.3f} -> no computed edge (disagree)")
    # informational by design: the reference intervals overlap and cannot all
    # be reproduced; agreement is logged per edge, disagreement is not fatal
    report(
        "band-edge-soft-check",
        True,
        f"computed Re(mu) edges {[round(e, 4) for e in edges]}; " + "; ".join(lines),
    )
    assert edges


def test_analytic_limits(report):
    chi = susceptibility_e(0.0, DEFAULT_ATOM.density_N)
    eps_v = 1.0 + chi
    mu_v = permeability(0.0, DEFAULT_ATOM.density_N)
    n_v = refractive_index(eps_v, mu_v, BranchMode.LITERAL)
    vacuum_ok = (
        abs(eps_v - 1.0) <= VACUUM_TOL
        and abs(mu_v - 1.0) <= VACUUM_TOL
        and abs(n_v + 1.0) <= VACUUM_TOL
        and figure_of_merit(n_v) == math.inf
    )

    eps_s = 1.0 + susceptibility_e(1e3, 1.0)
    mu_s = permeability(1e3, 1.0)
    n_s = refractive_index(eps_s, mu_s, BranchMode.LITERAL)
    saturation_ok = (
        abs(eps_s + 2.0) <= SATURATION_TOL
        and abs(mu_s + 2.0) <= SATURATION_TOL
        and abs(n_s + 2.0) <= SATURATION_INDEX_TOL
    )

    pole_ok = susceptibility_e(3.0, 1.0) is None and permeability(3.0, 1.0) is None

    ok = vacuum_ok and saturation_ok and pole_ok
    report(
        "analytic-limits",
        ok,
        f"vacuum n = {n_v}, saturation (eps, mu, n) = ({eps_s:.4f}, {mu_s:.4f}, {n_s:.4f}), "
        f"pole flagged without crash: {pole_ok}",
    )
    assert vacuum_ok and saturation_ok and pole_ok


def test_decay_law(report):
    drive = dataclasses.replace(DEFAULT_DRIVE, omega_mag=0.0, omega_p=0.0)
    rho0 = DensityMatrix.from_populations(0.0, 0.0, 1.0, 0.0)
    rho = evolve(drive, rho0, t_final=1.0, dt=1e-3)
    err = abs(rho.population(3) - math.exp(-3.0))
    ok = err <= DECAY_TOL
    report("decay-law", ok, f"|p3(1/gamma) - exp(-3)| = {err:.2e} (tol {DECAY_TOL:g})")
    assert ok


def test_determinism_and_performance(report):
    t0 = time.perf_counter()
    serial = run_default_sweep(threads=1)
    elapsed = time.perf_counter() - t0
    threaded = run_default_sweep(threads=4)
    identical = spectrum_csv(serial) == spectrum_csv(threaded)
    ok = elapsed < PERF_BUDGET_S and identical
    report(
        "determinism-and-performance",
        ok,
        f"1001-point sweep in {elapsed:.2f}s (budget {PERF_BUDGET_S:.0f}s); "
        f"4-thread output byte-identical: {identical}",
    )
    assert elapsed < PERF_BUDGET_S
    assert identical
