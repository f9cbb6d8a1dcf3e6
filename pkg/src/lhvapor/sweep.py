"""Probe-detuning sweeps, sign-definite band detection and summaries."""

from __future__ import annotations

import dataclasses
import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ._version import __version__
from .core import AtomParameters, DriveParameters, PhysicalConstants
from .dynamics import EquationVariant, SingularSteadySystem
from .response import FLAG_SINGULAR, BranchMode, ResponseSample, sample_response


class BandPredicate(enum.Enum):
    RE_EPS_NEG = "re_eps_neg"
    RE_MU_NEG = "re_mu_neg"
    LEFT_HANDED = "left_handed"


@dataclass(frozen=True)
class SweepConfig:
    """Uniform detuning grid (both endpoints included) and run options."""

    dp_min: float = -2.5
    dp_max: float = 2.5
    points: int = 1001
    variant: EquationVariant = EquationVariant.CORRECTED
    mode: BranchMode = BranchMode.LITERAL

    def violations(self) -> list[str]:
        out = []
        if not self.dp_min < self.dp_max:
            out.append("dp_min must be below dp_max")
        if self.points < 2:
            out.append("points must be at least 2")
        return out

    def grid(self) -> list[float]:
        step = (self.dp_max - self.dp_min) / (self.points - 1)
        g = [self.dp_min + k * step for k in range(self.points)]
        g[-1] = self.dp_max
        return g


@dataclass(frozen=True)
class ResponseSpectrum:
    config: SweepConfig
    samples: tuple[ResponseSample, ...]
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Band:
    """Detuning interval on which a sign predicate holds.

    Endpoints are linear-interpolation estimates of the sign change of the
    relevant real part, or the grid boundary where no straddling sample
    exists.
    """

    lo: float
    hi: float
    predicate: BandPredicate


@dataclass(frozen=True)
class SummaryReport:
    left_handed_bands: tuple[Band, ...]
    min_re_n: float | None
    mean_re_n: float | None
    max_finite_fom: float | None
    max_finite_fom_delta_p: float | None
    sentinel_fom_count: int
    flag_counts: dict


def _blocked_sample(dp: float, config: SweepConfig) -> ResponseSample:
    return ResponseSample(
        delta_p=dp,
        gamma_e=None,
        gamma_m=None,
        chi_e=None,
        eps_r=None,
        mu_r=None,
        n=None,
        fom=None,
        flags=frozenset({FLAG_SINGULAR}),
        variant=config.variant,
        mode=config.mode,
    )


def scan(
    drive: DriveParameters,
    atom: AtomParameters,
    consts: PhysicalConstants,
    config: SweepConfig,
    threads: int = 1,
    metadata: dict | None = None,
) -> ResponseSpectrum:
    """Evaluate the response on the configured grid, in ascending order.

    Grid points are independent; results are assembled in grid order
    whatever the worker count, so spectra are identical for any ``threads``.
    Singular points are carried as flagged samples; the scan aborts only
    when every point fails.
    """
    bad = config.violations()
    if bad:
        raise ValueError("; ".join(bad))

    def one(dp: float) -> ResponseSample:
        point_drive = dataclasses.replace(drive, delta_p=dp)
        try:
            return sample_response(point_drive, atom, consts, config.variant, config.mode)
        except SingularSteadySystem:
            return _blocked_sample(dp, config)

    grid = config.grid()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            samples = tuple(pool.map(one, grid))
    else:
        samples = tuple(one(dp) for dp in grid)

    if all(FLAG_SINGULAR in s.flags for s in samples):
        raise SingularSteadySystem("every grid point failed to solve", float("inf"))
    meta = {
        "tool": "lhvapor",
        "version": __version__,
        "variant": config.variant.value,
        "mode": config.mode.value,
        "atom": {"d43": atom.d43, "mu42": atom.mu42, "density_N": atom.density_N},
        "drive": {
            f.name: getattr(drive, f.name) for f in dataclasses.fields(drive)
        },
    }
    meta.update(metadata or {})
    return ResponseSpectrum(config=config, samples=samples, metadata=meta)


def _predicate_values(sample: ResponseSample, predicate: BandPredicate) -> list[float] | None:
    """Real parts the predicate requires to be negative, or None if missing."""
    if predicate is BandPredicate.RE_EPS_NEG:
        parts = [sample.eps_r]
    elif predicate is BandPredicate.RE_MU_NEG:
        parts = [sample.mu_r]
    else:
        parts = [sample.eps_r, sample.mu_r]
    if sample.blocked or any(p is None for p in parts):
        return None
    return [p.real for p in parts]


def _edge(
    inside: tuple[float, list[float]],
    outside: tuple[float, list[float]],
) -> float:
    """Interpolated detuning where the last required sign flips.

    For multi-part predicates the band boundary is the crossing closest to
    the satisfying sample: all parts must be negative inside the band.
    """
    x_in, vals_in = inside
    x_out, vals_out = outside
    crossings = []
    for v_in, v_out in zip(vals_in, vals_out):
        if v_out >= 0.0 > v_in:
            crossings.append(x_in - v_in * (x_out - x_in) / (v_out - v_in))
    if not crossings:
        return x_in
    return min(crossings, key=lambda x: abs(x - x_in))


def find_bands(spectrum: ResponseSpectrum, predicate: BandPredicate) -> list[Band]:
    """Maximal runs of grid samples on which the predicate holds.

    Flagged (pole or singular) samples break runs; edges against a
    non-satisfying neighbor are refined by linear interpolation of the
    relevant real part, edges against a flagged neighbor or the grid
    boundary stay at the run's own endpoint.
    """
    if not spectrum.samples:
        raise ValueError("spectrum is empty")

    values = [_predicate_values(s, predicate) for s in spectrum.samples]
    satisfied = [v is not None and all(p < 0.0 for p in v) for v in values]

    bands: list[Band] = []
    i = 0
    n = len(spectrum.samples)
    while i < n:
        if not satisfied[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and satisfied[j + 1]:
            j += 1
        x_i = spectrum.samples[i].delta_p
        x_j = spectrum.samples[j].delta_p
        lo = x_i
        if i > 0 and values[i - 1] is not None:
            lo = _edge((x_i, values[i]), (spectrum.samples[i - 1].delta_p, values[i - 1]))
        hi = x_j
        if j + 1 < n and values[j + 1] is not None:
            hi = _edge((x_j, values[j]), (spectrum.samples[j + 1].delta_p, values[j + 1]))
        if lo < hi:
            bands.append(Band(lo=lo, hi=hi, predicate=predicate))
        i = j + 1
    return bands


def mu_sign_edges(spectrum: ResponseSpectrum) -> list[float]:
    """Interpolated zero crossings of the real permeability, ascending."""
    edges = []
    samples = spectrum.samples
    for a, b in zip(samples, samples[1:]):
        if a.blocked or b.blocked or a.mu_r is None or b.mu_r is None:
            continue
        ya, yb = a.mu_r.real, b.mu_r.real
        if ya == 0.0:
            edges.append(a.delta_p)
        elif (ya < 0.0 < yb) or (ya > 0.0 > yb):
            edges.append(a.delta_p - ya * (b.delta_p - a.delta_p) / (yb - ya))
    return edges


def summarize(spectrum: ResponseSpectrum) -> SummaryReport:
    """Aggregate left-handed bands, index level and absorption figures."""
    if not spectrum.samples:
        raise ValueError("spectrum is empty")

    bands = tuple(find_bands(spectrum, BandPredicate.LEFT_HANDED))

    def in_bands(s: ResponseSample) -> bool:
        return any(b.lo <= s.delta_p <= b.hi for b in bands)

    re_n = [s.n.real for s in spectrum.samples if s.n is not None and in_bands(s)]
    finite = [
        (s.fom, s.delta_p)
        for s in spectrum.samples
        if s.fom is not None and s.fom != float("inf") and in_bands(s)
    ]
    sentinels = sum(1 for s in spectrum.samples if s.fom == float("inf"))

    flag_counts: dict[str, int] = {}
    for s in spectrum.samples:
        for f in sorted(s.flags):
            flag_counts[f] = flag_counts.get(f, 0) + 1

    best = max(finite) if finite else None
    return SummaryReport(
        left_handed_bands=bands,
        min_re_n=min(re_n) if re_n else None,
        mean_re_n=sum(re_n) / len(re_n) if re_n else None,
        max_finite_fom=best[0] if best else None,
        max_finite_fom_delta_p=best[1] if best else None,
        sentinel_fom_count=sentinels,
        flag_counts=flag_counts,
    )
