"""Command-line interface: config parsing, dispatch and file emission.

Subcommands: ``steady`` (print one stationary density matrix), ``sweep``
(write a spectrum file) and ``bands`` (write a band/summary report).
Output files are written atomically and contain no timestamps unless
``--stamp`` is passed, so identical configurations produce byte-identical
files.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import io
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from ._version import __version__
from .core import CODATA2018, AtomParameters, DriveParameters, density_from_cm3, validate
from .dynamics import EquationVariant, SingularSteadySystem, solve_steady, steady_residual
from .response import BranchMode, ResponseSample
from .sweep import BandPredicate, ResponseSpectrum, SweepConfig, find_bands, scan, summarize

CSV_COLUMNS = ("dp_over_gamma", "re_eps", "im_eps", "re_mu", "im_mu", "re_n", "im_n", "fom", "flags")

# Shipped defaults: dense vapor, strongly driven, weak probe.
DEFAULT_ATOM = AtomParameters(d43=2.5e-29, mu42=7.0e-23, density_N=density_from_cm3(5e16))
DEFAULT_DRIVE = DriveParameters(
    gamma_unit=1e6,
    gamma1=1.0,
    gamma2=1.0,
    gamma3=1.0,
    delta1=-1.5,
    delta2=1.5,
    delta_p=0.0,
    omega_mag=2.5,
    phi=-0.75 * math.pi,
    omega_p=0.01,
)
DEFAULT_SWEEP = SweepConfig()

_FLOAT_KEYS_ATOM = ("d43", "mu42", "density_N")
_FLOAT_KEYS_DRIVE = (
    "gamma_unit",
    "gamma1",
    "gamma2",
    "gamma3",
    "delta1",
    "delta2",
    "delta_p",
    "omega_mag",
    "phi",
    "omega_p",
)


class ParseError(ValueError):
    """Malformed or unknown content in a config document."""


@dataclass(frozen=True)
class RunConfig:
    atom: AtomParameters = DEFAULT_ATOM
    drive: DriveParameters = DEFAULT_DRIVE
    sweep: SweepConfig = DEFAULT_SWEEP
    output_path: Path | None = None
    format: str = "csv"


def _parse_variant(text: str) -> EquationVariant:
    try:
        return EquationVariant(text.strip().replace("-", "_"))
    except ValueError:
        raise ParseError(f"unknown variant {text!r} (expected as_printed or corrected)") from None


def _parse_mode(text: str) -> BranchMode:
    try:
        return BranchMode(text.strip())
    except ValueError:
        raise ParseError(f"unknown branch mode {text!r} (expected literal or passive)") from None


def parse_config(text: str) -> RunConfig:
    """Parse the sectioned key-value config format into a RunConfig.

    Unknown sections or keys are errors.  An empty document yields the
    shipped defaults.
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys are case sensitive field names
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ParseError(str(exc)) from None

    known_sections = {"atom", "drive", "sweep"}
    unknown = set(parser.sections()) - known_sections
    if unknown:
        raise ParseError(f"unknown section(s): {', '.join(sorted(unknown))}")

    def read_floats(section: str, keys: tuple[str, ...]) -> dict[str, float]:
        if not parser.has_section(section):
            return {}
        out = {}
        for key, raw in parser.items(section):
            if key not in keys and not (section == "sweep" and key in ("points", "variant", "mode")):
                raise ParseError(f"unknown key {key!r} in section [{section}]")
            if key in keys:
                try:
                    out[key] = float(raw)
                except ValueError:
                    raise ParseError(f"key {key!r} in [{section}]: not a number: {raw!r}") from None
        return out

    atom = dataclasses.replace(DEFAULT_ATOM, **read_floats("atom", _FLOAT_KEYS_ATOM))
    drive = dataclasses.replace(DEFAULT_DRIVE, **read_floats("drive", _FLOAT_KEYS_DRIVE))

    sweep_kwargs: dict = read_floats("sweep", ("dp_min", "dp_max"))
    if parser.has_section("sweep"):
        if parser.has_option("sweep", "points"):
            raw = parser.get("sweep", "points")
            try:
                sweep_kwargs["points"] = int(raw)
            except ValueError:
                raise ParseError(f"key 'points' in [sweep]: not an integer: {raw!r}") from None
        if parser.has_option("sweep", "variant"):
            sweep_kwargs["variant"] = _parse_variant(parser.get("sweep", "variant"))
        if parser.has_option("sweep", "mode"):
            sweep_kwargs["mode"] = _parse_mode(parser.get("sweep", "mode"))
    sweep = dataclasses.replace(DEFAULT_SWEEP, **sweep_kwargs)

    problems = validate(atom, drive) + sweep.violations()
    if problems:
        raise ParseError("invalid configuration: " + "; ".join(problems))
    return RunConfig(atom=atom, drive=drive, sweep=sweep)


def format_config(config: RunConfig) -> str:
    """Render a RunConfig back into the config text format (round-trips)."""
    lines = ["[atom]"]
    for key in _FLOAT_KEYS_ATOM:
        lines.append(f"{key} = {getattr(config.atom, key)!r}")
    lines.append("")
    lines.append("[drive]")
    for key in _FLOAT_KEYS_DRIVE:
        lines.append(f"{key} = {getattr(config.drive, key)!r}")
    lines.append("")
    lines.append("[sweep]")
    lines.append(f"dp_min = {config.sweep.dp_min!r}")
    lines.append(f"dp_max = {config.sweep.dp_max!r}")
    lines.append(f"points = {config.sweep.points}")
    lines.append(f"variant = {config.sweep.variant.value}")
    lines.append(f"mode = {config.sweep.mode.value}")
    lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# serialization


def _num(x: float) -> str:
    """Shortest round-trip decimal."""
    return repr(float(x))


def _cell(x: float | None) -> str:
    if x is None:
        return ""
    if math.isinf(x):
        return "inf"
    return _num(x)


def _sample_cells(s: ResponseSample) -> list[str]:
    return [
        _num(s.delta_p),
        _cell(None if s.eps_r is None else s.eps_r.real),
        _cell(None if s.eps_r is None else s.eps_r.imag),
        _cell(None if s.mu_r is None else s.mu_r.real),
        _cell(None if s.mu_r is None else s.mu_r.imag),
        _cell(None if s.n is None else s.n.real),
        _cell(None if s.n is None else s.n.imag),
        _cell(s.fom),
        ";".join(sorted(s.flags)),
    ]


def spectrum_csv(spectrum: ResponseSpectrum) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for s in spectrum.samples:
        buf.write(",".join(_sample_cells(s)) + "\n")
    return buf.getvalue()


def _metadata_dict(config: RunConfig, stamp: bool) -> dict:
    meta = {
        "tool": "lhvapor",
        "version": __version__,
        "variant": config.sweep.variant.value,
        "mode": config.sweep.mode.value,
        "atom": {k: getattr(config.atom, k) for k in _FLOAT_KEYS_ATOM},
        "drive": {k: getattr(config.drive, k) for k in _FLOAT_KEYS_DRIVE},
        "sweep": {
            "dp_min": config.sweep.dp_min,
            "dp_max": config.sweep.dp_max,
            "points": config.sweep.points,
        },
    }
    if stamp:
        meta["generated_at"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    return meta


def _json_value(x: float | None) -> float | str | None:
    if x is None:
        return None
    if math.isinf(x):
        return "inf"
    return x


def spectrum_json(spectrum: ResponseSpectrum, config: RunConfig, stamp: bool = False) -> str:
    samples = []
    for s in spectrum.samples:
        samples.append(
            {
                "dp_over_gamma": s.delta_p,
                "re_eps": _json_value(None if s.eps_r is None else s.eps_r.real),
                "im_eps": _json_value(None if s.eps_r is None else s.eps_r.imag),
                "re_mu": _json_value(None if s.mu_r is None else s.mu_r.real),
                "im_mu": _json_value(None if s.mu_r is None else s.mu_r.imag),
                "re_n": _json_value(None if s.n is None else s.n.real),
                "im_n": _json_value(None if s.n is None else s.n.imag),
                "fom": _json_value(s.fom),
                "flags": sorted(s.flags),
            }
        )
    doc = {"metadata": _metadata_dict(config, stamp), "samples": samples}
    return json.dumps(doc, indent=2) + "\n"


def read_spectrum_json(path: Path) -> tuple[dict, list[dict]]:
    """Re-parse a spectrum JSON file into (metadata, rows).

    Rows use the same field names and conventions as the CSV reader:
    ``None`` for flagged cells, ``math.inf`` for the lossless sentinel,
    ``frozenset`` flags.
    """
    doc = json.loads(Path(path).read_text())
    rows = []
    for s in doc["samples"]:
        row = {}
        for name in CSV_COLUMNS:
            if name == "flags":
                row[name] = frozenset(s[name])
            elif s[name] == "inf":
                row[name] = math.inf
            else:
                row[name] = s[name]
        rows.append(row)
    return doc["metadata"], rows


def read_spectrum_csv(path: Path) -> list[dict]:
    """Re-parse a spectrum CSV; numeric cells come back bitwise identical."""
    lines = Path(path).read_text().splitlines()
    if not lines or tuple(lines[0].split(",")) != CSV_COLUMNS:
        raise ParseError(f"{path}: missing or wrong header")
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != len(CSV_COLUMNS):
            raise ParseError(f"{path}: wrong cell count in row {len(rows) + 2}")
        row: dict = {}
        for name, cell in zip(CSV_COLUMNS, cells):
            if name == "flags":
                row[name] = frozenset(cell.split(";")) if cell else frozenset()
            elif cell == "":
                row[name] = None
            else:
                row[name] = float(cell)
        rows.append(row)
    return rows


def write_atomic(path: Path, content: str) -> None:
    """Write via a sibling temp file and rename, so readers never see partials."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_spectrum(
    spectrum: ResponseSpectrum,
    fmt: str,
    path: Path,
    config: RunConfig | None = None,
    stamp: bool = False,
) -> None:
    config = config or RunConfig()
    if fmt == "csv":
        write_atomic(path, spectrum_csv(spectrum))
    elif fmt == "json":
        write_atomic(path, spectrum_json(spectrum, config, stamp))
    else:
        raise ValueError(f"unknown format {fmt!r}")


def bands_json(spectrum: ResponseSpectrum, config: RunConfig, stamp: bool = False) -> str:
    report = summarize(spectrum)
    bands = {
        pred.value: [
            {"lo": b.lo, "hi": b.hi} for b in find_bands(spectrum, pred)
        ]
        for pred in BandPredicate
    }
    doc = {
        "metadata": _metadata_dict(config, stamp),
        "bands": bands,
        "summary": {
            "left_handed_band_count": len(report.left_handed_bands),
            "min_re_n": _json_value(report.min_re_n),
            "mean_re_n": _json_value(report.mean_re_n),
            "max_finite_fom": _json_value(report.max_finite_fom),
            "max_finite_fom_delta_p": _json_value(report.max_finite_fom_delta_p),
            "sentinel_fom_count": report.sentinel_fom_count,
            "flag_counts": report.flag_counts,
        },
    }
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# argument handling

ERR_USAGE = "E_USAGE"
ERR_CONFIG = "E_CONFIG"
ERR_VALIDATION = "E_VALIDATION"
ERR_SINGULAR = "E_SINGULAR"
ERR_IO = "E_IO"


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class _Once(argparse.Action):
    """Reject repeated use of a single-value option."""

    def __call__(self, parser, namespace, values, option_string=None):
        if getattr(namespace, f"_seen_{self.dest}", False):
            raise argparse.ArgumentError(self, "given more than once")
        setattr(namespace, f"_seen_{self.dest}", True)
        setattr(namespace, self.dest, values)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route usage problems through CliError
        raise CliError(ERR_USAGE, message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lhvapor", description=__doc__, add_help=True)
    parser.add_argument("--version", action="version", version=f"lhvapor {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, sweep_opts: bool) -> None:
        p.add_argument("--config", action=_Once, default=None, metavar="PATH",
                       help="config file, or the word 'default' for shipped defaults")
        p.add_argument("--variant", action=_Once, choices=("as-printed", "corrected"),
                       default=None, help="which equation reading to use")
        if sweep_opts:
            p.add_argument("--dp", action=_Once, default=None, metavar="MIN:MAX",
                           help="detuning range in gamma units")
            p.add_argument("--points", action=_Once, type=int, default=None)
            p.add_argument("--branch", action=_Once, choices=("literal", "passive"), default=None)
            p.add_argument("--format", action=_Once, choices=("csv", "json"), default=None)
            p.add_argument("--output", action=_Once, default=None, metavar="PATH")
            p.add_argument("--threads", action=_Once, type=int, default=1)
            p.add_argument("--stamp", action="store_true",
                           help="include a generation timestamp in file metadata")

    steady = sub.add_parser("steady", help="print one steady-state density matrix")
    common(steady, sweep_opts=False)
    steady.add_argument("--dp", action=_Once, type=float, default=None,
                        help="probe detuning in gamma units")

    sweep_p = sub.add_parser("sweep", help="write a spectrum file over the detuning grid")
    common(sweep_p, sweep_opts=True)

    bands_p = sub.add_parser("bands", help="write a band/summary report (JSON)")
    common(bands_p, sweep_opts=True)
    return parser


def _load_config(args: argparse.Namespace) -> RunConfig:
    if args.config in (None, "default"):
        config = RunConfig()
    else:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise CliError(ERR_IO, f"cannot read config {args.config}: {exc}") from None
        try:
            config = parse_config(text)
        except ParseError as exc:
            raise CliError(ERR_CONFIG, str(exc)) from None

    sweep_cfg = config.sweep
    if args.variant is not None:
        sweep_cfg = dataclasses.replace(sweep_cfg, variant=EquationVariant(args.variant.replace("-", "_")))
    if getattr(args, "branch", None) is not None:
        sweep_cfg = dataclasses.replace(sweep_cfg, mode=BranchMode(args.branch))
    if getattr(args, "points", None) is not None:
        sweep_cfg = dataclasses.replace(sweep_cfg, points=args.points)
    dp = getattr(args, "dp", None)
    if args.command != "steady" and dp is not None:
        try:
            lo_text, hi_text = dp.split(":", 1)
            sweep_cfg = dataclasses.replace(sweep_cfg, dp_min=float(lo_text), dp_max=float(hi_text))
        except ValueError:
            raise CliError(ERR_USAGE, f"--dp expects MIN:MAX, got {dp!r}") from None

    bad = sweep_cfg.violations()
    if bad:
        raise CliError(ERR_VALIDATION, "; ".join(bad))
    fmt = getattr(args, "format", None) or config.format
    out = getattr(args, "output", None)
    return dataclasses.replace(
        config,
        sweep=sweep_cfg,
        format=fmt,
        output_path=Path(out) if out else None,
    )


def _cmd_steady(args: argparse.Namespace) -> int:
    config = _load_config(args)
    drive = config.drive
    if args.dp is not None:
        drive = dataclasses.replace(drive, delta_p=args.dp)
    problems = validate(config.atom, drive)
    if problems:
        raise CliError(ERR_VALIDATION, "; ".join(problems))
    try:
        rho = solve_steady(drive, config.sweep.variant)
    except SingularSteadySystem as exc:
        raise CliError(ERR_SINGULAR, str(exc)) from None
    residual = steady_residual(drive, rho, config.sweep.variant)
    print(f"# variant = {config.sweep.variant.value}, delta_p = {_num(drive.delta_p)}")
    for i in range(1, 5):
        row = "  ".join(f"{rho[i, j].real:+.12e}{rho[i, j].imag:+.12e}j" for j in range(1, 5))
        print(row)
    print(f"# trace = {_num(rho.trace().real)}, residual = {residual:.3e} gamma")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config(args)
    problems = validate(config.atom, config.drive)
    if problems:
        raise CliError(ERR_VALIDATION, "; ".join(problems))
    try:
        spectrum = scan(config.drive, config.atom, CODATA2018, config.sweep, threads=args.threads)
    except SingularSteadySystem as exc:
        raise CliError(ERR_SINGULAR, str(exc)) from None
    path = config.output_path or Path(f"spectrum.{config.format}")
    try:
        write_spectrum(spectrum, config.format, path, config, stamp=args.stamp)
    except OSError as exc:
        raise CliError(ERR_IO, f"cannot write {path}: {exc}") from None
    print(f"wrote {path} ({config.sweep.points} points, variant={config.sweep.variant.value})")
    return 0


def _cmd_bands(args: argparse.Namespace) -> int:
    config = _load_config(args)
    if getattr(args, "format", None) == "csv":
        raise CliError(ERR_USAGE, "the bands report is JSON only")
    problems = validate(config.atom, config.drive)
    if problems:
        raise CliError(ERR_VALIDATION, "; ".join(problems))
    try:
        spectrum = scan(config.drive, config.atom, CODATA2018, config.sweep, threads=args.threads)
    except SingularSteadySystem as exc:
        raise CliError(ERR_SINGULAR, str(exc)) from None
    path = config.output_path or Path("bands.json")
    try:
        write_atomic(path, bands_json(spectrum, config, stamp=args.stamp))
    except OSError as exc:
        raise CliError(ERR_IO, f"cannot write {path}: {exc}") from None
    print(f"wrote {path}")
    return 0


def run(argv: list[str] | None = None) -> int:
    """Entry point; returns a process exit status."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "steady":
            return _cmd_steady(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_bands(args)
    except CliError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 2 if exc.code == ERR_USAGE else 1


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
