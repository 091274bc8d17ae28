"""Command-line front end: scenario execution and table export.

Subcommands: eigen, spectrum, delay, sweep, phase-sweep, crosscheck,
presets, feasibility.  Parameters come from a named preset, a key=value
config file, or repeatable --set overrides; exactly one of preset/config
selects the base point.  Tables go to stdout or --out as CSV (',' delimiter,
'.' decimal, 17-significant-digit floats, byte-stable for a fixed config)
or JSON (with a metadata block; its timestamp is suppressed by
--no-timestamp).

Exit codes: 0 success, 2 usage/config error, 3 I/O error, 4 numerical
failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
import time

import numpy as np

from .config import ANGULAR, CYCLIC, parse_quantity, read_config
from .eigenspace import classify_point, eigen_split
from .errors import EsOmitError, NoConvergence, NoExtremum, \
    NonConvergentDerivative, ParameterError, SingularDenominator, \
    SingularSystem, UnitParseError, UnknownPreset, ZeroDenominator, ZeroProbe
from .feasibility import FiberCouplingSpec, NanoparticleSpec, check_ranges, \
    coupling_from_nanoparticle, fiber_coupling_rate
from .closedform import crosscheck_closed_form
from .params import SystemParams, build_system
from .presets import GridSpec, _default_drive, default_grid, preset, \
    preset_names, run_preset, sweep_1d, sweep_phase
from .response import group_delay, transmission_spectrum

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4

_NUMERICAL_ERRORS = (NoConvergence, SingularSystem, SingularDenominator,
                     ZeroDenominator, ZeroProbe, NonConvergentDerivative,
                     NoExtremum, np.linalg.LinAlgError, FloatingPointError)

_DRIVE_KEYS = ("Pc", "Pp", "delta_a")
_PARAM_FIELDS = tuple(f.name for f in dataclasses.fields(SystemParams)
                      if f.name != "g_overridden")


class UsageError(Exception):
    pass


def _fmt(v):
    return format(float(v), ".17g")


def _parse_grid(text, convention):
    """'min:max:count' with optional unit suffixes on min/max."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be min:max:count, got {text!r}")
    try:
        lo = parse_quantity(parts[0], convention=convention)
        hi = parse_quantity(parts[1], convention=convention)
        count = int(parts[2])
    except (UnitParseError, ValueError) as exc:
        raise UsageError(f"bad grid {text!r}: {exc}") from exc
    if count <= 0:
        raise UsageError(f"grid count must be positive, got {count}")
    return GridSpec(axis="grid", start=lo, stop=hi, count=count)


def _parse_sets(pairs):
    out = {}
    for item in pairs or ():
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--set expects key=value, got {item!r}")
        out[key] = value
    return out


def _resolve_point(args):
    """Base parameters + drive from preset or config file, plus overrides."""
    convention = args.convention
    sets = _parse_sets(args.set)
    drive_over = {k: parse_quantity(sets.pop(k), convention=convention)
                  for k in _DRIVE_KEYS if k in sets}
    extra = set(sets) - set(_PARAM_FIELDS)
    if extra:
        raise UsageError(f"unknown --set keys: {', '.join(sorted(extra))}")

    if args.preset and args.config:
        raise UsageError("give either --preset or --config, not both")
    if args.preset:
        pre = preset(args.preset, convention=convention)
        params = pre.params
        if sets:
            params = params.with_(**{
                k: parse_quantity(v, convention=convention)
                for k, v in sets.items()})
        if drive_over:
            drive = _default_drive(params, convention=convention,
                                   **drive_over)
        else:
            drive = pre.drive
        return pre, params, drive
    raw = read_config(args.config) if args.config else {}
    raw.update(sets)
    if not raw:
        raise UsageError("no parameters given: use --preset, --config "
                         "or --set")
    params = build_system(raw, convention=convention)
    drive = _default_drive(params, convention=convention, **drive_over)
    return None, params, drive


def _metadata(args, params, drive, **extra):
    meta = {"command": args.command, "convention": args.convention}
    if args.preset:
        meta["preset"] = args.preset
    for name in _PARAM_FIELDS:
        meta[name] = getattr(params, name)
    meta.update(Pc=drive.Pc, Pp=drive.Pp,
                omega_c=drive.omega_c, omega_p=drive.omega_p)
    meta.update(extra)
    return meta


def _emit(args, columns, metadata):
    """Write a column table as CSV or JSON to --out (default stdout).

    `columns` is a list of (name, sequence) pairs; numeric cells are
    rendered with 17 significant digits in CSV so output bytes round-trip
    and diff cleanly.
    """
    if args.format == "json":
        payload = {"metadata": dict(metadata),
                   "columns": {name: [v if isinstance(v, str) else float(v)
                                      for v in values]
                               for name, values in columns}}
        if not args.no_timestamp:
            payload["metadata"]["timestamp"] = time.strftime(
                "%Y-%m-%dT%H:%M:%S")
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        for k, v in metadata.items():
            buf.write(f"# {k} = {v}\n")
        writer = csv.writer(buf, delimiter=",", lineterminator="\n")
        writer.writerow([name for name, _ in columns])
        n = len(columns[0][1])
        for i in range(n):
            writer.writerow([v if isinstance(v, str) else _fmt(v)
                             for v in (values[i] for _, values in columns)])
        text = buf.getvalue()
    _write_text(args.out, text)


def _emit_report(args, report):
    text = json.dumps(report, indent=2, default=float) + "\n"
    _write_text(args.out, text)


def _write_text(out, text):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _spectrum_columns(tables, lead=()):
    """Long-format columns from one or more spectrum tables."""
    cols = {name: [] for name, _ in lead}
    cols.update(delta_p=[], re_t=[], im_t=[], T=[], tau_g=[])
    for leads, tb in tables:
        n = tb.delta_p.size
        for (name, _), value in zip(lead, leads):
            cols[name].extend([value] * n)
        cols["delta_p"].extend(tb.delta_p.tolist())
        cols["re_t"].extend(np.real(tb.t).tolist())
        cols["im_t"].extend(np.imag(tb.t).tolist())
        cols["T"].extend(tb.T.tolist())
        cols["tau_g"].extend(tb.tau_g.tolist())
    return list(cols.items())


# --- subcommands -----------------------------------------------------------

def _cmd_eigen(args):
    _, params, drive = _resolve_point(args)
    convention = args.convention
    if args.grid:
        grid = _parse_grid(args.grid, convention)
    else:
        mhz = parse_quantity("1 MHz", convention=convention)
        grid = GridSpec("grid", 0.0, 3.0 * mhz, 201)
    axis = args.axis
    if axis not in ("J", "phi3"):
        raise UsageError(f"eigen axis must be J or phi3, got {axis!r}")
    rows = {"axis": [], "omega_plus": [], "omega_minus": [],
            "kappa_plus": [], "kappa_minus": [], "class": []}
    for v in grid.values():
        p = params.with_(**{axis: float(v)})
        split = eigen_split(p.J, p.t0, p.gamma1, p.gamma2, p.phi3)
        rows["axis"].append(float(v))
        rows["omega_plus"].append(split.omega_plus)
        rows["omega_minus"].append(split.omega_minus)
        rows["kappa_plus"].append(split.kappa_plus)
        rows["kappa_minus"].append(split.kappa_minus)
        rows["class"].append(classify_point(p).kind)
    meta = _metadata(args, params, drive, axis=axis)
    _emit(args, list(rows.items()), meta)


def _cmd_spectrum(args):
    _, params, drive = _resolve_point(args)
    if args.grid:
        grid = _parse_grid(args.grid, args.convention)
    else:
        grid = default_grid(args.convention)
    table = transmission_spectrum(params, drive, grid.values())
    meta = _metadata(args, params, drive)
    _emit(args, _spectrum_columns([((), table)]), meta)


def _cmd_delay(args):
    _, params, drive = _resolve_point(args)
    if args.grid:
        grid = _parse_grid(args.grid, args.convention)
    else:
        grid = default_grid(args.convention, count=201)
    dp = grid.values()
    tau = [group_delay(params, drive, float(v)) for v in dp]
    meta = _metadata(args, params, drive)
    _emit(args, [("delta_p", dp.tolist()), ("tau_g", tau)], meta)


def _cmd_sweep(args):
    pre, params, drive = _resolve_point(args)
    if pre is None:
        raise UsageError("sweep requires --preset")
    axis = args.axis or pre.sweep.axis
    if axis == "delta_p":
        raise UsageError("sweep axis must be a system parameter; "
                         "the probe grid is swept by `spectrum`")
    if args.sweep_grid:
        svals = _parse_grid(args.sweep_grid, args.convention).values()
    elif pre.sweep.axis == axis:
        svals = pre.sweep.values()
    else:
        raise UsageError(f"no sweep grid for axis {axis!r}: pass "
                         "--sweep-grid min:max:count")
    grid = _parse_grid(args.grid, args.convention) if args.grid \
        else default_grid(args.convention)
    tables = sweep_1d(pre, axis=axis, values=svals,
                      constraint=args.constraint if args.constraint is not None
                      else pre.constraint,
                      grid=grid, convention=args.convention)
    meta = _metadata(args, params, drive, axis=axis,
                     constraint=args.constraint or pre.constraint)
    rows = [((float(v),), tb) for v, tb in zip(svals, tables)]
    _emit(args, _spectrum_columns(rows, lead=(("axis_value", None),)), meta)


def _cmd_phase_sweep(args):
    pre, params, drive = _resolve_point(args)
    if pre is None:
        raise UsageError("phase-sweep requires --preset")
    if args.phases:
        phases = [parse_quantity(x.strip()) for x in args.phases.split(",")]
    else:
        phases = None
    grid = _parse_grid(args.grid, args.convention) if args.grid \
        else default_grid(args.convention)
    tables = sweep_phase(pre, phi3_values=phases, grid=grid,
                         convention=args.convention)
    meta = _metadata(args, params, drive)
    rows = [((tb.metadata["phi3"], "yes" if tb.metadata["on_es"] else "no"),
             tb) for tb in tables]
    _emit(args, _spectrum_columns(
        rows, lead=(("phi3", None), ("on_es", None))), meta)


def _cmd_crosscheck(args):
    _, params, drive = _resolve_point(args)
    grid = _parse_grid(args.grid, args.convention) if args.grid \
        else default_grid(args.convention, count=201)
    delta_a = params.omega0 - drive.omega_c
    xi_grid = grid.values() + delta_a
    report = crosscheck_closed_form(params, drive, xi_grid)
    report["metadata"] = _metadata(args, params, drive)
    if not args.no_timestamp:
        report["metadata"]["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    _emit_report(args, report)


def _cmd_presets(args):
    rows = {"name": [], "J": [], "gamma1": [], "gamma2": [], "t0": [],
            "phi3": [], "provenance": []}
    for name in preset_names():
        pre = preset(name, convention=args.convention)
        rows["name"].append(name)
        rows["J"].append(pre.params.J)
        rows["gamma1"].append(pre.params.gamma1)
        rows["gamma2"].append(pre.params.gamma2)
        rows["t0"].append(pre.params.t0)
        rows["phi3"].append(pre.params.phi3)
        rows["provenance"].append(pre.provenance)
    meta = {"command": "presets", "convention": args.convention}
    _emit(args, list(rows.items()), meta)


def _cmd_feasibility(args):
    sets = _parse_sets(args.set)
    particle_keys = ("alpha_pol", "f_at_r", "V_m")
    fiber_keys = ("eta", "n_index", "R_fiber")
    particle = {k: parse_quantity(sets.pop(k)) for k in particle_keys
                if k in sets}
    fiber = {k: parse_quantity(sets.pop(k)) for k in fiber_keys if k in sets}
    args.set = [f"{k}={v}" for k, v in sets.items()]
    _, params, drive = _resolve_point(args)
    report = check_ranges(params, convention=args.convention)
    if particle:
        missing = [k for k in particle_keys if k not in particle]
        if missing:
            raise UsageError("nanoparticle inputs need "
                             + ", ".join(particle_keys))
        coupling = coupling_from_nanoparticle(
            NanoparticleSpec(alpha_pol=particle["alpha_pol"],
                             f_at_r=particle["f_at_r"],
                             V_m=particle["V_m"]), params.omega0)
        report["nanoparticle_J"] = coupling.J
        report["nanoparticle_sign"] = coupling.sign
    if fiber:
        missing = [k for k in fiber_keys if k not in fiber]
        if missing:
            raise UsageError("fiber inputs need " + ", ".join(fiber_keys))
        report["fiber_gamma"] = fiber_coupling_rate(
            FiberCouplingSpec(eta=fiber["eta"], n=fiber["n_index"],
                              R=fiber["R_fiber"]))
    report["metadata"] = _metadata(args, params, drive)
    _emit_report(args, report)


_COMMANDS = {
    "eigen": _cmd_eigen,
    "spectrum": _cmd_spectrum,
    "delay": _cmd_delay,
    "sweep": _cmd_sweep,
    "phase-sweep": _cmd_phase_sweep,
    "crosscheck": _cmd_crosscheck,
    "presets": _cmd_presets,
    "feasibility": _cmd_feasibility,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="esomit",
        description="Transmission spectra, group delays and eigenvalue "
                    "structure of a non-Hermitian whispering-gallery "
                    "optomechanical system.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--preset", default=None)
        sp.add_argument("--config", default=None,
                        help="key=value parameter file")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override one parameter (repeatable)")
        sp.add_argument("--grid", default=None, metavar="MIN:MAX:COUNT")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default="-")
        sp.add_argument("--convention", choices=(ANGULAR, CYCLIC),
                        default=ANGULAR)
        sp.add_argument("--no-timestamp", action="store_true")
        if name == "eigen":
            sp.add_argument("--axis", default="J")
        if name == "sweep":
            sp.add_argument("--axis", default=None)
            sp.add_argument("--sweep-grid", default=None,
                            metavar="MIN:MAX:COUNT")
            sp.add_argument("--constraint", default=None)
        if name == "phase-sweep":
            sp.add_argument("--phases", default=None,
                            help="comma-separated phi3 list, e.g. "
                                 "'1.3pi,1.5pi'")
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except (UsageError, ParameterError, UnknownPreset, UnitParseError) as exc:
        msg = exc.args[0] if exc.args else exc
        print(f"esomit: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"esomit: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except _NUMERICAL_ERRORS as exc:
        print(f"esomit: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
