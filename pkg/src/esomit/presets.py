"""Named parameter points, sweep execution and transparency-window metrics.

The catalog namespaces the two surface kinds as es1-* (J = 0 sheet) and
es2-* (J = t0*sqrt(gamma1*gamma2) hypersurface at phi3 = 1.5*pi).  Shared
resonator values: R = 34.5 um, omega0 = 193 THz, gamma0 = 1 MHz, m = 50 ng,
omega_m = 147 MHz, gamma_m = 0.24 MHz, Pc = 1 mW.  Documented defaults not
pinned anywhere: pump red-detuned by the mechanical frequency
(delta_a = omega_m), probe power 1e-4 * Pc, t0 = 1 and phi3 = 1.5*pi for
the first-kind points.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import ANGULAR, parse_quantity
from .eigenspace import es_coupling
from .errors import NoExtremum, OutOfFigureRange, UnknownPreset
from .params import Drive, SystemParams, build_system
from .response import SpectrumTable, transmission_spectrum

__all__ = [
    "Preset",
    "GridSpec",
    "WindowMetrics",
    "preset",
    "preset_names",
    "line_gamma2",
    "default_grid",
    "sweep_1d",
    "sweep_phase",
    "window_metrics",
    "run_preset",
]

DEFAULT_PHASES = ("1.3pi", "1.4pi", "1.5pi", "1.6pi", "1.7pi")


@dataclass(frozen=True)
class GridSpec:
    """A 1-D sampling grid for one axis."""

    axis: str
    start: float
    stop: float
    count: int

    def values(self):
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class Preset:
    """A fully populated, re-validated scenario from the catalog."""

    name: str
    params: SystemParams
    drive: Drive
    sweep: GridSpec
    provenance: str
    phases: tuple = ()       # phi3 values [rad] for phase-sweep scenarios
    constraint: str = ""     # named axis constraint for 1-D sweeps


@dataclass(frozen=True)
class WindowMetrics:
    """Location and shape of a transparency extremum in a spectrum."""

    center: float    # delta_p of the extremum [rad/s]
    height: float    # T at the extremum
    width: float     # full width at half prominence [rad/s]
    polarity: str    # "peak" or "valley"


_COMMON = {
    "R": "34.5 um", "omega0": "193 THz", "gamma0": "1 MHz",
    "m": "50 ng", "omega_m": "147 MHz", "gamma_m": "0.24 MHz",
    "phi3": "1.5pi", "t0": 1.0,
}

# name -> (overrides, provenance, extras)
_CATALOG = {
    "baseline": ({"J": "0 MHz", "gamma1": "1 MHz", "gamma2": "1 MHz"},
                 "symmetric first-kind point, J = 0", {}),
    "es1-ep1": ({"J": "0 MHz", "gamma1": "0.7 MHz", "gamma2": "1.26 MHz"},
                "first-kind point on gamma2 = -0.86*gamma1 + 1.86", {}),
    "es1-ep2": ({"J": "0 MHz", "gamma1": "1 MHz", "gamma2": "1 MHz"},
                "first-kind point on gamma2 = -0.86*gamma1 + 1.86", {}),
    "es1-ep3": ({"J": "0 MHz", "gamma1": "1.38 MHz", "gamma2": "0.68 MHz"},
                "first-kind point on gamma2 = -0.86*gamma1 + 1.86", {}),
    "es1-np": ({"J": "0.3 MHz", "gamma1": "1 MHz", "gamma2": "1 MHz"},
               "off-surface comparison point, J = 0.3 MHz", {}),
    "es2-ep1": ({"J": "0.5 MHz", "gamma1": "0.5 MHz", "gamma2": "0.5 MHz"},
                "second-kind point, t0 = 1 cross-section", {}),
    "es2-ep2": ({"J": "1 MHz", "gamma1": "1 MHz", "gamma2": "1 MHz"},
                "second-kind point, t0 = 1 cross-section", {}),
    "es2-ep3": ({"J": "1.5 MHz", "gamma1": "1.5 MHz", "gamma2": "1.5 MHz"},
                "second-kind point, t0 = 1 cross-section", {}),
    "es2-ep4": ({"J": "0.9 MHz", "gamma1": "1 MHz", "gamma2": "1 MHz",
                 "t0": 0.9},
                "second-kind point, t0 = 0.9 cross-section", {}),
    "es2-ep5": ({"J": "0.82 MHz", "gamma1": "0.61 MHz", "gamma2": "1.11 MHz"},
                "second-kind point, t0 = 1 cross-section", {}),
    "es2-np1": ({"J": "1.5 MHz", "gamma1": "0.5 MHz", "gamma2": "0.5 MHz"},
                "off-surface comparison point, J > t0*sqrt(gamma1*gamma2)",
                {}),
    "fig2a-black": ({"J": "0 MHz", "gamma1": "1 MHz", "gamma2": "1 MHz"},
                    "first-kind reference spectrum", {}),
    "fig2a-red": ({"J": "1 MHz", "gamma1": "1 MHz", "gamma2": "1 MHz"},
                  "second-kind reference spectrum", {}),
    "fig2d-line": ({"J": "0 MHz", "gamma1": "0.7 MHz", "gamma2": "1.26 MHz"},
                   "first-kind sweep along gamma2 = -0.86*gamma1 + 1.86",
                   {"sweep": ("gamma1", "0.7 MHz", "1.38 MHz", 50),
                    "constraint": "line-gamma2"}),
    "fig4-surfaces": ({"J": "1 MHz", "gamma1": "1 MHz", "gamma2": "1 MHz"},
                      "on-surface sweep with J tied to t0*sqrt(gamma1*gamma2)",
                      {"sweep": ("gamma1", "0.5 MHz", "1.5 MHz", 21),
                       "constraint": "es-coupling"}),
    "fig5-phase-sweep": ({"J": "1 MHz", "gamma1": "1 MHz", "gamma2": "1 MHz"},
                         "phase sweep around the on-surface value 1.5*pi; "
                         "off-surface phases are documented defaults",
                         {"phases": DEFAULT_PHASES}),
}


def preset_names():
    return sorted(_CATALOG)


def default_grid(convention=ANGULAR, count=2001) -> GridSpec:
    """Default probe detuning grid: delta_p in [-5, 5] MHz, 2001 points."""
    mhz = parse_quantity("1 MHz", convention=convention)
    return GridSpec(axis="delta_p", start=-5.0 * mhz, stop=5.0 * mhz,
                    count=count)


def _default_drive(params: SystemParams, convention=ANGULAR,
                   Pc=None, Pp=None, delta_a=None) -> Drive:
    if Pc is None:
        Pc = parse_quantity("1 mW")
    if Pp is None:
        Pp = 1e-4 * Pc
    if delta_a is None:
        delta_a = params.omega_m
    return Drive(Pc=Pc, Pp=Pp,
                 omega_c=params.omega0 - delta_a,
                 omega_p=params.omega0)


def preset(name, convention=ANGULAR) -> Preset:
    """Look up and fully re-validate a catalog entry."""
    try:
        overrides, provenance, extras = _CATALOG[name]
    except KeyError:
        raise UnknownPreset(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}"
        ) from None
    raw = dict(_COMMON)
    raw.update(overrides)
    params = build_system(raw, convention=convention)
    drive = _default_drive(params, convention=convention)
    sweep = extras.get("sweep")
    if sweep is not None:
        axis, start, stop, count = sweep
        sweep = GridSpec(axis=axis,
                         start=parse_quantity(start, convention=convention),
                         stop=parse_quantity(stop, convention=convention),
                         count=count)
    else:
        sweep = default_grid(convention)
    phases = tuple(parse_quantity(ph) for ph in extras.get("phases", ()))
    return Preset(name=name, params=params, drive=drive, sweep=sweep,
                  provenance=provenance, phases=phases,
                  constraint=extras.get("constraint", ""))


def line_gamma2(gamma1, convention=ANGULAR):
    """gamma2 = -0.86*gamma1 + 1.86 in MHz units of the convention."""
    mhz = parse_quantity("1 MHz", convention=convention)
    g1 = gamma1 / mhz
    if not 0.6 <= g1 <= 1.5:
        warnings.warn(
            f"gamma1 = {g1:.4g} MHz outside the fitted range [0.6, 1.5] MHz",
            OutOfFigureRange)
    return (-0.86 * g1 + 1.86) * mhz


_CONSTRAINTS = {
    "": lambda p, convention: {},
    "line-gamma2": lambda p, convention: {
        "gamma2": line_gamma2(p.gamma1, convention)},
    "es-coupling": lambda p, convention: {
        "J": es_coupling(p.t0, p.gamma1, p.gamma2)},
}


def _max_workers(n_jobs):
    cap = os.environ.get("ESOMIT_THREADS")
    cap = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(cap, n_jobs))


def sweep_1d(pre: Preset, axis=None, values=None, constraint=None,
             grid=None, convention=ANGULAR):
    """One spectrum per axis value, with optional tied-parameter constraint.

    `constraint` is a catalog name ("line-gamma2", "es-coupling") or a
    callable mapping the updated SystemParams to extra field overrides.
    Rows are computed concurrently but returned in grid order.
    """
    if axis is None:
        axis = pre.sweep.axis
        values = pre.sweep.values()
    values = np.asarray(values, dtype=float)
    if constraint is None:
        constraint = pre.constraint
    if callable(constraint):
        tie = lambda p: constraint(p)  # noqa: E731
    else:
        tie = lambda p: _CONSTRAINTS[constraint](p, convention)  # noqa: E731
    if grid is None:
        grid = default_grid(convention)
    dp = grid.values()

    def one(v):
        p = pre.params.with_(**{axis: float(v)})
        extra = tie(p)
        if extra:
            p = p.with_(**extra)
        meta = {"preset": pre.name, "axis": axis, "axis_value": float(v)}
        return transmission_spectrum(p, pre.drive, dp, metadata=meta)

    with ThreadPoolExecutor(max_workers=_max_workers(len(values))) as ex:
        return list(ex.map(one, values))


def sweep_phase(pre: Preset, phi3_values=None, grid=None, convention=ANGULAR):
    """Spectra over a list of coupling-path phases phi3 in [0, 2*pi).

    phi1/phi2 follow phi3 whenever the preset had them tied (shared fiber
    segment); the 1.5*pi row is marked on-surface in its metadata.
    """
    if phi3_values is None:
        phi3_values = pre.phases or tuple(parse_quantity(x)
                                          for x in DEFAULT_PHASES)
    if grid is None:
        grid = default_grid(convention)
    dp = grid.values()
    tied = (pre.params.phi1 == pre.params.phi3
            and pre.params.phi2 == pre.params.phi3)

    def one(phi):
        phi = float(phi) % (2.0 * np.pi)
        changes = {"phi3": phi}
        if tied:
            changes.update(phi1=phi, phi2=phi)
        p = pre.params.with_(**changes)
        on_es = abs(phi - 1.5 * np.pi) < 1e-12
        meta = {"preset": pre.name, "phi3": phi, "on_es": on_es}
        return transmission_spectrum(p, pre.drive, dp, metadata=meta)

    with ThreadPoolExecutor(max_workers=_max_workers(len(phi3_values))) as ex:
        return list(ex.map(one, list(phi3_values)))


def run_preset(pre: Preset, grid=None, convention=ANGULAR) -> SpectrumTable:
    """Single spectrum of a point preset on the given (or default) grid."""
    if grid is None:
        grid = pre.sweep if pre.sweep.axis == "delta_p" else default_grid(convention)
    return transmission_spectrum(pre.params, pre.drive, grid.values(),
                                 metadata={"preset": pre.name})


def window_metrics(table: SpectrumTable, search_range=None) -> WindowMetrics:
    """Locate the transparency extremum of T relative to a local baseline.

    The baseline is the median T over the outer 20% of the search range;
    the extremum is the largest |T - baseline| excursion.  Width is the
    full width at half prominence, by linear interpolation (clamped to the
    range if a flank never recrosses the half level).
    """
    dp, T = table.delta_p, table.T
    if search_range is None:
        lo, hi = dp[0], dp[-1]
    else:
        lo, hi = search_range
        if lo < dp[0] or hi > dp[-1]:
            raise ValueError("search range outside table span")
    mask = (dp >= lo) & (dp <= hi)
    x, y = dp[mask], T[mask]
    if x.size < 5:
        raise ValueError("search range too narrow for window metrics")
    edge = max(1, int(0.1 * x.size))
    baseline = float(np.median(np.concatenate([y[:edge], y[-edge:]])))
    prom = y - baseline
    idx = int(np.argmax(np.abs(prom)))
    height = float(y[idx])
    p0 = prom[idx]
    dy = np.diff(y)
    if np.all(dy > 0) or np.all(dy < 0) or idx in (0, x.size - 1) \
            or abs(p0) < 1e-12:
        raise NoExtremum("no transparency extremum in search range")
    half = baseline + 0.5 * p0

    def cross(side):
        if side < 0:
            rng = range(idx, 0, -1)
        else:
            rng = range(idx, x.size - 1)
        for i in rng:
            j = i - 1 if side < 0 else i + 1
            a, b = prom[i] - 0.5 * p0, prom[j] - 0.5 * p0
            if a == 0.0:
                return x[i]
            if a * b <= 0.0:
                frac = a / (a - b)
                return x[i] + frac * (x[j] - x[i])
        return x[0] if side < 0 else x[-1]

    left, right = cross(-1), cross(+1)
    return WindowMetrics(center=float(x[idx]), height=height,
                         width=float(right - left),
                         polarity="peak" if p0 > 0 else "valley")
