"""Mapping from microscopic experimental quantities to model rates.

A nanoparticle of polarizability alpha_pol sitting in the mode field shifts
and couples the traveling modes with 2J = -alpha_pol f^2(r) omega0 / Vm;
the fiber-resonator rates follow gamma = eta / (2 tau_c) with round-trip
time tau_c = 2 n pi R / c.  The overlap factor eta is an input scalar (only
a proportionality to the field overlap integral exists, and no field data
is available to integrate).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from scipy.constants import c

from .config import ANGULAR, parse_quantity
from .errors import ParameterError, ZeroModeVolume
from .params import SystemParams

__all__ = [
    "NanoparticleSpec",
    "FiberCouplingSpec",
    "NanoparticleCoupling",
    "coupling_from_nanoparticle",
    "fiber_coupling_rate",
    "check_ranges",
]


@dataclass(frozen=True)
class NanoparticleSpec:
    """Scatterer and mode-geometry inputs for the backscattering coupling."""

    alpha_pol: float   # polarizability [m^3]
    f_at_r: float      # mode field value at the particle, 0..1
    V_m: float         # mode volume [m^3]

    def __post_init__(self):
        if not self.V_m > 0.0:
            raise ZeroModeVolume(f"V_m must be > 0, got {self.V_m!r}")
        if not 0.0 <= self.f_at_r <= 1.0:
            raise ParameterError(f"f_at_r must be in [0, 1], got {self.f_at_r!r}")


@dataclass(frozen=True)
class FiberCouplingSpec:
    """Taper-resonator overlap inputs for the dissipative coupling rate."""

    eta: float   # overlap factor, dimensionless
    n: float     # refractive index
    R: float     # resonator radius [m]

    def __post_init__(self):
        if self.eta < 0.0:
            raise ParameterError(f"eta must be >= 0, got {self.eta!r}")
        if self.n < 1.0:
            raise ParameterError(f"n must be >= 1, got {self.n!r}")
        if not self.R > 0.0:
            raise ParameterError(f"R must be > 0, got {self.R!r}")


class NanoparticleCoupling(NamedTuple):
    J: float     # magnitude [rad/s]; the model consumes J >= 0
    sign: int    # sign of the full shift 2J = -alpha f^2 omega0/Vm


def coupling_from_nanoparticle(spec: NanoparticleSpec,
                               omega0) -> NanoparticleCoupling:
    """Backscattering strength J from particle polarizability and position."""
    shift = -spec.alpha_pol * spec.f_at_r**2 * omega0 / spec.V_m
    sign = 0 if shift == 0.0 else (1 if shift > 0 else -1)
    return NanoparticleCoupling(J=abs(shift) / 2.0, sign=sign)


def fiber_coupling_rate(spec: FiberCouplingSpec):
    """gamma = eta / (2 tau_c) with tau_c = 2 n pi R / c."""
    return spec.eta * c / (4.0 * spec.n * math.pi * spec.R)


# Reported experimental ranges, in MHz of the active convention.
_RANGE_ROWS = (
    {"source": "microtoroid EIT-type experiment",
     "gamma_MHz": (5.57, 11.98), "J_MHz": (0.22, 7.11)},
    {"source": "loss-engineered coupled-microresonator experiment",
     "gamma_MHz": None, "J_MHz": (0.0, 200.0)},
    {"source": "exceptional-surface sensing experiment",
     "gamma_MHz": (0.1, 3.0), "J_MHz": (0.87, 0.87)},
    {"source": "taper-coupled silica microsphere experiment",
     "gamma_MHz": (0.87, 5.84), "J_MHz": None},
)

GAMMA_UNION_MHZ = (0.1, 12.0)
J_UNION_MHZ = (0.0, 200.0)


def check_ranges(p: SystemParams, convention=ANGULAR) -> dict:
    """Report-only comparison of gamma1, gamma2, J with reported ranges.

    Flags membership in the union ranges gamma in [0.1, 12] MHz and J in
    [0, 200] MHz, and per-row membership with source labels.  Never mutates
    or rejects parameters.
    """
    mhz = parse_quantity("1 MHz", convention=convention)
    g1, g2, J = p.gamma1 / mhz, p.gamma2 / mhz, p.J / mhz

    def in_range(v, rng):
        return rng[0] <= v <= rng[1]

    report = {
        "gamma1_MHz": g1, "gamma2_MHz": g2, "J_MHz": J,
        "gamma_union_MHz": list(GAMMA_UNION_MHZ),
        "J_union_MHz": list(J_UNION_MHZ),
        "gamma1_in_union": in_range(g1, GAMMA_UNION_MHZ),
        "gamma2_in_union": in_range(g2, GAMMA_UNION_MHZ),
        "J_in_union": in_range(J, J_UNION_MHZ),
        "rows": [],
        "warnings": [],
    }
    for row in _RANGE_ROWS:
        entry = {"source": row["source"]}
        if row["gamma_MHz"] is not None:
            entry["gamma_range_MHz"] = list(row["gamma_MHz"])
            entry["gamma1_in_range"] = in_range(g1, row["gamma_MHz"])
            entry["gamma2_in_range"] = in_range(g2, row["gamma_MHz"])
        if row["J_MHz"] is not None:
            entry["J_range_MHz"] = list(row["J_MHz"])
            entry["J_in_range"] = in_range(J, row["J_MHz"])
        report["rows"].append(entry)
    if not report["gamma1_in_union"]:
        report["warnings"].append(
            f"gamma1 = {g1:.4g} MHz outside reported range "
            f"{GAMMA_UNION_MHZ[0]}-{GAMMA_UNION_MHZ[1]} MHz")
    if not report["gamma2_in_union"]:
        report["warnings"].append(
            f"gamma2 = {g2:.4g} MHz outside reported range "
            f"{GAMMA_UNION_MHZ[0]}-{GAMMA_UNION_MHZ[1]} MHz")
    if not report["J_in_union"]:
        report["warnings"].append(
            f"J = {J:.4g} MHz outside reported range "
            f"{J_UNION_MHZ[0]}-{J_UNION_MHZ[1]} MHz")
    return report
