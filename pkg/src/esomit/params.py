"""Validated parameter model of the coupled CW/CCW/mechanical system.

Conventions: all rates and frequencies in rad/s, lengths in m, masses in kg,
powers in W.  The total optical half-linewidth gamma = (gamma0 + gamma1 +
gamma2)/2 is always derived, never stored.  The per-displacement
optomechanical coupling defaults to g = omega0 / R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from scipy.constants import hbar

from .config import ANGULAR, parse_quantity
from .errors import (
    MissingField,
    NegativeRate,
    NonPositiveFrequency,
    ParameterError,
    T0OutOfRange,
)

__all__ = [
    "SystemParams",
    "Drive",
    "DerivedRates",
    "build_system",
    "derived_rates",
    "drive_amplitudes",
]


@dataclass(frozen=True)
class SystemParams:
    """Static parameters of the resonator-fiber-mechanics system."""

    omega0: float       # optical resonance [rad/s]
    gamma0: float       # intrinsic decay [rad/s]
    gamma1: float       # fiber coupling at Port 1 [rad/s]
    gamma2: float       # fiber coupling at Port 2 [rad/s]
    J: float            # symmetric backscattering coupling [rad/s]
    t0: float           # fiber transmission magnitude, 0..1
    phi1: float         # pump-path transmission phase [rad]
    phi2: float         # probe-path transmission phase [rad]
    phi3: float         # coupling-path transmission phase [rad]
    R: float            # resonator radius [m]
    m: float            # effective mechanical mass [kg]
    omega_m: float      # mechanical frequency [rad/s]
    gamma_m: float      # mechanical damping [rad/s]
    g: float = field(default=None)  # optomech coupling [rad/(s*m)]
    g_overridden: bool = False

    def __post_init__(self):
        if self.g is None:
            object.__setattr__(self, "g", self.omega0 / self.R)
            object.__setattr__(self, "g_overridden", False)
        for name in ("gamma0", "gamma1", "gamma2", "gamma_m", "omega_m",
                     "m", "R"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise NegativeRate(f"{name} must be > 0, got {v!r}")
        if not (0.0 <= self.t0 <= 1.0):
            raise T0OutOfRange(f"t0 must be in [0, 1], got {self.t0!r}")
        if self.J < 0.0 or not math.isfinite(self.J):
            raise NegativeRate(f"J must be >= 0, got {self.J!r}")
        if not math.isfinite(self.omega0) or self.omega0 <= 0:
            raise NonPositiveFrequency(f"omega0 must be > 0, got {self.omega0!r}")
        if not self.g_overridden and self.g != self.omega0 / self.R:
            raise ParameterError("g differs from omega0/R without override")

    @property
    def gamma(self):
        """Total optical half-linewidth (gamma0 + gamma1 + gamma2)/2."""
        return 0.5 * (self.gamma0 + self.gamma1 + self.gamma2)

    def with_(self, **changes):
        """Return a validated copy with the given fields replaced."""
        if "g" in changes:
            changes.setdefault("g_overridden", True)
        return replace(self, **changes)


@dataclass(frozen=True)
class Drive:
    """Pump and probe drive fields."""

    Pc: float        # pump power [W]
    Pp: float        # probe power [W]
    omega_c: float   # pump frequency [rad/s]
    omega_p: float   # probe frequency [rad/s]

    def __post_init__(self):
        if not self.Pc > 0.0:
            raise ParameterError(f"Pc must be > 0, got {self.Pc!r}")
        if self.Pp < 0.0:
            raise ParameterError(f"Pp must be >= 0, got {self.Pp!r}")
        if self.omega_c <= 0.0 or self.omega_p <= 0.0:
            raise NonPositiveFrequency("omega_c and omega_p must be > 0")


@dataclass(frozen=True)
class DerivedRates:
    """Rates derived from SystemParams; never stored independently."""

    gamma_half: float   # (gamma0+gamma1+gamma2)/2 [rad/s]
    s: float            # t0*sqrt(gamma1*gamma2) [rad/s]
    t1: complex         # t0*exp(i*phi1)
    t2: complex         # t0*exp(i*phi2)
    t3: complex         # t0*exp(i*phi3)
    lam: complex        # one-way coupling i*sqrt(gamma1*gamma2)*t3 [rad/s]


_REQUIRED = ("omega0", "gamma0", "gamma1", "gamma2", "J", "t0", "phi3",
             "R", "m", "omega_m", "gamma_m")
_UNITS = {
    "omega0": "frequency", "gamma0": "frequency", "gamma1": "frequency",
    "gamma2": "frequency", "J": "frequency", "omega_m": "frequency",
    "gamma_m": "frequency", "g": "frequency",
}


def build_system(raw, convention=ANGULAR):
    """Build a validated SystemParams from raw values.

    ``raw`` maps field names to floats (already SI) or strings with unit
    suffixes ("147 MHz", "34.5 um", "50 ng", "1.5pi").  phi1/phi2 default
    to phi3; g defaults to omega0/R unless given explicitly.
    """
    vals = {}
    for key, value in raw.items():
        vals[key] = parse_quantity(value, convention=convention)
    for name in _REQUIRED:
        if name not in vals:
            raise MissingField(f"missing required parameter {name!r}")
        if not math.isfinite(vals[name]):
            raise ParameterError(f"{name} is not finite: {vals[name]!r}")
    vals.setdefault("phi1", vals["phi3"])
    vals.setdefault("phi2", vals["phi3"])
    g_overridden = "g" in vals
    return SystemParams(
        omega0=vals["omega0"], gamma0=vals["gamma0"],
        gamma1=vals["gamma1"], gamma2=vals["gamma2"],
        J=vals["J"], t0=vals["t0"],
        phi1=vals["phi1"], phi2=vals["phi2"], phi3=vals["phi3"],
        R=vals["R"], m=vals["m"],
        omega_m=vals["omega_m"], gamma_m=vals["gamma_m"],
        g=vals.get("g"), g_overridden=g_overridden,
    )


def derived_rates(p: SystemParams) -> DerivedRates:
    """Compute gamma, s, the complex t_j coefficients and lambda."""
    root = math.sqrt(p.gamma1 * p.gamma2)
    t1 = p.t0 * complex(math.cos(p.phi1), math.sin(p.phi1))
    t2 = p.t0 * complex(math.cos(p.phi2), math.sin(p.phi2))
    t3 = p.t0 * complex(math.cos(p.phi3), math.sin(p.phi3))
    return DerivedRates(
        gamma_half=p.gamma,
        s=p.t0 * root,
        t1=t1, t2=t2, t3=t3,
        lam=1j * root * t3,
    )


def drive_amplitudes(d: Drive):
    """Pump/probe field amplitudes Ec, Ep in sqrt(photons/s)."""
    if d.omega_c <= 0.0 or d.omega_p <= 0.0:
        raise NonPositiveFrequency("drive frequencies must be > 0")
    Ec = math.sqrt(d.Pc / (hbar * d.omega_c))
    Ep = math.sqrt(d.Pp / (hbar * d.omega_p))
    return Ec, Ep
