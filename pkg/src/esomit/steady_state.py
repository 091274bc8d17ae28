"""Self-consistent mean-field steady state under the strong pump.

The pump populates both traveling modes; radiation pressure pushes the
boundary outward by x_bar, which in turn shifts the optical resonance by
u = g * x_bar.  The fixed point of

    F(u) = u - (hbar g^2 / (m omega_m^2)) (|a_cw(u)|^2 + |a_ccw(u)|^2) = 0

is solved by bracketing in u (rad/s), not in x_bar (m): x_bar ~ 1e-15 m
while rates are ~1e6 rad/s, so the scaled variable avoids catastrophic
conditioning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import hbar
from scipy.optimize import brentq

from .errors import NoConvergence, SingularDenominator
from .params import Drive, SystemParams, derived_rates, drive_amplitudes

__all__ = ["SteadyState", "intracavity_steady", "solve_steady"]

EPS_DEN = 1e-14


@dataclass(frozen=True)
class SteadyState:
    """Mean intracavity amplitudes and static mechanical displacement."""

    a_cw: complex       # [sqrt(photons)]
    a_ccw: complex      # [sqrt(photons)]
    x_bar: float        # [m]
    u: float            # optical shift g*x_bar [rad/s]
    all_roots: tuple    # every real fixed-point u found [rad/s]
    residual: float     # |F(u)| at the selected root [rad/s]

    @property
    def multistable(self):
        return len(self.all_roots) > 1


def _detuning(p: SystemParams, d: Drive):
    """Pump-frame detuning Delta = (omega0 - omega_c) + J."""
    return (p.omega0 - d.omega_c) + p.J


def intracavity_steady(p: SystemParams, d: Drive, u, rates=None):
    """Mean amplitudes (a_cw, a_ccw) for a given static shift u.

    Closed form of the pump-frequency steady state; u may be a scalar or an
    ndarray (broadcast over the denominator).  `rates` overrides the derived
    transmission coefficients, e.g. for decoupled (t3 = 0) reductions.
    """
    der = rates if rates is not None else derived_rates(p)
    Ec, _ = drive_amplitudes(d)
    root = math.sqrt(p.gamma1 * p.gamma2)
    delta = _detuning(p, d)
    D = 1j * (delta - np.asarray(u, dtype=float)) + p.gamma
    den = D * D + p.gamma1 * p.gamma2 * der.t3**2 + p.J**2
    scale = np.abs(D) ** 2 + p.J**2 + p.gamma1 * p.gamma2 * p.t0**2
    if np.any(np.abs(den) < EPS_DEN * scale):
        raise SingularDenominator("steady-state denominator vanished")
    sg1, sg2 = math.sqrt(p.gamma1), math.sqrt(p.gamma2)
    a_cw = Ec * (sg1 * D - der.t1 * sg2 * (der.t3 * root + 1j * p.J)) / den
    a_ccw = Ec * (der.t1 * sg2 * D + sg1 * (der.t3 * root - 1j * p.J)) / den
    if np.ndim(u) == 0:
        return complex(a_cw), complex(a_ccw)
    return a_cw, a_ccw


def _pressure(p: SystemParams, d: Drive, u):
    """Radiation-pressure shift K(u) = hbar g^2/(m wm^2) * total intensity."""
    a_cw, a_ccw = intracavity_steady(p, d, u)
    coeff = hbar * p.g**2 / (p.m * p.omega_m**2)
    return coeff * (np.abs(a_cw) ** 2 + np.abs(a_ccw) ** 2)


def solve_steady(p: SystemParams, d: Drive, scan_points=4096,
                 max_doublings=60) -> SteadyState:
    """Find all real fixed points of F(u) = u - K(u) and pick the low branch.

    The bracket [0, u_max] starts at twice the undisplaced pressure shift
    and is doubled until it exceeds twice the largest K seen on the scan
    grid (no fixed point can exceed max K).  Each sign change is refined by
    brentq plus a Newton polish to |F| <= 1e-12 * max(u, gamma).  The
    smallest root is the branch adiabatically connected to zero drive.
    """
    if p.g == 0.0 or d.Pc == 0.0:
        a_cw, a_ccw = intracavity_steady(p, d, 0.0)
        return SteadyState(a_cw=a_cw, a_ccw=a_ccw, x_bar=0.0, u=0.0,
                           all_roots=(0.0,), residual=0.0)

    def F(u):
        return u - _pressure(p, d, u)

    k0 = float(_pressure(p, d, 0.0))
    u_max = 2.0 * k0 + p.gamma
    for _ in range(max_doublings):
        grid = np.linspace(0.0, u_max, scan_points)
        kvals = _pressure(p, d, grid)
        if u_max > 2.0 * float(np.max(kvals)) and grid[-1] - kvals[-1] > 0.0:
            break
        u_max *= 2.0
    else:
        raise NoConvergence("could not bracket the steady-state fixed point")

    fvals = grid - kvals
    roots = []
    if fvals[0] == 0.0:
        roots.append(0.0)
    sign = np.sign(fvals)
    crossings = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    for i in crossings:
        roots.append(brentq(F, grid[i], grid[i + 1], xtol=1e-14 * max(grid[i + 1], 1.0),
                            rtol=8.882e-16))

    polished = []
    for u in roots:
        tol = 1e-12 * max(u, p.gamma)
        for _ in range(50):
            f = float(F(u))
            if abs(f) <= tol:
                break
            h = max(abs(u), p.gamma) * 1e-7
            df = (float(F(u + h)) - float(F(u - h))) / (2.0 * h)
            if df == 0.0:
                break
            u = u - f / df
        else:
            raise NoConvergence(f"fixed-point polish stalled at residual {f!r}")
        polished.append(u)

    if not polished:
        raise NoConvergence("no real fixed point found in the bracket")
    # dedupe near-identical roots
    polished.sort()
    unique = [polished[0]]
    for u in polished[1:]:
        if u - unique[-1] > 1e-9 * max(u, p.gamma):
            unique.append(u)

    u_sel = unique[0]
    a_cw, a_ccw = intracavity_steady(p, d, u_sel)
    return SteadyState(a_cw=a_cw, a_ccw=a_ccw,
                       x_bar=u_sel / p.g, u=u_sel,
                       all_roots=tuple(unique),
                       residual=abs(float(F(u_sel))))
