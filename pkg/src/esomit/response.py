"""Linearized probe response: sidebands, transmission and group delay.

Writing each operator as its mean plus first-order sidebands at the
pump-probe offset xi, the fluctuations obey a 5x5 complex linear system in
the unknowns (dx, da-_cw, da-_ccw, da+*_cw, da+*_ccw):

    chi^-1 dx - hbar g sum_j (a_j* da-_j + a_j da+*_j)      = 0
    f1 da-_cw  + (t3 s + iJ) da-_ccw  - i g a_cw  dx        = sqrt(g1) Ep
    f1 da-_ccw + (iJ - t3 s) da-_cw   - i g a_ccw dx        = t2 sqrt(g2) Ep
    f2 da+*_cw  + (t3* s - iJ) da+*_ccw + i g a_cw*  dx     = 0
    f2 da+*_ccw - (t3* s + iJ) da+*_cw  + i g a_ccw* dx     = 0

with s = sqrt(gamma1*gamma2), f_{1,2} = gamma - i xi +- i (Delta - g x_bar)
and chi^-1 = m (omega_m^2 - xi^2 - i xi gamma_m).  The hbar in the first
row makes the radiation-pressure force dimensionally consistent with field
amplitudes normalized to sqrt(photons).

Port-2 output: t = t2 - (t3 sqrt(g1) da-_cw + sqrt(g2) da-_ccw)/Ep,
T = |t|^2, and the group delay is d arg(t) / d delta_p.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import hbar

from .errors import NonConvergentDerivative, SingularSystem, ZeroProbe
from .params import Drive, SystemParams, derived_rates, drive_amplitudes
from .steady_state import SteadyState, _detuning, solve_steady

__all__ = [
    "ResponseSolution",
    "SpectrumTable",
    "fluctuation_system",
    "solve_response",
    "transmission",
    "transmission_spectrum",
    "group_delay",
]

PIVOT_EPS = 1e-14
DEFAULT_FD_STEP_FRACTION = 1e-4


@dataclass(frozen=True)
class ResponseSolution:
    """The five linearized unknowns at one pump-probe offset xi."""

    delta_x: complex    # mechanical response [m]
    da_cw_m: complex    # probe-frequency sideband [sqrt(photons)]
    da_ccw_m: complex
    da_cw_p: complex    # conjugated anti-Stokes component [sqrt(photons)]
    da_ccw_p: complex
    f1: complex         # gamma - i xi + i (Delta - g x_bar) [rad/s]
    f2: complex
    chi_inv: complex    # m (omega_m^2 - xi^2 - i xi gamma_m)

    def as_vector(self):
        return np.array([self.delta_x, self.da_cw_m, self.da_ccw_m,
                         self.da_cw_p, self.da_ccw_p], dtype=complex)


@dataclass(frozen=True)
class SpectrumTable:
    """Sampled probe spectrum: detuning, complex t, T = |t|^2, group delay."""

    delta_p: np.ndarray   # [rad/s], strictly increasing
    t: np.ndarray         # complex transmission amplitude
    T: np.ndarray         # transmission rate
    tau_g: np.ndarray     # group delay [s]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.delta_p) > 1 and not np.all(np.diff(self.delta_p) > 0):
            raise ValueError("delta_p grid must be strictly increasing")


def _rates(p: SystemParams, steady: SteadyState, d: Drive, xi):
    delta_eff = _detuning(p, d) - steady.u
    f1 = p.gamma - 1j * xi + 1j * delta_eff
    f2 = p.gamma - 1j * xi - 1j * delta_eff
    chi_inv = p.m * (p.omega_m**2 - xi**2 - 1j * xi * p.gamma_m)
    return f1, f2, chi_inv


def fluctuation_system(p: SystemParams, steady: SteadyState, d: Drive, xi,
                       rates=None):
    """Assemble the 5x5 matrix and right-hand side at offset xi.

    Unknown ordering: (dx, da-_cw, da-_ccw, da+*_cw, da+*_ccw).  `rates`
    overrides the derived transmission coefficients, e.g. for decoupled
    (t3 = 0) reductions that no single t0 value can express.
    """
    der = rates if rates is not None else derived_rates(p)
    s = math.sqrt(p.gamma1 * p.gamma2)
    f1, f2, chi_inv = _rates(p, steady, d, xi)
    _, Ep = drive_amplitudes(d)
    g = p.g
    a_cw, a_ccw = steady.a_cw, steady.a_ccw

    A = np.zeros((5, 5), dtype=complex)
    b = np.zeros(5, dtype=complex)
    A[0] = [chi_inv,
            -hbar * g * np.conj(a_cw), -hbar * g * np.conj(a_ccw),
            -hbar * g * a_cw, -hbar * g * a_ccw]
    A[1] = [-1j * g * a_cw, f1, der.t3 * s + 1j * p.J, 0.0, 0.0]
    A[2] = [-1j * g * a_ccw, 1j * p.J - der.t3 * s, f1, 0.0, 0.0]
    A[3] = [1j * g * np.conj(a_cw), 0.0, 0.0, f2,
            np.conj(der.t3) * s - 1j * p.J]
    A[4] = [1j * g * np.conj(a_ccw), 0.0, 0.0,
            -(np.conj(der.t3) * s + 1j * p.J), f2]
    b[1] = math.sqrt(p.gamma1) * Ep
    b[2] = der.t2 * math.sqrt(p.gamma2) * Ep
    return A, b


def _equilibrated_solve(A, b, g=0.0):
    """Solve with the mechanical unknown rescaled, then equilibrated LU.

    dx (~1e-18 m) lives on a wildly different scale from the sideband
    amplitudes, so the solve runs in y0 = g*dx (rad/s, comparable to the
    other unknowns) with two-sided diagonal scaling on top; the returned
    vector is in the original units.
    """
    A = np.array(A, dtype=complex, copy=True)
    gs = g if g > 0.0 else 1.0
    A[..., :, 0] /= gs
    r = np.max(np.abs(A), axis=-1)
    if np.any(r == 0.0) or not np.all(np.isfinite(r)):
        raise SingularSystem("zero or non-finite row in response matrix")
    As = A / r[..., :, None]
    bs = b / r
    c = np.max(np.abs(As), axis=-2)
    if np.any(c < PIVOT_EPS):
        raise SingularSystem("response matrix column below pivot threshold")
    As = As / c[..., None, :]
    try:
        y = np.linalg.solve(As, bs[..., None])[..., 0]
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    x = y / c
    x[..., 0] /= gs
    if not np.all(np.isfinite(x)):
        raise SingularSystem("non-finite response solution")
    return x


def solve_response(p: SystemParams, steady: SteadyState, d: Drive,
                   xi, rates=None) -> ResponseSolution:
    """Direct dense solve of the fluctuation system at offset xi."""
    A, b = fluctuation_system(p, steady, d, xi, rates=rates)
    try:
        x = _equilibrated_solve(A, b, g=p.g)
    except SingularSystem as exc:
        raise SingularSystem(f"singular response system at xi={xi!r}") from exc
    f1, f2, chi_inv = _rates(p, steady, d, xi)
    return ResponseSolution(delta_x=x[0], da_cw_m=x[1], da_ccw_m=x[2],
                            da_cw_p=x[3], da_ccw_p=x[4],
                            f1=f1, f2=f2, chi_inv=chi_inv)


def transmission(p: SystemParams, d: Drive, sol: ResponseSolution,
                 rates=None) -> complex:
    """Port-2 transmission amplitude t; T = |t|^2."""
    _, Ep = drive_amplitudes(d)
    if Ep == 0.0:
        raise ZeroProbe("transmission undefined for zero probe power")
    der = rates if rates is not None else derived_rates(p)
    return der.t2 - (der.t3 * math.sqrt(p.gamma1) * sol.da_cw_m
                     + math.sqrt(p.gamma2) * sol.da_ccw_m) / Ep


def _batched_sidebands(p: SystemParams, steady: SteadyState, d: Drive, xi,
                       rates=None):
    """Vectorized (da-_cw, da-_ccw) per unit probe amplitude over a xi grid.

    The system is linear in Ep, so the solve uses Ep = 1 and the caller
    never needs the per-row probe amplitude.
    """
    xi = np.asarray(xi, dtype=float)
    der = rates if rates is not None else derived_rates(p)
    s = math.sqrt(p.gamma1 * p.gamma2)
    g = p.g
    a_cw, a_ccw = steady.a_cw, steady.a_ccw
    delta_eff = _detuning(p, d) - steady.u
    f1 = p.gamma - 1j * xi + 1j * delta_eff
    f2 = p.gamma - 1j * xi - 1j * delta_eff
    chi_inv = p.m * (p.omega_m**2 - xi**2 - 1j * xi * p.gamma_m)

    n = xi.shape[0]
    A = np.zeros((n, 5, 5), dtype=complex)
    A[:, 0, 0] = chi_inv
    A[:, 0, 1] = -hbar * g * np.conj(a_cw)
    A[:, 0, 2] = -hbar * g * np.conj(a_ccw)
    A[:, 0, 3] = -hbar * g * a_cw
    A[:, 0, 4] = -hbar * g * a_ccw
    A[:, 1, 0] = -1j * g * a_cw
    A[:, 1, 1] = f1
    A[:, 1, 2] = der.t3 * s + 1j * p.J
    A[:, 2, 0] = -1j * g * a_ccw
    A[:, 2, 1] = 1j * p.J - der.t3 * s
    A[:, 2, 2] = f1
    A[:, 3, 0] = 1j * g * np.conj(a_cw)
    A[:, 3, 3] = f2
    A[:, 3, 4] = np.conj(der.t3) * s - 1j * p.J
    A[:, 4, 0] = 1j * g * np.conj(a_ccw)
    A[:, 4, 3] = -(np.conj(der.t3) * s + 1j * p.J)
    A[:, 4, 4] = f2
    b = np.zeros((n, 5), dtype=complex)
    b[:, 1] = math.sqrt(p.gamma1)
    b[:, 2] = der.t2 * math.sqrt(p.gamma2)
    x = _equilibrated_solve(A, b, g=p.g)
    return x[:, 1], x[:, 2]


def transmission_spectrum(p: SystemParams, d: Drive, delta_p,
                          metadata=None, rates=None) -> SpectrumTable:
    """Spectrum over a strictly increasing delta_p = omega_p - omega0 grid.

    One steady-state solve for the whole table (the probe never enters the
    steady state), then a batched per-row response solve.  The delay column
    is the gradient of the unwrapped transmission phase along the grid.
    """
    delta_p = np.asarray(delta_p, dtype=float)
    if delta_p.ndim != 1 or delta_p.size < 2:
        raise ValueError("delta_p must be a 1-D grid with >= 2 points")
    if not np.all(np.diff(delta_p) > 0):
        raise ValueError("delta_p grid must be strictly increasing")
    steady = solve_steady(p, d)
    delta_a = p.omega0 - d.omega_c
    xi = delta_p + delta_a
    der = rates if rates is not None else derived_rates(p)
    da_cw, da_ccw = _batched_sidebands(p, steady, d, xi, rates=rates)
    t = der.t2 - (der.t3 * math.sqrt(p.gamma1) * da_cw
                  + math.sqrt(p.gamma2) * da_ccw)
    phase = np.unwrap(np.angle(t))
    tau_g = np.gradient(phase, delta_p)
    meta = dict(metadata or {})
    meta.setdefault("steady_u", steady.u)
    meta.setdefault("steady_roots", list(steady.all_roots))
    return SpectrumTable(delta_p=delta_p, t=t, T=np.abs(t) ** 2,
                         tau_g=tau_g, metadata=meta)


def _arg_t(p: SystemParams, steady: SteadyState, d: Drive, delta_p):
    delta_a = p.omega0 - d.omega_c
    sol = solve_response(p, steady, d, delta_p + delta_a)
    return np.angle(transmission(p, d, sol))


def group_delay(p: SystemParams, d: Drive, delta_p, h=None,
                max_halvings=6) -> float:
    """Pointwise group delay by central difference with step-halving check.

    The raw phase difference is rewrapped into (-pi, pi].  Successive
    estimates at h and h/2 must agree within 1%; otherwise the step keeps
    halving (with a convergence warning) up to `max_halvings` times.
    """
    if h is None:
        h = DEFAULT_FD_STEP_FRACTION * p.gamma
    if h <= 0.0:
        raise ValueError("h must be > 0")
    steady = solve_steady(p, d)

    def estimate(step):
        dphi = (_arg_t(p, steady, d, delta_p + step)
                - _arg_t(p, steady, d, delta_p - step))
        dphi = (dphi + math.pi) % (2.0 * math.pi) - math.pi
        return dphi / (2.0 * step)

    prev = estimate(h)
    for k in range(max_halvings):
        h *= 0.5
        cur = estimate(h)
        scale = max(abs(cur), abs(prev))
        if scale == 0.0 or abs(cur - prev) <= 0.01 * scale:
            return cur
        warnings.warn(f"group delay not converged at h={2*h:.3e}; halving")
        prev = cur
    raise NonConvergentDerivative(
        f"group delay at delta_p={delta_p!r} failed step-halving check")
