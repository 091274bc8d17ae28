"""Eigenvalue structure of the optical subsystem.

The two traveling-wave supermodes split as E_pm = omega_pm - i*kappa_pm with
omega_pm = +-sqrt(alpha + beta) and kappa_pm = +-sqrt(alpha - beta).  Both
splittings vanish on two exceptional surfaces: the J = 0 sheet (first kind)
and the J = t0*sqrt(gamma1*gamma2) hypersurface at phi3 = 1.5*pi (second
kind).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .params import SystemParams

__all__ = [
    "EigenSplit",
    "PhaseClass",
    "EsDistance",
    "alpha_beta",
    "eigen_split",
    "es_coupling",
    "classify_point",
    "distance_to_es",
]

ES_PHASE = 1.5 * math.pi
DEFAULT_TOL = 1e-6

ES_KIND1 = "ES-Kind1"
ES_KIND2 = "ES-Kind2"
KAPPA_SPLIT = "Kappa-Split"
OMEGA_SPLIT = "Omega-Split"
GENERIC_NP = "Generic-NP"


@dataclass(frozen=True)
class EigenSplit:
    """Real/imaginary eigenvalue branches and the alpha/beta invariants."""

    alpha: float         # [rad^2/s^2]
    beta: float          # [rad^2/s^2]
    omega_plus: float    # [rad/s]
    omega_minus: float
    kappa_plus: float
    kappa_minus: float

    @property
    def omega_splitting(self):
        return abs(self.omega_plus - self.omega_minus)

    @property
    def kappa_splitting(self):
        return abs(self.kappa_plus - self.kappa_minus)


@dataclass(frozen=True)
class PhaseClass:
    """Exceptional-surface membership / phase-region label of one point."""

    kind: str
    splitting: tuple  # (|omega_+ - omega_-|, |kappa_+ - kappa_-|) [rad/s]


class EsDistance(NamedTuple):
    """Distances to the two exceptional surfaces [rad/s]."""

    second_kind: float  # |J - t0*sqrt(gamma1*gamma2)|
    first_kind: float   # J


def _sincos(phi):
    """sin/cos with half-pi multiples snapped to their exact values.

    A float phi carrying 1.5*pi is off the exact angle by ~1 ulp, so raw
    math.cos leaves a ~2e-16 residue that, fed through the square roots
    below, lifts the on-surface splitting to ~1e-8 of J.  Snapping within
    a few femtoradians restores exact coalescence without affecting any
    physically distinguishable phase.
    """
    half = 0.5 * math.pi
    k = round(phi / half)
    if abs(phi - k * half) <= 4e-12:
        return ((0.0, 1.0), (1.0, 0.0), (0.0, -1.0), (-1.0, 0.0))[int(k) % 4]
    return math.sin(phi), math.cos(phi)


def alpha_beta(J, t0, gamma1, gamma2, phi3):
    """The two invariants entering the eigenvalue split.

    alpha = sqrt(J^4 + 2 J^3 t0 sqrt(g1 g2) sin(phi3) + J^2 t0^2 g1 g2)/2,
    beta  = (J^2 + J t0 sqrt(g1 g2) sin(phi3))/2.

    Evaluated through q = J^2 + J t0 sqrt(g1 g2) (sin phi3 - i cos phi3),
    for which alpha = |q|/2 and beta = Re(q)/2 -- identical algebraically
    (expand |q|^2 and use sin^2+cos^2 = 1) but free of the catastrophic
    cancellation the expanded radical suffers near the surfaces.
    """
    s0 = t0 * math.sqrt(gamma1 * gamma2)
    sin3, cos3 = _sincos(phi3)
    re_q = J * J + J * s0 * sin3
    im_q = J * s0 * cos3
    alpha = 0.5 * math.hypot(re_q, im_q)
    beta = 0.5 * re_q
    return alpha, beta


def eigen_split(J, t0, gamma1, gamma2, phi3) -> EigenSplit:
    """Complex eigenvalue branches omega_pm - i*kappa_pm.

    omega = sqrt(alpha + beta) and kappa = sqrt(alpha - beta), with the
    ill-conditioned one of the pair recovered from the exact product
    omega*kappa = |Im q|/2 to keep both branches accurate when
    alpha ~ |beta|.
    """
    s0 = t0 * math.sqrt(gamma1 * gamma2)
    _, cos3 = _sincos(phi3)
    alpha, beta = alpha_beta(J, t0, gamma1, gamma2, phi3)
    half_im = 0.5 * abs(J * s0 * cos3)
    if beta >= 0.0:
        omega = math.sqrt(alpha + beta)
        kappa = half_im / omega if omega > 0.0 else \
            math.sqrt(max(alpha - beta, 0.0))
    else:
        kappa = math.sqrt(alpha - beta)
        omega = half_im / kappa if kappa > 0.0 else 0.0
    return EigenSplit(alpha=alpha, beta=beta,
                      omega_plus=omega, omega_minus=-omega,
                      kappa_plus=kappa, kappa_minus=-kappa)


def es_coupling(t0, gamma1, gamma2):
    """Backscattering strength that puts the system on the second-kind ES."""
    return t0 * math.sqrt(gamma1 * gamma2)


def distance_to_es(p: SystemParams) -> EsDistance:
    """Labeled distances to the second- and first-kind surfaces."""
    return EsDistance(second_kind=abs(p.J - es_coupling(p.t0, p.gamma1, p.gamma2)),
                      first_kind=p.J)


def classify_point(p: SystemParams, tol=DEFAULT_TOL) -> PhaseClass:
    """Classify a parameter point by ES membership and splitting character.

    The exact surface conditions are relaxed to a relative tolerance scaled
    by max(J, J*).
    """
    if tol <= 0.0:
        raise ValueError("tol must be > 0")
    split = eigen_split(p.J, p.t0, p.gamma1, p.gamma2, p.phi3)
    d_omega, d_kappa = split.omega_splitting, split.kappa_splitting
    splitting = (d_omega, d_kappa)
    j_star = es_coupling(p.t0, p.gamma1, p.gamma2)
    scale = max(p.J, j_star)
    if p.J <= tol * scale:
        return PhaseClass(kind=ES_KIND1, splitting=splitting)
    phase_off = abs((p.phi3 - ES_PHASE + math.pi) % (2.0 * math.pi) - math.pi)
    if abs(p.J - j_star) <= tol * scale and phase_off <= tol:
        return PhaseClass(kind=ES_KIND2, splitting=splitting)
    if d_omega < tol * scale < d_kappa:
        return PhaseClass(kind=KAPPA_SPLIT, splitting=splitting)
    if d_kappa < tol * scale < d_omega:
        return PhaseClass(kind=OMEGA_SPLIT, splitting=splitting)
    return PhaseClass(kind=GENERIC_NP, splitting=splitting)
