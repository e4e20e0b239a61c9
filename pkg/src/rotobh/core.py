"""Ring geometry and the rotation -> effective-hopping mapping.

A Bose gas on a ring lattice of N sites rotating at angular velocity
Omega acquires a site-independent Peierls phase theta = gamma * Omega
on every bond, with scale factor

    gamma = 2 pi m R^2 / (N hbar)    [seconds]

All model energies are measured in units of the on-site repulsion U, so
the couplings reduce to t/U and mu/U, and rotation enters the problem
only through the effective hopping D = (t/U) cos(theta).  Callers that
work purely in dimensionless terms can skip RingFrame and supply gamma
or theta directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError

HBAR = 1.054571817e-34  # J s (CODATA 2018)
ATOMIC_MASS = 1.66053906660e-27  # kg


@dataclass(frozen=True)
class RingFrame:
    """Physical ring: mass [kg], radius [m], site count, omega [rad/s]."""

    mass: float
    radius: float
    sites: int
    omega: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.mass) and self.mass > 0.0):
            raise ConfigError("mass must be finite and positive")
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise ConfigError("radius must be finite and positive")
        if int(self.sites) != self.sites or self.sites < 3:
            raise ConfigError("sites must be an integer >= 3")
        if not math.isfinite(self.omega):
            raise ConfigError("omega must be finite")

    @classmethod
    def from_lab_units(cls, mass_amu, radius_um, sites, omega=0.0):
        """Build a frame from atomic mass units and micrometers."""
        return cls(mass=mass_amu * ATOMIC_MASS, radius=radius_um * 1e-6,
                   sites=sites, omega=omega)

    @property
    def gamma(self) -> float:
        return scale_factor(self)

    @property
    def theta(self) -> float:
        return peierls_phase(self.gamma, self.omega)


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless couplings t/U >= 0 and mu/U."""

    t_over_U: float
    mu_over_U: float

    def __post_init__(self):
        if not (math.isfinite(self.t_over_U) and self.t_over_U >= 0.0):
            raise ConfigError("t_over_U must be finite and >= 0")
        if not math.isfinite(self.mu_over_U):
            raise ConfigError("mu_over_U must be finite")


def scale_factor(frame: RingFrame) -> float:
    """gamma = 2 pi m R^2 / (N hbar), the rotation-to-phase scale [s]."""
    return 2.0 * math.pi * frame.mass * frame.radius ** 2 / (frame.sites * HBAR)


def peierls_phase(gamma: float, omega: float) -> float:
    """theta = gamma * omega; signed, linear in omega."""
    return gamma * omega


def effective_hopping(params: ModelParams, theta: float) -> float:
    """D = (t/U) cos(theta); even and 2 pi periodic in theta."""
    return params.t_over_U * math.cos(theta)
