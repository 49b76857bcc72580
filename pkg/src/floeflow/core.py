"""Domain types, physical parameters, and periodic-domain geometry.

Floes are rigid cylinders characterised by radius r and thickness h, moving
in a doubly periodic square domain [-L, L)^2.  Mass and ocean-drag
coefficient are derived per floe:

    m     = rho_ice * pi * r^2 * h
    alpha = pi * rho_o * (2 * C_vo * r * D + C_ho * r^2),   D = draft_factor * h

All pairwise geometry uses the minimum-image convention; stored positions
are always wrapped into the primary cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class PhysParams:
    """Physical constants of the floe-ocean system.

    Defaults are configuration defaults for the non-dimensional setting,
    not measured constants; every scenario may override them.
    """

    rho_ice: float = 0.9
    rho_o: float = 1.0
    c_vo: float = 0.1
    c_ho: float = 0.05
    e_e: float = 100.0
    e_r: float = 0.15
    draft_factor: float = 0.9

    def __post_init__(self):
        if not self.rho_ice > 0:
            raise ValueError(f"rho_ice must be positive, got {self.rho_ice}")
        if not self.rho_o > 0:
            raise ValueError(f"rho_o must be positive, got {self.rho_o}")
        if self.c_vo < 0 or self.c_ho < 0:
            raise ValueError("drag coefficients c_vo, c_ho must be non-negative")
        if not self.e_e > 0:
            raise ValueError(f"e_e must be positive, got {self.e_e}")
        if not 0.0 <= self.e_r < 1.0:
            raise ValueError(f"e_r must lie in [0, 1), got {self.e_r}")
        if not 0.0 < self.draft_factor <= 1.0:
            raise ValueError(f"draft_factor must lie in (0, 1], got {self.draft_factor}")


@dataclass(frozen=True)
class Domain:
    """Doubly periodic square domain [-half_width, half_width)^2."""

    half_width: float = math.pi

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")

    @property
    def width(self) -> float:
        return 2.0 * self.half_width

    @property
    def area(self) -> float:
        return self.width ** 2

    def wrap(self, x: np.ndarray) -> np.ndarray:
        """Map each component of x into [-half_width, half_width).

        Idempotent; raises on non-finite input.
        """
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise ValueError("cannot wrap non-finite position")
        L = self.half_width
        return np.mod(x + L, 2.0 * L) - L

    def min_image(self, xi: np.ndarray, xj: np.ndarray) -> np.ndarray:
        """Shortest periodic displacement x_j - x_i, components in [-L, L)."""
        d = np.asarray(xj, dtype=float) - np.asarray(xi, dtype=float)
        return self.wrap(d)


def floe_mass(r, h, p: PhysParams):
    """Mass of a cylindrical floe, rho_ice * pi * r^2 * h.

    Accepts scalars or arrays; rejects non-positive radius or thickness.
    """
    r = np.asarray(r, dtype=float)
    h = np.asarray(h, dtype=float)
    if np.any(r <= 0) or np.any(h <= 0):
        raise ValueError("floe radius and thickness must be positive")
    out = p.rho_ice * math.pi * r * r * h
    return float(out) if out.ndim == 0 else out


def drag_coefficient(r, h, p: PhysParams):
    """Ocean drag coefficient alpha = pi*rho_o*(2*C_vo*r*D + C_ho*r^2), D = draft_factor*h."""
    r = np.asarray(r, dtype=float)
    h = np.asarray(h, dtype=float)
    if np.any(r <= 0) or np.any(h <= 0):
        raise ValueError("floe radius and thickness must be positive")
    draft = p.draft_factor * h
    out = math.pi * p.rho_o * (2.0 * p.c_vo * r * draft + p.c_ho * r * r)
    return float(out) if out.ndim == 0 else out


def wrap_position(x, d: Domain) -> np.ndarray:
    """Module-level alias of Domain.wrap for a single position or an array."""
    return d.wrap(x)


def min_image_displacement(xi, xj, d: Domain) -> np.ndarray:
    """Module-level alias of Domain.min_image."""
    return d.min_image(xi, xj)


@dataclass
class Floe:
    """One floe: radius, thickness, position (2,), velocity (2,)."""

    r: float
    h: float
    x: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError(f"floe radius must be positive, got {self.r}")
        if not self.h > 0:
            raise ValueError(f"floe thickness must be positive, got {self.h}")
        self.x = np.asarray(self.x, dtype=float).reshape(2)
        self.v = np.asarray(self.v, dtype=float).reshape(2)


@dataclass
class Ensemble:
    """Snapshot of the particle system: per-floe arrays plus domain and time.

    Arrays are treated as immutable between integrator steps; stepping
    produces a fresh Ensemble (r and h may be shared, they never change).
    """

    r: np.ndarray          # (n,)
    h: np.ndarray          # (n,)
    x: np.ndarray          # (n, 2), wrapped into the domain
    v: np.ndarray          # (n, 2)
    domain: Domain = field(default_factory=Domain)
    t: float = 0.0

    def __post_init__(self):
        self.r = np.asarray(self.r, dtype=float).reshape(-1)
        self.h = np.asarray(self.h, dtype=float).reshape(-1)
        n = self.r.shape[0]
        self.x = np.asarray(self.x, dtype=float).reshape(n, 2)
        self.v = np.asarray(self.v, dtype=float).reshape(n, 2)
        if n < 1:
            raise ValueError("ensemble needs at least one floe")
        if self.h.shape[0] != n:
            raise ValueError("r and h must have the same length")
        if np.any(self.r <= 0) or np.any(self.h <= 0):
            raise ValueError("all radii and thicknesses must be positive")
        L = self.domain.half_width
        if np.any(self.x < -L) or np.any(self.x >= L):
            raise ValueError("all positions must lie in [-half_width, half_width)")

    @property
    def n(self) -> int:
        return self.r.shape[0]

    @property
    def floes(self) -> list[Floe]:
        return [Floe(self.r[i], self.h[i], self.x[i].copy(), self.v[i].copy())
                for i in range(self.n)]

    @classmethod
    def from_floes(cls, floes: list[Floe], domain: Domain | None = None,
                   t: float = 0.0) -> "Ensemble":
        domain = domain or Domain()
        r = np.array([f.r for f in floes], dtype=float)
        h = np.array([f.h for f in floes], dtype=float)
        x = np.array([f.x for f in floes], dtype=float)
        v = np.array([f.v for f in floes], dtype=float)
        return cls(r=r, h=h, x=domain.wrap(x), v=v, domain=domain, t=t)

    def masses(self, p: PhysParams) -> np.ndarray:
        return floe_mass(self.r, self.h, p)

    def drag_coefficients(self, p: PhysParams) -> np.ndarray:
        return drag_coefficient(self.r, self.h, p)

    def copy(self) -> "Ensemble":
        return Ensemble(r=self.r, h=self.h, x=self.x.copy(), v=self.v.copy(),
                        domain=self.domain, t=self.t)
