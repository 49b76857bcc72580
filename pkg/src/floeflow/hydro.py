"""Finite-difference solver for the drag-driven continuum system.

On a doubly periodic uniform grid, the first two balance laws are advanced:

    d(rho)/dt  + div(rho u)         = 0
    d(rho u)/dt + div(rho u (x) u)  = S

with second-order central differences in conservative (flux) form and
two-step Adams-Bashforth time integration bootstrapped by one forward
Euler step.  The energy balance is decoupled from (rho, rho u) and is not
solved.

Two momentum sources are available:
  mean_field     S = rho * gamma_bar * (u_o - u)|u_o - u|   (default)
  constant_alpha S = alpha_bar * (u_o - u)|u_o - u|
The mean-field form weights the drag by the local density, so vacuum gains
no momentum; gamma_bar is the expectation of alpha/m under the floe
size/thickness laws.  The constant-alpha form is kept as the literal
alternative.

Velocity recovery: u = mom/rho where rho >= density_floor, else 0.  Cells
at or below the floor have no meaningful bulk velocity; dividing their
stray momentum by the floor would launch unbounded advection speeds out of
near-vacuum, so they simply stop transporting until mass flows back in.
Pick the floor well below the densities that matter (it only gates
near-empty cells).  An optional hard speed cap (velocity_cap) bounds the
recovered u in cells sitting just above the floor, where mom/rho is still
arbitrarily large; it never touches cells whose recovered speed is below
the cap, so well-resolved runs are bit-identical with or without it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Domain, PhysParams, drag_coefficient, floe_mass
from .distributions import GammaParams, PowerLawParams, sample_gamma, sample_power_law
from .errors import NumericalBlowupError
from .ocean import OceanField


@dataclass
class HydroFields:
    """Density and momentum density on the periodic grid; values[jy, ix]."""

    rho: np.ndarray            # (ny, nx)
    mom: np.ndarray            # (ny, nx, 2)
    t: float = 0.0

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=float)
        self.mom = np.asarray(self.mom, dtype=float)
        if self.rho.ndim != 2 or self.mom.shape != self.rho.shape + (2,):
            raise ValueError("rho must be (ny, nx) and mom (ny, nx, 2)")

    @property
    def ny(self) -> int:
        return self.rho.shape[0]

    @property
    def nx(self) -> int:
        return self.rho.shape[1]

    def copy(self) -> "HydroFields":
        return HydroFields(rho=self.rho.copy(), mom=self.mom.copy(), t=self.t)


@dataclass(frozen=True)
class HydroConfig:
    dt: float = 2e-4
    drag_mode: str = "mean_field"       # mean_field | constant_alpha
    gamma_bar: float = 1.0
    alpha_bar: float | None = None      # None: reuse gamma_bar
    density_floor: float = 1e-12
    velocity_cap: float | None = None   # hard |u| bound for near-vacuum cells
    diffusion: float = 0.0              # conservative nu*Laplacian on rho and mom
    hyperdiffusion: float = 0.0         # conservative -nu4*Laplacian^2 (selective
                                        # grid-scale damping, spares resolved scales)

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"hydro dt must be positive, got {self.dt}")
        if self.drag_mode not in ("mean_field", "constant_alpha"):
            raise ValueError(f"unknown drag_mode '{self.drag_mode}'")
        if not self.density_floor > 0:
            raise ValueError("density_floor must be positive")
        if self.velocity_cap is not None and not self.velocity_cap > 0:
            raise ValueError("velocity_cap must be positive when set")
        if self.diffusion < 0:
            raise ValueError("diffusion must be >= 0")
        if self.hyperdiffusion < 0:
            raise ValueError("hyperdiffusion must be >= 0")


def cell_centers(nx: int, ny: int, domain: Domain) -> np.ndarray:
    """Cell-center coordinates, shape (ny, nx, 2)."""
    L = domain.half_width
    xs = -L + (np.arange(nx) + 0.5) * (2.0 * L / nx)
    ys = -L + (np.arange(ny) + 0.5) * (2.0 * L / ny)
    X, Y = np.meshgrid(xs, ys)
    return np.stack([X, Y], axis=-1)


def central_difference(f: np.ndarray, axis: int, spacing: float) -> np.ndarray:
    """(f_{i+1} - f_{i-1}) / (2 dx) with periodic wrap; exact on constants."""
    return (np.roll(f, -1, axis=axis) - np.roll(f, 1, axis=axis)) / (2.0 * spacing)


def central_divergence(fx: np.ndarray, fy: np.ndarray, dx: float, dy: float) -> np.ndarray:
    """Divergence of the cell field (fx, fy); axis 1 is x, axis 0 is y."""
    return central_difference(fx, axis=1, spacing=dx) + central_difference(fy, axis=0, spacing=dy)


def laplacian(f: np.ndarray, dx: float, dy: float) -> np.ndarray:
    """Standard 5-point periodic Laplacian; exactly zero on constants and
    telescoping (sum of the stencil over the grid vanishes), so it neither
    creates nor destroys total mass."""
    return ((np.roll(f, -1, axis=1) - 2.0 * f + np.roll(f, 1, axis=1)) / dx ** 2
            + (np.roll(f, -1, axis=0) - 2.0 * f + np.roll(f, 1, axis=0)) / dy ** 2)


def rhs(fields: HydroFields, ocean: OceanField, cfg: HydroConfig,
        domain: Domain, centers: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Tendencies (d rho/dt, d mom/dt) in conservative form."""
    nx, ny = fields.nx, fields.ny
    dx = domain.width / nx
    dy = domain.width / ny
    rho, mom = fields.rho, fields.mom
    floor = cfg.density_floor
    # taper transport off continuously across [floor, 2*floor]: a hard
    # alive/dead switch flickers step to step and pumps grid oscillations;
    # cells with rho >= 2*floor see exactly u = mom/rho
    s = np.clip(rho / floor - 1.0, 0.0, 1.0)
    u = (mom / np.maximum(rho, floor)[..., None]) * s[..., None]
    if cfg.velocity_cap is not None:
        speed2 = np.einsum("...i,...i->...", u, u)
        fast = speed2 > cfg.velocity_cap ** 2
        if np.any(fast):
            u = np.where(fast[..., None],
                         u * (cfg.velocity_cap / np.sqrt(np.maximum(speed2, 1e-300)))[..., None],
                         u)

    drho = -central_divergence(mom[..., 0], mom[..., 1], dx, dy)

    dmom = np.empty_like(mom)
    for a in range(2):
        dmom[..., a] = -central_divergence(mom[..., 0] * u[..., a],
                                           mom[..., 1] * u[..., a], dx, dy)

    if centers is None:
        centers = cell_centers(nx, ny, domain)
    u_o = ocean.evaluate(fields.t, centers.reshape(-1, 2)).reshape(ny, nx, 2)
    w = u_o - u
    speed = np.sqrt(np.einsum("...i,...i->...", w, w))
    if cfg.drag_mode == "mean_field":
        # undershoot cells (rho < 0) carry no ice and must not anti-drag
        dmom += (np.maximum(rho, 0.0) * cfg.gamma_bar * speed)[..., None] * w
    else:
        alpha = cfg.gamma_bar if cfg.alpha_bar is None else cfg.alpha_bar
        dmom += (alpha * speed)[..., None] * w
    if cfg.diffusion > 0.0:
        drho = drho + cfg.diffusion * laplacian(rho, dx, dy)
        for a in range(2):
            dmom[..., a] += cfg.diffusion * laplacian(mom[..., a], dx, dy)
    if cfg.hyperdiffusion > 0.0:
        drho = drho - cfg.hyperdiffusion * laplacian(laplacian(rho, dx, dy), dx, dy)
        for a in range(2):
            dmom[..., a] -= cfg.hyperdiffusion * laplacian(
                laplacian(mom[..., a], dx, dy), dx, dy)
    return drho, dmom


def step_ab2(fields: HydroFields, prev_rhs, cfg: HydroConfig, ocean: OceanField,
             domain: Domain, centers: np.ndarray | None = None,
             step_index: int | None = None):
    """One AB2 step; with prev_rhs=None this is exactly the Euler bootstrap.

    Returns (advanced fields, rhs at the pre-step state) so the caller can
    thread the history to the next call.
    """
    rhs_now = rhs(fields, ocean, cfg, domain, centers=centers)
    dt = cfg.dt
    if prev_rhs is None:
        rho = fields.rho + dt * rhs_now[0]
        mom = fields.mom + dt * rhs_now[1]
    else:
        rho = fields.rho + dt * (1.5 * rhs_now[0] - 0.5 * prev_rhs[0])
        mom = fields.mom + dt * (1.5 * rhs_now[1] - 0.5 * prev_rhs[1])
    if not (np.all(np.isfinite(rho)) and np.all(np.isfinite(mom))):
        where = "" if step_index is None else f" at step {step_index}"
        raise NumericalBlowupError(f"non-finite hydro state{where}", step=step_index)
    return HydroFields(rho=rho, mom=mom, t=fields.t + dt), rhs_now


def total_mass(fields: HydroFields, domain: Domain) -> float:
    """sum rho * cell_area; conserved to round-off by the telescoping flux."""
    cell = (domain.width / fields.nx) * (domain.width / fields.ny)
    return float(fields.rho.sum()) * cell


def mean_drag_rate(size: PowerLawParams, thickness: GammaParams | float,
                   p: PhysParams, rng: np.random.Generator,
                   n_samples: int = 100_000, r_max: float | None = None) -> float:
    """gamma_bar = E[alpha(r,h)/m(r,h)] under the floe laws, by Monte Carlo.

    thickness may be a GammaParams law or a constant value (uniform-thickness
    runs); sampling is seeded by the caller so the estimate is reproducible.
    """
    r = sample_power_law(size, rng, size=n_samples, r_max=r_max)
    if isinstance(thickness, GammaParams):
        h = sample_gamma(thickness, rng, size=n_samples)
    else:
        h = np.full(n_samples, float(thickness))
    return float(np.mean(drag_coefficient(r, h, p) / floe_mass(r, h, p)))


def run_hydro(fields0: HydroFields, cfg: HydroConfig, ocean: OceanField,
              domain: Domain, times: list[float]):
    """Advance to each requested time (ascending multiples of cfg.dt),
    yielding (t, fields snapshot); the initial state is yielded for t=0."""
    for t in times:
        k = round(t / cfg.dt)
        if abs(k * cfg.dt - t) > 1e-9 * max(1.0, abs(t)):
            raise ValueError(f"snapshot time {t} is not a multiple of dt={cfg.dt}")
    times = sorted(times)
    fields = fields0.copy()
    prev = None
    step = 0
    centers = cell_centers(fields.nx, fields.ny, domain)
    for t in times:
        target = round(t / cfg.dt)
        while step < target:
            fields, prev = step_ab2(fields, prev, cfg, ocean, domain,
                                    centers=centers, step_index=step)
            ocean.advance(cfg.dt)
            step += 1
        yield t, fields.copy()
