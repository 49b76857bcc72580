"""Discrete moments, balance residuals, relaxation metrics, concentration.

The per-step residuals implement the discrete balance identities of the
forward-Euler scheme.  With forces frozen at the pre-step state they hold
to round-off, which is what makes them usable as integrator validity
checks rather than convergence estimates:

momentum:  sum_i m_i (V1_i - V0_i)/dt  =  sum_i alpha_i (U_i - V0_i)|U_i - V0_i|
           (contact contributions cancel exactly by antisymmetry)

energy:    d(M2v)/dt + d(M2x)/dt  =  (1/2n) sum_{ij} kappa2 ((V0_i-V0_j).n)^2
           + (1/2n) sum_{ij} f_c^(ij) . (V1_i - V0_i)
           + (1/2)  sum_i  alpha_i (U_i-V0_i)|U_i-V0_i| . (V1_i + V0_i)

where d(M2v)/dt is the finite difference of the kinetic energy and
d(M2x)/dt is the strain-energy rate evaluated at the pre-step state,
(1/2n) sum_{ij} kappa1 chi(delta) n.(V0_j - V0_i).  Using a finite
difference for the strain part too would leave an O(dt) remainder; the
rate form is the exact algebraic counterpart of the scheme.

Strain energy M2x uses the contact clamp chi(delta) (= delta when
delta < 0, else 0), so it vanishes exactly off contact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contact import ContactTable, beta, build_contact_table
from .core import Ensemble, PhysParams

# fixed 16x16 sub-sampling of each floe's bounding box, in units of r;
# points outside the unit disc are dropped once for all floes
_SUB = 16
_off = (np.arange(_SUB) + 0.5) / _SUB * 2.0 - 1.0
_OX, _OY = np.meshgrid(_off, _off)
_INSIDE = (_OX ** 2 + _OY ** 2) <= 1.0
DISC_OFFSETS = np.stack([_OX[_INSIDE], _OY[_INSIDE]], axis=1)  # (n_pts, 2)
DISC_POINT_COUNT = DISC_OFFSETS.shape[0]


@dataclass(frozen=True)
class Moments:
    """Total mass, momentum, kinetic / strain / total energy of a snapshot."""

    m0: float
    m1: np.ndarray   # (2,)
    m2v: float
    m2x: float

    @property
    def m2(self) -> float:
        return self.m2v + self.m2x


def moments(e: Ensemble, p: PhysParams, table: ContactTable | None = None,
            masses: np.ndarray | None = None) -> Moments:
    """M0 = sum m, M1 = sum m V, M2v = (1/2) sum m |V|^2,
    M2x = (1/4n) sum_{ij} kappa1 chi(delta)^2 (each unordered pair twice)."""
    m = e.masses(p) if masses is None else masses
    m0 = float(m.sum())
    m1 = m @ e.v
    m2v = 0.5 * float(m @ np.einsum("ij,ij->i", e.v, e.v))
    if table is None:
        table = build_contact_table(e, p, masses=m)
    m2x = float((table.kappa1 * table.delta ** 2).sum()) / (2.0 * e.n)
    return Moments(m0=m0, m1=m1, m2v=m2v, m2x=m2x)


def strain_energy_rate(e: Ensemble, table: ContactTable) -> float:
    """d(M2x)/dt at the snapshot: -(1/n) sum_pairs kappa1 delta (v_i-v_j).n."""
    return -float((table.kappa1 * table.delta * table.vrel_n).sum()) / e.n


def drag_forces(e: Ensemble, p: PhysParams, u_ocean: np.ndarray,
                alphas: np.ndarray | None = None) -> np.ndarray:
    """Per-floe quadratic ocean drag alpha (u_o - v)|u_o - v|."""
    a = e.drag_coefficients(p) if alphas is None else alphas
    w = u_ocean - e.v
    speed = np.sqrt(np.einsum("ij,ij->i", w, w))
    return a[:, None] * w * speed[:, None]


def momentum_residual(e0: Ensemble, e1: Ensemble, dt: float, ocean,
                      p: PhysParams, u_ocean: np.ndarray | None = None,
                      masses: np.ndarray | None = None,
                      alphas: np.ndarray | None = None) -> np.ndarray:
    """|d(M1)/dt - total drag| per component; round-off for a correct step."""
    if e0.n != e1.n:
        raise ValueError("ensembles differ in floe count")
    m = e0.masses(p) if masses is None else masses
    if u_ocean is None:
        u_ocean = ocean.evaluate(e0.t, e0.x)
    dm1dt = m @ (e1.v - e0.v) / dt
    drag_total = drag_forces(e0, p, u_ocean, alphas=alphas).sum(axis=0)
    return np.abs(dm1dt - drag_total)


def energy_residual(e0: Ensemble, e1: Ensemble, dt: float, ocean,
                    p: PhysParams, u_ocean: np.ndarray | None = None,
                    table: ContactTable | None = None,
                    masses: np.ndarray | None = None,
                    alphas: np.ndarray | None = None) -> float:
    """|energy-rate identity residual| for the step e0 -> e1 (see module doc)."""
    if e0.n != e1.n:
        raise ValueError("ensembles differ in floe count")
    m = e0.masses(p) if masses is None else masses
    if u_ocean is None:
        u_ocean = ocean.evaluate(e0.t, e0.x)
    if table is None:
        table = build_contact_table(e0, p, masses=m)
    n = e0.n
    dv = e1.v - e0.v

    m2v0 = 0.5 * float(m @ np.einsum("ij,ij->i", e0.v, e0.v))
    m2v1 = 0.5 * float(m @ np.einsum("ij,ij->i", e1.v, e1.v))
    lhs = (m2v1 - m2v0) / dt + strain_energy_rate(e0, table)

    damping = float((table.kappa2 * table.vrel_n ** 2).sum()) / n
    work = float(np.einsum("ij,ij->", table.force,
                           dv[table.i] - dv[table.j])) / (2.0 * n)
    drag = drag_forces(e0, p, u_ocean, alphas=alphas)
    drag_work = 0.5 * float(np.einsum("ij,ij->", drag, e1.v + e0.v))
    rhs = damping + work + drag_work
    return abs(lhs - rhs)


def velocity_mismatch(e: Ensemble, ocean, t: float | None = None,
                      u_ocean: np.ndarray | None = None) -> float:
    """sum_j |v_j - u_o(x_j)|^2; zero iff every floe rides the ocean."""
    if u_ocean is None:
        u_ocean = ocean.evaluate(e.t if t is None else t, e.x)
    w = e.v - u_ocean
    return float(np.einsum("ij,ij->", w, w))


# ---------------------------------------------------------------------------
# grid concentration


@dataclass
class ConcentrationGrid:
    """Per-cell floe area fraction on an nx-by-ny tiling of the domain.

    values[jy, ix] covers x in [-L + ix*dx, -L + (ix+1)*dx), same for y.
    """

    nx: int
    ny: int
    half_width: float
    values: np.ndarray   # (ny, nx)

    @property
    def cell_area(self) -> float:
        return (2.0 * self.half_width / self.nx) * (2.0 * self.half_width / self.ny)

    def total_area(self) -> float:
        return float(self.values.sum()) * self.cell_area


def grid_concentration(e: Ensemble, nx: int, ny: int) -> ConcentrationGrid:
    """Deposit each disc's area onto cells via the fixed sub-sampling.

    Every interior sample point carries area pi r^2 / point_count and is
    assigned to the (periodically wrapped) cell containing it, so the total
    deposited area telescopes to sum_i pi r_i^2 regardless of how discs
    straddle cell boundaries (attribution error <= ~2% of a disc's area).
    """
    if nx < 1 or ny < 1:
        raise ValueError("need nx, ny >= 1")
    L = e.domain.half_width
    dx = 2.0 * L / nx
    dy = 2.0 * L / ny
    pts = e.x[:, None, :] + e.r[:, None, None] * DISC_OFFSETS[None, :, :]
    pts = pts.reshape(-1, 2)
    pts = np.mod(pts + L, 2.0 * L) - L
    ix = np.minimum(((pts[:, 0] + L) / dx).astype(np.int64), nx - 1)
    jy = np.minimum(((pts[:, 1] + L) / dy).astype(np.int64), ny - 1)
    w = np.repeat(np.pi * e.r ** 2 / DISC_POINT_COUNT, DISC_POINT_COUNT)
    values = np.zeros((ny, nx))
    np.add.at(values, (jy, ix), w)
    values /= dx * dy
    return ConcentrationGrid(nx=nx, ny=ny, half_width=L, values=values)


# ---------------------------------------------------------------------------
# drag-free energy decay bound


def decay_bound_constants(e: Ensemble, p: PhysParams,
                          masses: np.ndarray | None = None) -> tuple[float, float]:
    """Constants (A0, A1) of the drag-free energy lower bound.

    A0 = 2 max_{i != j} |kappa2^(ij)| / min_i m_i,
    A1 =   max_{i != j} |kappa2^(ij)| / (n M0^2).
    """
    m = e.masses(p) if masses is None else masses
    h_e = np.minimum.outer(e.h, e.h)
    m_e = np.multiply.outer(m, m) / np.add.outer(m, m)
    k2 = abs(beta(p.e_r)) * np.sqrt(5.0 * np.pi / 4.0 * p.e_e * h_e * m_e)
    np.fill_diagonal(k2, 0.0)
    k2max = float(k2.max())
    m0 = float(m.sum())
    return 2.0 * k2max / float(m.min()), k2max / (e.n * m0 * m0)


def energy_lower_bound(e0: Ensemble, p: PhysParams, t) -> np.ndarray:
    """Lower envelope M2(0) e^(-A0 t) + (A1/A0) |M1(0)|^2 (1 - e^(-A0 t))
    for the total energy of the drag-free system."""
    a0, a1 = decay_bound_constants(e0, p)
    mom = moments(e0, p)
    t = np.asarray(t, dtype=float)
    decay = np.exp(-a0 * t)
    out = mom.m2 * decay + (a1 / a0) * float(mom.m1 @ mom.m1) * (1.0 - decay)
    return float(out) if out.ndim == 0 else out
