"""Pairwise normal contact forces with restitution damping, plus neighbor search.

A pair (i, j) is in contact when the minimum-image center distance falls
below r_i + r_j; the overlap delta = dist - (r_i + r_j) is then negative.
The force on floe i from floe j is

    f_c^(ij) = (kappa1 * delta + kappa2 * (v_i - v_j).n) n,   delta < 0,

with n the unit vector from i toward j, kappa1 = (pi/4) E_e h_e,
kappa2 = beta * sqrt((5 pi/4) E_e h_e m_e) < 0, h_e = min(h_i, h_j), and
m_e the reduced mass.  Both the elastic and damping terms are gated by the
contact window (zero for delta >= 0), so forces have compact support and
f^(ij) = -f^(ji) exactly.

Force assembly runs over candidate pairs from a uniform cell grid with cell
size >= 2 * max(r) (rebuilt every call); an all-pairs route is kept as the
independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Domain, Ensemble, Floe, PhysParams

# pairs closer than this have no defined normal and contribute zero force
EPS_POS = 1e-12


def beta(e_r: float) -> float:
    """Damping factor ln(e_r)/sqrt(ln^2(e_r) + pi^2), strictly in (-1, 0).

    Defined for restitution 0 < e_r < 1; the perfectly plastic (0) and
    elastic (1) endpoints are rejected.
    """
    if not 0.0 < e_r < 1.0:
        raise ValueError(f"restitution coefficient must lie in (0, 1), got {e_r}")
    ln = math.log(e_r)
    return ln / math.sqrt(ln * ln + math.pi ** 2)


@dataclass(frozen=True)
class ContactStiffness:
    """Per-pair stiffness kappa1 > 0, damping kappa2 < 0, and the beta factor."""

    kappa1: float
    kappa2: float
    beta: float

    def __post_init__(self):
        if not self.kappa1 > 0:
            raise ValueError("kappa1 must be positive")
        if not self.kappa2 < 0:
            raise ValueError("kappa2 must be negative (beta < 0)")


@dataclass
class ContactPair:
    """Geometry of one pair: overlap delta and unit normal from i toward j.

    normal is None when the centers (periodically) coincide; such pairs
    carry no force.
    """

    i: int
    j: int
    delta: float
    normal: np.ndarray | None


def overlap(xi, xj, ri: float, rj: float, d: Domain) -> tuple[float, np.ndarray | None]:
    """Overlap delta = |min_image(xj - xi)| - (ri + rj) and the unit normal."""
    disp = d.min_image(xi, xj)
    dist = float(np.linalg.norm(disp))
    delta = dist - (ri + rj)
    if dist < EPS_POS:
        return delta, None
    return delta, disp / dist


def contact_stiffness(hi: float, hj: float, mi: float, mj: float,
                      p: PhysParams) -> ContactStiffness:
    """kappa1 = (pi/4) E_e h_e and kappa2 = beta sqrt((5 pi/4) E_e h_e m_e)."""
    if min(hi, hj) <= 0 or min(mi, mj) <= 0:
        raise ValueError("thicknesses and masses must be positive")
    h_e = min(hi, hj)
    m_e = mi * mj / (mi + mj)
    b = beta(p.e_r)
    kappa1 = math.pi / 4.0 * p.e_e * h_e
    kappa2 = b * math.sqrt(5.0 * math.pi / 4.0 * p.e_e * h_e * m_e)
    return ContactStiffness(kappa1=kappa1, kappa2=kappa2, beta=b)


def contact_force(fi: Floe, fj: Floe, s: ContactStiffness,
                  pair: ContactPair) -> np.ndarray:
    """Force on floe i from floe j; zero unless delta < 0 with a defined normal."""
    if pair.delta >= 0.0 or pair.normal is None:
        return np.zeros(2)
    vrel_n = float(np.dot(fi.v - fj.v, pair.normal))
    return (s.kappa1 * pair.delta + s.kappa2 * vrel_n) * pair.normal


# ---------------------------------------------------------------------------
# vectorized assembly over an ensemble


@dataclass
class ContactTable:
    """All contacting pairs of a snapshot (delta < 0, normals defined).

    i < j is not guaranteed; orientation is (force on i) = +force row.
    """

    i: np.ndarray        # (m,) int
    j: np.ndarray        # (m,) int
    delta: np.ndarray    # (m,) negative
    normal: np.ndarray   # (m, 2) unit, from i toward j
    kappa1: np.ndarray   # (m,)
    kappa2: np.ndarray   # (m,)
    vrel_n: np.ndarray   # (m,) (v_i - v_j) . n
    force: np.ndarray    # (m, 2) f_c^(ij)

    @property
    def count(self) -> int:
        return self.i.shape[0]


def candidate_pairs_all(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Every unordered pair, lexicographic: the brute-force oracle route."""
    return np.triu_indices(n, k=1)


# half stencil: together with (0,0) it visits every unordered pair of
# adjacent cells exactly once (valid when the grid is >= 3 cells per axis)
_HALF_STENCIL = ((1, 0), (-1, 1), (0, 1), (1, 1))


def candidate_pairs_grid(e: Ensemble) -> tuple[np.ndarray, np.ndarray]:
    """Candidate pairs from a uniform cell grid with cell size >= 2*max(r).

    Falls back to all pairs when the domain holds fewer than 3 cells per
    axis (cell-offset aliasing would otherwise duplicate or miss pairs).
    """
    n = e.n
    L = e.domain.half_width
    width = 2.0 * L
    rmax = float(e.r.max())
    ncell = int(width // (2.0 * rmax)) if rmax > 0 else 0
    if ncell < 3:
        return candidate_pairs_all(n)
    cell = width / ncell

    cx = np.minimum(((e.x[:, 0] + L) / cell).astype(np.int64), ncell - 1)
    cy = np.minimum(((e.x[:, 1] + L) / cell).astype(np.int64), ncell - 1)
    cid = cy * ncell + cx
    order = np.argsort(cid, kind="stable")
    spos = np.empty(n, dtype=np.int64)
    spos[order] = np.arange(n)
    counts = np.bincount(cid, minlength=ncell * ncell)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))

    out_i, out_j = [], []

    def gather(target_cid, same_cell):
        cnt = counts[target_cid]
        tot = int(cnt.sum())
        if tot == 0:
            return
        rep_i = np.repeat(np.arange(n), cnt)
        base = np.repeat(starts[target_cid], cnt)
        head = np.concatenate(([0], np.cumsum(cnt)[:-1]))
        offs = np.arange(tot) - np.repeat(head, cnt)
        rep_j = order[base + offs]
        if same_cell:
            keep = spos[rep_j] > spos[rep_i]
            rep_i, rep_j = rep_i[keep], rep_j[keep]
        out_i.append(rep_i)
        out_j.append(rep_j)

    gather(cid, same_cell=True)
    for dx, dy in _HALF_STENCIL:
        tx = (cx + dx) % ncell
        ty = (cy + dy) % ncell
        gather(ty * ncell + tx, same_cell=False)

    if not out_i:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    return np.concatenate(out_i), np.concatenate(out_j)


def build_contact_table(e: Ensemble, p: PhysParams, method: str = "grid",
                        masses: np.ndarray | None = None) -> ContactTable:
    """Geometry, stiffness, and force for every contacting pair of e."""
    if method == "grid":
        ii, jj = candidate_pairs_grid(e)
    elif method == "all_pairs":
        ii, jj = candidate_pairs_all(e.n)
    else:
        raise ValueError(f"unknown neighbor method '{method}'")

    L = e.domain.half_width
    disp = np.mod(e.x[jj] - e.x[ii] + L, 2.0 * L) - L
    dist2 = np.einsum("ij,ij->i", disp, disp)
    rsum = e.r[ii] + e.r[jj]
    keep = (dist2 < rsum * rsum) & (dist2 >= EPS_POS * EPS_POS)
    ii, jj, disp = ii[keep], jj[keep], disp[keep]
    dist = np.sqrt(dist2[keep])
    delta = dist - rsum[keep]
    normal = disp / dist[:, None]

    m = e.masses(p) if masses is None else masses
    h_e = np.minimum(e.h[ii], e.h[jj])
    m_e = m[ii] * m[jj] / (m[ii] + m[jj])
    b = beta(p.e_r)
    kappa1 = math.pi / 4.0 * p.e_e * h_e
    kappa2 = b * np.sqrt(5.0 * math.pi / 4.0 * p.e_e * h_e * m_e)
    vrel_n = np.einsum("ij,ij->i", e.v[ii] - e.v[jj], normal)
    force = (kappa1 * delta + kappa2 * vrel_n)[:, None] * normal
    return ContactTable(i=ii, j=jj, delta=delta, normal=normal, kappa1=kappa1,
                        kappa2=kappa2, vrel_n=vrel_n, force=force)


def assemble_contact_forces(e: Ensemble, p: PhysParams, method: str = "grid",
                            table: ContactTable | None = None,
                            masses: np.ndarray | None = None,
                            ) -> tuple[np.ndarray, ContactTable]:
    """Per-floe raw contact sums sum_j f_c^(ij) (no 1/n scaling) and the table."""
    if table is None:
        table = build_contact_table(e, p, method=method, masses=masses)
    sums = np.zeros((e.n, 2))
    if table.count:
        np.add.at(sums, table.i, table.force)
        np.add.at(sums, table.j, -table.force)
    return sums, table
