"""Forward-Euler time stepping of the floe system.

One explicit step with all forces frozen at the pre-step state:

    X_{l+1} = wrap(X_l + dt V_l)
    V_{l+1} = V_l + (dt/m_i) [ (1/n) sum_j f_c^(ij)(t_l)
                               + alpha_i (U_l - V_l)|U_l - V_l| ]

The 1/n mean-field scaling is applied here (contact assembly returns raw
sums), with n the fixed total floe count of the run.  Radii and
thicknesses never change.  Stability is the caller's responsibility; a
practical heuristic is dt <~ 0.1 sqrt(m_min / kappa1_max).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import diagnostics
from .contact import ContactTable, assemble_contact_forces, build_contact_table
from .core import Ensemble, PhysParams
from .diagnostics import Moments
from .errors import NumericalBlowupError
from .ocean import OceanField


@dataclass(frozen=True)
class StepConfig:
    """Uniform time grid: n_steps = T/dt must be integral to 1e-12."""

    dt: float
    t_final: float
    record_every: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_final > 0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")
        n = round(self.t_final / self.dt)
        if n < 1 or abs(n * self.dt - self.t_final) > 1e-12 * max(1.0, self.t_final):
            raise ValueError(
                f"t_final={self.t_final} is not an integer multiple of dt={self.dt}")

    @property
    def n_steps(self) -> int:
        return round(self.t_final / self.dt)


def total_forces(e: Ensemble, p: PhysParams, contact_sums: np.ndarray,
                 u_ocean: np.ndarray, alphas: np.ndarray | None = None) -> np.ndarray:
    """(1/n) contact sums + quadratic ocean drag, per floe."""
    return contact_sums / e.n + diagnostics.drag_forces(e, p, u_ocean, alphas=alphas)


def total_force(i: int, e: Ensemble, p: PhysParams, contact_sums: np.ndarray,
                u_oi: np.ndarray) -> np.ndarray:
    """Force on floe i given the assembled raw contact sums and local ocean velocity."""
    a = float(e.drag_coefficients(p)[i])
    w = np.asarray(u_oi, dtype=float) - e.v[i]
    return contact_sums[i] / e.n + a * w * float(np.linalg.norm(w))


def _advance(e: Ensemble, dt: float, forces: np.ndarray, masses: np.ndarray,
             t_next: float, step_index: int | None) -> Ensemble:
    x_raw = e.x + dt * e.v
    v_new = e.v + (dt / masses)[:, None] * forces
    if not (np.all(np.isfinite(x_raw)) and np.all(np.isfinite(v_new))):
        where = "" if step_index is None else f" at step {step_index}"
        raise NumericalBlowupError(f"non-finite particle state{where}", step=step_index)
    x_new = e.domain.wrap(x_raw)
    return Ensemble(r=e.r, h=e.h, x=x_new, v=v_new, domain=e.domain, t=t_next)


def step_forward_euler(e: Ensemble, cfg: StepConfig, ocean: OceanField,
                       p: PhysParams, step_index: int | None = None,
                       method: str = "grid") -> Ensemble:
    """One explicit step of size cfg.dt; forces use the pre-step state only."""
    m = e.masses(p)
    sums, _ = assemble_contact_forces(e, p, method=method, masses=m)
    u_o = ocean.evaluate(e.t, e.x)
    forces = total_forces(e, p, sums, u_o)
    return _advance(e, cfg.dt, forces, m, e.t + cfg.dt, step_index)


@dataclass
class StepRecord:
    """Diagnostics of one step (residuals refer to the step starting at t)."""

    step: int
    t: float
    moments: Moments
    momentum_residual: np.ndarray   # (2,)
    energy_residual: float
    velocity_mismatch: float
    n_contacts: int
    ensemble: Ensemble | None       # attached on the record cadence


def run_simulation(e0: Ensemble, cfg: StepConfig, ocean: OceanField,
                   p: PhysParams, method: str = "grid",
                   snapshot_steps: set[int] | None = None) -> Iterator[StepRecord]:
    """Drive the run, yielding one record per step plus a final-state record.

    Records 0 .. n_steps-1 carry the state at t_l together with the balance
    residuals of the step t_l -> t_{l+1}; the final record carries the end
    state with zero residuals.  The stochastic ocean (when present)
    advances once per step, after its values at t_l were consumed.
    Snapshots attach on the record_every cadence, at any step listed in
    snapshot_steps, and on the final record.
    """
    masses = e0.masses(p)
    alphas = e0.drag_coefficients(p)
    t0 = e0.t
    e = e0
    for l in range(cfg.n_steps):
        table = build_contact_table(e, p, method=method, masses=masses)
        sums, _ = assemble_contact_forces(e, p, table=table)
        u_o = ocean.evaluate(e.t, e.x)
        forces = total_forces(e, p, sums, u_o, alphas=alphas)
        e_next = _advance(e, cfg.dt, forces, masses, t0 + (l + 1) * cfg.dt, l)

        mom = diagnostics.moments(e, p, table=table, masses=masses)
        mom_res = diagnostics.momentum_residual(e, e_next, cfg.dt, ocean, p,
                                                u_ocean=u_o, masses=masses,
                                                alphas=alphas)
        en_res = diagnostics.energy_residual(e, e_next, cfg.dt, ocean, p,
                                             u_ocean=u_o, table=table,
                                             masses=masses, alphas=alphas)
        mismatch = diagnostics.velocity_mismatch(e, ocean, u_ocean=u_o)
        due = l % cfg.record_every == 0 or (snapshot_steps is not None
                                            and l in snapshot_steps)
        snap = e if due else None
        yield StepRecord(step=l, t=e.t, moments=mom, momentum_residual=mom_res,
                         energy_residual=en_res, velocity_mismatch=mismatch,
                         n_contacts=table.count, ensemble=snap)
        ocean.advance(cfg.dt)
        e = e_next

    table = build_contact_table(e, p, method=method, masses=masses)
    mom = diagnostics.moments(e, p, table=table, masses=masses)
    mismatch = diagnostics.velocity_mismatch(e, ocean)
    yield StepRecord(step=cfg.n_steps, t=e.t, moments=mom,
                     momentum_residual=np.zeros(2), energy_residual=0.0,
                     velocity_mismatch=mismatch, n_contacts=table.count,
                     ensemble=e)


def run(scenario) -> Iterator[StepRecord]:
    """Run a particle scenario end to end (thin wrapper over run_simulation)."""
    from .scenario import build_ocean, build_particle_state

    e0, _ = build_particle_state(scenario)
    ocean = build_ocean(scenario)
    return run_simulation(e0, scenario.step, ocean, scenario.phys)
