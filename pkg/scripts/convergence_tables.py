#!/usr/bin/env python3
"""Print the three convergence studies as small tables.

1. forward Euler on a contact-free 10-floe drag run (first order),
2. AB2 on scalar decay (second order),
3. central differences on exact constant-velocity advection (second order
   in space).
"""

import math

import numpy as np

from floeflow.core import Domain, Ensemble, PhysParams
from floeflow.hydro import HydroConfig, HydroFields, cell_centers, step_ab2
from floeflow.integrator import StepConfig, step_forward_euler
from floeflow.ocean import ConstantOcean, VortexOcean


def euler_table():
    p = PhysParams()
    g = np.random.Generator(np.random.PCG64(11))
    pos = np.array([[-2.5 + 1.5 * i, -2.5 + 1.5 * j]
                    for i in range(4) for j in range(4)][:10], dtype=float)
    e0 = Ensemble(r=np.full(10, 0.1), h=np.ones(10), x=pos,
                  v=g.uniform(-0.3, 0.3, (10, 2)))
    ocean = VortexOcean()

    def final(dt):
        e = e0
        cfg = StepConfig(dt=dt, t_final=dt)
        for k in range(round(2.0 / dt)):
            e = step_forward_euler(e, cfg, ocean, p, step_index=k)
        return e

    dts = [2e-3, 1e-3, 5e-4, 2.5e-4]
    states = [final(dt) for dt in dts]
    print("forward Euler self-convergence (10 floes, vortex current, T=2)")
    prev = None
    for k in range(len(dts) - 1):
        a, b = states[k], states[k + 1]
        dx = a.domain.wrap(a.x - b.x)
        err = math.sqrt(float((dx ** 2).sum() + ((a.v - b.v) ** 2).sum()))
        ratio = "" if prev is None else f"  ratio {prev / err:.3f}"
        print(f"  dt {dts[k]:.1e} vs {dts[k + 1]:.1e}: diff {err:.3e}{ratio}")
        prev = err


def ab2_table():
    def integrate(dt, T=1.0):
        y, prev = 1.0, None
        for _ in range(round(T / dt)):
            f = -y
            y = y + dt * f if prev is None else y + dt * (1.5 * f - 0.5 * prev)
            prev = f
        return y

    print("AB2 on y' = -y (global error at T=1)")
    exact = math.exp(-1.0)
    prev = None
    for dt in (0.04, 0.02, 0.01, 0.005):
        err = abs(integrate(dt) - exact)
        ratio = "" if prev is None else f"  ratio {prev / err:.3f}"
        print(f"  dt {dt:.3f}: error {err:.3e}{ratio}")
        prev = err


def spatial_table():
    dom = Domain(math.pi)
    u0 = np.array([0.5, 0.25])
    ocean = ConstantOcean(u0)
    T = 0.5

    def solve(n):
        cfg = HydroConfig(dt=1e-4, gamma_bar=1.0)
        centers = cell_centers(n, n, dom)
        rho = 1.0 + 0.3 * np.sin(centers[..., 0]) * np.cos(centers[..., 1])
        fields = HydroFields(rho=rho, mom=rho[..., None] * u0, t=0.0)
        prev = None
        for k in range(round(T / cfg.dt)):
            fields, prev = step_ab2(fields, prev, cfg, ocean, dom, step_index=k)
        shifted = centers - u0 * T
        exact = 1.0 + 0.3 * np.sin(shifted[..., 0]) * np.cos(shifted[..., 1])
        return math.sqrt(float(np.mean((fields.rho - exact) ** 2)))

    print("central differences on exact advection (L2 error at T=0.5)")
    prev = None
    for n in (25, 50, 100):
        err = solve(n)
        ratio = "" if prev is None else f"  ratio {prev / err:.3f}"
        print(f"  grid {n}x{n}: error {err:.3e}{ratio}")
        prev = err


if __name__ == "__main__":
    euler_table()
    ab2_table()
    spatial_table()
