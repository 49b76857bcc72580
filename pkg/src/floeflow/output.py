"""Versioned plain-text outputs: diagnostics table, snapshots, grids.

Every file starts with the schema line `# floeflow-v1 <kind>`.  Floats are
written with repr() (shortest round-trip), so re-reading a file reproduces
the state bit-exactly and byte-identical inputs give byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .core import Domain, Ensemble
from .diagnostics import ConcentrationGrid
from .errors import SchemaError
from .integrator import StepRecord

SCHEMA = "# floeflow-v1"

DIAGNOSTICS_COLUMNS = ("t", "M0", "M1x", "M1y", "M2v", "M2x", "M2",
                       "mom_res_x", "mom_res_y", "energy_res",
                       "velocity_mismatch", "n_contacts")


def _check_header(line: str, kind: str, path) -> None:
    expected = f"{SCHEMA} {kind}"
    if line.strip() != expected:
        raise SchemaError(f"{path}: expected header '{expected}', got '{line.strip()}'")


class DiagnosticsWriter:
    """Streaming per-step diagnostics table; flushes every row so a run can
    be tailed while in progress."""

    def __init__(self, path, meta: str = ""):
        self.path = Path(path)
        self._fh = open(self.path, "w", encoding="utf-8")
        self._fh.write(f"{SCHEMA} diagnostics\n")
        if meta:
            self._fh.write(f"# {meta}\n")
        self._fh.write(",".join(DIAGNOSTICS_COLUMNS) + "\n")
        self._fh.flush()

    def write(self, rec: StepRecord) -> None:
        m = rec.moments
        row = (rec.t, m.m0, m.m1[0], m.m1[1], m.m2v, m.m2x, m.m2,
               rec.momentum_residual[0], rec.momentum_residual[1],
               rec.energy_residual, rec.velocity_mismatch)
        self._fh.write(",".join(repr(float(v)) for v in row)
                       + f",{rec.n_contacts}\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_diagnostics(path) -> dict[str, np.ndarray]:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        _check_header(fh.readline(), "diagnostics", path)
        line = fh.readline()
        while line.startswith("#"):
            line = fh.readline()
        cols = line.strip().split(",")
        if tuple(cols) != DIAGNOSTICS_COLUMNS:
            raise SchemaError(f"{path}: unexpected diagnostics columns {cols}")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    data = np.array(rows, dtype=float)
    if data.size == 0:
        raise SchemaError(f"{path}: diagnostics table is empty")
    out = {name: data[:, k] for k, name in enumerate(cols)}
    t = out["t"]
    if np.any(np.diff(t) <= 0):
        raise SchemaError(f"{path}: time column is not strictly increasing")
    return out


def write_particles(path, e: Ensemble) -> None:
    """One row per floe: id, r, h, x, y, u, v (velocity components)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{SCHEMA} particles\n")
        fh.write(f"# t={e.t!r} n={e.n} half_width={e.domain.half_width!r}\n")
        fh.write("id,r,h,x,y,u,v\n")
        for i in range(e.n):
            vals = (e.r[i], e.h[i], e.x[i, 0], e.x[i, 1], e.v[i, 0], e.v[i, 1])
            fh.write(f"{i}," + ",".join(repr(float(v)) for v in vals) + "\n")


def read_particles(path) -> Ensemble:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        _check_header(fh.readline(), "particles", path)
        meta = dict(kv.split("=") for kv in fh.readline().strip("#  \n").split())
        fh.readline()  # column header
        rows = [line.strip().split(",") for line in fh if line.strip()]
    arr = np.array([[float(v) for v in row[1:]] for row in rows])
    domain = Domain(half_width=float(meta["half_width"]))
    return Ensemble(r=arr[:, 0], h=arr[:, 1], x=arr[:, 2:4], v=arr[:, 4:6],
                    domain=domain, t=float(meta["t"]))


def write_grid(path, grid: ConcentrationGrid, t: float, kind: str = "grid") -> None:
    """Row-major cell values; row j is the y index, columns are x."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{SCHEMA} {kind}\n")
        fh.write(f"# t={float(t)!r} nx={grid.nx} ny={grid.ny} "
                 f"half_width={float(grid.half_width)!r}\n")
        for j in range(grid.ny):
            fh.write(",".join(repr(float(v)) for v in grid.values[j]) + "\n")


def read_grid(path, kind: str = "grid") -> tuple[ConcentrationGrid, float]:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        _check_header(fh.readline(), kind, path)
        meta = dict(kv.split("=") for kv in fh.readline().strip("#  \n").split())
        rows = [line.strip().split(",") for line in fh if line.strip()]
    values = np.array(rows, dtype=float)
    nx, ny = int(meta["nx"]), int(meta["ny"])
    if values.shape != (ny, nx):
        raise SchemaError(f"{path}: grid shape {values.shape} != ({ny}, {nx})")
    grid = ConcentrationGrid(nx=nx, ny=ny, half_width=float(meta["half_width"]),
                             values=values)
    return grid, float(meta["t"])


def write_agreement(path, rows: list[tuple[float, float, float]]) -> None:
    """Per-time agreement between particle and hydro concentration fields."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{SCHEMA} agreement\n")
        fh.write("t,l1_distance,pearson_r\n")
        for t, l1, r in rows:
            fh.write(f"{float(t)!r},{float(l1)!r},{float(r)!r}\n")


def read_agreement(path) -> list[tuple[float, float, float]]:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        _check_header(fh.readline(), "agreement", path)
        fh.readline()
        rows = [line.strip().split(",") for line in fh if line.strip()]
    return [(float(a), float(b), float(c)) for a, b, c in rows]


def write_summary(path, entries: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{SCHEMA} summary\n")
        for k, v in entries.items():
            fh.write(f"{k} = {float(v)!r}\n" if isinstance(v, float)
                     else f"{k} = {v}\n")
