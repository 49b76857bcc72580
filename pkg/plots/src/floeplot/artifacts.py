"""Readers for the `# floeflow-v1` run outputs.

This package deliberately re-implements the (small) file parsers instead
of importing the simulation package: the text files are the interface,
and the renderer must work on any conforming run directory.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SCHEMA = "# floeflow-v1"

DIAGNOSTIC_COLUMNS = ("t", "M0", "M1x", "M1y", "M2v", "M2x", "M2", "mom_res_x",
                      "mom_res_y", "energy_res", "velocity_mismatch", "n_contacts")


class SchemaError(Exception):
    """Run directory content does not match the versioned schema."""


def _header_kind(line: str, path) -> str:
    if not line.startswith(SCHEMA):
        raise SchemaError(f"{path}: missing '{SCHEMA}' header")
    return line[len(SCHEMA):].strip()


def _meta(line: str) -> dict:
    return dict(kv.split("=", 1) for kv in line.strip("#  \n").split())


@dataclass
class Snapshot:
    """One particle snapshot: time plus per-floe columns."""

    t: float
    r: np.ndarray
    h: np.ndarray
    x: np.ndarray   # (n, 2)
    v: np.ndarray   # (n, 2)
    half_width: float


@dataclass
class RunArtifacts:
    """Parsed contents of one completed run directory."""

    path: Path
    diagnostics: dict[str, np.ndarray]
    snapshots: list[Snapshot] = field(default_factory=list)
    particle_grids: dict[float, np.ndarray] = field(default_factory=dict)
    hydro_grids: dict[float, np.ndarray] = field(default_factory=dict)
    half_width: float = float(np.pi)


def read_diagnostics(path) -> dict[str, np.ndarray]:
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"{path}: diagnostics file missing")
    with open(path, "r", encoding="utf-8") as fh:
        kind = _header_kind(fh.readline(), path)
        if kind != "diagnostics":
            raise SchemaError(f"{path}: expected a diagnostics table, got '{kind}'")
        line = fh.readline()
        while line.startswith("#"):
            line = fh.readline()
        cols = tuple(line.strip().split(","))
        if cols != DIAGNOSTIC_COLUMNS:
            raise SchemaError(f"{path}: unexpected columns {cols}")
        rows = [ln.strip().split(",") for ln in fh if ln.strip()]
    if not rows:
        raise SchemaError(f"{path}: diagnostics table is empty")
    data = np.array(rows, dtype=float)
    table = {name: data[:, k] for k, name in enumerate(cols)}
    if np.any(np.diff(table["t"]) <= 0):
        raise SchemaError(f"{path}: time column is not strictly increasing")
    return table


def read_snapshot(path) -> Snapshot:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        kind = _header_kind(fh.readline(), path)
        if kind != "particles":
            raise SchemaError(f"{path}: expected particles, got '{kind}'")
        meta = _meta(fh.readline())
        fh.readline()   # column names
        rows = [ln.strip().split(",") for ln in fh if ln.strip()]
    if not rows:
        raise SchemaError(f"{path}: empty snapshot")
    arr = np.array([[float(v) for v in row[1:]] for row in rows])
    return Snapshot(t=float(meta["t"]), r=arr[:, 0], h=arr[:, 1],
                    x=arr[:, 2:4], v=arr[:, 4:6],
                    half_width=float(meta["half_width"]))


def read_grid(path) -> tuple[float, np.ndarray, float]:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        kind = _header_kind(fh.readline(), path)
        if not kind.endswith("concentration") and kind != "grid":
            raise SchemaError(f"{path}: expected a concentration grid, got '{kind}'")
        meta = _meta(fh.readline())
        rows = [ln.strip().split(",") for ln in fh if ln.strip()]
    values = np.array(rows, dtype=float)
    nx, ny = int(meta["nx"]), int(meta["ny"])
    if values.shape != (ny, nx):
        raise SchemaError(f"{path}: grid shape {values.shape} != ({ny}, {nx})")
    return float(meta["t"]), values, float(meta["half_width"])


_GRID_RE = re.compile(r"^(particle|hydro)_t(.+)\.csv$")


def load_run(run_dir) -> RunArtifacts:
    """Parse a run directory; missing optional parts stay empty."""
    run_dir = Path(run_dir)
    if not run_dir.is_dir():
        raise SchemaError(f"{run_dir}: not a directory")
    diag = read_diagnostics(run_dir / "diagnostics.csv")
    art = RunArtifacts(path=run_dir, diagnostics=diag)
    snap_dir = run_dir / "snapshots"
    if snap_dir.is_dir():
        for p in sorted(snap_dir.glob("particles_*.csv")):
            art.snapshots.append(read_snapshot(p))
        if art.snapshots:
            art.half_width = art.snapshots[0].half_width
    grid_dir = run_dir / "grids"
    if grid_dir.is_dir():
        for p in sorted(grid_dir.glob("*.csv")):
            m = _GRID_RE.match(p.name)
            if not m:
                continue
            t, values, hw = read_grid(p)
            target = art.particle_grids if m.group(1) == "particle" else art.hydro_grids
            target[t] = values
            art.half_width = hw
    return art


def nearest_snapshot(art: RunArtifacts, t: float) -> Snapshot:
    if not art.snapshots:
        raise SchemaError(f"{art.path}: run has no particle snapshots")
    return min(art.snapshots, key=lambda s: abs(s.t - t))
