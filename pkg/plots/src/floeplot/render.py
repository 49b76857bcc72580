"""Figure builders for particle runs and concentration comparisons.

Each figure gets a sidecar text file `<out>.caption.txt` recording the data
extrema that set the color scales and the plotted residual maxima, so a
rendered image can be audited against the run's tables without reopening
the figure.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .artifacts import RunArtifacts, SchemaError, nearest_snapshot

PARTICLE_SNAPSHOT_TIMES = (0.0, 2.0, 10.0)
CONCENTRATION_TIMES = (0.0, 5.0, 10.0)

# pinned image metadata so re-rendering the same run is byte-identical
_PINNED_METADATA = {".png": {"Software": "floeplot"}}


def _write_sidecar(out_path: Path, entries: dict) -> None:
    side = out_path.with_suffix(out_path.suffix + ".caption.txt")
    with open(side, "w", encoding="utf-8") as fh:
        fh.write("# floeflow-v1 figure-caption\n")
        for k, v in entries.items():
            fh.write(f"{k} = {float(v)!r}\n" if isinstance(v, float)
                     else f"{k} = {v}\n")


def _scatter(ax, snap, vmin, vmax):
    L = snap.half_width
    # marker area proportional to disc area, loosely scaled to the axes
    size = 2.2e4 * (snap.r / (2 * L)) ** 2 * 100
    sc = ax.scatter(snap.x[:, 0], snap.x[:, 1], c=snap.h, s=np.maximum(size, 1.0),
                    cmap="viridis", vmin=vmin, vmax=vmax, lw=0)
    ax.set_xlim(-L, L)
    ax.set_ylim(-L, L)
    ax.set_aspect("equal")
    return sc


def render_particle_figure(art: RunArtifacts, out, times=PARTICLE_SNAPSHOT_TIMES) -> Path:
    """Six panels: three thickness-colored position snapshots, then momentum,
    energy, and velocity-mismatch histories with their balance residuals."""
    d = art.diagnostics
    if not art.snapshots:
        raise SchemaError(f"{art.path}: particle figure needs snapshots")
    out = Path(out)
    snaps = [nearest_snapshot(art, t) for t in times]
    hmin = min(float(s.h.min()) for s in snaps)
    hmax = max(float(s.h.max()) for s in snaps)

    fig, axes = plt.subplots(2, 3, figsize=(15, 9))
    for ax, snap in zip(axes[0], snaps):
        sc = _scatter(ax, snap, hmin, hmax)
        ax.set_title(f"floes at t = {snap.t:g}")
    fig.colorbar(sc, ax=axes[0].tolist(), label="thickness", shrink=0.85)

    t = d["t"]
    mom_res = np.maximum(d["mom_res_x"], d["mom_res_y"])
    ax = axes[1, 0]
    ax.plot(t, d["M1x"], label="momentum x")
    ax.plot(t, d["M1y"], label="momentum y")
    ax.set_xlabel("t")
    ax.legend(loc="upper left", fontsize=8)
    twin = ax.twinx()
    twin.semilogy(t[:-1], np.maximum(mom_res[:-1], 1e-300), "r-", lw=0.6,
                  label="balance residual")
    twin.legend(loc="lower right", fontsize=8)
    ax.set_title("total momentum and residual")

    ax = axes[1, 1]
    ax.plot(t, d["M2"], label="total")
    ax.plot(t, d["M2v"], "--", label="kinetic")
    ax.plot(t, d["M2x"], ":", label="strain")
    ax.set_xlabel("t")
    ax.legend(loc="upper right", fontsize=8)
    twin = ax.twinx()
    twin.semilogy(t[:-1], np.maximum(d["energy_res"][:-1], 1e-300), "r-", lw=0.6)
    ax.set_title("total energy and residual")

    ax = axes[1, 2]
    ax.semilogy(t, np.maximum(d["velocity_mismatch"], 1e-300))
    ax.set_xlabel("t")
    ax.set_title("velocity mismatch vs ocean")

    fig.savefig(out, dpi=130, metadata=_PINNED_METADATA.get(out.suffix, None))
    plt.close(fig)
    _write_sidecar(out, {
        "figure": "particle",
        "snapshot_times": ",".join(f"{s.t:g}" for s in snaps),
        "thickness_min": hmin,
        "thickness_max": hmax,
        "momentum_residual_max": float(mom_res[:-1].max()),
        "energy_residual_max": float(d["energy_res"][:-1].max()),
        "velocity_mismatch_final": float(d["velocity_mismatch"][-1]),
    })
    return out


def render_concentration_figure(art: RunArtifacts, out,
                                times=CONCENTRATION_TIMES) -> Path:
    """3x3 panel grid: floe scatter, particle concentration, and continuum
    concentration at each requested time, on one shared color scale."""
    out = Path(out)
    for t in times:
        if t not in art.particle_grids or t not in art.hydro_grids:
            raise SchemaError(f"{art.path}: missing concentration grids at t={t:g}")
    shapes = {art.particle_grids[t].shape for t in times} | \
             {art.hydro_grids[t].shape for t in times}
    if len(shapes) != 1:
        raise SchemaError(f"{art.path}: mismatched grid shapes {shapes}")
    if not art.snapshots:
        raise SchemaError(f"{art.path}: concentration figure needs snapshots")

    vmax = max(max(float(art.particle_grids[t].max()),
                   float(art.hydro_grids[t].max())) for t in times)
    L = art.half_width
    extent = (-L, L, -L, L)
    snaps = [nearest_snapshot(art, t) for t in times]
    hmin = min(float(s.h.min()) for s in snaps)
    hmax = max(float(s.h.max()) for s in snaps) + 1e-12

    fig, axes = plt.subplots(3, 3, figsize=(13.5, 12.5))
    for col, (t, snap) in enumerate(zip(times, snaps)):
        ax = axes[0, col]
        _scatter(ax, snap, hmin, hmax)
        ax.set_title(f"floes, t = {t:g}")
        im = axes[1, col].imshow(art.particle_grids[t], origin="lower",
                                 extent=extent, cmap="viridis", vmin=0.0,
                                 vmax=vmax)
        axes[1, col].set_title(f"particle concentration, t = {t:g}")
        axes[2, col].imshow(art.hydro_grids[t], origin="lower", extent=extent,
                            cmap="viridis", vmin=0.0, vmax=vmax)
        axes[2, col].set_title(f"continuum concentration, t = {t:g}")
    fig.colorbar(im, ax=axes[1:].ravel().tolist(), label="area fraction",
                 shrink=0.8)
    fig.savefig(out, dpi=130, metadata=_PINNED_METADATA.get(out.suffix, None))
    plt.close(fig)
    _write_sidecar(out, {
        "figure": "concentration",
        "times": ",".join(f"{t:g}" for t in times),
        "colorbar_min": 0.0,
        "colorbar_max": float(vmax),
        "particle_total_area_t0": float(art.particle_grids[times[0]].sum()),
    })
    return out
