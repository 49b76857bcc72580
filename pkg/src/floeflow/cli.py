"""Command-line entry point: run particle, hydro, or compare scenarios.

Exit codes: 0 success, 2 configuration error, 3 numerical blowup, 4 I/O
error.  Identical config + seed produces byte-identical output files.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from . import output
from .diagnostics import grid_concentration
from .errors import ConfigError, NumericalBlowupError, PackingError, SchemaError
from .hydro import HydroFields, cell_centers, run_hydro, total_mass
from .integrator import run_simulation
from .ocean import StochasticFourierOcean, save_fourier_state
from .scenario import (Scenario, build_ocean, build_particle_state,
                       compute_gamma_bar, effective_config_text, parse_scenario)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICS = 3
EXIT_IO = 4


def _say(quiet: bool, msg: str) -> None:
    if not quiet:
        print(msg, file=sys.stderr)


def _prepare_outdir(sc: Scenario, outdir: Path, gamma_bar: float | None) -> Path:
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "snapshots").mkdir(exist_ok=True)
    (outdir / "grids").mkdir(exist_ok=True)
    text = effective_config_text(sc, gamma_bar=gamma_bar)
    (outdir / "effective_config.ini").write_text(text + "\n", encoding="utf-8")
    return outdir


def run_particle(sc: Scenario, outdir: Path, quiet: bool = False,
                 snapshot_steps: set[int] | None = None) -> dict:
    """Particle run: streams diagnostics per step, snapshots on cadence.

    Returns a summary dict (also written to summary.txt); when
    snapshot_steps is given the concentration snapshots for those steps are
    collected and returned under 'concentrations'.
    """
    e0, separated = build_particle_state(sc)
    ocean = build_ocean(sc)
    if not separated:
        _say(quiet, "warning: placement fell back to overlapping positions")

    max_mom = 0.0
    max_en = 0.0
    first_mismatch = None
    last_rec = None
    concentrations = {}
    meta = f"scenario={sc.name} seed={sc.seed} n={sc.floes.n} dt={sc.step.dt!r}"
    with output.DiagnosticsWriter(outdir / "diagnostics.csv", meta=meta) as diag:
        for rec in run_simulation(e0, sc.step, ocean, sc.phys,
                                  snapshot_steps=snapshot_steps):
            diag.write(rec)
            if rec.step < sc.step.n_steps:
                max_mom = max(max_mom, float(rec.momentum_residual.max()))
                max_en = max(max_en, rec.energy_residual)
            if first_mismatch is None:
                first_mismatch = rec.velocity_mismatch
            if rec.ensemble is not None:
                output.write_particles(
                    outdir / "snapshots" / f"particles_{rec.step:08d}.csv",
                    rec.ensemble)
                if snapshot_steps is not None and rec.step in snapshot_steps:
                    concentrations[rec.step] = grid_concentration(
                        rec.ensemble, sc.hydro.nx, sc.hydro.ny)
            last_rec = rec
    if isinstance(ocean, StochasticFourierOcean):
        save_fourier_state(ocean.state, outdir / "ocean_state.csv")

    summary = {
        "mode": "particle",
        "placement_separated": separated,
        "max_momentum_residual": max_mom,
        "max_energy_residual": max_en,
        "initial_velocity_mismatch": float(first_mismatch),
        "final_velocity_mismatch": float(last_rec.velocity_mismatch),
        "final_t": float(last_rec.t),
    }
    if concentrations:
        summary["concentrations"] = concentrations
    return summary


def _initial_hydro_fields(sc: Scenario, outdir: Path):
    """Initial (rho, mom): rho from a concentration snapshot (file or the
    scenario's own ensemble), u from the ocean or zero."""
    ocean = build_ocean(sc)
    if sc.hydro.init_concentration:
        grid, _ = output.read_grid(sc.hydro.init_concentration)
        if (grid.nx, grid.ny) != (sc.hydro.nx, sc.hydro.ny):
            raise ConfigError(
                f"init_concentration grid is {grid.nx}x{grid.ny}, "
                f"scenario wants {sc.hydro.nx}x{sc.hydro.ny}")
        rho = grid.values.copy()
    else:
        e0, _ = build_particle_state(sc)
        rho = grid_concentration(e0, sc.hydro.nx, sc.hydro.ny).values
    centers = cell_centers(sc.hydro.nx, sc.hydro.ny, sc.domain)
    if sc.hydro.init_velocity == "ocean":
        u = ocean.evaluate(0.0, centers.reshape(-1, 2)).reshape(centers.shape)
    else:
        u = np.zeros_like(centers)
    return HydroFields(rho=rho, mom=rho[..., None] * u, t=0.0), ocean


def run_hydro_mode(sc: Scenario, outdir: Path, quiet: bool = False) -> dict:
    fields0, ocean = _initial_hydro_fields(sc, outdir)
    cfg = sc.hydro.config
    gamma_bar = compute_gamma_bar(sc) if cfg.drag_mode == "mean_field" else cfg.gamma_bar
    cfg = dataclasses.replace(cfg, gamma_bar=gamma_bar)
    mass0 = total_mass(fields0, sc.domain)
    drift = 0.0
    for t, snap in run_hydro(fields0, cfg, ocean, sc.domain, list(sc.hydro.times)):
        from .diagnostics import ConcentrationGrid
        grid = ConcentrationGrid(nx=snap.nx, ny=snap.ny,
                                 half_width=sc.domain.half_width, values=snap.rho)
        output.write_grid(outdir / "grids" / f"hydro_t{t:g}.csv", grid, t,
                          kind="hydro-concentration")
        drift = max(drift, abs(total_mass(snap, sc.domain) - mass0) / max(1.0, abs(mass0)))
        _say(quiet, f"hydro t={t:g} written (mass drift {drift:.3e})")
    return {"mode": "hydro", "gamma_bar": gamma_bar, "initial_mass": mass0,
            "max_relative_mass_drift": drift}


def agreement_metrics(cp: np.ndarray, ch: np.ndarray) -> tuple[float, float]:
    """Normalized L1 distance sum|cp-ch| / sum(cp) and Pearson correlation."""
    denom = float(np.abs(cp).sum())
    l1 = float(np.abs(cp - ch).sum()) / denom if denom > 0 else 0.0
    sp = float(np.std(cp))
    sh = float(np.std(ch))
    if sp == 0.0 or sh == 0.0:
        pearson = 1.0 if np.allclose(cp, ch) else 0.0
    else:
        pearson = float(np.corrcoef(cp.ravel(), ch.ravel())[0, 1])
    return l1, pearson


def run_compare(sc: Scenario, outdir: Path, quiet: bool = False) -> dict:
    """Fig-7-style protocol: particle run gridded at the compare times, a
    hydro run started from the particle t=0 field, and an agreement report."""
    times = list(sc.compare_times)
    steps = {round(t / sc.step.dt) for t in times}
    _say(quiet, f"compare: particle phase ({sc.floes.n} floes, "
                f"{sc.step.n_steps} steps)")
    summary = run_particle(sc, outdir, quiet=quiet, snapshot_steps=steps)
    conc = summary.pop("concentrations")
    particle_fields = {}
    for t in times:
        grid = conc[round(t / sc.step.dt)]
        particle_fields[t] = grid
        output.write_grid(outdir / "grids" / f"particle_t{t:g}.csv", grid, t,
                          kind="particle-concentration")

    gamma_bar = compute_gamma_bar(sc)
    hcfg = dataclasses.replace(sc.hydro.config, gamma_bar=gamma_bar)
    rho0 = particle_fields[times[0]].values
    centers = cell_centers(sc.hydro.nx, sc.hydro.ny, sc.domain)
    ocean = build_ocean(sc)
    if sc.hydro.init_velocity == "ocean":
        u0 = ocean.evaluate(0.0, centers.reshape(-1, 2)).reshape(centers.shape)
    else:
        u0 = np.zeros_like(centers)
    fields0 = HydroFields(rho=rho0.copy(), mom=rho0[..., None] * u0, t=times[0])

    _say(quiet, f"compare: hydro phase ({sc.hydro.nx}x{sc.hydro.ny}, "
                f"dt={hcfg.dt:g})")
    rows = []
    from .diagnostics import ConcentrationGrid
    for t, snap in run_hydro(fields0, hcfg, ocean, sc.domain,
                             [t - times[0] for t in times]):
        t_abs = t + times[0]
        grid = ConcentrationGrid(nx=snap.nx, ny=snap.ny,
                                 half_width=sc.domain.half_width, values=snap.rho)
        output.write_grid(outdir / "grids" / f"hydro_t{t_abs:g}.csv", grid, t_abs,
                          kind="hydro-concentration")
        l1, pearson = agreement_metrics(particle_fields[t_abs].values, snap.rho)
        rows.append((t_abs, l1, pearson))
        _say(quiet, f"compare t={t_abs:g}: L1={l1:.4f} pearson={pearson:.4f}")
    output.write_agreement(outdir / "agreement.csv", rows)

    summary.update({"mode": "compare", "gamma_bar": gamma_bar})
    for t, l1, pearson in rows:
        summary[f"l1_t{t:g}"] = l1
        summary[f"pearson_t{t:g}"] = pearson
    return summary


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="floeflow",
        description="Floe particle / continuum simulation runner")
    ap.add_argument("--config", required=True, help="scenario file (INI)")
    ap.add_argument("--mode", choices=("particle", "hydro", "compare"),
                    help="override the scenario mode")
    ap.add_argument("--seed", type=int, help="override the scenario seed")
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--quiet", action="store_true", help="suppress progress output")
    ap.add_argument("--validate-only", action="store_true",
                    help="parse and validate the config, run nothing")
    args = ap.parse_args(argv)

    try:
        sc = parse_scenario(args.config, mode=args.mode, seed=args.seed,
                            out=args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.validate_only:
        _say(args.quiet, f"config OK: {sc.name} (mode={sc.mode}, seed={sc.seed})")
        return EXIT_OK

    outdir = Path(sc.out) if sc.out else Path("runs") / sc.name
    try:
        gamma_bar = (compute_gamma_bar(sc)
                     if sc.mode in ("hydro", "compare") else None)
        _prepare_outdir(sc, outdir, gamma_bar)
        if sc.mode == "particle":
            summary = run_particle(sc, outdir, quiet=args.quiet)
        elif sc.mode == "hydro":
            summary = run_hydro_mode(sc, outdir, quiet=args.quiet)
        else:
            summary = run_compare(sc, outdir, quiet=args.quiet)
        output.write_summary(outdir / "summary.txt", summary)
    except (ConfigError, PackingError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalBlowupError as exc:
        print(f"numerical blowup: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except (OSError, SchemaError) as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    _say(args.quiet, f"done: outputs in {outdir}")
    return EXIT_OK


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
