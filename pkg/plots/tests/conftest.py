"""Fixtures: produce run directories through the simulation CLI only.

The renderer is decoupled from the simulation package by design, so tests
drive `python -m floeflow` as a subprocess (the external interface) to get
real run outputs.
"""

import subprocess
import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parents[2]
SCENARIOS = REPO_ROOT / "scenarios"

TINY_PARTICLE = """\
[run]
mode = particle
seed = 7

[floes]
n = 12
size_max = 0.2
velocity_scale = 1.0

[time]
dt = 1e-3
t_final = 0.05
record_every = 10
"""

TINY_COMPARE = """\
[run]
mode = compare
seed = 7

[floes]
n = 60
size_kappa = 0.04
size_max = 0.15
thickness = constant
velocity_init = ocean

[ocean]
kind = quadratic_channel

[time]
dt = 1e-3
t_final = 0.2
record_every = 100

[hydro]
nx = 12
ny = 12
dt = 1e-3
density_floor = 1e-3
velocity_cap = 5.0

[compare]
times = 0,0.1,0.2
"""


def run_floeflow(config_path, outdir):
    res = subprocess.run(
        [sys.executable, "-m", "floeflow", "--config", str(config_path),
         "--out", str(outdir), "--quiet"],
        capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    return Path(outdir)


@pytest.fixture(scope="session")
def tiny_particle_run(tmp_path_factory):
    base = tmp_path_factory.mktemp("tiny_particle")
    cfg = base / "scenario.ini"
    cfg.write_text(TINY_PARTICLE, encoding="utf-8")
    return run_floeflow(cfg, base / "out")


@pytest.fixture(scope="session")
def tiny_compare_run(tmp_path_factory):
    base = tmp_path_factory.mktemp("tiny_compare")
    cfg = base / "scenario.ini"
    cfg.write_text(TINY_COMPARE, encoding="utf-8")
    return run_floeflow(cfg, base / "out")
