"""Scenario configuration: strict INI parsing, validation, state builders.

A scenario file is plain key-value text with sections; unknown sections or
keys are fatal (silent typos corrupt physics runs), every invariant
violation names the offending field, and a seed is mandatory so every run
is reproducible bit-for-bit.  All derived random state flows from one seed
through a fixed spawn order: sizes, thicknesses, placement, velocities,
ocean, drag-rate Monte Carlo.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import Domain, Ensemble, PhysParams
from .distributions import GammaParams, PowerLawParams, place_floes, sample_gamma, sample_power_law
from .errors import ConfigError
from .hydro import HydroConfig, mean_drag_rate
from .integrator import StepConfig
from .ocean import (ConstantOcean, OceanField, QuadraticChannelOcean,
                    StochasticFourierOcean, VortexOcean, default_fourier_state)

MODES = ("particle", "hydro", "compare")
VELOCITY_INITS = ("uniform", "ocean", "zero", "drift")
OCEAN_KINDS = ("constant", "vortex", "quadratic_channel", "stochastic")
THICKNESS_KINDS = ("gamma", "constant")

# every legal section/key; anything else is a fatal typo
_SCHEMA = {
    "run": {"mode", "seed", "out", "name"},
    "domain": {"half_width"},
    "physics": {"rho_ice", "rho_o", "c_vo", "c_ho", "e_e", "e_r", "draft_factor"},
    "floes": {"n", "size_a", "size_kappa", "size_max", "thickness", "thickness_k",
              "thickness_theta", "thickness_value", "max_attempts",
              "velocity_init", "velocity_scale", "drift_x", "drift_y"},
    "ocean": {"kind", "u_x", "u_y", "modes", "damping_base", "damping_k2",
              "forcing_base"},
    "time": {"dt", "t_final", "record_every"},
    "hydro": {"nx", "ny", "dt", "drag_mode", "alpha_bar", "density_floor",
              "velocity_cap", "diffusion", "hyperdiffusion", "init_velocity",
              "times", "init_concentration"},
    "compare": {"times"},
}


@dataclass
class OceanSpec:
    kind: str = "constant"
    u: tuple[float, float] = (0.5, 0.0)
    modes: int = 80
    damping_base: float = 0.5
    damping_k2: float = 0.1
    forcing_base: float = 0.1

    def __post_init__(self):
        if self.kind not in OCEAN_KINDS:
            raise ValueError(f"ocean kind must be one of {OCEAN_KINDS}, got '{self.kind}'")
        if self.modes < 1:
            raise ValueError("ocean modes must be >= 1")
        if self.damping_base <= 0 or self.damping_k2 < 0:
            raise ValueError("ocean damping must be positive")


@dataclass
class FloesSpec:
    n: int = 100
    size: PowerLawParams = field(default_factory=PowerLawParams)
    size_max: float | None = None
    thickness_kind: str = "gamma"
    thickness: GammaParams = field(default_factory=GammaParams)
    thickness_value: float = 1.0
    max_attempts: int = 200
    velocity_init: str = "uniform"
    velocity_scale: float = 2.0
    drift: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.size_max is not None and self.size_max <= self.size.kappa:
            raise ValueError("size_max must exceed size_kappa")
        if self.thickness_kind not in THICKNESS_KINDS:
            raise ValueError(f"thickness must be one of {THICKNESS_KINDS}")
        if self.thickness_kind == "constant" and self.thickness_value <= 0:
            raise ValueError("thickness_value must be positive")
        if self.velocity_init not in VELOCITY_INITS:
            raise ValueError(f"velocity_init must be one of {VELOCITY_INITS}")
        if self.velocity_scale < 0:
            raise ValueError("velocity_scale must be >= 0")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")


@dataclass
class HydroSpec:
    nx: int = 25
    ny: int = 25
    config: HydroConfig = field(default_factory=HydroConfig)
    init_velocity: str = "ocean"      # ocean | zero
    times: tuple[float, ...] = (0.0, 5.0, 10.0)
    init_concentration: str | None = None

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("hydro grid must have nx, ny >= 1")
        if self.init_velocity not in ("ocean", "zero"):
            raise ValueError("hydro init_velocity must be 'ocean' or 'zero'")


@dataclass
class Scenario:
    """Fully validated description of one run."""

    mode: str
    seed: int
    name: str = "scenario"
    out: str | None = None
    domain: Domain = field(default_factory=Domain)
    phys: PhysParams = field(default_factory=PhysParams)
    floes: FloesSpec = field(default_factory=FloesSpec)
    ocean: OceanSpec = field(default_factory=OceanSpec)
    step: StepConfig = field(default_factory=lambda: StepConfig(dt=1e-3, t_final=20.0,
                                                                record_every=1000))
    hydro: HydroSpec = field(default_factory=HydroSpec)
    compare_times: tuple[float, ...] = (0.0, 5.0, 10.0)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got '{self.mode}'")
        for t in self.compare_times:
            if t < 0:
                raise ValueError("compare times must be >= 0")

    # fixed spawn order is part of the determinism contract
    _STREAMS = ("sizes", "thickness", "placement", "velocity", "ocean", "gamma_mc")

    def rng(self, purpose: str) -> np.random.Generator:
        children = np.random.SeedSequence(self.seed).spawn(len(self._STREAMS))
        return np.random.Generator(np.random.PCG64(
            children[self._STREAMS.index(purpose)]))


def build_particle_state(sc: Scenario) -> tuple[Ensemble, bool]:
    """Sample sizes/thicknesses, place discs, initialize velocities."""
    f = sc.floes
    radii = sample_power_law(f.size, sc.rng("sizes"), size=f.n, r_max=f.size_max)
    if f.thickness_kind == "gamma":
        heights = sample_gamma(f.thickness, sc.rng("thickness"), size=f.n)
    else:
        heights = np.full(f.n, f.thickness_value)
    positions, separated = place_floes(f.n, radii, sc.domain, sc.rng("placement"),
                                       max_attempts=f.max_attempts)
    if f.velocity_init == "zero":
        vel = np.zeros((f.n, 2))
    elif f.velocity_init == "uniform":
        vel = sc.rng("velocity").uniform(-f.velocity_scale, f.velocity_scale,
                                         size=(f.n, 2))
    elif f.velocity_init == "drift":
        vel = np.asarray(f.drift, dtype=float) + sc.rng("velocity").uniform(
            -f.velocity_scale, f.velocity_scale, size=(f.n, 2))
    else:  # ride the ocean at t = 0
        vel = build_ocean(sc).evaluate(0.0, positions)
    e = Ensemble(r=radii, h=heights, x=positions, v=vel, domain=sc.domain, t=0.0)
    return e, separated


def build_ocean(sc: Scenario) -> OceanField:
    o = sc.ocean
    if o.kind == "constant":
        return ConstantOcean(o.u)
    if o.kind == "vortex":
        return VortexOcean()
    if o.kind == "quadratic_channel":
        return QuadraticChannelOcean()
    rng = sc.rng("ocean")
    state = default_fourier_state(n_modes=o.modes, damping_base=o.damping_base,
                                  damping_k2=o.damping_k2, forcing_base=o.forcing_base,
                                  rng=rng, stationary_init=True)
    return StochasticFourierOcean(state, rng)


def compute_gamma_bar(sc: Scenario, n_samples: int = 100_000) -> float:
    """Mean drag rate E[alpha/m] under the scenario's floe laws (seeded MC)."""
    f = sc.floes
    thickness = f.thickness if f.thickness_kind == "gamma" else f.thickness_value
    return mean_drag_rate(f.size, thickness, sc.phys, sc.rng("gamma_mc"),
                          n_samples=n_samples, r_max=f.size_max)


# ---------------------------------------------------------------------------
# parsing


def _get(parser, section, key, cast, default, errors: list[str]):
    if not parser.has_option(section, key):
        return default
    raw = parser.get(section, key).strip()
    try:
        if cast is bool:
            return raw.lower() in ("1", "true", "yes", "on")
        return cast(raw)
    except ValueError:
        errors.append(f"[{section}] {key}: cannot parse '{raw}'")
        return default


def _times(raw: str) -> tuple[float, ...]:
    vals = tuple(float(v) for v in raw.split(",") if v.strip())
    if not vals:
        raise ValueError("empty time list")
    return tuple(sorted(vals))


def parse_scenario(path, mode: str | None = None, seed: int | None = None,
                   out: str | None = None) -> Scenario:
    """Parse and validate a scenario file; optional CLI overrides.

    Raises ConfigError on missing file, syntax errors (with line numbers),
    unknown sections/keys, or any invariant violation (naming the field).
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"{path}: unknown section [{section}]")
        for key in parser.options(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"{path}: unknown key '{key}' in [{section}]")

    errs: list[str] = []
    g = lambda s, k, cast, d: _get(parser, s, k, cast, d, errs)

    mode_val = mode or g("run", "mode", str, "particle")
    seed_val = seed if seed is not None else g("run", "seed", int, None)
    if seed_val is None:
        raise ConfigError(f"{path}: [run] seed is mandatory (no entropy default)")
    name = g("run", "name", str, path.stem)
    out_val = out or g("run", "out", str, None)

    try:
        domain = Domain(half_width=g("domain", "half_width", float, math.pi))
    except ValueError as exc:
        raise ConfigError(f"{path}: [domain] {exc}") from exc

    try:
        phys = PhysParams(
            rho_ice=g("physics", "rho_ice", float, 0.9),
            rho_o=g("physics", "rho_o", float, 1.0),
            c_vo=g("physics", "c_vo", float, 0.1),
            c_ho=g("physics", "c_ho", float, 0.05),
            e_e=g("physics", "e_e", float, 100.0),
            e_r=g("physics", "e_r", float, 0.15),
            draft_factor=g("physics", "draft_factor", float, 0.9),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: [physics] {exc}") from exc

    try:
        size_max = g("floes", "size_max", float, 0.0)
        floes = FloesSpec(
            n=g("floes", "n", int, 100),
            size=PowerLawParams(a=g("floes", "size_a", float, 2.0),
                                kappa=g("floes", "size_kappa", float, 0.05)),
            size_max=None if size_max <= 0 else size_max,
            thickness_kind=g("floes", "thickness", str, "gamma"),
            thickness=GammaParams(k=g("floes", "thickness_k", float, 2.0),
                                  theta=g("floes", "thickness_theta", float, 0.5)),
            thickness_value=g("floes", "thickness_value", float, 1.0),
            max_attempts=g("floes", "max_attempts", int, 200),
            velocity_init=g("floes", "velocity_init", str, "uniform"),
            velocity_scale=g("floes", "velocity_scale", float, 2.0),
            drift=(g("floes", "drift_x", float, 0.0),
                   g("floes", "drift_y", float, 0.0)),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: [floes] {exc}") from exc

    try:
        ocean = OceanSpec(
            kind=g("ocean", "kind", str, "constant"),
            u=(g("ocean", "u_x", float, 0.5), g("ocean", "u_y", float, 0.0)),
            modes=g("ocean", "modes", int, 80),
            damping_base=g("ocean", "damping_base", float, 0.5),
            damping_k2=g("ocean", "damping_k2", float, 0.1),
            forcing_base=g("ocean", "forcing_base", float, 0.1),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: [ocean] {exc}") from exc

    try:
        step = StepConfig(dt=g("time", "dt", float, 1e-3),
                          t_final=g("time", "t_final", float, 20.0),
                          record_every=g("time", "record_every", int, 1000))
    except ValueError as exc:
        raise ConfigError(f"{path}: [time] {exc}") from exc

    try:
        alpha_bar = g("hydro", "alpha_bar", float, 0.0)
        velocity_cap = g("hydro", "velocity_cap", float, 0.0)
        hydro = HydroSpec(
            nx=g("hydro", "nx", int, 25),
            ny=g("hydro", "ny", int, 25),
            config=HydroConfig(
                dt=g("hydro", "dt", float, 2e-4),
                drag_mode=g("hydro", "drag_mode", str, "mean_field"),
                alpha_bar=None if alpha_bar <= 0 else alpha_bar,
                density_floor=g("hydro", "density_floor", float, 1e-12),
                velocity_cap=None if velocity_cap <= 0 else velocity_cap,
                diffusion=g("hydro", "diffusion", float, 0.0),
                hyperdiffusion=g("hydro", "hyperdiffusion", float, 0.0),
            ),
            init_velocity=g("hydro", "init_velocity", str, "ocean"),
            times=g("hydro", "times", _times, (0.0, 5.0, 10.0)),
            init_concentration=g("hydro", "init_concentration", str, None),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: [hydro] {exc}") from exc

    compare_times = g("compare", "times", _times, (0.0, 5.0, 10.0))

    if errs:
        raise ConfigError(f"{path}: " + "; ".join(errs))

    try:
        sc = Scenario(mode=mode_val, seed=seed_val, name=name, out=out_val,
                      domain=domain, phys=phys, floes=floes, ocean=ocean,
                      step=step, hydro=hydro, compare_times=compare_times)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    if sc.mode == "compare":
        for t in sc.compare_times:
            k = round(t / sc.step.dt)
            if abs(k * sc.step.dt - t) > 1e-9 * max(1.0, t):
                raise ConfigError(
                    f"{path}: [compare] time {t} is not a multiple of particle dt")
        if sc.compare_times[-1] > sc.step.t_final:
            raise ConfigError(f"{path}: [compare] times exceed t_final")
    return sc


def effective_config_text(sc: Scenario, gamma_bar: float | None = None,
                          extras: dict | None = None) -> str:
    """Echo of every parameter actually used, including derived quantities."""
    lines = ["# floeflow-v1 effective-config"]

    def sec(name, pairs):
        lines.append(f"[{name}]")
        for k, v in pairs:
            lines.append(f"{k} = {v}")
        lines.append("")

    # the output directory is run metadata, not physics; echoing it would
    # make byte-identical runs into different directories impossible
    sec("run", [("mode", sc.mode), ("seed", sc.seed), ("name", sc.name)])
    sec("domain", [("half_width", repr(sc.domain.half_width))])
    p = sc.phys
    sec("physics", [("rho_ice", repr(p.rho_ice)), ("rho_o", repr(p.rho_o)),
                    ("c_vo", repr(p.c_vo)), ("c_ho", repr(p.c_ho)),
                    ("e_e", repr(p.e_e)), ("e_r", repr(p.e_r)),
                    ("draft_factor", repr(p.draft_factor))])
    f = sc.floes
    sec("floes", [("n", f.n), ("size_a", repr(f.size.a)),
                  ("size_kappa", repr(f.size.kappa)),
                  ("size_max", repr(f.size_max) if f.size_max else "0"),
                  ("thickness", f.thickness_kind),
                  ("thickness_k", repr(f.thickness.k)),
                  ("thickness_theta", repr(f.thickness.theta)),
                  ("thickness_value", repr(f.thickness_value)),
                  ("max_attempts", f.max_attempts),
                  ("velocity_init", f.velocity_init),
                  ("velocity_scale", repr(f.velocity_scale)),
                  ("drift_x", repr(f.drift[0])), ("drift_y", repr(f.drift[1]))])
    o = sc.ocean
    sec("ocean", [("kind", o.kind), ("u_x", repr(o.u[0])), ("u_y", repr(o.u[1])),
                  ("modes", o.modes), ("damping_base", repr(o.damping_base)),
                  ("damping_k2", repr(o.damping_k2)),
                  ("forcing_base", repr(o.forcing_base))])
    sec("time", [("dt", repr(sc.step.dt)), ("t_final", repr(sc.step.t_final)),
                 ("record_every", sc.step.record_every)])
    h = sc.hydro
    sec("hydro", [("nx", h.nx), ("ny", h.ny), ("dt", repr(h.config.dt)),
                  ("drag_mode", h.config.drag_mode),
                  ("alpha_bar", repr(h.config.alpha_bar) if h.config.alpha_bar else "0"),
                  ("density_floor", repr(h.config.density_floor)),
                  ("velocity_cap",
                   repr(h.config.velocity_cap) if h.config.velocity_cap else "0"),
                  ("diffusion", repr(h.config.diffusion)),
                  ("hyperdiffusion", repr(h.config.hyperdiffusion)),
                  ("init_velocity", h.init_velocity),
                  ("times", ",".join(repr(t) for t in h.times))])
    sec("compare", [("times", ",".join(repr(t) for t in sc.compare_times))])
    derived = [("gamma_bar", repr(gamma_bar) if gamma_bar is not None else "n/a")]
    if extras:
        derived += [(k, v) for k, v in extras.items()]
    sec("derived", derived)
    return "\n".join(lines)
