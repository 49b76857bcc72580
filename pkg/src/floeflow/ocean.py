"""Ocean surface velocity fields u_o(t, x).

Four variants: constant, an analytic ring vortex, a rightward channel flow
with quadratic cross-stream variation, and a stochastic field made of
Fourier modes with Ornstein-Uhlenbeck amplitude dynamics on a
divergence-free basis.  The ocean is one-way coupled: it drags the floes
and never sees them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import SchemaError

OCEAN_STATE_HEADER = "# floeflow-v1 ocean-state"


# ---------------------------------------------------------------------------
# analytic fields


def eval_constant(u, x) -> np.ndarray:
    """Constant field: returns u broadcast to the shape of x."""
    u = np.asarray(u, dtype=float).reshape(2)
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        return u.copy()
    return np.broadcast_to(u, x.shape).copy()


def eval_vortex(x, y):
    """Ring vortex (-y*s, x*s), s = (q-4)*exp(-q*(q-8)/8)/32 with q = x^2+y^2.

    Tangential everywhere; vanishes on the ring q = 4 and at the origin.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    q = x * x + y * y
    s = (q - 4.0) * np.exp(-q * (q - 8.0) / 8.0) / 32.0
    return -y * s, x * s


def eval_quadratic_channel(x, y):
    """Rightward channel flow (0.1 + 0.1*(pi^2 - x^2), 0)."""
    x = np.asarray(x, dtype=float)
    u = 0.1 + 0.1 * (math.pi ** 2 - x * x)
    return u, np.zeros_like(u)


class OceanField:
    """Evaluation interface shared by all variants: (t, points) -> velocities."""

    time_dependent = False

    def evaluate(self, t: float, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def advance(self, dt: float) -> None:
        """Advance internal state by dt; no-op for time-independent fields."""


class ConstantOcean(OceanField):
    def __init__(self, u=(0.5, 0.0)):
        self.u = np.asarray(u, dtype=float).reshape(2)

    def evaluate(self, t, x):
        return eval_constant(self.u, x)


class VortexOcean(OceanField):
    def evaluate(self, t, x):
        x = np.asarray(x, dtype=float)
        ux, uy = eval_vortex(x[..., 0], x[..., 1])
        return np.stack([ux, uy], axis=-1)


class QuadraticChannelOcean(OceanField):
    def evaluate(self, t, x):
        x = np.asarray(x, dtype=float)
        ux, uy = eval_quadratic_channel(x[..., 0], x[..., 1])
        return np.stack([ux, uy], axis=-1)


# ---------------------------------------------------------------------------
# stochastic Fourier field


def half_plane_wavevectors(n_modes: int) -> np.ndarray:
    """The n_modes lowest-|k| integer wavevectors with kx>0 or (kx=0, ky>0).

    Restricting to a half plane is what keeps the synthesized field real and
    non-degenerate: a mode and its negative would cancel exactly under the
    Re(.) synthesis on the rotated basis.
    """
    kmax = 1
    while (2 * kmax + 1) ** 2 // 2 < n_modes:
        kmax += 1
    ks = []
    for kx in range(0, kmax + 1):
        for ky in range(-kmax, kmax + 1):
            if kx == 0 and ky <= 0:
                continue
            ks.append((kx, ky))
    ks.sort(key=lambda k: (k[0] ** 2 + k[1] ** 2, k[0], k[1]))
    if len(ks) < n_modes:
        raise ValueError("internal wavevector enumeration too small")
    return np.array(ks[:n_modes], dtype=float)


@dataclass
class FourierOceanState:
    """Mode set of the stochastic ocean: wavevectors, complex amplitudes,
    per-mode damping rates d_k > 0 and forcing strengths sigma_k >= 0."""

    wavevectors: np.ndarray      # (m, 2) integer-valued
    amplitudes: np.ndarray       # (m,) complex
    damping: np.ndarray          # (m,)
    forcing: np.ndarray          # (m,)
    t: float = 0.0

    def __post_init__(self):
        m = self.wavevectors.shape[0]
        if not (self.amplitudes.shape == (m,) and self.damping.shape == (m,)
                and self.forcing.shape == (m,)):
            raise ValueError("inconsistent mode arrays")
        if np.any(self.damping <= 0) or np.any(self.forcing < 0):
            raise ValueError("need damping > 0 and forcing >= 0")

    @property
    def mode_count(self) -> int:
        return self.wavevectors.shape[0]

    def basis(self) -> np.ndarray:
        """Divergence-free unit basis psi_k = (-ky, kx)/|k| per mode."""
        k = self.wavevectors
        norm = np.sqrt(np.einsum("ij,ij->i", k, k))
        return np.stack([-k[:, 1], k[:, 0]], axis=1) / norm[:, None]


def default_fourier_state(n_modes: int = 80, damping_base: float = 0.5,
                          damping_k2: float = 0.1, forcing_base: float = 0.1,
                          rng: np.random.Generator | None = None,
                          stationary_init: bool = True) -> FourierOceanState:
    """Build the default mode set: d_k = base + k2*|k|^2, sigma_k = f/(1+|k|^2).

    With stationary_init the amplitudes start in the OU stationary law
    (variance sigma_k^2 / (2 d_k)), so the field is statistically developed
    at t = 0; otherwise they start at zero.
    """
    k = half_plane_wavevectors(n_modes)
    k2 = np.einsum("ij,ij->i", k, k)
    damping = damping_base + damping_k2 * k2
    forcing = forcing_base / (1.0 + k2)
    if stationary_init and rng is not None:
        std = forcing / np.sqrt(2.0 * damping)
        amps = std * _complex_standard_normal(rng, n_modes)
    else:
        amps = np.zeros(n_modes, dtype=complex)
    return FourierOceanState(wavevectors=k, amplitudes=amps,
                             damping=damping, forcing=forcing)


def _complex_standard_normal(rng: np.random.Generator, size) -> np.ndarray:
    """Complex Gaussian with E|xi|^2 = 1."""
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / math.sqrt(2.0)


def stochastic_step(state: FourierOceanState, dt: float,
                    rng: np.random.Generator) -> FourierOceanState:
    """Advance each amplitude by one exact complex OU step.

    a <- a*exp(-d*dt) + sigma*sqrt((1 - exp(-2*d*dt)) / (2*d)) * xi, with xi
    a standard complex Gaussian; exact for any dt, stationary |a|^2 variance
    sigma^2/(2d).
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    decay = np.exp(-state.damping * dt)
    noise_std = state.forcing * np.sqrt((1.0 - decay ** 2) / (2.0 * state.damping))
    xi = _complex_standard_normal(rng, state.mode_count)
    amps = state.amplitudes * decay + noise_std * xi
    return replace(state, amplitudes=amps, t=state.t + dt)


def eval_stochastic(state: FourierOceanState, x) -> np.ndarray:
    """Synthesize u(x) = sum_k Re(a_k exp(i k.x)) psi_k; real by construction."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = x.reshape(-1, 2)
    phases = pts @ state.wavevectors.T                       # (n, m)
    coef = (np.cos(phases) * state.amplitudes.real
            - np.sin(phases) * state.amplitudes.imag)        # Re(a e^{i phi})
    u = coef @ state.basis()
    return u[0] if single else u


class StochasticFourierOcean(OceanField):
    """Stochastic field owning its state and noise stream."""

    time_dependent = True

    def __init__(self, state: FourierOceanState, rng: np.random.Generator):
        self.state = state
        self.rng = rng

    def evaluate(self, t, x):
        return eval_stochastic(self.state, x)

    def advance(self, dt):
        self.state = stochastic_step(self.state, dt, self.rng)


# ---------------------------------------------------------------------------
# state snapshot I/O (restartable stochastic ocean)


def save_fourier_state(state: FourierOceanState, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{OCEAN_STATE_HEADER}\n")
        fh.write(f"# t={state.t!r} modes={state.mode_count}\n")
        fh.write("kx,ky,re,im,damping,forcing\n")
        for i in range(state.mode_count):
            kx, ky = state.wavevectors[i]
            a = state.amplitudes[i]
            fh.write(f"{int(kx)},{int(ky)},{float(a.real)!r},{float(a.imag)!r},"
                     f"{float(state.damping[i])!r},{float(state.forcing[i])!r}\n")


def load_fourier_state(path) -> FourierOceanState:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != OCEAN_STATE_HEADER:
            raise SchemaError(f"{path}: expected '{OCEAN_STATE_HEADER}', got '{header}'")
        meta = fh.readline().strip().lstrip("# ").split()
        t = float(meta[0].split("=")[1])
        fh.readline()  # column header
        rows = [line.strip().split(",") for line in fh if line.strip()]
    k = np.array([[float(r[0]), float(r[1])] for r in rows])
    amps = np.array([complex(float(r[2]), float(r[3])) for r in rows])
    damping = np.array([float(r[4]) for r in rows])
    forcing = np.array([float(r[5]) for r in rows])
    return FourierOceanState(wavevectors=k, amplitudes=amps, damping=damping,
                             forcing=forcing, t=t)
