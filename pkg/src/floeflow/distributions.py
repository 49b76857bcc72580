"""Empirical floe size/thickness laws and non-overlapping initial placement.

Floe radii follow a Pareto-type power law with density a*kappa^a / r^(a+1)
supported on [kappa, inf); thicknesses follow a Gamma(k, theta) law.  Both
samplers are driven by a caller-supplied numpy Generator so fixed seeds give
bit-reproducible draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Domain
from .errors import PackingError


@dataclass(frozen=True)
class PowerLawParams:
    """Power-law radius density a*kappa^a/r^(a+1) on [kappa, inf)."""

    a: float = 2.0
    kappa: float = 0.05

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"power-law exponent a must be positive, got {self.a}")
        if not self.kappa > 0:
            raise ValueError(f"power-law scale kappa must be positive, got {self.kappa}")


@dataclass(frozen=True)
class GammaParams:
    """Gamma(k, theta) thickness law (shape k, scale theta)."""

    k: float = 2.0
    theta: float = 0.5

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"gamma shape k must be positive, got {self.k}")
        if not self.theta > 0:
            raise ValueError(f"gamma scale theta must be positive, got {self.theta}")


def pdf_power_law(r, p: PowerLawParams):
    """Density of the radius law; zero below the support edge kappa."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("radius must be positive")
    out = np.where(r >= p.kappa, p.a * p.kappa ** p.a / r ** (p.a + 1.0), 0.0)
    return float(out) if out.ndim == 0 else out


def power_law_inverse_cdf(u, p: PowerLawParams):
    """Map u in (0, 1] to a radius via kappa * u^(-1/a); u=1 gives kappa."""
    u = np.asarray(u, dtype=float)
    out = p.kappa * u ** (-1.0 / p.a)
    return float(out) if out.ndim == 0 else out


def sample_power_law(p: PowerLawParams, rng: np.random.Generator, size=None,
                     r_max: float | None = None):
    """Draw radii by inverse CDF; samples never fall below kappa.

    r_max, when given, truncates the law by resampling (the conditional
    distribution on [kappa, r_max]); with a <= 2 the raw law has heavy
    enough tails that desk-scale ensembles are otherwise dominated by a
    single giant floe.
    """
    if r_max is not None and r_max <= p.kappa:
        raise ValueError("r_max must exceed kappa")
    # 1 - U is uniform on (0, 1] when U is uniform on [0, 1)
    if r_max is None:
        return power_law_inverse_cdf(1.0 - rng.random(size), p)
    if size is None:
        while True:
            r = power_law_inverse_cdf(1.0 - rng.random(), p)
            if r <= r_max:
                return r
    out = np.empty(size, dtype=float)
    filled = 0
    while filled < out.size:
        draw = power_law_inverse_cdf(1.0 - rng.random(out.size - filled), p)
        keep = draw[draw <= r_max]
        out.flat[filled:filled + keep.size] = keep
        filled += keep.size
    return out


def sample_gamma(p: GammaParams, rng: np.random.Generator, size=None):
    """Draw thicknesses from Gamma(k, theta); strictly positive."""
    return rng.gamma(shape=p.k, scale=p.theta, size=size)


def place_floes(n: int, radii: np.ndarray, d: Domain, rng: np.random.Generator,
                max_attempts: int = 200) -> tuple[np.ndarray, bool]:
    """Place n discs uniformly with rejection so no pair overlaps.

    Discs are placed largest-first (fewer rejections); overlap is tested
    with minimum-image distance.  When a disc exhausts max_attempts it is
    placed anyway and the returned flag drops to False.

    Returns (positions (n, 2), all_separated).
    Raises PackingError when n * pi * max(r)^2 exceeds the domain area.
    """
    radii = np.asarray(radii, dtype=float).reshape(-1)
    if n < 1 or radii.shape[0] != n:
        raise ValueError("need n >= 1 radii")
    if n * np.pi * float(radii.max()) ** 2 > d.area:
        raise PackingError(
            f"{n} discs of max radius {radii.max():g} cannot fit in domain area {d.area:g}")

    order = np.argsort(-radii, kind="stable")
    L = d.half_width
    placed = np.empty((n, 2), dtype=float)
    all_separated = True
    for k, idx in enumerate(order):
        target = radii[idx] + radii[order[:k]]        # per-placed minimum distance
        ok = False
        for _ in range(max_attempts):
            cand = rng.uniform(-L, L, size=2)
            if k == 0:
                ok = True
            else:
                disp = d.wrap(placed[:k] - cand)
                ok = bool(np.all(np.einsum("ij,ij->i", disp, disp) >= target * target))
            if ok:
                break
        if not ok:
            all_separated = False
            cand = rng.uniform(-L, L, size=2)
        placed[k] = cand
    positions = np.empty((n, 2), dtype=float)
    positions[order] = placed
    return positions, all_separated
