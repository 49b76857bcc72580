"""Moments, mismatch metric, concentration grid, decay-bound constants."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floeflow.core import Domain, Ensemble, PhysParams
from floeflow.diagnostics import (ConcentrationGrid, decay_bound_constants,
                                  energy_lower_bound, grid_concentration, moments,
                                  velocity_mismatch)
from floeflow.ocean import ConstantOcean


def rng(seed=0):
    return np.random.Generator(np.random.PCG64(seed))


class TestMoments:
    def test_single_floe(self):
        p = PhysParams(rho_ice=1.0)
        # radius/thickness chosen so the mass is exactly 2/pi * pi = 2
        e = Ensemble(r=[1.0], h=[2.0 / math.pi], x=[[0.0, 0.0]], v=[[1.0, 0.0]])
        mom = moments(e, p)
        assert mom.m0 == pytest.approx(2.0, rel=1e-14)
        assert np.allclose(mom.m1, [2.0, 0.0])
        assert mom.m2v == pytest.approx(1.0, rel=1e-14)
        assert mom.m2x == 0.0
        assert mom.m2 == mom.m2v

    def test_no_contact_zero_strain(self):
        p = PhysParams()
        e = Ensemble(r=[0.1, 0.1], h=[1.0, 1.0], x=[[-1.0, 0.0], [1.0, 0.0]],
                     v=np.zeros((2, 2)))
        assert moments(e, p).m2x == 0.0

    def test_two_floe_strain_energy_double_count(self):
        # kappa1 = 25 pi, delta = -0.5, n = 2: (1/(4n)) * 2 pairs * k1 * 0.25
        p = PhysParams(e_e=100.0)
        e = Ensemble(r=[1.0, 1.0], h=[1.0, 1.0], x=[[0.0, 0.0], [1.5, 0.0]],
                     v=np.zeros((2, 2)))
        expected = (1.0 / 8.0) * 2.0 * (25 * math.pi) * 0.25
        mom = moments(e, p)
        assert mom.m2x == pytest.approx(expected, rel=1e-14)
        assert expected == pytest.approx(4.90874, rel=1e-5)

    def test_strain_energy_uses_contact_clamp(self):
        # separated pair contributes nothing even though delta^2 > 0
        p = PhysParams()
        e = Ensemble(r=[0.5, 0.5], h=[1.0, 1.0], x=[[-2.0, 0.0], [2.0, 0.0]],
                     v=np.zeros((2, 2)))
        assert moments(e, p).m2x == 0.0


class TestVelocityMismatch:
    def test_zero_when_riding_ocean(self):
        e = Ensemble(r=[0.1, 0.1], h=[1.0, 1.0], x=[[-1.0, 0.0], [1.0, 0.0]],
                     v=np.tile([0.5, 0.0], (2, 1)))
        assert velocity_mismatch(e, ConstantOcean((0.5, 0.0))) == 0.0

    def test_single_floe_arithmetic(self):
        e = Ensemble(r=[0.1], h=[1.0], x=[[0.0, 0.0]], v=[[0.0, 0.0]])
        assert velocity_mismatch(e, ConstantOcean((0.5, 0.0))) == pytest.approx(0.25)

    def test_sum_over_floes(self):
        e = Ensemble(r=[0.1, 0.1], h=[1.0, 1.0], x=[[-1.0, 0.0], [1.0, 0.0]],
                     v=[[0.0, 0.0], [0.5, 1.0]])
        assert velocity_mismatch(e, ConstantOcean((0.5, 0.0))) == pytest.approx(1.25)


class TestGridConcentration:
    def test_single_floe_inside_one_cell(self):
        # 25x25 grid on [-pi, pi)^2: one r=0.1 disc fully inside a cell
        e = Ensemble(r=[0.1], h=[1.0], x=[[0.0, 0.0]], v=[[0.0, 0.0]])
        grid = grid_concentration(e, 25, 25)
        cell_area = (2 * math.pi / 25) ** 2
        expected = math.pi * 0.01 / cell_area
        assert expected == pytest.approx(0.49736, rel=1e-4)
        # 25 is odd, so (0,0) is the center of cell (12,12) and the whole
        # disc (radius 0.1 < half cell 0.1257) deposits there
        nz = np.nonzero(grid.values)
        assert len(nz[0]) == 1 and (nz[0][0], nz[1][0]) == (12, 12)
        assert grid.values[nz][0] == pytest.approx(expected, rel=1e-12)

    def test_empty_region_zero(self):
        e = Ensemble(r=[0.1], h=[1.0], x=[[2.0, 2.0]], v=[[0.0, 0.0]])
        grid = grid_concentration(e, 10, 10)
        assert grid.values[0, 0] == 0.0
        assert np.count_nonzero(grid.values) <= 4

    def test_straddling_floe_splits_symmetrically(self):
        # disc centered on a vertical cell edge: halves agree to the
        # quadrature tolerance (2% of the disc area)
        L = math.pi
        nx = ny = 4
        edge_x = -L + 2 * (2 * L / nx)   # boundary between ix=1 and ix=2
        e = Ensemble(r=[0.3], h=[1.0], x=[[edge_x, -L + 1.5 * (2 * L / ny)]],
                     v=[[0.0, 0.0]])
        grid = grid_concentration(e, nx, ny)
        cell_area = (2 * L / nx) ** 2
        left = grid.values[1, 1] * cell_area
        right = grid.values[1, 2] * cell_area
        disc = math.pi * 0.09
        assert abs(left - right) <= 0.02 * disc
        assert left + right == pytest.approx(disc, rel=1e-12)

    def test_total_area_conserved(self):
        g = rng(3)
        n = 50
        e = Ensemble(r=g.uniform(0.05, 0.4, n), h=np.ones(n),
                     x=g.uniform(-math.pi, math.pi, (n, 2)),
                     v=np.zeros((n, 2)))
        grid = grid_concentration(e, 25, 25)
        assert grid.total_area() == pytest.approx(float(np.pi * (e.r ** 2).sum()),
                                                  rel=1e-12)

    def test_wraparound_attribution(self):
        # disc hugging the +x boundary deposits into ix=0 cells too
        e = Ensemble(r=[0.3], h=[1.0], x=[[math.pi - 0.05, 0.0]], v=[[0.0, 0.0]])
        grid = grid_concentration(e, 8, 8)
        assert grid.values[:, 0].sum() > 0
        assert grid.total_area() == pytest.approx(math.pi * 0.09, rel=1e-12)

    def test_invalid_grid(self):
        e = Ensemble(r=[0.1], h=[1.0], x=[[0.0, 0.0]], v=[[0.0, 0.0]])
        with pytest.raises(ValueError):
            grid_concentration(e, 0, 5)

    @settings(deadline=None, max_examples=20)
    @given(seed=st.integers(0, 10_000), nx=st.integers(1, 30), ny=st.integers(1, 30))
    def test_area_conservation_property(self, seed, nx, ny):
        g = rng(seed)
        n = int(g.integers(1, 20))
        e = Ensemble(r=g.uniform(0.02, 0.5, n), h=np.ones(n),
                     x=g.uniform(-math.pi, math.pi, (n, 2)),
                     v=np.zeros((n, 2)))
        grid = grid_concentration(e, nx, ny)
        assert grid.total_area() == pytest.approx(float(np.pi * (e.r ** 2).sum()),
                                                  rel=1e-12)
        assert np.all(grid.values >= 0.0)


class TestDecayBound:
    def test_constants_match_direct_pair_scan(self):
        p = PhysParams()
        g = rng(9)
        n = 12
        e = Ensemble(r=g.uniform(0.05, 0.3, n), h=g.uniform(0.3, 2.0, n),
                     x=g.uniform(-3, 3, (n, 2)), v=g.uniform(-1, 1, (n, 2)))
        a0, a1 = decay_bound_constants(e, p)
        m = e.masses(p)
        b = abs(math.log(p.e_r) / math.sqrt(math.log(p.e_r) ** 2 + math.pi ** 2))
        k2max = 0.0
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                h_e = min(e.h[i], e.h[j])
                m_e = m[i] * m[j] / (m[i] + m[j])
                k2max = max(k2max, b * math.sqrt(5 * math.pi / 4 * p.e_e * h_e * m_e))
        assert a0 == pytest.approx(2 * k2max / m.min(), rel=1e-12)
        assert a1 == pytest.approx(k2max / (n * m.sum() ** 2), rel=1e-12)

    def test_bound_interpolates_between_endpoints(self):
        p = PhysParams()
        e = Ensemble(r=[0.2, 0.3], h=[1.0, 0.5], x=[[-1.0, 0.0], [1.0, 0.0]],
                     v=[[1.0, 0.0], [-1.0, 0.0]])
        m2_0 = moments(e, p).m2
        assert energy_lower_bound(e, p, 0.0) == pytest.approx(m2_0, rel=1e-12)
        a0, a1 = decay_bound_constants(e, p)
        m1 = moments(e, p).m1
        late = energy_lower_bound(e, p, 1e9)
        assert late == pytest.approx(a1 / a0 * float(m1 @ m1), rel=1e-9)
        mid = energy_lower_bound(e, p, 0.1)
        assert min(m2_0, late) <= mid <= max(m2_0, late)
