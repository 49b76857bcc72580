"""Contact law: damping factor, overlap geometry, stiffness, assembly."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floeflow.contact import (ContactPair, ContactStiffness, assemble_contact_forces,
                              beta, build_contact_table, candidate_pairs_all,
                              candidate_pairs_grid, contact_force, contact_stiffness,
                              overlap)
from floeflow.core import Domain, Ensemble, Floe, PhysParams, floe_mass


def rng(seed=0):
    return np.random.Generator(np.random.PCG64(seed))


def random_ensemble(seed, n, half_width=math.pi, r_lo=0.05, r_hi=0.4,
                    v_scale=1.0):
    """Random snapshot with overlaps allowed (placement is uniform)."""
    g = rng(seed)
    return Ensemble(
        r=g.uniform(r_lo, r_hi, n),
        h=g.uniform(0.2, 2.0, n),
        x=g.uniform(-half_width, half_width, (n, 2)),
        v=g.uniform(-v_scale, v_scale, (n, 2)),
        domain=Domain(half_width),
    )


class TestBeta:
    def test_reference_restitution(self):
        # ln(0.15)/sqrt(ln^2(0.15) + pi^2), evaluated independently
        expected = math.log(0.15) / math.sqrt(math.log(0.15) ** 2 + math.pi ** 2)
        assert beta(0.15) == pytest.approx(expected, rel=1e-15)
        assert beta(0.15) == pytest.approx(-0.516930, abs=1e-6)

    def test_elastic_limit(self):
        assert -1e-6 < beta(1 - 1e-6) < 0

    def test_equal_terms_point(self):
        # e_r = e^-pi makes ln = -pi, so beta = -1/sqrt(2)
        assert beta(math.exp(-math.pi)) == pytest.approx(-1 / math.sqrt(2), rel=1e-12)

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.5])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(ValueError):
            beta(bad)

    @given(e_r=st.floats(1e-6, 1 - 1e-9))
    def test_range(self, e_r):
        assert -1.0 < beta(e_r) < 0.0


class TestOverlap:
    def test_collinear_contact(self):
        d = Domain(math.pi)
        delta, n = overlap(np.zeros(2), np.array([1.5, 0.0]), 1.0, 1.0, d)
        assert delta == pytest.approx(-0.5, abs=1e-14)
        assert np.allclose(n, [1.0, 0.0])

    def test_separated(self):
        d = Domain(math.pi)
        delta, n = overlap(np.zeros(2), np.array([3.0, 0.0]), 1.0, 1.0, d)
        assert delta == pytest.approx(1.0, abs=1e-14)
        assert np.allclose(n, [1.0, 0.0])

    def test_wraparound_contact(self):
        # periodic distance 0.8 against summed radii 1.0
        d = Domain(math.pi)
        delta, n = overlap(np.array([math.pi - 0.4, 0.0]),
                           np.array([-math.pi + 0.4, 0.0]), 0.5, 0.5, d)
        assert delta == pytest.approx(-0.2, abs=1e-12)
        assert np.allclose(n, [1.0, 0.0])

    def test_coincident_centers_flagged(self):
        d = Domain(math.pi)
        delta, n = overlap(np.array([0.3, 0.3]), np.array([0.3, 0.3]), 0.5, 0.5, d)
        assert n is None
        assert delta == pytest.approx(-1.0)


class TestStiffness:
    def test_kappa1_direct(self):
        p = PhysParams(e_e=100.0, e_r=0.15)
        s = contact_stiffness(1.0, 1.0, 2.0, 2.0, p)
        assert s.kappa1 == pytest.approx(25 * math.pi, rel=1e-14)

    def test_equal_mass_reduction(self):
        p = PhysParams()
        m = 3.7
        s = contact_stiffness(1.0, 2.0, m, m, p)
        # reduced mass m/2 enters kappa2: check against the closed form
        expected = beta(p.e_r) * math.sqrt(5 * math.pi / 4 * p.e_e * 1.0 * (m / 2))
        assert s.kappa2 == pytest.approx(expected, rel=1e-14)

    def test_kappa2_chained_example(self):
        p = PhysParams(e_e=100.0, e_r=0.15)
        s = contact_stiffness(1.0, 1.0, 2.0, 2.0, p)
        expected = beta(0.15) * math.sqrt(125 * math.pi)
        assert s.kappa2 == pytest.approx(expected, rel=1e-14)
        assert s.kappa2 == pytest.approx(-10.2438, rel=1e-5)

    def test_kappa2_always_negative(self):
        p = PhysParams()
        for hi, hj, mi, mj in [(0.1, 2.0, 0.01, 5.0), (1.0, 1.0, 1.0, 1.0)]:
            assert contact_stiffness(hi, hj, mi, mj, p).kappa2 < 0

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            contact_stiffness(0.0, 1.0, 1.0, 1.0, PhysParams())
        with pytest.raises(ValueError):
            ContactStiffness(kappa1=1.0, kappa2=0.1, beta=-0.5)


class TestContactForce:
    def _setup(self, delta, vi=(0, 0), vj=(0, 0)):
        p = PhysParams(e_e=100.0, e_r=0.15)
        fi = Floe(1.0, 1.0, np.zeros(2), np.array(vi, dtype=float))
        fj = Floe(1.0, 1.0, np.array([2.0 + delta, 0.0]), np.array(vj, dtype=float))
        s = contact_stiffness(1.0, 1.0, 2.0, 2.0, p)
        pair = ContactPair(0, 1, delta, np.array([1.0, 0.0]))
        return fi, fj, s, pair

    def test_separated_gives_zero(self):
        fi, fj, s, pair = self._setup(1.0)
        assert np.array_equal(contact_force(fi, fj, s, pair), [0.0, 0.0])

    def test_repulsive_static_overlap(self):
        fi, fj, s, pair = self._setup(-0.5)
        f = contact_force(fi, fj, s, pair)
        # kappa1 * delta * n = 25 pi * (-0.5) along +x: pushes i away from j
        assert f[0] == pytest.approx(-39.2699, rel=1e-5)
        assert f[1] == 0.0

    def test_swap_antisymmetry(self):
        fi, fj, s, pair = self._setup(-0.5)
        f_ij = contact_force(fi, fj, s, pair)
        pair_ji = ContactPair(1, 0, pair.delta, -pair.normal)
        f_ji = contact_force(fj, fi, s, pair_ji)
        assert np.array_equal(f_ij, -f_ji)

    def test_damping_contribution(self):
        fi, fj, s, pair = self._setup(-0.1, vi=(1.0, 0.0), vj=(-1.0, 0.0))
        f = contact_force(fi, fj, s, pair)
        expected = s.kappa1 * (-0.1) + s.kappa2 * 2.0
        assert f[0] == pytest.approx(expected, rel=1e-14)

    def test_undefined_normal_gives_zero(self):
        fi, fj, s, pair = self._setup(-0.5)
        pair.normal = None
        assert np.array_equal(contact_force(fi, fj, s, pair), [0.0, 0.0])


class TestAssembly:
    def test_no_overlaps_all_zero(self):
        e = Ensemble(r=[0.1, 0.1], h=[1.0, 1.0], x=[[0.0, 0.0], [1.0, 0.0]],
                     v=np.zeros((2, 2)))
        sums, table = assemble_contact_forces(e, PhysParams())
        assert table.count == 0
        assert np.array_equal(sums, np.zeros((2, 2)))

    def test_isolated_pair_equal_and_opposite(self):
        e = Ensemble(r=[1.0, 1.0], h=[1.0, 1.0], x=[[0.0, 0.0], [1.5, 0.0]],
                     v=[[0.3, -0.2], [0.0, 0.1]])
        sums, _ = assemble_contact_forces(e, PhysParams())
        assert np.array_equal(sums[0], -sums[1])

    def test_matches_elementwise_kernel(self):
        # vectorized table row vs the scalar contact_force path
        p = PhysParams()
        e = Ensemble(r=[1.0, 0.7], h=[0.5, 1.2], x=[[0.0, 0.0], [1.1, 0.9]],
                     v=[[0.5, 0.0], [-0.1, 0.4]])
        _, table = assemble_contact_forces(e, p)
        assert table.count == 1
        i, j = int(table.i[0]), int(table.j[0])
        m = e.masses(p)
        s = contact_stiffness(e.h[i], e.h[j], m[i], m[j], p)
        delta, normal = overlap(e.x[i], e.x[j], e.r[i], e.r[j], e.domain)
        f = contact_force(e.floes[i], e.floes[j], s, ContactPair(i, j, delta, normal))
        assert np.allclose(table.force[0], f, rtol=1e-14)

    def test_coincident_centers_guarded(self):
        e = Ensemble(r=[0.5, 0.5], h=[1.0, 1.0], x=[[0.2, 0.2], [0.2, 0.2]],
                     v=np.zeros((2, 2)))
        sums, table = assemble_contact_forces(e, PhysParams())
        assert table.count == 0
        assert np.all(np.isfinite(sums))

    @pytest.mark.parametrize("seed", range(12))
    def test_newton_third_law(self, seed):
        e = random_ensemble(seed, n=60, r_lo=0.1, r_hi=0.5)
        sums, table = assemble_contact_forces(e, PhysParams())
        if table.count == 0:
            pytest.skip("no contacts in this draw")
        total = sums.sum(axis=0)
        scale = np.abs(table.force).sum()
        assert np.all(np.abs(total) <= 1e-12 * max(1.0, scale))

    @pytest.mark.parametrize("seed,n", [(0, 10), (1, 50), (2, 120), (3, 200),
                                        (4, 200), (5, 33)])
    def test_grid_matches_all_pairs(self, seed, n):
        e = random_ensemble(seed, n=n, r_lo=0.02, r_hi=0.3)
        p = PhysParams()
        grid_sums, gt = assemble_contact_forces(e, p, method="grid")
        ap_sums, at = assemble_contact_forces(e, p, method="all_pairs")
        assert gt.count == at.count
        scale = max(1.0, np.abs(ap_sums).max())
        assert np.max(np.abs(grid_sums - ap_sums)) <= 1e-12 * scale

    def test_grid_matches_all_pairs_with_wraparound(self):
        # floes hugging the boundary exercise the periodic cell stencil
        g = rng(99)
        n = 80
        edge = np.concatenate([
            np.stack([np.full(n // 2, math.pi - 0.05) - g.uniform(0, 0.3, n // 2),
                      g.uniform(-math.pi, math.pi, n // 2)], axis=1),
            np.stack([-np.full(n // 2, math.pi - 0.05) + g.uniform(0, 0.3, n // 2),
                      g.uniform(-math.pi, math.pi, n // 2)], axis=1)])
        d = Domain(math.pi)
        e = Ensemble(r=g.uniform(0.1, 0.3, n), h=g.uniform(0.5, 1.5, n),
                     x=d.wrap(edge), v=g.uniform(-1, 1, (n, 2)), domain=d)
        p = PhysParams()
        grid_sums, _ = assemble_contact_forces(e, p, method="grid")
        ap_sums, _ = assemble_contact_forces(e, p, method="all_pairs")
        assert np.max(np.abs(grid_sums - ap_sums)) <= 1e-12 * max(
            1.0, np.abs(ap_sums).max())

    def test_big_radii_fall_back_to_all_pairs(self):
        # cells would be fewer than 3 per axis: grid route must defer
        e = random_ensemble(7, n=12, r_lo=1.0, r_hi=1.5)
        gi, gj = candidate_pairs_grid(e)
        ai, aj = candidate_pairs_all(e.n)
        assert np.array_equal(gi, ai) and np.array_equal(gj, aj)

    def test_candidate_pairs_unique(self):
        e = random_ensemble(8, n=150, r_lo=0.05, r_hi=0.25)
        gi, gj = candidate_pairs_grid(e)
        key = np.minimum(gi, gj) * e.n + np.maximum(gi, gj)
        assert np.unique(key).size == key.size, "pair duplicated by the stencil"
