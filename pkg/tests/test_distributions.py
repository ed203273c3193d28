import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import emprice as ep
from emprice.distributions import Side, cdf_eval

from conftest import random_exact_cdf


class TestCdfEval:
    def test_uniform_identity(self):
        assert cdf_eval(ep.Uniform(0, 1), 0.3) == 0.3

    def test_beta_symmetry(self):
        assert cdf_eval(ep.BetaCdf(4, 4), 0.5) == pytest.approx(0.5, abs=1e-12)

    def test_mixture_atom_sides(self):
        mix = ep.Mixture(np.array([0.5, 0.5]), (ep.PointMass(0.2), ep.Uniform(0, 1)))
        assert cdf_eval(mix, 0.2, Side.RIGHT) == pytest.approx(0.6, abs=1e-15)
        assert cdf_eval(mix, 0.2, Side.LEFT_LIMIT) == pytest.approx(0.1, abs=1e-15)

    def test_right_at_least_left(self):
        gen = np.random.default_rng(0)
        for _ in range(20):
            F = random_exact_cdf(gen)
            for th in gen.uniform(-0.2, 1.2, size=20):
                assert F.cdf(th) >= F.cdf_left(th)


class TestQuantile:
    def test_uniform_identity(self):
        assert ep.quantile(ep.Uniform(0, 1), 0.25) == 0.25

    def test_point_mass_degenerate(self):
        for q in (0.01, 0.4, 1.0):
            assert ep.quantile(ep.PointMass(0.7), q) == 0.7

    def test_beta_median_by_symmetry(self):
        assert ep.quantile(ep.BetaCdf(4, 4), 0.5) == pytest.approx(0.5, abs=1e-9)

    def test_level_out_of_range(self):
        with pytest.raises(ValueError):
            ep.quantile(ep.Uniform(0, 1), 1.5)

    @given(st.floats(min_value=0.001, max_value=0.999))
    @settings(max_examples=100, deadline=None)
    def test_inverse_consistency_beta(self, q):
        F = ep.BetaCdf(2.0, 3.0)
        th = F.quantile(q)
        assert F.cdf(th) >= q - 1e-9
        assert F.quantile(F.cdf(th)) <= th + 1e-9

    def test_inverse_consistency_continuous_variants(self):
        gen = np.random.default_rng(7)
        variants = [
            ep.Uniform(0.1, 0.9),
            ep.BetaCdf(0.25, 0.25),
            ep.PiecewiseLinear(np.array([0.0, 0.3, 1.0]), np.array([0.0, 0.6, 1.0])),
            ep.kernel_cdf(ep.Sample(gen.uniform(0.2, 0.8, 12)), ep.KernelSpec(ep.KernelShape.EPANECHNIKOV), 0.1),
        ]
        for F in variants:
            for q in gen.uniform(0.01, 0.99, size=25):
                th = F.quantile(q)
                assert F.cdf(th) >= q - 1e-9
            for th in gen.uniform(*F.support, size=25):
                assert F.quantile(F.cdf(th)) <= th + 1e-9


class TestDrawSample:
    def test_deterministic_given_seed(self):
        F = ep.BetaCdf(4, 4)
        s1 = ep.draw_sample(F, 5, 42)
        s2 = ep.draw_sample(F, 5, 42)
        assert np.array_equal(s1.values, s2.values)
        assert not np.array_equal(s1.values, ep.draw_sample(F, 5, 43).values)

    def test_point_mass_sample(self):
        s = ep.draw_sample(ep.PointMass(0.7), 3, 0)
        assert np.array_equal(s.values, [0.7, 0.7, 0.7])

    def test_sorted_output(self):
        s = ep.draw_sample(ep.Uniform(0, 1), 100, 5)
        assert np.all(np.diff(s.values) >= 0)

    def test_dkw_at_large_n(self):
        # 2 exp(-2 * 1e5 * 0.01^2) = 2e-20: failure is essentially impossible
        s = ep.draw_sample(ep.Uniform(0, 1), 100_000, 1)
        assert ep.sup_distance(ep.ecdf(s), ep.Uniform(0, 1)) < 0.01

    def test_size_must_be_positive(self):
        with pytest.raises(ValueError):
            ep.draw_sample(ep.Uniform(0, 1), 0, 1)


class TestSupDistance:
    def test_identity(self):
        F = ep.BetaCdf(2, 5)
        assert ep.sup_distance(F, F) == 0.0

    def test_step_vs_uniform(self):
        step = ep.ecdf(ep.Sample(np.array([0.5])))
        assert ep.sup_distance(step, ep.Uniform(0, 1)) == 0.5

    def test_disjoint_point_masses(self):
        assert ep.sup_distance(ep.PointMass(0.0), ep.PointMass(1.0)) == 1.0

    def test_metric_properties_on_exact_families(self):
        gen = np.random.default_rng(11)
        for _ in range(40):
            F, G, H = (random_exact_cdf(gen) for _ in range(3))
            dfg = ep.sup_distance(F, G)
            assert dfg == ep.sup_distance(G, F)
            assert dfg <= ep.sup_distance(F, H) + ep.sup_distance(H, G) + 1e-12
            assert dfg >= 0.0


class TestMonotonicity:
    @given(st.floats(0, 1), st.floats(0, 1))
    @settings(max_examples=200, deadline=None)
    def test_cdf_nondecreasing(self, a, b):
        lo, hi = min(a, b), max(a, b)
        for F in (ep.Uniform(0, 1), ep.BetaCdf(0.25, 0.25), ep.PointMass(0.4)):
            assert F.cdf(lo) <= F.cdf(hi) + 1e-15


class TestBetaAccuracy:
    @pytest.mark.parametrize("alpha,beta", [(4.0, 4.0), (2.0, 5.0)])
    def test_cdf_matches_riemann_sum_oracle(self, alpha, beta):
        # midpoint Riemann sum of the density on 1e6 cells
        F = ep.BetaCdf(alpha, beta)
        edges = np.linspace(0.0, 1.0, 1_000_001)
        mids = 0.5 * (edges[:-1] + edges[1:])
        dens = F.density_array(mids)
        oracle = np.concatenate([[0.0], np.cumsum(dens) * 1e-6])
        probe = np.linspace(0, 1_000_000, 201, dtype=int)
        err = np.abs(F.cdf_array(edges[probe]) - oracle[probe])
        assert err.max() <= 1e-6

    def test_quarter_quarter_against_mpmath(self):
        mp = pytest.importorskip("mpmath")
        F = ep.BetaCdf(0.25, 0.25)
        for x in (0.05, 0.3, 0.5, 0.77, 0.99):
            want = float(mp.betainc(mp.mpf("0.25"), mp.mpf("0.25"), 0, x, regularized=True))
            assert F.cdf(x) == pytest.approx(want, abs=1e-10)


class TestSampleType:
    def test_sorted_and_validated(self):
        s = ep.Sample(np.array([0.9, 0.1, 0.5]))
        assert np.array_equal(s.values, [0.1, 0.5, 0.9])
        assert s.n == 3

    def test_rejects_empty_and_nonfinite(self):
        with pytest.raises(ValueError):
            ep.Sample(np.array([]))
        with pytest.raises(ValueError):
            ep.Sample(np.array([0.1, np.nan]))

    def test_file_roundtrip(self, tmp_path):
        s = ep.Sample(np.array([0.123456789012345678, 1.0 / 3.0, 0.9]))
        path = tmp_path / "s.csv"
        ep.write_sample(path, s)
        back = ep.read_sample(path)
        assert np.array_equal(back.values, s.values)

    def test_header_flag(self, tmp_path):
        path = tmp_path / "h.csv"
        ep.write_sample(path, ep.Sample(np.array([0.25, 0.5])), header=True)
        assert ep.read_sample(path, header=True).n == 2
        with pytest.raises(ValueError):
            ep.read_sample(path, header=False)


class TestMixtureValidation:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError):
            ep.Mixture(np.array([0.5, 0.6]), (ep.Uniform(0, 1), ep.PointMass(0.5)))

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            ep.Mixture(np.array([-0.2, 1.2]), (ep.Uniform(0, 1), ep.PointMass(0.5)))
