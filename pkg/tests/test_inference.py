import math

import numpy as np
import pytest

import emprice as ep


@pytest.fixture
def fixed_menu():
    return ep.Menu(((1.0, 0.5),))


class TestPluginVariance:
    def test_degenerate_sample(self, linear_env, fixed_menu):
        s = ep.Sample(np.full(6, 0.7))
        assert ep.plugin_variance(fixed_menu, s, linear_env) == 0.0

    def test_two_point_sample(self, linear_env, fixed_menu):
        s = ep.Sample(np.array([0.3, 0.7]))
        assert ep.plugin_variance(fixed_menu, s, linear_env) == 0.0625

    def test_empty_menu(self, linear_env):
        s = ep.Sample(np.array([0.2, 0.5, 0.9]))
        assert ep.plugin_variance(ep.Menu.empty(), s, linear_env) == 0.0


class TestBootstrapProfit:
    def test_degenerate_sample_zero_width(self, linear_env, fixed_menu):
        s = ep.Sample(np.full(8, 0.7))
        est = ep.bootstrap_ci_profit(fixed_menu, s, linear_env, 200, 0.95, 1)
        assert est.point == 0.5
        assert est.ci_low == est.ci_high == 0.5
        assert est.std_error == 0.0

    def test_bit_identical_reruns(self, linear_env, fixed_menu):
        s = ep.draw_sample(ep.Uniform(0, 1), 120, 4)
        a = ep.bootstrap_ci_profit(fixed_menu, s, linear_env, 300, 0.9, 7)
        b = ep.bootstrap_ci_profit(fixed_menu, s, linear_env, 300, 0.9, 7)
        assert a == b

    def test_interval_brackets_point(self, linear_env, fixed_menu):
        s = ep.draw_sample(ep.BetaCdf(4, 4), 200, 2)
        est = ep.bootstrap_ci_profit(fixed_menu, s, linear_env, 500, 0.95, 5)
        assert est.ci_low <= est.point <= est.ci_high

    def test_width_monotone_in_level(self, linear_env, fixed_menu):
        s = ep.draw_sample(ep.Uniform(0, 1), 150, 8)
        widths = []
        for level in (0.90, 0.95, 0.99):
            est = ep.bootstrap_ci_profit(fixed_menu, s, linear_env, 400, level, 11)
            widths.append(est.ci_high - est.ci_low)
        assert widths[0] <= widths[1] <= widths[2]

    def test_validation(self, linear_env, fixed_menu):
        s = ep.Sample(np.array([0.5]))
        with pytest.raises(ValueError):
            ep.bootstrap_ci_profit(fixed_menu, s, linear_env, 50, 0.95, 1)
        with pytest.raises(ValueError):
            ep.bootstrap_ci_profit(fixed_menu, s, linear_env, 200, 1.2, 1)

    def test_percentile_flag(self, linear_env, fixed_menu):
        s = ep.draw_sample(ep.Uniform(0, 1), 100, 3)
        est = ep.bootstrap_ci_profit(fixed_menu, s, linear_env, 300, 0.9, 9, percentile=True)
        assert est.method is ep.CiMethod.PERCENTILE_BOOTSTRAP
        assert est.ci_low <= est.ci_high

    def test_plugin_agreement_with_bootstrap_se(self, linear_env, fixed_menu):
        for seed, (a, b) in enumerate([(0.25, 0.25), (1.0, 1.0), (4.0, 4.0)]):
            s = ep.draw_sample(ep.BetaCdf(a, b), 500, 100 + seed)
            est = ep.bootstrap_ci_profit(fixed_menu, s, linear_env, 1000, 0.95, seed)
            plugin_se = math.sqrt(ep.plugin_variance(fixed_menu, s, linear_env) / s.n)
            assert est.std_error == pytest.approx(plugin_se, rel=0.15)

    def test_unbiasedness_of_plugin_point(self, linear_env, fixed_menu):
        # mean of pi(m, ecdf) over 2000 samples of size 20 matches pi(m, F0)
        truth = ep.expected_profit(fixed_menu, ep.Uniform(0, 1), linear_env)
        R, n = 2000, 20
        points = np.empty(R)
        for r in range(R):
            u = ep.substream(555, r).random(n)
            w = ep.per_consumer_profit(fixed_menu, u, linear_env)
            points[r] = w.mean()
        se = points.std(ddof=1) / math.sqrt(R)
        assert abs(points.mean() - truth) <= 3 * se


class TestBootstrapOptimalProfit:
    def test_degenerate_sample(self, linear_env):
        s = ep.Sample(np.full(5, 0.7))
        est = ep.bootstrap_ci_optimal_profit(s, linear_env, 200, 0.95, 1)
        assert est.point == 0.7
        assert est.ci_low == est.ci_high == 0.7

    def test_point_matches_enumeration(self, linear_env):
        s = ep.Sample(np.array([0.3, 0.5, 0.9]))
        est = ep.bootstrap_ci_optimal_profit(s, linear_env, 100, 0.95, 1)
        assert est.point == 1.0 / 3.0

    def test_fast_resample_path_matches_solver(self, linear_env):
        # the bincount shortcut must agree with re-running the solver
        from emprice.inference import _optimal_value_stat

        s = ep.draw_sample(ep.BetaCdf(0.25, 0.25), 60, 12)
        _, stat = _optimal_value_stat(s, linear_env, "ecdf", None, None)
        gen = np.random.default_rng(0)
        for _ in range(25):
            idx = gen.integers(0, s.n, s.n)
            resample = ep.Sample(s.values[idx])
            want = ep.optimal_profit(ep.ecdf(resample), linear_env).optimal_value
            assert stat(idx) == pytest.approx(want, abs=1e-12)

    def test_interp_estimator_point(self, linear_env):
        s = ep.draw_sample(ep.Uniform(0.05, 1.0), 40, 6)
        est = ep.bootstrap_ci_optimal_profit(
            s, linear_env, 150, 0.9, 2, estimator="interp", theta_lower=0.0
        )
        want = ep.optimal_profit(ep.interp_ecdf(s, 0.0), linear_env).optimal_value
        assert est.point == want

    def test_unknown_estimator(self, linear_env):
        s = ep.Sample(np.array([0.4, 0.6]))
        with pytest.raises(ValueError):
            ep.bootstrap_ci_optimal_profit(s, linear_env, 100, 0.9, 1, estimator="spline")


class TestBootstrapCompare:
    def test_identical_menus(self, linear_env, fixed_menu):
        s = ep.draw_sample(ep.Uniform(0, 1), 80, 5)
        res = ep.bootstrap_compare(fixed_menu, fixed_menu, s, linear_env, 200, 0.95, 3)
        assert res.diff_point == 0.0
        assert res.ci_low == res.ci_high == 0.0
        assert not res.reject_equal

    def test_profitable_menu_beats_outside_option(self, linear_env, fixed_menu):
        s = ep.draw_sample(ep.Uniform(0, 1), 500, 9)
        res = ep.bootstrap_compare(fixed_menu, ep.Menu.empty(), s, linear_env, 500, 0.95, 4)
        assert res.reject_equal
        assert res.diff_point == pytest.approx(0.25, abs=0.08)

    def test_degenerate_sample(self, linear_env, fixed_menu):
        s = ep.Sample(np.full(5, 0.9))
        other = ep.Menu(((1.0, 0.8),))
        res = ep.bootstrap_compare(fixed_menu, other, s, linear_env, 200, 0.95, 3)
        assert res.ci_low == res.ci_high == pytest.approx(-0.3, abs=1e-12)


class TestBootstrapRegret:
    def test_empirically_optimal_menu_has_zero_regret(self, linear_env):
        s = ep.draw_sample(ep.Uniform(0, 1), 60, 14)
        menu_hat = ep.optimal_profit(ep.ecdf(s), linear_env).menu
        est = ep.bootstrap_ci_regret(menu_hat, s, linear_env, 150, 0.95, 2)
        assert est.point == pytest.approx(0.0, abs=1e-12)

    def test_outside_option_regret_point(self, linear_env):
        s = ep.Sample(np.array([0.3, 0.5, 0.9]))
        est = ep.bootstrap_ci_regret(ep.Menu.empty(), s, linear_env, 100, 0.95, 2)
        assert est.point == 1.0 / 3.0

    def test_degenerate_sample(self, linear_env):
        s = ep.Sample(np.full(4, 0.7))
        est = ep.bootstrap_ci_regret(ep.Menu(((1.0, 0.7),)), s, linear_env, 100, 0.95, 2)
        assert est.point == 0.0
        assert est.ci_low == est.ci_high == 0.0

    def test_shared_resample_identity(self, linear_env, fixed_menu):
        s = ep.draw_sample(ep.BetaCdf(4, 4), 90, 21)
        opt = ep.bootstrap_ci_optimal_profit(s, linear_env, 200, 0.95, 6)
        reg = ep.bootstrap_ci_regret(fixed_menu, s, linear_env, 200, 0.95, 6)
        profit_point = float(ep.per_consumer_profit(fixed_menu, s.values, linear_env).mean())
        assert reg.point == opt.point - profit_point


class TestPluginNormal:
    def test_symmetric_interval(self, linear_env, fixed_menu):
        s = ep.draw_sample(ep.Uniform(0, 1), 200, 17)
        est = ep.plugin_normal_ci(fixed_menu, s, linear_env, 0.95)
        assert est.method is ep.CiMethod.PLUGIN_NORMAL
        assert est.ci_high - est.point == pytest.approx(est.point - est.ci_low, abs=1e-15)

    def test_estimate_serialization(self, linear_env, fixed_menu):
        s = ep.draw_sample(ep.Uniform(0, 1), 50, 1)
        est = ep.bootstrap_ci_profit(fixed_menu, s, linear_env, 200, 0.95, 5)
        d = est.to_dict()
        assert d["method"] == "centered_bootstrap"
        assert d["b_draws"] == 200 and d["seed"] == 5
