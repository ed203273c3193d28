import math
from dataclasses import replace

import numpy as np
import pytest

import emprice as ep
from emprice.experiments import McConfig, McTarget, parse_distribution


def small_coverage_cfg(**kw):
    base = dict(
        distributions=("uniform",),
        sample_sizes=(40,),
        target=McTarget.FIXED_PROFIT_COVERAGE,
        replications=12,
        bootstrap_draws=150,
        levels=(0.9, 0.95),
        seed=7,
    )
    base.update(kw)
    return McConfig(**base)


class TestParseDistribution:
    def test_specs(self):
        assert isinstance(parse_distribution("uniform"), ep.Uniform)
        beta = parse_distribution("beta:0.25:0.25")
        assert isinstance(beta, ep.BetaCdf) and beta.alpha == 0.25
        pm = parse_distribution("pointmass:0.7")
        assert isinstance(pm, ep.PointMass) and pm.theta0 == 0.7

    def test_unknown(self):
        with pytest.raises(ValueError):
            parse_distribution("cauchy")


class TestTrueValues:
    def test_uniform(self, linear_env):
        pi_true, opt_true = ep.true_values("uniform", ep.Menu(((1.0, 0.5),)), linear_env)
        assert pi_true == pytest.approx(0.25, abs=1e-12)
        assert opt_true == pytest.approx(0.25, abs=1e-9)

    @pytest.mark.parametrize("spec", ["beta:4:4", "beta:0.25:0.25"])
    def test_symmetric_betas_at_half_price(self, spec, linear_env):
        pi_true, _ = ep.true_values(spec, ep.Menu(((1.0, 0.5),)), linear_env)
        assert pi_true == pytest.approx(0.25, abs=1e-9)

    def test_non_analytic_rejected(self, linear_env):
        F = ep.ecdf(ep.Sample(np.array([0.5])))
        with pytest.raises(ep.EmpriceError):
            ep.true_values(F, ep.Menu(((1.0, 0.5),)), linear_env)


class TestRunCoverage:
    def test_deterministic_given_seed(self):
        cfg = small_coverage_cfg()
        assert ep.run_coverage(cfg).to_csv() == ep.run_coverage(cfg).to_csv()

    def test_point_mass_full_coverage(self):
        cfg = small_coverage_cfg(distributions=("pointmass:0.7",))
        res = ep.run_coverage(cfg)
        assert all(row.value == 1.0 for row in res.rows)
        assert all(row.mc_se == 0.0 for row in res.rows)

    def test_optimal_target_point_mass(self):
        cfg = small_coverage_cfg(
            distributions=("pointmass:0.7",), target=McTarget.OPTIMAL_PROFIT_COVERAGE
        )
        res = ep.run_coverage(cfg)
        assert all(row.value == 1.0 for row in res.rows)

    def test_worker_count_invariance(self):
        cfg = small_coverage_cfg(distributions=("uniform", "beta:4:4"))
        csv1 = ep.run_coverage(cfg).to_csv()
        csv2 = ep.run_coverage(replace(cfg, workers=2)).to_csv()
        csv8 = ep.run_coverage(replace(cfg, workers=8)).to_csv()
        assert csv1 == csv2 == csv8

    def test_mc_se_is_binomial(self):
        res = ep.run_coverage(small_coverage_cfg())
        for row in res.rows:
            want = math.sqrt(row.value * (1 - row.value) / 12)
            assert row.mc_se == pytest.approx(want, abs=1e-15)

    def test_matches_public_bootstrap_call(self):
        # replication r of cell (d, i) must reproduce bootstrap_ci_profit with
        # the tuple seed (seed, d, i, r)
        cfg = small_coverage_cfg()
        env = cfg.environment()
        F = parse_distribution("uniform")
        r = 5
        u = ep.substream(cfg.seed, 0, 0, r).random(40)
        sample = ep.Sample(F.quantile_array(u))
        est = ep.bootstrap_ci_profit(
            cfg.fixed_menu, sample, env, cfg.bootstrap_draws, 0.9, seed=(cfg.seed, 0, 0, r)
        )
        truth, _ = ep.true_values(F, cfg.fixed_menu, env)
        from emprice.experiments import _coverage_chunk

        counts = _coverage_chunk(("uniform", 40, 0, 0, r, r + 1, cfg))
        assert counts[0] == int(est.ci_low <= truth <= est.ci_high)

    def test_rejects_regret_target(self):
        cfg = small_coverage_cfg()
        with pytest.raises(ValueError):
            ep.run_regret(cfg)


class TestRunRegret:
    def test_deterministic_and_nonnegative(self):
        cfg = McConfig(
            distributions=("uniform", "beta:4:4"),
            sample_sizes=(20, 60),
            target=McTarget.REGRET_SHARE,
            replications=40,
            seed=11,
        )
        res1, res2 = ep.run_regret(cfg), ep.run_regret(cfg)
        assert res1.to_csv() == res2.to_csv()
        for row in res1.rows:
            assert row.value >= 0.0
            assert row.level is None

    def test_every_replication_share_nonnegative(self):
        from emprice.experiments import _regret_chunk

        cfg = McConfig(("beta:0.25:0.25",), (25,), McTarget.REGRET_SHARE, replications=30, seed=5)
        shares = _regret_chunk(("beta:0.25:0.25", 25, 0, 0, 0, 30, cfg))
        assert np.all(shares >= -1e-12)

    def test_point_mass_zero_regret(self):
        cfg = McConfig(("pointmass:0.7",), (5,), McTarget.REGRET_SHARE, replications=10, seed=2)
        res = ep.run_regret(cfg)
        assert res.rows[0].value == 0.0

    def test_worker_count_invariance(self):
        cfg = McConfig(("uniform",), (30,), McTarget.REGRET_SHARE, replications=24, seed=9)
        assert ep.run_regret(cfg).to_csv() == ep.run_regret(replace(cfg, workers=3)).to_csv()


class TestCsvSchemas:
    def test_coverage_header(self):
        res = ep.run_coverage(small_coverage_cfg())
        assert res.to_csv().splitlines()[0] == "dist,n,level,R,B,coverage,mc_se,seed"

    def test_regret_header(self):
        cfg = McConfig(("uniform",), (10,), McTarget.REGRET_SHARE, replications=5, seed=1)
        assert ep.run_regret(cfg).to_csv().splitlines()[0] == "dist,n,R,mean_regret_share,mc_se,seed"

    def test_csv_written_to_file(self, tmp_path):
        res = ep.run_coverage(small_coverage_cfg())
        path = tmp_path / "out.csv"
        res.write_csv(path)
        assert path.read_text() == res.to_csv()


class TestConfigValidation:
    def test_bad_levels(self):
        with pytest.raises(ValueError):
            small_coverage_cfg(levels=(0.9, 1.5))

    def test_bad_replications(self):
        with pytest.raises(ValueError):
            small_coverage_cfg(replications=0)

    def test_regret_allows_small_bootstrap(self):
        McConfig(("uniform",), (10,), McTarget.REGRET_SHARE, replications=2, bootstrap_draws=0, seed=1)
