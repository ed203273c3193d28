"""Plug-in and bootstrap inference for expected profit, optimal profit, regret.

The plug-in point estimate of profit under a fixed menu is the sample average
of per-consumer profit w(theta_i); because the profit functional is linear in
the distribution, its influence function is w(theta) - profit, so the
asymptotic variance is Var(w) and the plug-in variance estimator is the sample
variance of the w_i.

Confidence intervals come from the classical n-of-n bootstrap: draw b
resamples of the n observations with uniform weights, form the recentered
root G_b = sqrt(n) * (stat(resample) - stat(sample)), and invert its empirical
quantiles (type-7 interpolation) around the point estimate ("centered"
interval; a percentile interval is available behind a flag). Optimal profit
has no consistent plug-in variance, so it is bootstrap-only: the same scheme
with the solver's value replacing the fixed-menu profit.

Resample b of a call seeded with s draws its indices from the stream keyed by
(*path(s), b), so outer Monte Carlo replications can run in parallel on
disjoint streams; comparisons and regret bootstrap both statistics on shared
resamples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import stats as sp_stats

from .distributions import PiecewiseLinear, Sample
from .environment import Environment, MarketKind
from .estimators import ecdf, interp_ecdf
from .mechanisms import Menu, per_consumer_profit
from .rng import seed_path, substream
from .solvers import optimal_profit

__all__ = [
    "CiMethod",
    "ProfitEstimate",
    "ComparisonResult",
    "plugin_variance",
    "plugin_normal_ci",
    "bootstrap_ci_profit",
    "bootstrap_ci_optimal_profit",
    "bootstrap_compare",
    "bootstrap_ci_regret",
]


class CiMethod(Enum):
    PLUGIN_NORMAL = "plugin_normal"
    CENTERED_BOOTSTRAP = "centered_bootstrap"
    PERCENTILE_BOOTSTRAP = "percentile_bootstrap"


@dataclass(frozen=True)
class ProfitEstimate:
    point: float
    std_error: float
    ci_low: float
    ci_high: float
    level: float
    method: CiMethod
    b_draws: int
    seed: int | tuple[int, ...] | None

    def to_dict(self) -> dict:
        return {
            "point": self.point,
            "std_error": self.std_error,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "level": self.level,
            "method": self.method.value,
            "b_draws": self.b_draws,
            "seed": list(self.seed) if isinstance(self.seed, tuple) else self.seed,
        }


@dataclass(frozen=True)
class ComparisonResult:
    diff_point: float
    ci_low: float
    ci_high: float
    level: float
    reject_equal: bool

    def to_dict(self) -> dict:
        return {
            "diff_point": self.diff_point,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "level": self.level,
            "reject_equal": self.reject_equal,
        }


def _check_bootstrap_args(b_draws: int, level: float) -> None:
    if b_draws < 100:
        raise ValueError("bootstrap needs at least 100 draws")
    if not 0.0 < level < 1.0:
        raise ValueError("confidence level must lie in (0, 1)")


def _bootstrap_roots(stat_of_idx, n: int, b_draws: int, path: tuple[int, ...], point: float) -> np.ndarray:
    """G_b = sqrt(n) * (stat(resample_b) - point), one substream per draw."""
    root_n = math.sqrt(n)
    out = np.empty(b_draws)
    for b in range(b_draws):
        idx = substream(*path, b).integers(0, n, size=n)
        out[b] = root_n * (stat_of_idx(idx) - point)
    return out


def _interval(point: float, roots: np.ndarray, level: float, n: int, percentile: bool) -> tuple[float, float]:
    alpha = 1.0 - level
    q_lo, q_hi = np.quantile(roots, [alpha / 2.0, 1.0 - alpha / 2.0])
    root_n = math.sqrt(n)
    if percentile:
        return point + q_lo / root_n, point + q_hi / root_n
    return point - q_hi / root_n, point - q_lo / root_n


def plugin_variance(menu: Menu, sample: Sample, env: Environment) -> float:
    """Plug-in asymptotic variance: sample variance of per-consumer profit."""
    w = per_consumer_profit(menu, sample.values, env)
    return float(np.var(w))


def plugin_normal_ci(menu: Menu, sample: Sample, env: Environment, level: float = 0.95) -> ProfitEstimate:
    """Normal interval from the plug-in variance (fixed menus only)."""
    if not 0.0 < level < 1.0:
        raise ValueError("confidence level must lie in (0, 1)")
    w = per_consumer_profit(menu, sample.values, env)
    point = float(w.mean())
    se = math.sqrt(plugin_variance(menu, sample, env) / sample.n)
    z = float(sp_stats.norm.ppf(1.0 - (1.0 - level) / 2.0))
    return ProfitEstimate(point, se, point - z * se, point + z * se, level, CiMethod.PLUGIN_NORMAL, 0, None)


def bootstrap_ci_profit(
    menu: Menu,
    sample: Sample,
    env: Environment,
    b_draws: int = 1000,
    level: float = 0.95,
    seed: int | tuple[int, ...] = 0,
    percentile: bool = False,
) -> ProfitEstimate:
    """Bootstrap interval for expected profit under a fixed menu."""
    _check_bootstrap_args(b_draws, level)
    w = per_consumer_profit(menu, sample.values, env)
    point = float(w.mean())
    path = seed_path(seed)
    roots = _bootstrap_roots(lambda idx: w[idx].mean(), sample.n, b_draws, path, point)
    lo, hi = _interval(point, roots, level, sample.n, percentile)
    se = float(roots.std(ddof=1)) / math.sqrt(sample.n)
    method = CiMethod.PERCENTILE_BOOTSTRAP if percentile else CiMethod.CENTERED_BOOTSTRAP
    return ProfitEstimate(point, se, float(lo), float(hi), level, method, b_draws, seed)


def _optimal_value_stat(sample: Sample, env: Environment, estimator: str, theta_lower: float | None, grid_size: int | None):
    """(point, stat_of_indices) for the optimal-profit functional."""
    values = sample.values
    n = values.size
    if estimator == "ecdf":
        point = optimal_profit(ecdf(sample), env, grid_size).optimal_value
        if env.kind is MarketKind.LINEAR_UNIT_DEMAND:
            c_bar, x_max = float(env.c_bar), float(env.x_max)
            margins = x_max * (values - c_bar)

            def stat(idx: np.ndarray) -> float:
                counts = np.bincount(idx, minlength=n)
                tails = np.cumsum(counts[::-1])[::-1]
                # the maximizer over resample support equals the max over all
                # original order statistics, zero-count prices included
                return max(float(np.max(margins * (tails / n))), 0.0)

            return point, stat

        def stat(idx: np.ndarray) -> float:
            return optimal_profit(ecdf(Sample(values[idx])), env, grid_size).optimal_value

        return point, stat

    if estimator == "interp":
        lower = env.types.lower if theta_lower is None else float(theta_lower)

        def interp_of(vals: np.ndarray) -> PiecewiseLinear:
            # resamples carry ties; interpolate through the distinct order
            # statistics at their ECDF heights (the continuous extension)
            distinct, counts = np.unique(vals, return_counts=True)
            probs = np.concatenate([[0.0], np.cumsum(counts)]) / vals.size
            return PiecewiseLinear(np.concatenate([[lower], distinct]), probs)

        point = optimal_profit(interp_ecdf(sample, lower), env, grid_size).optimal_value

        def stat(idx: np.ndarray) -> float:
            return optimal_profit(interp_of(values[idx]), env, grid_size).optimal_value

        return point, stat

    raise ValueError(f"unknown estimator {estimator!r}; use 'ecdf' or 'interp'")


def bootstrap_ci_optimal_profit(
    sample: Sample,
    env: Environment,
    b_draws: int = 1000,
    level: float = 0.95,
    seed: int | tuple[int, ...] = 0,
    estimator: str = "ecdf",
    theta_lower: float | None = None,
    percentile: bool = False,
    grid_size: int | None = None,
) -> ProfitEstimate:
    """Bootstrap interval for the optimal expected profit (bootstrap-only:
    there is no consistent plug-in variance for this functional)."""
    _check_bootstrap_args(b_draws, level)
    point, stat = _optimal_value_stat(sample, env, estimator, theta_lower, grid_size)
    path = seed_path(seed)
    roots = _bootstrap_roots(stat, sample.n, b_draws, path, point)
    lo, hi = _interval(point, roots, level, sample.n, percentile)
    se = float(roots.std(ddof=1)) / math.sqrt(sample.n)
    method = CiMethod.PERCENTILE_BOOTSTRAP if percentile else CiMethod.CENTERED_BOOTSTRAP
    return ProfitEstimate(float(point), se, float(lo), float(hi), level, method, b_draws, seed)


def bootstrap_compare(
    menu_a: Menu,
    menu_b: Menu,
    sample: Sample,
    env: Environment,
    b_draws: int = 1000,
    level: float = 0.95,
    seed: int | tuple[int, ...] = 0,
    percentile: bool = False,
) -> ComparisonResult:
    """Bootstrap the profit difference pi(A) - pi(B) on shared resamples."""
    _check_bootstrap_args(b_draws, level)
    wa = per_consumer_profit(menu_a, sample.values, env)
    wb = per_consumer_profit(menu_b, sample.values, env)
    diff = wa - wb
    point = float(diff.mean())
    path = seed_path(seed)
    roots = _bootstrap_roots(lambda idx: diff[idx].mean(), sample.n, b_draws, path, point)
    lo, hi = _interval(point, roots, level, sample.n, percentile)
    return ComparisonResult(point, float(lo), float(hi), level, not (lo <= 0.0 <= hi))


def bootstrap_ci_regret(
    menu: Menu,
    sample: Sample,
    env: Environment,
    b_draws: int = 1000,
    level: float = 0.95,
    seed: int | tuple[int, ...] = 0,
    estimator: str = "ecdf",
    theta_lower: float | None = None,
    percentile: bool = False,
    grid_size: int | None = None,
) -> ProfitEstimate:
    """Bootstrap interval for regret = optimal profit - profit of the menu,
    with both functionals evaluated on shared resamples."""
    _check_bootstrap_args(b_draws, level)
    w = per_consumer_profit(menu, sample.values, env)
    opt_point, opt_stat = _optimal_value_stat(sample, env, estimator, theta_lower, grid_size)
    point = float(opt_point - w.mean())
    path = seed_path(seed)
    roots = _bootstrap_roots(lambda idx: opt_stat(idx) - w[idx].mean(), sample.n, b_draws, path, point)
    lo, hi = _interval(point, roots, level, sample.n, percentile)
    se = float(roots.std(ddof=1)) / math.sqrt(sample.n)
    method = CiMethod.PERCENTILE_BOOTSTRAP if percentile else CiMethod.CENTERED_BOOTSTRAP
    return ProfitEstimate(point, se, float(lo), float(hi), level, method, b_draws, seed)
