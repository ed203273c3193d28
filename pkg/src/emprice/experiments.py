"""Monte Carlo harness: coverage of bootstrap intervals and regret-share curves.

Replication r of cell (distribution d, sample size i) draws its sample from
the stream keyed by (seed, d, i, r) and hands (seed, d, i, r) to the bootstrap
as its seed tuple, so every replication owns a disjoint family of streams and
results are byte-identical for any worker count. All floating-point
reductions run in replication order.

CSV schemas (17 significant digits for round-tripping):

    coverage: dist,n,level,R,B,coverage,mc_se,seed
    regret:   dist,n,R,mean_regret_share,mc_se,seed
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .distributions import BetaCdf, Cdf, EmpiricalStep, Mixture, PointMass, Sample, Uniform
from .environment import Environment, linear_unit_demand
from .errors import EmpriceError
from .inference import _bootstrap_roots, _interval, _optimal_value_stat
from .mechanisms import Menu, expected_profit, per_consumer_profit
from .rng import substream
from .solvers import optimal_profit

__all__ = [
    "McTarget",
    "McConfig",
    "McRow",
    "McResult",
    "parse_distribution",
    "distribution_label",
    "true_values",
    "run_coverage",
    "run_regret",
]


class McTarget(Enum):
    FIXED_PROFIT_COVERAGE = "coverage-fixed"
    OPTIMAL_PROFIT_COVERAGE = "coverage-optimal"
    REGRET_SHARE = "regret"


def parse_distribution(spec: str) -> Cdf:
    """Parse "uniform", "uniform:a:b", "beta:alpha:beta", "pointmass:t"."""
    parts = spec.strip().lower().split(":")
    name, args = parts[0], [float(p) for p in parts[1:]]
    if name == "uniform":
        a, b = (args + [0.0, 1.0])[:2] if args else (0.0, 1.0)
        return Uniform(a, b)
    if name == "beta":
        if len(args) < 2:
            raise ValueError("beta spec needs two shape parameters, e.g. beta:4:4")
        lo, hi = (args[2], args[3]) if len(args) >= 4 else (0.0, 1.0)
        return BetaCdf(args[0], args[1], lo, hi)
    if name == "pointmass":
        if len(args) != 1:
            raise ValueError("pointmass spec needs one location, e.g. pointmass:0.7")
        return PointMass(args[0])
    raise ValueError(f"unknown distribution spec {spec!r}")


def distribution_label(dist: str | Cdf) -> str:
    if isinstance(dist, str):
        return dist
    if isinstance(dist, Uniform):
        return f"uniform:{dist.a:g}:{dist.b:g}"
    if isinstance(dist, BetaCdf):
        return f"beta:{dist.alpha:g}:{dist.beta:g}"
    if isinstance(dist, PointMass):
        return f"pointmass:{dist.theta0:g}"
    return type(dist).__name__.lower()


def _as_cdf(dist: str | Cdf) -> Cdf:
    return parse_distribution(dist) if isinstance(dist, str) else dist


@dataclass(frozen=True)
class McConfig:
    distributions: tuple[str | Cdf, ...]
    sample_sizes: tuple[int, ...]
    target: McTarget
    replications: int = 1000
    bootstrap_draws: int = 1000
    levels: tuple[float, ...] = (0.90, 0.95, 0.99)
    seed: int = 0
    fixed_menu: Menu = field(default_factory=lambda: Menu.uniform_price(0.5))
    c_bar: float = 0.0
    theta_max: float = 1.0
    workers: int = 1

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise ValueError("need at least one replication")
        if self.bootstrap_draws < 100 and self.target is not McTarget.REGRET_SHARE:
            raise ValueError("coverage targets need at least 100 bootstrap draws")
        if any(not 0.0 < lv < 1.0 for lv in self.levels):
            raise ValueError("levels must lie in (0, 1)")
        if not self.distributions or not self.sample_sizes:
            raise ValueError("need at least one distribution and one sample size")

    def environment(self) -> Environment:
        return linear_unit_demand(0.0, self.theta_max, 1.0, self.c_bar)


@dataclass(frozen=True)
class McRow:
    distribution: str
    n: int
    level: float | None
    value: float
    mc_se: float
    seed: int


@dataclass(frozen=True)
class McResult:
    target: McTarget
    replications: int
    bootstrap_draws: int
    rows: tuple[McRow, ...]

    def to_csv(self) -> str:
        lines = []
        if self.target is McTarget.REGRET_SHARE:
            lines.append("dist,n,R,mean_regret_share,mc_se,seed")
            for r in self.rows:
                lines.append(
                    f"{r.distribution},{r.n},{self.replications},{r.value:.17g},{r.mc_se:.17g},{r.seed}"
                )
        else:
            lines.append("dist,n,level,R,B,coverage,mc_se,seed")
            for r in self.rows:
                lines.append(
                    f"{r.distribution},{r.n},{r.level:.17g},{self.replications},"
                    f"{self.bootstrap_draws},{r.value:.17g},{r.mc_se:.17g},{r.seed}"
                )
        return "\n".join(lines) + "\n"

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv())


def true_values(dist: str | Cdf, menu: Menu, env: Environment) -> tuple[float, float]:
    """(profit of the menu, optimal profit) under an analytic distribution."""
    F = _as_cdf(dist)
    if not _is_analytic(F):
        raise EmpriceError("ground-truth values need an analytic distribution")
    pi_true = expected_profit(menu, F, env)
    opt_true = optimal_profit(F, env).optimal_value
    return float(pi_true), float(opt_true)


def _is_analytic(F: Cdf) -> bool:
    if isinstance(F, (Uniform, BetaCdf, PointMass)):
        return True
    if isinstance(F, Mixture):
        return all(_is_analytic(c) for c in F.components)
    return False


def _draw_cell_samples(F: Cdf, n: int, seed: int, d_idx: int, n_idx: int, reps: range) -> np.ndarray:
    """Samples for a run of replications, one row per replication.

    Uniform draws come from each replication's own stream; the quantile
    transform is elementwise, so batching cannot change any value.
    """
    u = np.empty((len(reps), n))
    for j, r in enumerate(reps):
        u[j] = substream(seed, d_idx, n_idx, r).random(n)
    theta = F.quantile_array(u.reshape(-1)).reshape(u.shape)
    return np.sort(theta, axis=1)


def _coverage_chunk(args) -> np.ndarray:
    (spec, n, d_idx, n_idx, rep_lo, rep_hi, cfg) = args
    F = _as_cdf(spec)
    env = cfg.environment()
    truth_fixed, truth_opt = true_values(F, cfg.fixed_menu, env)
    truth = truth_fixed if cfg.target is McTarget.FIXED_PROFIT_COVERAGE else truth_opt
    reps = range(rep_lo, rep_hi)
    thetas = _draw_cell_samples(F, n, cfg.seed, d_idx, n_idx, reps)
    counts = np.zeros(len(cfg.levels), dtype=np.int64)
    for j, r in enumerate(reps):
        sample = Sample(thetas[j])
        path = (cfg.seed, d_idx, n_idx, r)
        if cfg.target is McTarget.FIXED_PROFIT_COVERAGE:
            w = per_consumer_profit(cfg.fixed_menu, sample.values, env)
            point = float(w.mean())
            roots = _bootstrap_roots(lambda idx: w[idx].mean(), n, cfg.bootstrap_draws, path, point)
        else:
            point, stat = _optimal_value_stat(sample, env, "ecdf", None, None)
            roots = _bootstrap_roots(stat, n, cfg.bootstrap_draws, path, point)
        for k, level in enumerate(cfg.levels):
            lo, hi = _interval(point, roots, level, n, percentile=False)
            if lo <= truth <= hi:
                counts[k] += 1
    return counts


def _regret_chunk(args) -> np.ndarray:
    (spec, n, d_idx, n_idx, rep_lo, rep_hi, cfg) = args
    F = _as_cdf(spec)
    env = cfg.environment()
    opt_true = optimal_profit(F, env).optimal_value
    reps = range(rep_lo, rep_hi)
    thetas = _draw_cell_samples(F, n, cfg.seed, d_idx, n_idx, reps)
    shares = np.empty(len(reps))
    for j in range(len(reps)):
        menu_hat = optimal_profit(EmpiricalStep(Sample(thetas[j])), env).menu
        realized = expected_profit(menu_hat, F, env)
        shares[j] = (opt_true - realized) / opt_true
    return shares


def _chunks(total: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, total))
    size = math.ceil(total / workers)
    return [(lo, min(lo + size, total)) for lo in range(0, total, size)]


def _map_chunks(fn, tasks, workers: int):
    if workers <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def run_coverage(cfg: McConfig) -> McResult:
    """Empirical CI coverage per (distribution, n, level)."""
    if cfg.target is McTarget.REGRET_SHARE:
        raise ValueError("run_coverage needs a coverage target")
    rows = []
    R = cfg.replications
    for d_idx, spec in enumerate(cfg.distributions):
        for n_idx, n in enumerate(cfg.sample_sizes):
            tasks = [
                (spec, n, d_idx, n_idx, lo, hi, cfg) for lo, hi in _chunks(R, cfg.workers)
            ]
            counts = sum(_map_chunks(_coverage_chunk, tasks, cfg.workers))
            for k, level in enumerate(cfg.levels):
                cov = counts[k] / R
                mc_se = math.sqrt(cov * (1.0 - cov) / R)
                rows.append(McRow(distribution_label(spec), n, level, float(cov), mc_se, cfg.seed))
    return McResult(cfg.target, R, cfg.bootstrap_draws, tuple(rows))


def run_regret(cfg: McConfig) -> McResult:
    """Mean regret share of the empirically optimal menu per (distribution, n)."""
    if cfg.target is not McTarget.REGRET_SHARE:
        raise ValueError("run_regret needs the regret-share target")
    rows = []
    R = cfg.replications
    for d_idx, spec in enumerate(cfg.distributions):
        for n_idx, n in enumerate(cfg.sample_sizes):
            tasks = [
                (spec, n, d_idx, n_idx, lo, hi, cfg) for lo, hi in _chunks(R, cfg.workers)
            ]
            shares = np.concatenate(_map_chunks(_regret_chunk, tasks, cfg.workers))
            mean = float(shares.mean())
            mc_se = float(shares.std(ddof=1) / math.sqrt(R)) if R > 1 else 0.0
            rows.append(McRow(distribution_label(spec), n, None, mean, mc_se, cfg.seed))
    return McResult(cfg.target, R, cfg.bootstrap_draws, tuple(rows))
