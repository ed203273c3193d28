"""Command-line front end.

Subcommands: estimate, solve, bound, infer, auction, simulate. Single results
are printed as JSON, experiment tables as CSV; numbers are emitted so they
round-trip to the exact library value. Exit codes: 0 success, 1 domain error
(tied sample, unsupported solver pair, ...), 2 usage or input-file error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import estimators, guarantees
from .auction import AuctionSetting, ProfitMode, auction_profit, auction_regret_guarantee, optimal_reserve
from .distributions import KernelShape, KernelSpec, read_sample
from .environment import environment_from_config
from .errors import EmpriceError


class UsageError(EmpriceError):
    """Command-line misuse; mapped to exit code 2."""
from .experiments import McConfig, McTarget, parse_distribution, run_coverage, run_regret
from .inference import (
    bootstrap_ci_optimal_profit,
    bootstrap_ci_profit,
    bootstrap_ci_regret,
    bootstrap_compare,
)
from .mechanisms import Menu, read_menu
from .solvers import optimal_profit

_KERNELS = {
    "uniform": KernelShape.UNIFORM,
    "triangle": KernelShape.TRIANGLE,
    "epanechnikov": KernelShape.EPANECHNIKOV,
}


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _env_from_args(args) -> "Environment":
    cfg = {
        "kind": args.env,
        "theta_min": args.theta_min,
        "theta_max": args.theta_max,
        "x_max": args.x_max,
    }
    if args.env == "linear":
        cfg["c_bar"] = args.cost
    else:
        cfg["cost"] = {"scale": args.cost_scale, "power": args.cost_power}
    return environment_from_config(cfg)


def _add_env_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--env", choices=["linear", "screening"], default="linear")
    p.add_argument("--cost", type=float, default=0.0, help="unit cost (linear kind)")
    p.add_argument("--cost-scale", type=float, default=0.5, help="screening cost scale a in a*x^p")
    p.add_argument("--cost-power", type=float, default=2.0, help="screening cost power p in a*x^p")
    p.add_argument("--theta-min", type=float, default=0.0)
    p.add_argument("--theta-max", type=float, default=1.0)
    p.add_argument("--x-max", type=float, default=1.0)


def _load_sample(args):
    return read_sample(args.sample, header=args.header)


def _bound_kind(args) -> guarantees.BoundKind:
    if args.kind == "dkw":
        return guarantees.DkwBound()
    if args.kind == "interp":
        return guarantees.InterpEcdfBound()
    if args.tv_bound is None or args.bandwidth is None:
        raise EmpriceError("kernel bound needs --tv-bound and --bandwidth")
    return guarantees.KernelDeterministicBound(
        args.tv_bound, KernelSpec(_KERNELS[args.kernel]), args.bandwidth
    )


def _cmd_estimate(args) -> int:
    sample = _load_sample(args)
    if args.estimator == "ecdf":
        F = estimators.ecdf(sample)
        locs, masses = F.atoms()
        knots = [[float(t), float(F.cdf(t))] for t in locs]
        payload = {"estimator": "ecdf", "n": sample.n, "knots": knots}
    elif args.estimator == "interp":
        F = estimators.interp_ecdf(sample, args.theta_min)
        payload = {
            "estimator": "interp",
            "n": sample.n,
            "knots": [[float(t), float(p)] for t, p in zip(F.thetas, F.probs)],
        }
    else:
        h = args.bandwidth if args.bandwidth is not None else estimators.default_bandwidth(sample.n)
        F = estimators.kernel_cdf(sample, KernelSpec(_KERNELS[args.kernel]), h)
        payload = {
            "estimator": "kernel",
            "n": sample.n,
            "kernel": args.kernel,
            "bandwidth": h,
            "support": list(F.support),
        }
        if args.grid_points:
            grid = np.linspace(*F.support, args.grid_points)
            payload["grid"] = [[float(t), float(v)] for t, v in zip(grid, F.cdf_array(grid))]
    _emit(payload)
    return 0


def _cmd_solve(args) -> int:
    env = _env_from_args(args)
    if args.dist is not None:
        F = parse_distribution(args.dist)
    else:
        sample = _load_sample(args)
        if args.estimator == "interp":
            F = estimators.interp_ecdf(sample, args.theta_min)
        else:
            F = estimators.ecdf(sample)
    result = optimal_profit(F, env, args.grid_size)
    payload = result.to_dict()
    if len(result.menu.items) == 1 and args.env == "linear":
        x, p = result.menu.items[0]
        payload["uniform_price"] = p / x
    _emit(payload)
    return 0


def _cmd_bound(args) -> int:
    kind = _bound_kind(args)
    if args.samples_needed:
        if args.alpha is None:
            raise EmpriceError("--samples-needed requires --alpha")
        n = guarantees.sample_complexity(kind, args.delta, args.alpha, args.lipschitz)
        _emit({
            "samples_needed": n,
            "delta": args.delta,
            "alpha": args.alpha,
            "lipschitz": args.lipschitz,
            "kind": kind.name,
        })
        return 0
    if args.lipschitz != 1.0:
        profit, regret = guarantees.regret_guarantee(kind, args.n, args.delta, args.lipschitz)
        _emit({"kind": kind.name, "profit": profit.to_dict(), "regret": regret.to_dict()})
        return 0
    bound = guarantees.deviation_bound(kind, args.n, args.delta)
    _emit({
        "kind": kind.name,
        "n": args.n,
        "delta": args.delta,
        "bound": bound,
        "lipschitz": 1.0,
        "flavor": "estimator_deviation",
    })
    return 0


def _cmd_infer(args) -> int:
    env = _env_from_args(args)
    sample = _load_sample(args)
    kwargs = dict(b_draws=args.bootstrap, level=args.level, seed=args.seed, percentile=args.percentile)
    if args.target == "profit":
        est = bootstrap_ci_profit(read_menu(args.menu), sample, env, **kwargs)
        _emit(est.to_dict())
    elif args.target == "optimal":
        est = bootstrap_ci_optimal_profit(
            sample, env, estimator=args.estimator, theta_lower=args.theta_min, **kwargs
        )
        _emit(est.to_dict())
    elif args.target == "regret":
        est = bootstrap_ci_regret(
            read_menu(args.menu), sample, env,
            estimator=args.estimator, theta_lower=args.theta_min, **kwargs,
        )
        _emit(est.to_dict())
    else:
        if args.menu_b is None:
            raise EmpriceError("--target compare requires --menu-b")
        kwargs.pop("percentile")
        res = bootstrap_compare(
            read_menu(args.menu), read_menu(args.menu_b), sample, env,
            percentile=args.percentile, **kwargs,
        )
        _emit(res.to_dict())
    return 0


def _cmd_auction(args) -> int:
    mode = ProfitMode.SECOND_ORDER_TAIL if args.mode == "tail" else ProfitMode.EXPECTED_REVENUE
    if args.bound_n is not None:
        profit, regret = auction_regret_guarantee(_bound_kind(args), args.bound_n, args.delta, args.bidders)
        _emit({"profit": profit.to_dict(), "regret": regret.to_dict()})
        return 0
    sample = _load_sample(args)
    F = estimators.interp_ecdf(sample, args.theta_min)
    setting = AuctionSetting(args.bidders, args.seller_value, F)
    if args.reserve is not None:
        _emit({
            "reserve": args.reserve,
            "value": auction_profit(args.reserve, setting, mode),
            "mode": mode.value,
            "bidders": args.bidders,
        })
        return 0
    r_star, value = optimal_reserve(setting, mode)
    _emit({"reserve": r_star, "value": value, "mode": mode.value, "bidders": args.bidders})
    return 0


def _cmd_simulate(args) -> int:
    if args.config is not None:
        raw = json.loads(Path(args.config).read_text())
        menu = Menu(tuple((it["x"], it["p"]) for it in raw.get("menu", {}).get("items", [])) or ((1.0, 0.5),))
        cfg = McConfig(
            distributions=tuple(raw["distributions"]),
            sample_sizes=tuple(int(n) for n in raw["sample_sizes"]),
            target=McTarget(raw["target"]),
            replications=int(raw.get("replications", 1000)),
            bootstrap_draws=int(raw.get("bootstrap_draws", 1000)),
            levels=tuple(float(v) for v in raw.get("levels", (0.9, 0.95, 0.99))),
            seed=int(raw["seed"]),
            fixed_menu=menu,
            c_bar=float(raw.get("c_bar", 0.0)),
            theta_max=float(raw.get("theta_max", 1.0)),
            workers=args.workers,
        )
    else:
        if args.seed is None:
            raise UsageError("simulate requires --seed (or a config file with a seed)")
        menu = read_menu(args.menu) if args.menu else Menu.uniform_price(args.menu_price)
        cfg = McConfig(
            distributions=tuple(args.dist.split(",")),
            sample_sizes=tuple(int(n) for n in args.sizes.split(",")),
            target=McTarget(args.target),
            replications=args.reps,
            bootstrap_draws=args.bootstrap,
            levels=tuple(float(v) for v in args.levels.split(",")),
            seed=args.seed,
            fixed_menu=menu,
            c_bar=args.cost,
            theta_max=args.theta_max,
            workers=args.workers,
        )
    result = run_regret(cfg) if cfg.target is McTarget.REGRET_SHARE else run_coverage(cfg)
    csv = result.to_csv()
    if args.out:
        Path(args.out).write_text(csv)
    else:
        sys.stdout.write(csv)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="emprice", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="fit a distribution estimator to a sample")
    p.add_argument("--sample", required=True)
    p.add_argument("--header", action="store_true", help="skip a header line in the sample file")
    p.add_argument("--estimator", choices=["ecdf", "interp", "kernel"], default="ecdf")
    p.add_argument("--theta-min", type=float, default=0.0)
    p.add_argument("--kernel", choices=sorted(_KERNELS), default="epanechnikov")
    p.add_argument("--bandwidth", type=float, default=None)
    p.add_argument("--grid-points", type=int, default=0)
    p.set_defaults(fn=_cmd_estimate)

    p = sub.add_parser("solve", help="optimal menu for a sample or analytic distribution")
    p.add_argument("--sample")
    p.add_argument("--header", action="store_true")
    p.add_argument("--dist", help="analytic spec, e.g. uniform or beta:4:4")
    p.add_argument("--estimator", choices=["ecdf", "interp"], default="ecdf")
    p.add_argument("--grid-size", type=int, default=None)
    _add_env_flags(p)
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("bound", help="finite-sample profit/regret guarantees")
    p.add_argument("--kind", choices=["dkw", "interp", "kernel"], default="dkw")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--lipschitz", type=float, default=1.0)
    p.add_argument("--samples-needed", action="store_true")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--tv-bound", type=float, default=None)
    p.add_argument("--kernel", choices=sorted(_KERNELS), default="epanechnikov")
    p.add_argument("--bandwidth", type=float, default=None)
    p.set_defaults(fn=_cmd_bound)

    p = sub.add_parser("infer", help="bootstrap inference on profit, optimal profit, regret")
    p.add_argument("--target", choices=["profit", "optimal", "regret", "compare"], required=True)
    p.add_argument("--sample", required=True)
    p.add_argument("--header", action="store_true")
    p.add_argument("--menu", help="menu JSON file")
    p.add_argument("--menu-b", help="second menu for --target compare")
    p.add_argument("--estimator", choices=["ecdf", "interp"], default="ecdf")
    p.add_argument("--bootstrap", type=int, default=1000)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--percentile", action="store_true")
    p.add_argument("--seed", type=int, required=True)
    _add_env_flags(p)
    p.set_defaults(fn=_cmd_infer)

    p = sub.add_parser("auction", help="reserve pricing for a single-item auction")
    p.add_argument("--sample")
    p.add_argument("--header", action="store_true")
    p.add_argument("--bidders", type=int, required=True)
    p.add_argument("--seller-value", type=float, default=0.0)
    p.add_argument("--mode", choices=["tail", "revenue"], default="revenue")
    p.add_argument("--reserve", type=float, default=None, help="evaluate this reserve instead of solving")
    p.add_argument("--theta-min", type=float, default=0.0)
    p.add_argument("--bound-n", type=int, default=None, help="emit guarantees for this sample size")
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--kind", choices=["dkw", "interp", "kernel"], default="interp")
    p.add_argument("--tv-bound", type=float, default=None)
    p.add_argument("--kernel", choices=sorted(_KERNELS), default="epanechnikov")
    p.add_argument("--bandwidth", type=float, default=None)
    p.set_defaults(fn=_cmd_auction)

    p = sub.add_parser("simulate", help="Monte Carlo coverage / regret experiments")
    p.add_argument("--config", help="JSON config file (see README for the schema)")
    p.add_argument("--target", choices=[t.value for t in McTarget], default="coverage-fixed")
    p.add_argument("--dist", default="uniform")
    p.add_argument("--sizes", default="500")
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--bootstrap", type=int, default=1000)
    p.add_argument("--levels", default="0.9,0.95,0.99")
    p.add_argument("--menu", help="fixed menu JSON file")
    p.add_argument("--menu-price", type=float, default=0.5)
    p.add_argument("--cost", type=float, default=0.0)
    p.add_argument("--theta-max", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=None, help="required unless --config supplies one")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(fn=_cmd_simulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (FileNotFoundError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EmpriceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
