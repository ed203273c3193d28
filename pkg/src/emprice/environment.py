"""Economic primitives: type space, valuation/cost structure, Lipschitz constant.

A consumer of type theta who buys quantity x at price p gets utility
``v(theta, x) - p``. The model assumes, on the rectangle Theta x [0, x_max]:
v(theta_min, x) = v(theta, 0) = 0, v nondecreasing in both arguments and
supermodular; the cost c is nondecreasing, convex, with c(0) = 0. These
assumptions are what make menu profit Lipschitz in the type distribution with
constant

    L = 2 * ( v(theta_max, x_max)
              + (theta_max - theta_min) * max_theta v1(theta, x_max)
              + c(x_max) )

where v1 is the partial derivative of v in theta.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
import math

import numpy as np

from .errors import InvalidEnvironmentError

__all__ = [
    "TypeSpace",
    "MarketKind",
    "Environment",
    "AssumptionCheck",
    "ValidationReport",
    "linear_unit_demand",
    "separable_screening",
    "environment_from_config",
    "validate_environment",
    "lipschitz_constant",
]

_CHECK_TOL = 1e-9


@dataclass(frozen=True)
class TypeSpace:
    """Closed interval of consumer types [lower, upper]."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise InvalidEnvironmentError("type space bounds must be finite")
        if not 0.0 <= self.lower < self.upper:
            raise InvalidEnvironmentError(
                f"type space requires 0 <= lower < upper, got [{self.lower}, {self.upper}]"
            )

    @property
    def width(self) -> float:
        return self.upper - self.lower


class MarketKind(Enum):
    """Analytic structure tag that tells the solvers which closed form applies."""

    LINEAR_UNIT_DEMAND = "linear_unit_demand"
    SEPARABLE_SCREENING = "separable_screening"


@dataclass(frozen=True)
class Environment:
    """Market primitives: types, quantity range, valuation v, v1, and cost.

    ``valuation`` and ``valuation_d_theta`` must accept numpy arrays in either
    argument. ``c_bar`` is the unit cost for the linear kind (None otherwise).
    """

    types: TypeSpace
    x_max: float
    valuation: Callable[[np.ndarray, np.ndarray], np.ndarray]
    valuation_d_theta: Callable[[np.ndarray, np.ndarray], np.ndarray]
    cost: Callable[[np.ndarray], np.ndarray]
    kind: MarketKind
    c_bar: float | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x_max) and self.x_max > 0):
            raise InvalidEnvironmentError("x_max must be positive and finite")
        if self.kind is MarketKind.LINEAR_UNIT_DEMAND:
            if self.c_bar is None or self.c_bar < 0:
                raise InvalidEnvironmentError("linear kind requires c_bar >= 0")


def linear_unit_demand(
    theta_min: float = 0.0,
    theta_max: float = 1.0,
    x_max: float = 1.0,
    c_bar: float = 0.0,
) -> Environment:
    """Environment with v(theta, x) = theta * x and linear cost c_bar * x."""
    return Environment(
        types=TypeSpace(theta_min, theta_max),
        x_max=x_max,
        valuation=lambda th, x: np.asarray(th) * np.asarray(x),
        valuation_d_theta=lambda th, x: np.broadcast_arrays(np.asarray(th, dtype=float), np.asarray(x, dtype=float))[1].copy(),
        cost=lambda x: c_bar * np.asarray(x),
        kind=MarketKind.LINEAR_UNIT_DEMAND,
        c_bar=float(c_bar),
    )


def separable_screening(
    cost: Callable[[np.ndarray], np.ndarray],
    theta_min: float = 0.0,
    theta_max: float = 1.0,
    x_max: float = 1.0,
    valuation: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
    valuation_d_theta: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
) -> Environment:
    """Screening environment with multiplicatively separable valuation.

    Defaults to v(theta, x) = theta * x; pass both ``valuation`` and
    ``valuation_d_theta`` to override.
    """
    if (valuation is None) != (valuation_d_theta is None):
        raise InvalidEnvironmentError("valuation and valuation_d_theta must be supplied together")
    if valuation is None:
        valuation = lambda th, x: np.asarray(th) * np.asarray(x)
        valuation_d_theta = lambda th, x: np.broadcast_arrays(np.asarray(th, dtype=float), np.asarray(x, dtype=float))[1].copy()
    return Environment(
        types=TypeSpace(theta_min, theta_max),
        x_max=x_max,
        valuation=valuation,
        valuation_d_theta=valuation_d_theta,
        cost=lambda x: np.asarray(cost(np.asarray(x))),
        kind=MarketKind.SEPARABLE_SCREENING,
    )


def environment_from_config(cfg: dict) -> Environment:
    """Build an environment from a plain config mapping.

    Keys: ``kind`` ("linear" | "screening"), ``theta_min``, ``theta_max``,
    ``x_max``, and either ``c_bar`` (linear) or ``cost`` = {"scale": a,
    "power": p} meaning c(x) = a * x**p (screening).
    """
    kind = cfg.get("kind", "linear")
    theta_min = float(cfg.get("theta_min", 0.0))
    theta_max = float(cfg.get("theta_max", 1.0))
    x_max = float(cfg.get("x_max", 1.0))
    if kind == "linear":
        return linear_unit_demand(theta_min, theta_max, x_max, float(cfg.get("c_bar", 0.0)))
    if kind == "screening":
        spec = cfg.get("cost", {"scale": 0.5, "power": 2.0})
        scale, power = float(spec["scale"]), float(spec["power"])
        if scale < 0 or power < 1:
            raise InvalidEnvironmentError("screening cost needs scale >= 0 and power >= 1 for convexity")
        return separable_screening(
            cost=lambda x, a=scale, p=power: a * np.asarray(x) ** p,
            theta_min=theta_min,
            theta_max=theta_max,
            x_max=x_max,
        )
    raise InvalidEnvironmentError(f"unknown environment kind {kind!r}")


@dataclass(frozen=True)
class AssumptionCheck:
    name: str
    passed: bool
    worst_point: tuple[float, ...]
    worst_value: float


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[AssumptionCheck, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[AssumptionCheck]:
        return [c for c in self.checks if not c.passed]


def _grid_check(name, values, points, tol=_CHECK_TOL) -> AssumptionCheck:
    # values >= -tol everywhere means the inequality holds on the grid
    values = np.asarray(values, dtype=float)
    k = int(np.argmin(values))
    worst = float(values.flat[k])
    pt = points[np.unravel_index(k, values.shape)] if values.ndim > 1 else points[k]
    if not isinstance(pt, tuple):
        pt = (float(pt),)
    return AssumptionCheck(name, worst >= -tol, pt, worst)


def validate_environment(env: Environment, grid_size: int = 50) -> ValidationReport:
    """Check the model assumptions on a grid; violations are reported, not raised."""
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    th = np.linspace(env.types.lower, env.types.upper, grid_size)
    xs = np.linspace(0.0, env.x_max, grid_size)
    tg, xg = np.meshgrid(th, xs, indexing="ij")
    v = np.asarray(env.valuation(tg, xg), dtype=float)
    c = np.asarray(env.cost(xs), dtype=float)

    pts_tx = np.empty(tg.shape, dtype=object)
    for i in range(grid_size):
        for j in range(grid_size):
            pts_tx[i, j] = (float(th[i]), float(xs[j]))

    checks = [
        _grid_check("valuation_zero_at_lowest_type", -np.abs(v[0, :]), xs),
        _grid_check("valuation_zero_at_zero_quantity", -np.abs(v[:, 0]), th),
        _grid_check("valuation_nondecreasing_in_type", np.diff(v, axis=0), pts_tx[:-1, :]),
        _grid_check("valuation_nondecreasing_in_quantity", np.diff(v, axis=1), pts_tx[:, :-1]),
        # cross differences: v(t+,x+) - v(t+,x) - v(t,x+) + v(t,x) >= 0
        _grid_check("valuation_supermodular", np.diff(np.diff(v, axis=0), axis=1), pts_tx[:-1, :-1]),
        _grid_check("cost_zero_at_zero", np.array([-abs(c[0])]), xs[:1]),
        _grid_check("cost_nondecreasing", np.diff(c), xs[:-1]),
        _grid_check("cost_convex", np.diff(c, 2), xs[1:-1]),
    ]
    return ValidationReport(tuple(checks))


def lipschitz_constant(env: Environment, grid_size: int = 1000) -> float:
    """Menu-independent Lipschitz constant of profit in the type distribution.

    The max of v1(., x_max) is exact for the linear kind (v1 is constant in
    theta) and is otherwise taken over a dense grid of at least 1000 points.
    """
    report = validate_environment(env, grid_size=32)
    if not report.passed:
        names = ", ".join(c.name for c in report.failures())
        raise InvalidEnvironmentError(f"environment fails assumption checks: {names}")
    ts = env.types
    v_top = float(np.asarray(env.valuation(ts.upper, env.x_max)))
    c_top = float(np.asarray(env.cost(env.x_max)))
    if env.kind is MarketKind.LINEAR_UNIT_DEMAND:
        v1_max = float(env.x_max)
    else:
        th = np.linspace(ts.lower, ts.upper, max(int(grid_size), 1000) + 1)
        v1_max = float(np.max(np.asarray(env.valuation_d_theta(th, env.x_max))))
    return 2.0 * (v_top + ts.width * v1_max + c_top)
