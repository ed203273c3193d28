"""Menus, consumer choice, and the expected-profit functional.

A menu is a finite set of (quantity, price) items; the outside option (0, 0)
is always available. A consumer of type theta picks a utility-maximizing item,
with ties broken in favor of the firm (highest price minus cost), then by
lowest quantity. Supermodularity of the valuation makes the chosen quantity
nondecreasing in theta, so the choice regions are intervals: expected profit
against any distribution reduces to locating the indifference thresholds
(closed form in the linear environment, bisection to 1e-12 otherwise) and
summing item margins weighted by the distribution's mass on each region, with
an atom sitting exactly on a threshold assigned to the firm-preferred side.

Payments come from the standard envelope characterization: for a nondecreasing
allocation x(.) with x(theta_min) = 0,

    p(theta) = v(theta, x(theta)) - int_{theta_min}^{theta} v1(s, x(s)) ds,

which is constant on each constant segment of x and therefore yields one menu
item per distinct quantity level.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .distributions import Cdf, EmpiricalStep
from .environment import Environment, MarketKind
from .errors import InvalidMenuError

__all__ = [
    "Menu",
    "Allocation",
    "ChoiceOutcome",
    "consumer_choice",
    "per_consumer_profit",
    "expected_profit",
    "menu_from_allocation",
    "menu_to_dict",
    "menu_from_dict",
    "read_menu",
    "write_menu",
]

_THRESH_TOL = 1e-12


@dataclass(frozen=True)
class Menu:
    """Finite list of (quantity, price) items; (0, 0) is implicit."""

    items: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        cleaned = []
        seen = set()
        for it in self.items:
            x, p = float(it[0]), float(it[1])
            if x < 0 or p < 0 or not (np.isfinite(x) and np.isfinite(p)):
                raise InvalidMenuError(f"menu item ({x}, {p}) outside quantity/price domain")
            if p == 0.0 and x > 0.0:
                raise InvalidMenuError("free items with positive quantity are not allowed")
            if x == 0.0 and p == 0.0:
                continue  # the outside option is implicit
            if (x, p) not in seen:
                seen.add((x, p))
                cleaned.append((x, p))
        object.__setattr__(self, "items", tuple(sorted(cleaned)))

    @classmethod
    def empty(cls) -> "Menu":
        return cls(())

    @classmethod
    def uniform_price(cls, price: float, quantity: float = 1.0) -> "Menu":
        return cls(((quantity, price),))


@dataclass(frozen=True)
class Allocation:
    """Step allocation: quantity quantities[i] on [breakpoints[i], breakpoints[i+1])."""

    breakpoints: tuple[float, ...]
    quantities: tuple[float, ...]

    def __post_init__(self) -> None:
        b = tuple(float(x) for x in self.breakpoints)
        q = tuple(float(x) for x in self.quantities)
        if len(b) != len(q):
            raise ValueError("one quantity per breakpoint required")
        if any(b2 <= b1 for b1, b2 in zip(b, b[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(q2 < q1 for q1, q2 in zip(q, q[1:])) or (q and q[0] < 0):
            raise ValueError("quantities must be nonnegative and nondecreasing")
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "quantities", q)


@dataclass(frozen=True)
class ChoiceOutcome:
    quantity: float
    price: float
    utility: float


def _profit_of(x: float, p: float, env: Environment) -> float:
    return p - float(np.asarray(env.cost(x)))


def consumer_choice(menu: Menu, theta: float, env: Environment) -> ChoiceOutcome:
    """Utility-maximizing item; ties to the firm, then to the lowest quantity."""
    best = (0.0, 0.0)
    best_u = 0.0
    best_profit = _profit_of(0.0, 0.0, env)
    for x, p in menu.items:
        u = float(np.asarray(env.valuation(theta, x))) - p
        profit = _profit_of(x, p, env)
        if u > best_u or (u == best_u and (profit > best_profit or (profit == best_profit and x < best[0]))):
            best, best_u, best_profit = (x, p), u, profit
    return ChoiceOutcome(best[0], best[1], best_u)


def _validate_menu(menu: Menu, env: Environment) -> None:
    for x, _ in menu.items:
        if x > env.x_max + 1e-12:
            raise InvalidMenuError(f"menu quantity {x} exceeds x_max {env.x_max}")


def _crossing(env: Environment, x_lo, p_lo, x_hi, p_hi) -> float | None:
    """Smallest type at which (x_hi, p_hi) is weakly preferred to (x_lo, p_lo).

    The utility difference is nondecreasing in theta (supermodularity), so it
    crosses zero at most once on the type space. None means never.
    """
    lo, hi = env.types.lower, env.types.upper
    if env.kind is MarketKind.LINEAR_UNIT_DEMAND:
        t = (p_hi - p_lo) / (x_hi - x_lo)
        if t > hi:
            return None
        return max(t, lo)

    def gap(th: float) -> float:
        return float(np.asarray(env.valuation(th, x_hi)) - np.asarray(env.valuation(th, x_lo))) - (p_hi - p_lo)

    if gap(hi) < 0.0:
        return None
    if gap(lo) >= 0.0:
        return lo
    a, b = lo, hi
    while b - a > _THRESH_TOL:
        m = 0.5 * (a + b)
        if gap(m) >= 0.0:
            b = m
        else:
            a = m
    return b


def _choice_ladder(menu: Menu, env: Environment) -> tuple[list[tuple[float, float]], list[float]]:
    """Active items in increasing quantity with their activation thresholds.

    Returns (items, thresholds): items[0] is the outside option active from
    theta_min; items[k] (k >= 1) is chosen on (thresholds[k-1], thresholds[k]).
    """
    _validate_menu(menu, env)
    # per quantity keep the cheapest item; pricier duplicates are never chosen
    best_by_x: dict[float, float] = {}
    for x, p in menu.items:
        if x > 0.0 and (x not in best_by_x or p < best_by_x[x]):
            best_by_x[x] = p
    ladder: list[tuple[float, float]] = [(0.0, 0.0)]
    thresholds: list[float] = []
    for x in sorted(best_by_x):
        p = best_by_x[x]
        while True:
            t = _crossing(env, ladder[-1][0], ladder[-1][1], x, p)
            if t is None:
                break
            prev_t = thresholds[-1] if thresholds else env.types.lower
            if len(ladder) > 1 and t <= prev_t:
                ladder.pop()
                thresholds.pop()
                continue
            ladder.append((x, p))
            thresholds.append(t)
            break
    return ladder, thresholds


def per_consumer_profit(menu: Menu, thetas: np.ndarray, env: Environment) -> np.ndarray:
    """Vectorized firm profit p - c(x) at each consumer's chosen item."""
    ladder, thresholds = _choice_ladder(menu, env)
    th = np.asarray(thetas, dtype=float)
    margins = np.asarray([_profit_of(x, p, env) for x, p in ladder])
    if not thresholds:
        return np.zeros(th.shape, dtype=float)
    tarr = np.asarray(thresholds)
    idx = np.searchsorted(tarr, th, side="right")
    # types sitting exactly on a threshold go to the firm-preferred side
    on_edge = np.nonzero(np.isin(th, tarr))[0]
    for i in on_edge:
        k = int(idx[i])
        if k >= 1 and margins[k - 1] >= margins[k]:
            idx[i] = k - 1
    return margins[idx]


def expected_profit(menu: Menu, F: Cdf, env: Environment) -> float:
    """Expected firm profit of the menu against type distribution F.

    Exact average over the observations for an empirical step distribution;
    exact interval/atom integration over the choice regions otherwise.
    """
    if isinstance(F, EmpiricalStep):
        return float(per_consumer_profit(menu, F.sample.values, env).mean())

    ladder, thresholds = _choice_ladder(menu, env)
    if not thresholds:
        return 0.0
    margins = [_profit_of(x, p, env) for x, p in ladder]
    t = np.asarray(thresholds)
    right = F.cdf_array(t)
    left = F.cdf_left_array(t)

    total = 0.0
    # open-interval masses: item k >= 1 is chosen on (t_k, t_{k+1})
    for k in range(1, len(ladder)):
        upper = left[k] if k < len(thresholds) else 1.0
        total += margins[k] * (upper - right[k - 1])
    # atoms at thresholds: firm-favored assignment between the two neighbors
    for k in range(len(thresholds)):
        mass = right[k] - left[k]
        if mass > 0.0:
            total += mass * max(margins[k], margins[k + 1])
    return total


def menu_from_allocation(allocation: Allocation, env: Environment) -> Menu:
    """Menu implementing a step allocation via the envelope payment formula.

    On a constant segment the information-rent integral telescopes into
    valuation increments, so each distinct quantity level gets the price
    p_k = v(t_k, q_k) - sum_{j<k} [v(t_{j+1}, q_j) - v(t_j, q_j)].
    """
    bps = list(allocation.breakpoints)
    qs = list(allocation.quantities)
    # merge consecutive equal quantity levels and drop leading zeros
    merged: list[tuple[float, float]] = []
    for b, q in zip(bps, qs):
        if merged and q == merged[-1][1]:
            continue
        merged.append((b, q))
    merged = [(b, q) for b, q in merged if q > 0.0]
    if not merged:
        return Menu.empty()

    def v(th: float, x: float) -> float:
        return float(np.asarray(env.valuation(th, x)))

    items = []
    rent = 0.0  # accumulated information rent of lower levels
    for k, (b, q) in enumerate(merged):
        price = v(b, q) - rent
        items.append((q, price))
        upper = merged[k + 1][0] if k + 1 < len(merged) else env.types.upper
        rent += v(upper, q) - v(b, q)
    return Menu(tuple(items))


# ---------------------------------------------------------------------------
# JSON serialization: {"items": [{"x": .., "p": ..}, ...]}
# ---------------------------------------------------------------------------

def menu_to_dict(menu: Menu) -> dict:
    return {"items": [{"x": x, "p": p} for x, p in menu.items]}


def menu_from_dict(payload: dict) -> Menu:
    try:
        items = tuple((float(it["x"]), float(it["p"])) for it in payload["items"])
    except (KeyError, TypeError) as exc:
        raise InvalidMenuError(f"malformed menu payload: {exc}") from exc
    return Menu(items)


def read_menu(path: str | Path) -> Menu:
    return menu_from_dict(json.loads(Path(path).read_text()))


def write_menu(path: str | Path, menu: Menu) -> None:
    Path(path).write_text(json.dumps(menu_to_dict(menu), indent=2) + "\n")
