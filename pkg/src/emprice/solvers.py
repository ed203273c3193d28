"""Optimal menus and the value function for the supported environment kinds.

Linear unit demand (v = theta * x, cost c_bar * x): the optimal mechanism is a
single take-it-or-leave-it offer of the full quantity, and the optimal type
threshold maximizes (rho - c_bar) * (1 - F(rho-)). For an empirical step
distribution the maximizer sits on a sample point, so exact enumeration
applies; for other distributions a 10^4-point grid (plus every atom and kink)
is refined by golden section to 1e-10.

Separable screening (v multiplicatively separable, convex cost): with an
absolutely continuous estimate with positive density, the optimal allocation
pointwise maximizes the ironed virtual surplus

    psi_bar(theta) * v(theta, x) - c(x),

where psi_bar irons the virtual value J(theta) = theta - (1 - F(theta)) / f(theta).
Ironing happens in quantile space: per-segment virtual values are cumulated
into a piecewise-linear function whose greatest convex minorant (the lower
convex hull of its knots, built with a monotone chain) has slopes psi_bar.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .distributions import Cdf, EmpiricalStep
from .environment import Environment, MarketKind
from .errors import MissingDensityError, UnsupportedPairError
from .mechanisms import Allocation, Menu, expected_profit, menu_from_allocation

__all__ = [
    "SolveMethod",
    "SolveResult",
    "IronedTable",
    "convex_minorant_slopes",
    "optimal_uniform_price",
    "ironed_virtual_value",
    "optimal_screening_menu",
    "optimal_profit",
]

_GOLDEN_TOL = 1e-10
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class SolveMethod(Enum):
    UNIFORM_PRICE_ENUMERATION = "uniform_price_enumeration"
    UNIFORM_PRICE_GRID = "uniform_price_grid"
    SCREENING_IRONED = "screening_ironed"


@dataclass(frozen=True)
class SolveResult:
    menu: Menu
    optimal_value: float
    method: SolveMethod
    grid_size: int
    refine_iterations: int = 0

    def to_dict(self) -> dict:
        from .mechanisms import menu_to_dict

        out = menu_to_dict(self.menu)
        out.update(
            optimal_value=self.optimal_value,
            method=self.method.value,
            grid_size=self.grid_size,
            refine_iterations=self.refine_iterations,
        )
        return out


@dataclass(frozen=True)
class IronedTable:
    """Virtual values on a uniform quantile grid and their ironed version."""

    quantiles: np.ndarray      # grid q_0 = 0 < ... < q_G = 1
    thetas: np.ndarray         # types at the grid quantiles
    segment_thetas: np.ndarray  # types at segment midpoints (length G)
    psi: np.ndarray            # per-segment virtual values (length G)
    psi_bar: np.ndarray        # per-segment ironed values (length G)
    cumulative: np.ndarray     # knots of the cumulated virtual value (length G+1)
    hull: tuple[int, ...]      # knot indices of the greatest convex minorant

    def ironed_cumulative(self) -> np.ndarray:
        """Minorant values at the grid; interpolates the hull vertices, so it
        coincides with `cumulative` exactly at the endpoints."""
        idx = np.asarray(self.hull)
        return np.interp(self.quantiles, self.quantiles[idx], self.cumulative[idx])


def _golden_max(f, lo: float, hi: float, tol: float = _GOLDEN_TOL) -> tuple[float, float, int]:
    """Golden-section maximization; returns (argmax, value, iterations)."""
    a, b = float(lo), float(hi)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while b - a > tol:
        it += 1
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
        if it > 200:
            break
    x = c if fc >= fd else d
    return x, max(fc, fd), it


def optimal_uniform_price(F: Cdf, env: Environment, grid_size: int = 10_000) -> SolveResult:
    """Best single full-quantity offer against F in the linear environment."""
    if env.kind is not MarketKind.LINEAR_UNIT_DEMAND:
        raise UnsupportedPairError("uniform pricing requires the linear unit-demand kind")
    c_bar = float(env.c_bar)
    x_max = float(env.x_max)

    def objective(rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        return x_max * (rho - c_bar) * (1.0 - F.cdf_left_array(rho))

    if isinstance(F, EmpiricalStep):
        cand = np.unique(F.sample.values)
        vals = objective(cand)
        k = int(np.argmax(vals))  # first max = smallest price on ties
        best_rho, best_val = float(cand[k]), float(vals[k])
        method, iters = SolveMethod.UNIFORM_PRICE_ENUMERATION, 0
    else:
        lo, hi = F.support
        cand = np.unique(np.concatenate([
            np.linspace(lo, hi, max(int(grid_size), 2)),
            F.special_points(),
        ]))
        atoms_loc, _ = F.atoms()
        vals = objective(cand)
        k = int(np.argmax(vals))
        best_rho, best_val = float(cand[k]), float(vals[k])
        iters = 0
        # refine inside the bracketing interval; skip if an atom makes the
        # objective discontinuous there
        blo = float(cand[k - 1]) if k > 0 else lo
        bhi = float(cand[k + 1]) if k + 1 < cand.size else hi
        if bhi > blo and not np.any((atoms_loc > blo) & (atoms_loc < bhi)):
            rho_ref, val_ref, iters = _golden_max(lambda r: float(objective(np.asarray([r]))[0]), blo, bhi)
            if val_ref > best_val or (val_ref == best_val and rho_ref < best_rho):
                best_rho, best_val = float(rho_ref), float(val_ref)
        method = SolveMethod.UNIFORM_PRICE_GRID

    if best_val <= 0.0 or best_rho <= 0.0:
        menu = Menu.empty()
    else:
        menu = Menu(((x_max, best_rho * x_max),))
    value = expected_profit(menu, F, env)
    return SolveResult(menu, value, method, int(grid_size), iters)


def _lower_hull(x: np.ndarray, y: np.ndarray) -> list[int]:
    """Knot indices of the lower convex hull (monotone chain, left to right)."""
    hull = [0]
    for i in range(1, x.size):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a])
            if cross <= 0.0:
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def convex_minorant_slopes(knot_x: np.ndarray, knot_y: np.ndarray) -> np.ndarray:
    """Per-segment slopes of the greatest convex minorant of a piecewise-linear
    function through the given knots (its lower convex hull, by monotone chain)."""
    x = np.asarray(knot_x, dtype=float)
    y = np.asarray(knot_y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape or x.size < 2:
        raise ValueError("need matching 1-D knot arrays with at least two knots")
    if np.any(np.diff(x) <= 0):
        raise ValueError("knot abscissae must be strictly increasing")
    hull = _lower_hull(x, y)
    slopes = np.empty(x.size - 1)
    for a, b in zip(hull[:-1], hull[1:]):
        slopes[a:b] = (y[b] - y[a]) / (x[b] - x[a])
    return slopes


def ironed_virtual_value(F: Cdf, grid_size: int = 2000) -> IronedTable:
    """Virtual values on a uniform quantile grid, ironed by convex-hull slopes."""
    if not F.has_density:
        raise MissingDensityError("ironing requires an absolutely continuous distribution")
    G = int(grid_size)
    if G < 1:
        raise ValueError("grid_size must be at least 1")
    q = np.linspace(0.0, 1.0, G + 1)
    q_mid = 0.5 * (q[:-1] + q[1:])
    thetas = F.quantile_array(q)
    theta_mid = F.quantile_array(q_mid)
    dens = F.density_array(theta_mid)
    if np.any(dens <= 0.0) or not np.all(np.isfinite(dens)):
        raise MissingDensityError("ironing requires a strictly positive density on the support")
    psi = theta_mid - (1.0 - q_mid) / dens

    # cumulative virtual value: piecewise linear with slope psi per segment
    big_psi = np.concatenate([[0.0], np.cumsum(psi * np.diff(q))])
    hull = _lower_hull(q, big_psi)
    psi_bar = np.empty(G)
    for a, b in zip(hull[:-1], hull[1:]):
        psi_bar[a:b] = (big_psi[b] - big_psi[a]) / (q[b] - q[a])
    return IronedTable(q, thetas, theta_mid, psi, psi_bar, big_psi, tuple(hull))


def optimal_screening_menu(F: Cdf, env: Environment, grid_size: int = 2000) -> SolveResult:
    """Menu from pointwise maximization of the ironed virtual surplus."""
    if env.kind is not MarketKind.SEPARABLE_SCREENING:
        raise UnsupportedPairError("screening solver requires the separable screening kind")
    table = ironed_virtual_value(F, grid_size)
    th = table.segment_thetas
    w = table.psi_bar
    x_max = float(env.x_max)

    def surplus(x: np.ndarray) -> np.ndarray:
        return w * np.asarray(env.valuation(th, x)) - np.asarray(env.cost(x))

    # vectorized golden section over all segments at once; the surplus is
    # concave in x (v concave, c convex) wherever psi_bar > 0
    a = np.zeros_like(w)
    b = np.full_like(w, x_max)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = surplus(c), surplus(d)
    iters = 0
    while float(np.max(b - a)) > _GOLDEN_TOL and iters < 200:
        iters += 1
        take = fc >= fd
        b = np.where(take, d, b)
        a = np.where(take, a, c)
        c = b - _GOLDEN * (b - a)
        d = a + _GOLDEN * (b - a)
        fc, fd = surplus(c), surplus(d)
    x_star = np.where(fc >= fd, c, d)
    best = np.maximum(fc, fd)
    # exact boundary when the surplus is monotone on [0, x_max]
    f_hi = surplus(np.full_like(w, x_max))
    x_star = np.where(f_hi >= best, x_max, x_star)
    best = np.maximum(best, f_hi)
    zero = np.zeros_like(w)
    f_lo = surplus(zero)
    x_star = np.where(f_lo >= best, 0.0, x_star)
    # nonpositive ironed values never trade
    x_star = np.where(w <= 0.0, 0.0, x_star)
    # ironing plus supermodularity make the allocation monotone; enforce
    # against float noise from independent segment solves
    x_star = np.maximum.accumulate(x_star)

    breaks, levels = [], []
    for t, x in zip(table.thetas[:-1], x_star):
        if not levels or x != levels[-1]:
            breaks.append(float(t))
            levels.append(float(x))
    menu = menu_from_allocation(Allocation(tuple(breaks), tuple(levels)), env) if levels else Menu.empty()
    value = expected_profit(menu, F, env)
    return SolveResult(menu, value, SolveMethod.SCREENING_IRONED, int(grid_size), iters)


def optimal_profit(F: Cdf, env: Environment, grid_size: int | None = None) -> SolveResult:
    """Value function: dispatch to the solver matching the environment kind."""
    if env.kind is MarketKind.LINEAR_UNIT_DEMAND:
        return optimal_uniform_price(F, env, grid_size or 10_000)
    if env.kind is MarketKind.SEPARABLE_SCREENING:
        if not F.has_density:
            raise UnsupportedPairError(
                "no solver for this pair: separable screening needs a distribution "
                "with a density (piecewise-linear or analytic); linear unit demand "
                "accepts any distribution"
            )
        return optimal_screening_menu(F, env, grid_size or 2000)
    raise UnsupportedPairError(f"no solver for environment kind {env.kind}")
