"""Single-item auction with M symmetric bidders: reserve pricing and guarantees.

With i.i.d. private values from F, the second-highest of M draws has CDF

    F_(2;M)(theta) = M F(theta)^{M-1} (1 - F(theta)) + F(theta)^M,

a monotone transform phi(F) of the value distribution, which makes it
Lipschitz in F with constant 2M(M-1). Two profit objectives are exposed for a
second-price auction with reserve r:

- SECOND_ORDER_TAIL: the survival mass 1 - F_(2;M)(r). It is nonincreasing in
  r (its maximizer is always the lowest type), so it is useful for the
  linearity/guarantee analysis but degenerate as a design objective.
- EXPECTED_REVENUE (default for reserve optimization): reserve-price revenue
  plus the mass of the second order statistic above r, net of the seller's
  opportunity cost of sale,

      r M F(r)^{M-1} (1 - F(r)) + int_r^{top} theta dF_(2;M)(theta)
        - c (1 - F(r)^M),

  with the integral computed by parts (so only CDF evaluations are needed):
  int_r^{top} theta dF_(2;M) = top - r F_(2;M)(r) - int_r^{top} F_(2;M).
  That last integral is exact piecewise Gauss-Legendre when F is piecewise
  linear (the integrand is a polynomial per knot segment) and adaptive
  quadrature to 1e-10 otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate

from .distributions import Cdf, PiecewiseLinear
from .errors import EmpriceError
from .guarantees import BoundKind, GuaranteeResult, regret_guarantee

__all__ = [
    "ProfitMode",
    "AuctionSetting",
    "second_order_cdf",
    "SecondOrderCdf",
    "second_order_distribution",
    "auction_profit",
    "optimal_reserve",
    "auction_regret_guarantee",
]

_RESERVE_GRID = 10_000
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class ProfitMode(Enum):
    SECOND_ORDER_TAIL = "tail"
    EXPECTED_REVENUE = "revenue"


@dataclass(frozen=True)
class AuctionSetting:
    bidders: int
    seller_value: float
    cdf: Cdf

    def __post_init__(self) -> None:
        if self.bidders < 2:
            raise ValueError("auction requires at least two bidders")
        if self.seller_value < 0:
            raise ValueError("seller value must be nonnegative")
        if not self.cdf.is_continuous:
            raise EmpriceError(
                "auction setting needs an absolutely continuous value distribution; "
                "interpolate sample-based estimates first"
            )


def _phi(y: np.ndarray, m: int) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    return m * y ** (m - 1) * (1.0 - y) + y**m


def second_order_cdf(F: Cdf, bidders: int, theta: float) -> float:
    """CDF of the second-highest of `bidders` i.i.d. draws from F."""
    if bidders < 2:
        raise ValueError("need at least two bidders")
    return float(_phi(F.cdf(theta), bidders))


@dataclass(frozen=True)
class SecondOrderCdf(Cdf):
    """Distribution of the second-highest of `bidders` draws from `base`."""

    base: Cdf
    bidders: int

    def __post_init__(self) -> None:
        if self.bidders < 2:
            raise ValueError("need at least two bidders")

    @property
    def support(self) -> tuple[float, float]:
        return self.base.support

    @property
    def has_density(self) -> bool:
        return self.base.has_density

    def cdf_array(self, theta):
        return _phi(self.base.cdf_array(theta), self.bidders)

    def cdf_left_array(self, theta):
        return _phi(self.base.cdf_left_array(theta), self.bidders)

    def density_array(self, theta):
        y = self.base.cdf_array(theta)
        m = self.bidders
        return m * (m - 1) * y ** (m - 2) * (1.0 - y) * self.base.density_array(theta)

    def atoms(self):
        locs, _ = self.base.atoms()
        if locs.size == 0:
            return locs, np.empty(0)
        masses = self.cdf_array(locs) - self.cdf_left_array(locs)
        return locs, masses

    def special_points(self):
        return self.base.special_points()


def second_order_distribution(F: Cdf, bidders: int) -> SecondOrderCdf:
    return SecondOrderCdf(F, bidders)


def _gl_integral_segments(f2_eval, lows: np.ndarray, highs: np.ndarray, order: int) -> np.ndarray:
    """Gauss-Legendre integral of the second-order CDF on each [low, high]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    mid = 0.5 * (lows + highs)
    half = 0.5 * (highs - lows)
    pts = mid[:, None] + half[:, None] * nodes[None, :]
    vals = f2_eval(pts.reshape(-1)).reshape(pts.shape)
    return half * (vals @ weights)


def _integral_f2_above(F: Cdf, bidders: int, r: float) -> float:
    """int_r^{top} F_(2;M)(theta) dtheta."""
    f2 = SecondOrderCdf(F, bidders)
    lo, hi = F.support
    if r >= hi:
        return 0.0
    a = max(r, lo)
    if isinstance(F, PiecewiseLinear):
        # polynomial of degree `bidders` per knot segment: fixed-order GL is exact
        t = F.thetas
        start = int(np.searchsorted(t, a, side="right")) - 1
        start = max(start, 0)
        lows = np.maximum(t[start:-1], a)
        highs = t[start + 1 :]
        keep = highs > lows
        order = max(8, (bidders + 3) // 2)
        return float(np.sum(_gl_integral_segments(f2.cdf_array, lows[keep], highs[keep], order)))
    kinks = [p for p in F.special_points() if a < p < hi]
    points = kinks if 0 < len(kinks) <= 80 else None
    val, _ = integrate.quad(
        lambda th: float(f2.cdf_array(np.asarray([th]))[0]),
        a,
        hi,
        epsabs=1e-10,
        epsrel=1e-10,
        limit=500,
        points=points,
    )
    return float(val)


def auction_profit(r: float, setting: AuctionSetting, mode: ProfitMode = ProfitMode.EXPECTED_REVENUE) -> float:
    """Seller's objective at reserve r, per the chosen mode."""
    F = setting.cdf
    m = setting.bidders
    if mode is ProfitMode.SECOND_ORDER_TAIL:
        return 1.0 - second_order_cdf(F, m, r)
    lo, hi = F.support
    y = F.cdf(r)
    f2_r = float(_phi(np.asarray([y]), m)[0])
    expected_second = hi - r * f2_r - _integral_f2_above(F, m, r)
    reserve_term = r * m * y ** (m - 1) * (1.0 - y)
    sale_prob = 1.0 - y**m
    return reserve_term + expected_second - setting.seller_value * sale_prob


def optimal_reserve(
    setting: AuctionSetting,
    mode: ProfitMode = ProfitMode.EXPECTED_REVENUE,
    grid_size: int = _RESERVE_GRID,
) -> tuple[float, float]:
    """Best reserve price: grid search plus golden-section refinement.

    Returns (reserve, value); the smallest maximizer wins ties.
    """
    F = setting.cdf
    m = setting.bidders
    lo, hi = F.support
    grid = np.unique(np.concatenate([
        np.linspace(lo, hi, max(int(grid_size), 2) + 1),
        np.asarray([p for p in F.special_points() if lo <= p <= hi]),
    ]))

    if mode is ProfitMode.SECOND_ORDER_TAIL:
        f2 = SecondOrderCdf(F, m)
        vals = 1.0 - f2.cdf_array(grid)
    else:
        f2 = SecondOrderCdf(F, m)
        order = max(8, (m + 3) // 2)
        seg = _gl_integral_segments(f2.cdf_array, grid[:-1], grid[1:], order)
        integral_above = np.concatenate([np.cumsum(seg[::-1])[::-1], [0.0]])
        y = F.cdf_array(grid)
        f2_vals = _phi(y, m)
        vals = (
            grid * m * y ** (m - 1) * (1.0 - y)
            + (hi - grid * f2_vals - integral_above)
            - setting.seller_value * (1.0 - y**m)
        )

    k = int(np.argmax(vals))  # first max = smallest reserve on ties
    best_r, best_val = float(grid[k]), float(vals[k])

    blo = float(grid[k - 1]) if k > 0 else lo
    bhi = float(grid[k + 1]) if k + 1 < grid.size else hi
    if bhi > blo:
        a, b = blo, bhi
        c = b - _GOLDEN * (b - a)
        d = a + _GOLDEN * (b - a)
        fc = auction_profit(c, setting, mode)
        fd = auction_profit(d, setting, mode)
        it = 0
        while b - a > 1e-10 and it < 200:
            it += 1
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - _GOLDEN * (b - a)
                fc = auction_profit(c, setting, mode)
            else:
                a, c, fc = c, d, fd
                d = a + _GOLDEN * (b - a)
                fd = auction_profit(d, setting, mode)
        r_ref = c if fc >= fd else d
        val_ref = max(fc, fd)
        if val_ref > best_val or (val_ref == best_val and r_ref < best_r):
            best_r, best_val = float(r_ref), float(val_ref)

    return best_r, float(auction_profit(best_r, setting, mode))


def auction_regret_guarantee(
    kind: BoundKind, n: int, delta: float, bidders: int
) -> tuple[GuaranteeResult, GuaranteeResult]:
    """Profit and regret guarantees with the auction constant L = 2M(M-1)."""
    if bidders < 2:
        raise ValueError("need at least two bidders")
    lipschitz = 2.0 * bidders * (bidders - 1)
    return regret_guarantee(kind, n, delta, lipschitz)
