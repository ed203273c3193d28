"""Type distributions: analytic families, empirical variants, and sup distance.

Every distribution is a `Cdf` with right-continuous evaluation F(theta), left
limits F(theta-), a generalized inverse quantile inf{theta : F(theta) >= q},
and inverse-transform sampling. The sup distance between two CDFs is computed
exactly at every jump and kink of either argument (both one-sided limits) and
on a 10^4-point grid for the smooth parts; for step and piecewise-linear
variants this is the exact supremum.

Quantiles of variants without a closed-form inverse (Beta, kernel-smoothed,
mixtures) are found by bisection to 1e-12, which keeps sampling deterministic
for a given stream. The Beta CDF itself is the regularized incomplete beta
function (continued-fraction evaluation via scipy.special.betainc).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
from scipy import special

from .errors import EmpriceError
from .rng import substream

__all__ = [
    "Side",
    "Cdf",
    "Uniform",
    "BetaCdf",
    "PointMass",
    "Mixture",
    "EmpiricalStep",
    "PiecewiseLinear",
    "KernelSmoothed",
    "Sample",
    "cdf_eval",
    "quantile",
    "draw_sample",
    "sup_distance",
    "read_sample",
    "write_sample",
]

_BISECT_TOL = 1e-12
_SUP_GRID = 10_000


class Side(Enum):
    RIGHT = "right"
    LEFT_LIMIT = "left_limit"


@dataclass(frozen=True)
class Sample:
    """Sorted i.i.d. observations of consumer types."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("sample must be a non-empty 1-D array")
        if not np.all(np.isfinite(v)):
            raise ValueError("sample values must be finite")
        v = np.sort(v)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __eq__(self, other) -> bool:
        return isinstance(other, Sample) and np.array_equal(self.values, other.values)


class Cdf:
    """Base class; subclasses implement the vectorized evaluation hooks."""

    @property
    def support(self) -> tuple[float, float]:
        raise NotImplementedError

    @property
    def has_density(self) -> bool:
        return False

    @property
    def is_continuous(self) -> bool:
        locs, _ = self.atoms()
        return locs.size == 0

    def cdf_array(self, theta: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def cdf_left_array(self, theta: np.ndarray) -> np.ndarray:
        # continuous variants coincide with the right value
        return self.cdf_array(theta)

    def density_array(self, theta: np.ndarray) -> np.ndarray:
        raise EmpriceError(f"{type(self).__name__} has no density")

    def quantile_array(self, q: np.ndarray) -> np.ndarray:
        return _bisect_quantile(self, np.asarray(q, dtype=float))

    def atoms(self) -> tuple[np.ndarray, np.ndarray]:
        """(locations, masses) of point masses; empty for continuous variants."""
        return np.empty(0), np.empty(0)

    def special_points(self) -> np.ndarray:
        """Jump and kink locations, used for exact sup-distance evaluation."""
        return np.asarray(self.support, dtype=float)

    # scalar conveniences
    def cdf(self, theta: float) -> float:
        return float(self.cdf_array(np.asarray([theta]))[0])

    def cdf_left(self, theta: float) -> float:
        return float(self.cdf_left_array(np.asarray([theta]))[0])

    def quantile(self, q: float) -> float:
        return float(self.quantile_array(np.asarray([q]))[0])

    def density(self, theta: float) -> float:
        return float(self.density_array(np.asarray([theta]))[0])


def _bisect_quantile(F: Cdf, q: np.ndarray) -> np.ndarray:
    """Generalized inverse by elementwise bisection.

    Invariant: F(hi) >= q everywhere, F(lo) < q (or lo is the support edge),
    so the limit is inf{theta : F(theta) >= q}. Elementwise, hence identical
    results whether calls are batched or not.
    """
    if np.any((q < 0) | (q > 1)):
        raise ValueError("quantile levels must lie in [0, 1]")
    lo_s, hi_s = F.support
    lo = np.full(q.shape, lo_s, dtype=float)
    hi = np.full(q.shape, hi_s, dtype=float)
    # ~52 halvings take any bracket below 1e-12 on unit-scale supports
    steps = max(8, int(np.ceil(np.log2(max(hi_s - lo_s, 1e-300) / _BISECT_TOL))) + 2)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        ge = F.cdf_array(mid) >= q
        hi = np.where(ge, mid, hi)
        lo = np.where(ge, lo, mid)
    return hi


@dataclass(frozen=True)
class Uniform(Cdf):
    a: float
    b: float

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ValueError("uniform requires a < b")

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.b)

    @property
    def has_density(self) -> bool:
        return True

    def cdf_array(self, theta):
        return np.clip((np.asarray(theta, dtype=float) - self.a) / (self.b - self.a), 0.0, 1.0)

    def density_array(self, theta):
        th = np.asarray(theta, dtype=float)
        inside = (th >= self.a) & (th <= self.b)
        return np.where(inside, 1.0 / (self.b - self.a), 0.0)

    def quantile_array(self, q):
        q = np.asarray(q, dtype=float)
        if np.any((q < 0) | (q > 1)):
            raise ValueError("quantile levels must lie in [0, 1]")
        return self.a + q * (self.b - self.a)


@dataclass(frozen=True)
class BetaCdf(Cdf):
    """Beta(alpha, beta) rescaled to [lo, hi]."""

    alpha: float
    beta: float
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self) -> None:
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("beta shape parameters must be positive")
        if not self.lo < self.hi:
            raise ValueError("beta support requires lo < hi")

    @property
    def support(self) -> tuple[float, float]:
        return (self.lo, self.hi)

    @property
    def has_density(self) -> bool:
        return True

    def cdf_array(self, theta):
        x = np.clip((np.asarray(theta, dtype=float) - self.lo) / (self.hi - self.lo), 0.0, 1.0)
        return special.betainc(self.alpha, self.beta, x)

    def density_array(self, theta):
        th = np.asarray(theta, dtype=float)
        x = (th - self.lo) / (self.hi - self.lo)
        out = np.zeros_like(x)
        inside = (x > 0.0) & (x < 1.0)
        xi = x[inside]
        ln = (self.alpha - 1) * np.log(xi) + (self.beta - 1) * np.log1p(-xi)
        ln -= special.betaln(self.alpha, self.beta)
        out[inside] = np.exp(ln) / (self.hi - self.lo)
        return out


@dataclass(frozen=True)
class PointMass(Cdf):
    theta0: float

    @property
    def support(self) -> tuple[float, float]:
        return (self.theta0, self.theta0)

    def cdf_array(self, theta):
        return (np.asarray(theta, dtype=float) >= self.theta0).astype(float)

    def cdf_left_array(self, theta):
        return (np.asarray(theta, dtype=float) > self.theta0).astype(float)

    def quantile_array(self, q):
        q = np.asarray(q, dtype=float)
        if np.any((q < 0) | (q > 1)):
            raise ValueError("quantile levels must lie in [0, 1]")
        return np.full(q.shape, self.theta0, dtype=float)

    def atoms(self):
        return np.asarray([self.theta0]), np.asarray([1.0])

    def special_points(self):
        return np.asarray([self.theta0])


@dataclass(frozen=True)
class Mixture(Cdf):
    weights: np.ndarray
    components: tuple[Cdf, ...]

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "components", tuple(self.components))
        if w.ndim != 1 or w.size != len(self.components) or w.size == 0:
            raise ValueError("one weight per component required")
        if np.any(w < 0) or abs(float(w.sum()) - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1 within 1e-12")

    @property
    def support(self) -> tuple[float, float]:
        los, his = zip(*(c.support for c in self.components))
        return (min(los), max(his))

    @property
    def has_density(self) -> bool:
        return all(c.has_density for c in self.components)

    def cdf_array(self, theta):
        th = np.asarray(theta, dtype=float)
        out = np.zeros(th.shape, dtype=float)
        for w, c in zip(self.weights, self.components):
            out += w * c.cdf_array(th)
        return out

    def cdf_left_array(self, theta):
        th = np.asarray(theta, dtype=float)
        out = np.zeros(th.shape, dtype=float)
        for w, c in zip(self.weights, self.components):
            out += w * c.cdf_left_array(th)
        return out

    def density_array(self, theta):
        th = np.asarray(theta, dtype=float)
        out = np.zeros(th.shape, dtype=float)
        for w, c in zip(self.weights, self.components):
            out += w * c.density_array(th)
        return out

    def atoms(self):
        locs: dict[float, float] = {}
        for w, c in zip(self.weights, self.components):
            al, am = c.atoms()
            for loc, m in zip(al, am):
                locs[float(loc)] = locs.get(float(loc), 0.0) + float(w) * float(m)
        if not locs:
            return np.empty(0), np.empty(0)
        keys = np.asarray(sorted(locs))
        return keys, np.asarray([locs[k] for k in keys])

    def special_points(self):
        return np.unique(np.concatenate([c.special_points() for c in self.components]))


@dataclass(frozen=True)
class EmpiricalStep(Cdf):
    """Right-continuous empirical distribution: jumps of 1/n at each observation."""

    sample: Sample

    @property
    def support(self) -> tuple[float, float]:
        v = self.sample.values
        return (float(v[0]), float(v[-1]))

    def cdf_array(self, theta):
        th = np.asarray(theta, dtype=float)
        return np.searchsorted(self.sample.values, th, side="right") / self.sample.n

    def cdf_left_array(self, theta):
        th = np.asarray(theta, dtype=float)
        return np.searchsorted(self.sample.values, th, side="left") / self.sample.n

    def quantile_array(self, q):
        q = np.asarray(q, dtype=float)
        if np.any((q < 0) | (q > 1)):
            raise ValueError("quantile levels must lie in [0, 1]")
        n = self.sample.n
        k = np.maximum(np.ceil(q * n).astype(int), 1)
        return self.sample.values[k - 1]

    def atoms(self):
        locs, counts = np.unique(self.sample.values, return_counts=True)
        return locs, counts / self.sample.n

    def special_points(self):
        return np.unique(self.sample.values)


@dataclass(frozen=True)
class PiecewiseLinear(Cdf):
    """Continuous piecewise-linear CDF through (thetas, probs) knots."""

    thetas: np.ndarray
    probs: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.thetas, dtype=float)
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "thetas", t)
        object.__setattr__(self, "probs", p)
        if t.ndim != 1 or t.shape != p.shape or t.size < 2:
            raise ValueError("need matching 1-D knot arrays with at least two knots")
        if np.any(np.diff(t) <= 0):
            raise ValueError("knot locations must be strictly increasing")
        if np.any(np.diff(p) < 0) or abs(p[0]) > 1e-12 or abs(p[-1] - 1.0) > 1e-12:
            raise ValueError("knot values must be nondecreasing from 0 to 1")

    @property
    def support(self) -> tuple[float, float]:
        return (float(self.thetas[0]), float(self.thetas[-1]))

    @property
    def has_density(self) -> bool:
        return True

    def cdf_array(self, theta):
        th = np.asarray(theta, dtype=float)
        return np.interp(th, self.thetas, self.probs, left=0.0, right=1.0)

    def density_array(self, theta):
        th = np.asarray(theta, dtype=float)
        slopes = np.diff(self.probs) / np.diff(self.thetas)
        idx = np.clip(np.searchsorted(self.thetas, th, side="right") - 1, 0, slopes.size - 1)
        inside = (th >= self.thetas[0]) & (th < self.thetas[-1])
        return np.where(inside, slopes[idx], 0.0)

    def quantile_array(self, q):
        q = np.asarray(q, dtype=float)
        if np.any((q < 0) | (q > 1)):
            raise ValueError("quantile levels must lie in [0, 1]")
        # leftmost knot index with prob >= q; exact for flat runs
        i = np.searchsorted(self.probs, q, side="left")
        i = np.clip(i, 0, self.probs.size - 1)
        out = self.thetas[i].astype(float).copy()
        interior = (i > 0) & (q > self.probs[np.maximum(i - 1, 0)])
        j = i[interior]
        p0 = self.probs[j - 1]
        p1 = self.probs[j]
        t0 = self.thetas[j - 1]
        t1 = self.thetas[j]
        out[interior] = t0 + (q[interior] - p0) * (t1 - t0) / (p1 - p0)
        return out

    def special_points(self):
        return self.thetas


class KernelShape(Enum):
    UNIFORM = "uniform"
    TRIANGLE = "triangle"
    EPANECHNIKOV = "epanechnikov"


@dataclass(frozen=True)
class KernelSpec:
    """Compactly supported kernel with closed-form moments.

    k1 = int |u| K(u) du and k2 = int K(u)^2 du feed the deterministic
    estimation error bound; support_radius is 1 for all three shapes.
    """

    shape: KernelShape

    @property
    def support_radius(self) -> float:
        return 1.0

    @property
    def k1(self) -> float:
        return {KernelShape.UNIFORM: 0.5, KernelShape.TRIANGLE: 1.0 / 3.0, KernelShape.EPANECHNIKOV: 3.0 / 8.0}[self.shape]

    @property
    def k2(self) -> float:
        return {KernelShape.UNIFORM: 0.5, KernelShape.TRIANGLE: 2.0 / 3.0, KernelShape.EPANECHNIKOV: 3.0 / 5.0}[self.shape]

    def density(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        a = np.abs(u)
        if self.shape is KernelShape.UNIFORM:
            return np.where(a <= 1.0, 0.5, 0.0)
        if self.shape is KernelShape.TRIANGLE:
            return np.maximum(1.0 - a, 0.0)
        return np.where(a <= 1.0, 0.75 * (1.0 - u * u), 0.0)

    def integrated(self, u: np.ndarray) -> np.ndarray:
        """Kernel CDF: int_{-inf}^{u} K."""
        u = np.clip(np.asarray(u, dtype=float), -1.0, 1.0)
        if self.shape is KernelShape.UNIFORM:
            return 0.5 * (u + 1.0)
        if self.shape is KernelShape.TRIANGLE:
            below = 0.5 * (1.0 + u) ** 2
            above = 1.0 - 0.5 * (1.0 - u) ** 2
            return np.where(u <= 0.0, below, above)
        return 0.25 * (2.0 + 3.0 * u - u**3)


@dataclass(frozen=True)
class KernelSmoothed(Cdf):
    """Kernel CDF estimate: average of integrated kernels at the observations."""

    sample: Sample
    kernel: KernelSpec
    h: float

    def __post_init__(self) -> None:
        if not self.h > 0:
            raise ValueError("bandwidth must be positive")

    @property
    def support(self) -> tuple[float, float]:
        r = self.h * self.kernel.support_radius
        v = self.sample.values
        return (float(v[0]) - r, float(v[-1]) + r)

    @property
    def has_density(self) -> bool:
        return True

    def _reduce(self, theta, fn):
        th = np.asarray(theta, dtype=float)
        v = self.sample.values
        out = np.zeros(th.shape, dtype=float)
        # chunk the outer product so huge (eval x sample) grids stay bounded
        chunk = max(1, int(2e7) // max(v.size, 1))
        flat = th.reshape(-1)
        res = np.empty(flat.shape, dtype=float)
        for s in range(0, flat.size, chunk):
            block = flat[s : s + chunk, None]
            res[s : s + chunk] = fn((block - v[None, :]) / self.h).mean(axis=1)
        out[...] = res.reshape(th.shape)
        return out

    def cdf_array(self, theta):
        return self._reduce(theta, self.kernel.integrated)

    def density_array(self, theta):
        return self._reduce(theta, self.kernel.density) / self.h

    def special_points(self):
        r = self.h * self.kernel.support_radius
        v = np.unique(self.sample.values)
        return np.unique(np.concatenate([v - r, v, v + r]))


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def cdf_eval(F: Cdf, theta: float, side: Side = Side.RIGHT) -> float:
    """Evaluate F(theta) (right-continuous) or the left limit F(theta-)."""
    if side is Side.LEFT_LIMIT:
        return F.cdf_left(theta)
    return F.cdf(theta)


def quantile(F: Cdf, q: float) -> float:
    """Generalized inverse inf{theta : F(theta) >= q}."""
    return F.quantile(q)


def draw_sample(F: Cdf, n: int, seed: int) -> Sample:
    """n i.i.d. draws by inverse transform on the stream keyed by (seed,)."""
    if n < 1:
        raise ValueError("sample size must be at least 1")
    u = substream(seed).random(n)
    return Sample(F.quantile_array(u))


def sup_distance(F: Cdf, G: Cdf) -> float:
    """sup over the real line of |F - G|.

    Evaluated at both one-sided limits of every jump/kink of either argument
    plus a 10^4-point grid: exact whenever the sup is attained at a knot
    (always the case for step and piecewise-linear inputs).
    """
    lo = min(F.support[0], G.support[0])
    hi = max(F.support[1], G.support[1])
    if hi <= lo:
        pts = np.asarray([lo])
    else:
        pts = np.linspace(lo, hi, _SUP_GRID)
    cand = np.unique(np.concatenate([pts, F.special_points(), G.special_points()]))
    right = np.abs(F.cdf_array(cand) - G.cdf_array(cand))
    left = np.abs(F.cdf_left_array(cand) - G.cdf_left_array(cand))
    return float(max(right.max(), left.max()))


def read_sample(path: str | Path, header: bool = False) -> Sample:
    """Read one observation per line; `header` skips the first line."""
    raw = Path(path).read_text().strip().splitlines()
    if header:
        raw = raw[1:]
    vals = [float(line.strip().split(",")[0]) for line in raw if line.strip()]
    if not vals:
        raise ValueError(f"no observations found in {path}")
    return Sample(np.asarray(vals))


def write_sample(path: str | Path, sample: Sample, header: bool = False) -> None:
    """Write one observation per line with 17 significant digits."""
    lines = []
    if header:
        lines.append("theta")
    lines.extend(f"{v:.17g}" for v in sample.values)
    Path(path).write_text("\n".join(lines) + "\n")
