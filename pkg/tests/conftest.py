"""Shared fixtures and random-object generators for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

import emprice as ep


@pytest.fixture
def linear_env() -> ep.Environment:
    return ep.linear_unit_demand(0.0, 1.0, 1.0, 0.0)


def random_menu(gen: np.random.Generator, max_items: int = 6) -> ep.Menu:
    """Random valid menu on [0, 1] quantities with prices in (0, 1.3)."""
    k = int(gen.integers(1, max_items + 1))
    xs = np.unique(gen.uniform(0.05, 1.0, size=k))
    ps = gen.uniform(0.01, 1.3, size=xs.size)
    return ep.Menu(tuple(zip(xs, ps)))


def random_step_cdf(gen: np.random.Generator) -> ep.Cdf:
    n = int(gen.integers(1, 40))
    return ep.ecdf(ep.Sample(gen.uniform(0.0, 1.0, size=n)))


def random_piecewise_linear(gen: np.random.Generator) -> ep.Cdf:
    k = int(gen.integers(2, 8))
    thetas = np.unique(np.concatenate([[0.0, 1.0], gen.uniform(0.0, 1.0, size=k)]))
    probs = np.sort(gen.uniform(0.0, 1.0, size=thetas.size))
    probs[0], probs[-1] = 0.0, 1.0
    probs = np.maximum.accumulate(probs)
    return ep.PiecewiseLinear(thetas, probs)


def random_exact_cdf(gen: np.random.Generator) -> ep.Cdf:
    """CDFs whose sup distance is knot-exact: steps, piecewise linear, atoms."""
    kind = int(gen.integers(0, 4))
    if kind == 0:
        return random_step_cdf(gen)
    if kind == 1:
        return random_piecewise_linear(gen)
    if kind == 2:
        return ep.PointMass(float(gen.uniform(0.0, 1.0)))
    parts = tuple(random_exact_cdf(gen) for _ in range(2))
    w = gen.uniform(0.2, 1.0, size=2)
    return ep.Mixture(w / w.sum(), parts)


def random_continuous_cdf(gen: np.random.Generator) -> ep.Cdf:
    """Absolutely continuous CDFs supported inside [0, 1]."""
    kind = int(gen.integers(0, 3))
    if kind == 0:
        a = float(gen.uniform(0.0, 0.4))
        b = float(gen.uniform(a + 0.2, 1.0))
        return ep.Uniform(a, b)
    if kind == 1:
        return ep.BetaCdf(float(gen.uniform(0.3, 5.0)), float(gen.uniform(0.3, 5.0)))
    return random_piecewise_linear(gen)
