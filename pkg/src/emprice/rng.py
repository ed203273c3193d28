"""Seedable random streams with independent, addressable substreams.

All randomness in the package flows through :func:`substream`. A stream is a
numpy ``Generator`` backed by PCG64 and keyed by an integer path
``(seed, i0, i1, ...)`` hashed through ``numpy.random.SeedSequence``. Distinct
paths give statistically independent streams, so parallel replications can be
assigned their own path and reproduce bit-identically regardless of worker
count or execution order.

Conventions used elsewhere in the package:

- ``draw_sample(F, n, seed)`` uses path ``(seed,)``.
- bootstrap draw ``b`` of an inference call seeded with ``s`` uses
  ``(*path(s), b)`` where ``path(s)`` is ``(s,)`` for an integer seed or the
  tuple itself when the caller passes one.
- the Monte Carlo harness seeds replication ``r`` of cell ``(d, i)`` with the
  tuple ``(seed, d, i, r)``, hence its bootstrap draws use ``(seed, d, i, r, b)``.
"""

from __future__ import annotations

import numpy as np

__all__ = ["substream", "seed_path"]

_U64 = (1 << 64) - 1


def seed_path(seed: int | tuple[int, ...]) -> tuple[int, ...]:
    """Normalize a user seed (int or tuple of ints) into a stream path."""
    if isinstance(seed, (int, np.integer)):
        return (int(seed),)
    path = tuple(int(s) for s in seed)
    if not path:
        raise ValueError("seed path must not be empty")
    return path


def substream(*path: int) -> np.random.Generator:
    """Return the PCG64 generator addressed by the integer path.

    Negative components are mapped into the unsigned 64-bit range so any
    64-bit integer is a valid seed.
    """
    if not path:
        raise ValueError("substream requires at least one path component")
    words = [int(p) & _U64 for p in path]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(words)))
