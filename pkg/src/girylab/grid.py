"""Deterministic case generators for the law harness.

The weight grid is the set of rationals in (0, 1] whose denominator is at
most a bound; a grid distribution assigns grid weights summing to exactly 1
to a nonempty subset of a small index range.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterator, Sequence
from fractions import Fraction
from functools import lru_cache
from typing import Any

from .measure import CarrierDist, CountableDist

DEFAULT_GRID = 4
DEFAULT_SUPPORT = 4


@lru_cache(maxsize=None)
def grid_weights(max_den: int = DEFAULT_GRID) -> tuple[Fraction, ...]:
    """All rationals in (0, 1] with denominator <= ``max_den``, ascending."""
    if max_den < 1:
        raise ValueError("grid denominator bound must be positive")
    return tuple(sorted({Fraction(a, b) for b in range(1, max_den + 1) for a in range(1, b + 1)}))


@lru_cache(maxsize=None)
def _weight_vectors(size: int, max_den: int) -> tuple[tuple[Fraction, ...], ...]:
    ws = grid_weights(max_den)
    out = [v for v in itertools.product(ws, repeat=size) if sum(v) == 1]
    # the uniform vector goes first so that counterexamples come out symmetric
    uniform = tuple([Fraction(1, size)] * size)
    if uniform in out:
        out.remove(uniform)
        out.insert(0, uniform)
    return tuple(out)


def weight_vectors(size: int, max_den: int = DEFAULT_GRID) -> tuple[tuple[Fraction, ...], ...]:
    return _weight_vectors(size, max_den)


@lru_cache(maxsize=None)
def grid_dists(support: int = DEFAULT_SUPPORT, max_den: int = DEFAULT_GRID) -> tuple[CountableDist, ...]:
    """Every grid distribution with support inside ``{0, ..., support-1}``.

    Ordered by support size, then support lexicographically, then weights
    (uniform first).
    """
    out = []
    for size in range(1, support + 1):
        vectors = weight_vectors(size, max_den)
        for idx in itertools.combinations(range(support), size):
            for v in vectors:
                out.append(CountableDist(zip(idx, v)))
    return tuple(out)


def carrier_grid(elements: Sequence[Any], max_den: int = DEFAULT_GRID, max_size: int = 4) -> list[CarrierDist]:
    """Grid distributions over an explicit list of carrier elements."""
    out = []
    for size in range(1, min(max_size, len(elements)) + 1):
        vectors = weight_vectors(size, max_den)
        for pts in itertools.combinations(elements, size):
            for v in vectors:
                out.append(CarrierDist(zip(pts, v)))
    return out


def two_level_grid(inner: Sequence[Any], max_den: int = DEFAULT_GRID, outer_size: int = 2) -> Iterator[CarrierDist]:
    """Grid distributions whose points are drawn from ``inner``."""
    for size in range(1, outer_size + 1):
        vectors = weight_vectors(size, max_den)
        for pts in itertools.combinations(inner, size):
            for v in vectors:
                yield CarrierDist(zip(pts, v))


# --------------------------------------------------------------------------
# seeded random instances
# --------------------------------------------------------------------------


def random_weights(rng: random.Random, size: int, max_num: int = 12) -> list[Fraction]:
    raw = [rng.randint(1, max_num) for _ in range(size)]
    total = sum(raw)
    return [Fraction(r, total) for r in raw]


def random_dist(rng: random.Random, max_index: int = 7, max_size: int = 6) -> CountableDist:
    size = rng.randint(1, min(max_size, max_index + 1))
    idx = sorted(rng.sample(range(max_index + 1), size))
    return CountableDist(zip(idx, random_weights(rng, size)))


def random_carrier_dist(rng: random.Random, draw, max_size: int = 4) -> CarrierDist:
    """Random finite distribution over points produced by ``draw(rng)``."""
    size = rng.randint(1, max_size)
    pts = [draw(rng) for _ in range(size)]
    return CarrierDist(zip(pts, random_weights(rng, size)))
