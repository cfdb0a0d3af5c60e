"""Deterministic sample generators for the sample-based checkers."""

from __future__ import annotations

import itertools
import random


def grid(lower: float, upper: float, count: int, include_upper: bool = True) -> list[float]:
    """``count`` evenly spaced points from ``lower``; ``upper`` itself only if included.

    Points are computed as lower + (upper - lower) * k / m so that grids like
    {0, 0.1, ..., 2} come out correctly rounded.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if count == 1:
        return [float(lower)]
    m = count - 1 if include_upper else count
    return [lower + (upper - lower) * k / m for k in range(count)]


def box_grid(sides: list[tuple[float, float]], count: int) -> list[tuple[float, ...]]:
    axes = [grid(lo, hi, count) for lo, hi in sides]
    return list(itertools.product(*axes))


def random_tuples(lower: float, upper: float, n: int, count: int, seed: int = 0,
                  include_upper: bool = True) -> list[tuple[float, ...]]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        t = tuple(rng.uniform(lower, upper) for _ in range(n))
        if include_upper or max(t) < upper:
            out.append(t)
    return out
