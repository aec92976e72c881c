"""Uniform random triangulations by recursive first-triangle splitting.

The interval (l, r) picks its apex j with probability
C_{j-l-1} C_{r-j-1} / C_{r-l-1}. The draw is exact: a uniform integer
u in [0, C_{r-l-1}) is located among cumulative blocks C_{j-l-1} C_{r-j-1}.

Random numbers come from :class:`random.Random` (MT19937). Bounded integers
use ``Random.randrange``, which rejects out-of-range ``getrandbits`` values
assembled from 32-bit words, so draws are unbiased for any bound.
"""
from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .exactmath import catalan
from .polygon import PolygonSpec, TriangleRef, Triangulation, _make, is_polygon_edge
from .weights import WeightSpec, weight_table

DEFAULT_SEED = 42


class SamplerError(ValueError):
    pass


@dataclass(frozen=True)
class SplitLaw:
    l: int
    r: int
    probs: dict[int, Fraction]


def split_law(n: int, l: int, r: int) -> SplitLaw:
    """Law of the apex j of the triangle on side (l, r)."""
    if not (1 <= l and r <= n):
        raise SamplerError(f"interval ({l},{r}) outside 1..{n}")
    if r - l < 2:
        raise SamplerError(f"interval ({l},{r}) has no interior vertex")
    total = catalan(r - l - 1)
    probs = {
        j: Fraction(catalan(j - l - 1) * catalan(r - j - 1), total) for j in range(l + 1, r)
    }
    return SplitLaw(l, r, probs)


@lru_cache(maxsize=None)
def _cumulative_blocks(length: int) -> tuple[int, tuple[int, ...]]:
    # for an interval of r - l == length: (C_{length-1}, cumulative upper bounds);
    # block k (offset j - l = k + 1) has size C_k * C_{length-2-k}
    total = catalan(length - 1)
    bounds, acc = [], 0
    for k in range(length - 1):
        acc += catalan(k) * catalan(length - 2 - k)
        bounds.append(acc)
    assert acc == total
    return total, tuple(bounds)


def draw_apex(l: int, r: int, rng: random.Random) -> int:
    total, bounds = _cumulative_blocks(r - l)
    u = rng.randrange(total)
    return l + 1 + bisect_right(bounds, u)


def make_rng(seed: int, stream: int = 0) -> random.Random:
    """Generator for ``(seed, stream)``; stream 0 is ``Random(seed)`` itself."""
    if stream == 0:
        return random.Random(seed)
    return random.Random(f"polytri:{seed}:{stream}")


def sample_triangles(n: int, rng: random.Random) -> list[TriangleRef]:
    """Triangles of one uniform triangulation, in draw order.

    Uses an explicit stack; within each interval the left part (l, j) is
    resolved before the right part (j, r), which matches the recursive order.
    """
    if n < 3:
        raise SamplerError(f"polygon needs n >= 3, got {n}")
    out = []
    stack = [(1, n)]
    while stack:
        l, r = stack.pop()
        if r - l < 2:
            continue
        j = l + 1 if r - l == 2 else draw_apex(l, r, rng)
        out.append((l, j, r))
        stack.append((j, r))
        stack.append((l, j))
    return out


def sample_triangulation(n: int, rng: random.Random) -> Triangulation:
    tris = sample_triangles(n, rng)
    diags = [(l, r) for l, _, r in tris if not is_polygon_edge(n, l, r)]
    return _make(n, diags, tris)


def weight_sum(t: Triangulation, f: WeightSpec, p: Optional[PolygonSpec] = None):
    """Sum of f over the triangles of ``t``."""
    vals = weight_table(f, t.n, p)
    return _sum(vals[tr] for tr in t.triangles)


def _sum(values):
    total = 0
    for v in values:
        total = total + v
    if isinstance(total, Fraction) and total.denominator == 1:
        return total.numerator
    return total


@dataclass(frozen=True)
class SampleRun:
    n: int
    weight: WeightSpec
    samples: int
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.samples < 1:
            raise SamplerError("samples must be >= 1")
        if self.n < 3:
            raise SamplerError(f"polygon needs n >= 3, got {self.n}")


def sample_sums(run: SampleRun, p: Optional[PolygonSpec] = None, stream: int = 0) -> list:
    """Weight sums of ``run.samples`` independent triangulations."""
    vals = weight_table(run.weight, run.n, p)
    rng = make_rng(run.seed, stream)
    n = run.n
    return [_sum(vals[tr] for tr in sample_triangles(n, rng)) for _ in range(run.samples)]
