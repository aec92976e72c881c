"""Convex polygons, triangulations, flips and exhaustive enumeration.

Vertices are numbered 1..n. A triangle is a sorted triple ``(l, j, r)`` with
``l < j < r`` and a diagonal a sorted pair ``(a, b)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence

from .exactmath import catalan

TriangleRef = tuple[int, int, int]
Diagonal = tuple[int, int]

ENUMERATION_CAP = 12


class PolygonError(ValueError):
    pass


class TriangulationError(ValueError):
    pass


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class PolygonSpec:
    """An n-gon with optional planar geometry.

    ``geometry`` is ``"regular"`` (unit circumcircle, vertex i at angle
    2*pi*(i-1)/n), ``"explicit"`` (``vertices`` given) or ``"none"``.
    """

    n: int
    geometry: str = "regular"
    vertices: tuple[tuple[float, float], ...] = field(default=(), compare=True)

    def __post_init__(self):
        if self.n < 3:
            raise PolygonError(f"polygon needs n >= 3, got {self.n}")
        if self.geometry == "regular":
            pts = tuple(
                (math.cos(2 * math.pi * i / self.n), math.sin(2 * math.pi * i / self.n))
                for i in range(self.n)
            )
            object.__setattr__(self, "vertices", pts)
        elif self.geometry == "explicit":
            if len(self.vertices) != self.n:
                raise PolygonError(f"expected {self.n} vertices, got {len(self.vertices)}")
            pts = tuple((float(x), float(y)) for x, y in self.vertices)
            _check_strictly_convex(pts)
            object.__setattr__(self, "vertices", pts)
        elif self.geometry == "none":
            object.__setattr__(self, "vertices", ())
        else:
            raise PolygonError(f"unknown geometry {self.geometry!r}")

    @classmethod
    def regular(cls, n: int) -> PolygonSpec:
        return cls(n, "regular")

    @classmethod
    def explicit(cls, points: Sequence[tuple[float, float]]) -> PolygonSpec:
        return cls(len(points), "explicit", tuple(tuple(p) for p in points))

    @classmethod
    def combinatorial(cls, n: int) -> PolygonSpec:
        return cls(n, "none")

    @property
    def has_geometry(self) -> bool:
        return self.geometry != "none"

    def vertex(self, i: int) -> tuple[float, float]:
        if not self.has_geometry:
            raise GeometryError("polygon has no geometry")
        return self.vertices[i - 1]


def _check_strictly_convex(pts: Sequence[tuple[float, float]]) -> None:
    n = len(pts)
    signs = set()
    for i in range(n):
        (x0, y0), (x1, y1), (x2, y2) = pts[i], pts[(i + 1) % n], pts[(i + 2) % n]
        cross = (x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1)
        if cross == 0:
            raise PolygonError(f"vertices {i + 1}..{(i + 2) % n + 1} are collinear")
        signs.add(cross > 0)
    if len(signs) != 1:
        raise PolygonError("vertices are not in strictly convex position")


def is_polygon_edge(n: int, a: int, b: int) -> bool:
    """True if the sorted pair (a, b) is a side of the n-gon."""
    return b - a == 1 or (a == 1 and b == n)


def crosses(d: Diagonal, e: Diagonal) -> bool:
    (a, b), (c, d2) = sorted((d, e))
    return a < c < b < d2


@dataclass(frozen=True)
class Triangulation:
    n: int
    diagonals: tuple[Diagonal, ...]
    triangles: tuple[TriangleRef, ...]

    def text(self) -> str:
        """``n;a-b,c-d,...`` with diagonals in lexicographic order."""
        return f"{self.n};" + ",".join(f"{a}-{b}" for a, b in self.diagonals)

    def fan_arcs(self) -> tuple[int, ...]:
        """Arc lengths b_t - b_{t-1} of the triangles at vertex 1, in order."""
        return tuple(r - j for l, j, r in self.triangles if l == 1)

    def __str__(self):
        return self.text()


def _triangles_from_diagonals(n: int, diagonals: Sequence[Diagonal]) -> tuple[TriangleRef, ...]:
    adj = [set() for _ in range(n + 1)]
    for i in range(1, n):
        adj[i].add(i + 1)
        adj[i + 1].add(i)
    adj[1].add(n)
    adj[n].add(1)
    for a, b in diagonals:
        adj[a].add(b)
        adj[b].add(a)
    out = []
    for a in range(1, n + 1):
        for b in adj[a]:
            if b <= a:
                continue
            for c in adj[a] & adj[b]:
                if c > b:
                    out.append((a, b, c))
    return tuple(sorted(out))


def _make(n: int, diagonals, triangles=None) -> Triangulation:
    diags = tuple(sorted(diagonals))
    if triangles is None:
        triangles = _triangles_from_diagonals(n, diags)
    return Triangulation(n, diags, tuple(sorted(triangles)))


def validate_triangulation(n: int, diagonals) -> Triangulation:
    """Check a diagonal set and return the triangulation it defines."""
    if n < 3:
        raise PolygonError(f"polygon needs n >= 3, got {n}")
    diags = []
    for pair in diagonals:
        a, b = sorted(pair)
        if a < 1 or b > n:
            raise TriangulationError(f"pair ({a},{b}) out of range for n={n}")
        if a == b or is_polygon_edge(n, a, b):
            raise TriangulationError(f"pair ({a},{b}) is not a diagonal")
        diags.append((a, b))
    if len(set(diags)) != len(diags):
        raise TriangulationError("duplicate diagonal")
    if len(diags) != n - 3:
        raise TriangulationError(f"expected {n - 3} diagonals, got {len(diags)}")
    diags.sort()
    for d, e in combinations(diags, 2):
        if crosses(d, e):
            raise TriangulationError(f"crossing ({d[0]},{d[1]})×({e[0]},{e[1]})")
    t = _make(n, diags)
    if len(t.triangles) != n - 2:  # pragma: no cover - follows from the checks above
        raise TriangulationError(f"derived {len(t.triangles)} triangles, expected {n - 2}")
    return t


def parse_triangulation(text: str) -> Triangulation:
    """Inverse of :meth:`Triangulation.text`."""
    head, _, body = text.strip().partition(";")
    n = int(head)
    diags = []
    for item in filter(None, body.split(",")):
        a, b = item.split("-")
        diags.append((int(a), int(b)))
    return validate_triangulation(n, diags)


def flip(t: Triangulation, d: Diagonal) -> Triangulation:
    """Swap diagonal ``d`` for the other diagonal of its quadrilateral."""
    d = tuple(sorted(d))
    if d not in t.diagonals:
        raise TriangulationError(f"diagonal ({d[0]},{d[1]}) not in triangulation")
    a, b = d
    apexes = [v for tri in t.triangles if a in tri and b in tri for v in tri if v not in d]
    c, e = sorted(apexes)
    diags = [x for x in t.diagonals if x != d] + [(c, e)]
    return _make(t.n, diags)


def fan(n: int, apex: int = 1) -> Triangulation:
    """All diagonals from ``apex``."""
    others = [v for v in range(1, n + 1) if v != apex and not is_polygon_edge(n, *sorted((v, apex)))]
    return validate_triangulation(n, [tuple(sorted((apex, v))) for v in others])


def triangle_metrics(p: PolygonSpec, tr: TriangleRef) -> tuple[float, float, float]:
    """(perimeter, area, inradius) of triangle ``tr`` in ``p``."""
    if not p.has_geometry:
        raise GeometryError("triangle metrics need polygon geometry")
    l, j, r = tr
    if not 1 <= l < j < r <= p.n:
        raise PolygonError(f"bad triangle {tr} for n={p.n}")
    (x1, y1), (x2, y2), (x3, y3) = p.vertex(l), p.vertex(j), p.vertex(r)
    a = math.hypot(x2 - x1, y2 - y1)
    b = math.hypot(x3 - x2, y3 - y2)
    c = math.hypot(x1 - x3, y1 - y3)
    perimeter = a + b + c
    area = abs((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)) / 2
    return perimeter, area, area / (perimeter / 2)


@lru_cache(maxsize=None)
def _interval_triangulations(l: int, r: int) -> tuple[tuple[TriangleRef, ...], ...]:
    # triangle lists for the sub-polygon l..r, first-triangle order with j ascending
    if r - l < 2:
        return ((),)
    out = []
    for j in range(l + 1, r):
        for left in _interval_triangulations(l, j):
            for right in _interval_triangulations(j, r):
                out.append(((l, j, r),) + left + right)
    return tuple(out)


def enumerate_triangulations(n: int, cap: int = ENUMERATION_CAP) -> Iterator[Triangulation]:
    """Yield all C_{n-2} triangulations of the n-gon in a fixed order.

    The order picks the apex j of triangle (1, j, n) in ascending order, then
    recurses on (1, j) and (j, n), left side varying slowest.
    """
    if n < 3:
        raise PolygonError(f"polygon needs n >= 3, got {n}")
    if n > cap:
        raise PolygonError(f"n={n} exceeds enumeration cap {cap}")
    return _enumerate(n)


def _enumerate(n: int) -> Iterator[Triangulation]:
    for j in range(2, n):
        for left in _interval_triangulations(1, j):
            for right in _interval_triangulations(j, n):
                tris = ((1, j, n),) + left + right
                diags = [(a, c) for a, _, c in tris if not is_polygon_edge(n, a, c)]
                yield _make(n, diags, tris)


def count_triangulations(n: int) -> int:
    return catalan(n - 2)
