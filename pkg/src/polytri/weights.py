"""Triangle weight families and their structural properties."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Mapping, Optional, Union

from .polygon import GeometryError, PolygonSpec, TriangleRef, is_polygon_edge, triangle_metrics

Number = Union[int, Fraction, float]

INTEGER_KINDS = frozenset({"const_one", "one_side", "ears", "degree_vertex1", "blue_sum", "blue_count"})
RATIONAL_KINDS = frozenset({"one_side_weighted", "curious", "custom"})
REAL_KINDS = frozenset({"perimeter", "area", "inradius"})
KINDS = INTEGER_KINDS | RATIONAL_KINDS | REAL_KINDS

_CLI_NAMES = {
    "const1": "const_one",
    "oneside": "one_side",
    "ears": "ears",
    "degree": "degree_vertex1",
    "bluesum": "blue_sum",
    "perimeter": "perimeter",
    "area": "area",
    "inradius": "inradius",
}
_CLI_PARAM_NAMES = {
    "oneside-w": "one_side_weighted",
    "curious-w": "curious",
    "bluecount": "blue_count",
}


class WeightError(ValueError):
    pass


@dataclass(frozen=True)
class WeightSpec:
    """A weight family f_n on triangles.

    ``param`` is w for ``one_side_weighted``/``curious`` and p for
    ``blue_count``. ``table`` holds custom weights as sorted (triple, value)
    pairs.
    """

    kind: str
    param: Optional[Union[int, Fraction]] = None
    table: tuple[tuple[TriangleRef, Fraction], ...] = field(default=(), repr=False)
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise WeightError(f"unknown weight kind {self.kind!r}")
        if self.kind in ("one_side_weighted", "curious"):
            if self.param is None:
                raise WeightError(f"{self.kind} needs a parameter w")
            object.__setattr__(self, "param", Fraction(self.param))
        elif self.kind == "blue_count":
            if not isinstance(self.param, int) or self.param < 1:
                raise WeightError("blue_count needs a positive integer p")
        elif self.param is not None:
            raise WeightError(f"{self.kind} takes no parameter")

    @property
    def codomain(self) -> str:
        if self.kind in INTEGER_KINDS:
            return "integer"
        if self.kind in RATIONAL_KINDS:
            if self.kind == "custom" and all(v.denominator == 1 for _, v in self.table):
                return "integer"
            return "rational"
        return "real"

    @property
    def is_exact(self) -> bool:
        return self.codomain != "real"

    @property
    def needs_geometry(self) -> bool:
        return self.kind in REAL_KINDS

    @property
    def custom_n(self) -> Optional[int]:
        if self.kind != "custom":
            return None
        return max(r for (_, _, r), _ in self.table)

    def describe(self) -> str:
        """CLI spelling of this weight."""
        if self.label:
            return self.label
        for name, kind in _CLI_NAMES.items():
            if kind == self.kind:
                return name
        for name, kind in _CLI_PARAM_NAMES.items():
            if kind == self.kind:
                return f"{name}:{self.param}"
        return "custom"

    def __str__(self):
        return self.describe()


def const_one() -> WeightSpec:
    return WeightSpec("const_one")


def one_side() -> WeightSpec:
    return WeightSpec("one_side")


def ears() -> WeightSpec:
    return WeightSpec("ears")


def degree_vertex1() -> WeightSpec:
    return WeightSpec("degree_vertex1")


def blue_sum() -> WeightSpec:
    return WeightSpec("blue_sum")


def blue_count(p: int) -> WeightSpec:
    return WeightSpec("blue_count", p)


def one_side_weighted(w) -> WeightSpec:
    return WeightSpec("one_side_weighted", Fraction(w))


def curious(w) -> WeightSpec:
    return WeightSpec("curious", Fraction(w))


def perimeter() -> WeightSpec:
    return WeightSpec("perimeter")


def area() -> WeightSpec:
    return WeightSpec("area")


def inradius() -> WeightSpec:
    return WeightSpec("inradius")


def custom(table: Mapping[TriangleRef, Number], label: str = "custom") -> WeightSpec:
    items = []
    for tri, value in table.items():
        l, j, r = tri
        if not 1 <= l < j < r:
            raise WeightError(f"custom table key {tri} is not a sorted triple")
        items.append(((l, j, r), Fraction(value)))
    if not items:
        raise WeightError("custom table is empty")
    n = max(r for (_, _, r), _ in items)
    if len(items) != len(set(t for t, _ in items)):
        raise WeightError("custom table has duplicate triples")
    expected = math.comb(n, 3)
    if len(items) != expected:
        raise WeightError(f"custom table has {len(items)} triples, need all {expected} for n={n}")
    return WeightSpec("custom", None, tuple(sorted(items)), label)


def load_custom(path: Union[str, Path]) -> WeightSpec:
    """Read a ``l,j,r,value`` CSV (header optional, values like ``a/b``)."""
    table = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            if not row[0].strip().lstrip("-").isdigit():
                continue  # header
            if len(row) != 4:
                raise WeightError(f"bad custom row {row!r}")
            l, j, r = (int(x) for x in row[:3])
            try:
                table[(l, j, r)] = Fraction(row[3].strip())
            except ValueError as exc:
                raise WeightError(f"bad custom value {row[3]!r}") from exc
    return custom(table, label=f"custom:{path}")


def parse_weight(text: str) -> WeightSpec:
    """Parse a CLI weight string such as ``ears`` or ``bluecount:2``."""
    text = text.strip()
    if text in _CLI_NAMES:
        return WeightSpec(_CLI_NAMES[text])
    name, sep, arg = text.partition(":")
    if sep and name == "custom":
        return load_custom(arg)
    if sep and name in _CLI_PARAM_NAMES:
        kind = _CLI_PARAM_NAMES[name]
        try:
            value = int(arg) if kind == "blue_count" else Fraction(arg)
        except ValueError as exc:
            raise WeightError(f"bad parameter in weight {text!r}") from exc
        return WeightSpec(kind, value)
    raise WeightError(f"unknown weight {text!r}")


def boundary_sides(n: int, tr: TriangleRef) -> int:
    """How many sides of ``tr`` lie on the boundary of the n-gon."""
    l, j, r = tr
    return is_polygon_edge(n, l, j) + is_polygon_edge(n, j, r) + is_polygon_edge(n, l, r)


def printed_ears_indicator(n: int, tr: TriangleRef) -> int:
    """The ear case table exactly as printed, including its ``r < n`` row.

    Kept only to document where it departs from :func:`boundary_sides`; it
    misses the ear (n-2, n-1, n).
    """
    l, j, r = tr
    if 1 <= l and j == l + 1 and r == l + 2 and r < n:
        return 1
    if l == 1 and j == n - 1 and r == n:
        return 1
    if l == 1 and j == 2 and r == n:
        return 1
    return 0


def printed_one_side_indicator(n: int, tr: TriangleRef) -> int:
    """The one-side case table as printed (agrees with the edge count)."""
    l, j, r = tr
    if l > 1 and j == l + 1 and r > j + 1 and r <= n:
        return 1
    if l > 1 and j > l + 1 and r == j + 1 and r <= n:
        return 1
    if 2 < j < n - 1 and l == 1 and r == n:
        return 1
    if l == 1 and j == 2 and 3 < r < n:
        return 1
    if l == 1 and j > 2 and r == j + 1 and r < n:
        return 1
    return 0


def _resolve_geometry(n: int, p: Optional[PolygonSpec]) -> PolygonSpec:
    if p is None:
        return _regular(n)
    if p.n != n:
        raise GeometryError(f"polygon has {p.n} vertices, weight evaluated at n={n}")
    if not p.has_geometry:
        raise GeometryError("geometric weight needs polygon geometry")
    return p


@lru_cache(maxsize=64)
def _regular(n: int) -> PolygonSpec:
    return PolygonSpec.regular(n)


def eval_weight(f: WeightSpec, n: int, tr: TriangleRef, p: Optional[PolygonSpec] = None) -> Number:
    """f_n evaluated at triangle ``tr``.

    Exact kinds return int or Fraction; geometric kinds return float and use
    the regular unit-circle polygon when ``p`` is omitted.
    """
    l, j, r = tr
    if not 1 <= l < j < r <= n:
        raise WeightError(f"bad triangle {tr} for n={n}")
    kind = f.kind
    if kind == "const_one":
        return 1
    if kind == "one_side":
        return int(boundary_sides(n, tr) == 1)
    if kind == "ears":
        return int(boundary_sides(n, tr) >= 2)
    if kind == "degree_vertex1":
        return int(l == 1)
    if kind == "blue_sum":
        return j - l
    if kind == "blue_count":
        if not 1 <= f.param <= n - 2:
            raise WeightError(f"blue_count p={f.param} out of range 1..{n - 2}")
        return int(j - l == f.param)
    if kind == "one_side_weighted":
        if boundary_sides(n, tr) != 1:
            return 0
        return _normalize((f.param ** (j - l) + f.param ** (r - j)) / 2)
    if kind == "curious":
        w = f.param
        return _normalize((w ** (j - l) + w ** (r - j) + w ** (r - l)) / 3)
    if kind == "custom":
        value = _custom_dict(f).get(tr) if f.custom_n == n else None
        if value is None:
            raise WeightError(f"custom table (n={f.custom_n}) has no value for {tr} at n={n}")
        return _normalize(value)
    per, ar, inr = triangle_metrics(_resolve_geometry(n, p), tr)
    return {"perimeter": per, "area": ar, "inradius": inr}[kind]


@lru_cache(maxsize=16)
def _custom_dict(f: WeightSpec) -> dict[TriangleRef, Fraction]:
    return dict(f.table)


def _normalize(x: Fraction) -> Union[int, Fraction]:
    return x.numerator if x.denominator == 1 else x


def weight_table(f: WeightSpec, n: int, p: Optional[PolygonSpec] = None) -> dict[TriangleRef, Number]:
    """All values f_n(l, j, r) keyed by triple."""
    if f.needs_geometry:
        p = _resolve_geometry(n, p)
    else:
        p = None
    return dict(_weight_table(f, n, p))


@lru_cache(maxsize=256)
def _weight_table(f, n, p):
    if f.kind == "custom":
        if f.custom_n != n:
            raise WeightError(f"custom table is for n={f.custom_n}, not n={n}")
        return tuple((t, _normalize(v)) for t, v in f.table)
    return tuple((t, eval_weight(f, n, t, p)) for t in combinations(range(1, n + 1), 3))


def is_integer_valued(f: WeightSpec, n: int) -> bool:
    if not f.is_exact:
        return False
    return all(isinstance(v, int) for v in weight_table(f, n).values())


def _same(a: Number, b: Number, tol: float) -> bool:
    if tol == 0:
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def classify(f: WeightSpec, n: int, tol: float = 1e-12) -> tuple[bool, bool, bool]:
    """(integer_valued, shift_invariant, n_free) by exhaustive check.

    shift_invariant: f(l,j,r) == f(l+1,j+1,r+1) whenever r <= n-1.
    n_free: f at sizes n and n-1 agree on all triples inside 2..n-1.
    ``tol`` applies to real-valued kinds only.
    """
    tol = 0 if f.is_exact else tol
    vals = weight_table(f, n)
    shift = all(
        _same(vals[(l, j, r)], vals[(l + 1, j + 1, r + 1)], tol)
        for l, j, r in combinations(range(1, n), 3)
    )
    try:
        smaller = weight_table(f, n - 1) if n - 1 >= 3 else {}
    except WeightError:
        # the family is not defined on the smaller polygon
        n_free = False
    else:
        n_free = all(_same(vals[t], smaller[t], tol) for t in combinations(range(2, n), 3))
    return is_integer_valued(f, n), shift, n_free


def flip_constancy(f: WeightSpec, n: int, tol: float = 0.0, p: Optional[PolygonSpec] = None) -> bool:
    """True iff f(l,j,i) + f(l,i,r) == f(l,j,r) + f(j,i,r) for all l<j<i<r.

    This is exactly the condition for the weight sum to be the same on every
    triangulation.
    """
    if not f.is_exact and tol <= 0:
        raise WeightError("real-valued weights need tol > 0")
    vals = weight_table(f, n, p)
    if f.is_exact:
        tol = 0
    for l, j, i, r in combinations(range(1, n + 1), 4):
        lhs = vals[(l, j, i)] + vals[(l, i, r)]
        rhs = vals[(l, j, r)] + vals[(j, i, r)]
        if not _same(lhs, rhs, tol):
            return False
    return True


BUILTIN_INTEGER = (
    const_one(),
    one_side(),
    ears(),
    degree_vertex1(),
    blue_sum(),
    blue_count(1),
    blue_count(2),
    blue_count(3),
)
