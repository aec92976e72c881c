"""Exact distribution of the weight sum via the interval recursion

    h(l, r) = sum_{l<j<r} z^{f(l,j,r)} h(l, j) h(j, r),   h(l, l+1) = 1,

where h(l, r) counts triangulations of the sub-polygon l..r by weight sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Union

from .exactmath import catalan
from .polygon import PolygonSpec
from .weights import WeightSpec, is_integer_valued, weight_table

Exponent = Union[int, Fraction]

GF_CAP = 40


class EngineError(ValueError):
    pass


class ZPoly:
    """Finitely supported map exponent -> exact coefficient.

    Exponents may be negative, and for rational-valued weights they may be
    Fractions. Zero coefficients are never stored.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Mapping[Exponent, Union[int, Fraction]]] = None):
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v != 0}

    @classmethod
    def one(cls) -> ZPoly:
        return cls({0: 1})

    @classmethod
    def monomial(cls, exponent: Exponent, coeff=1) -> ZPoly:
        return cls({exponent: coeff})

    def __add__(self, other: ZPoly) -> ZPoly:
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return ZPoly(out)

    def __mul__(self, other: ZPoly) -> ZPoly:
        out: dict = {}
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return ZPoly(out)

    def shift(self, exponent: Exponent) -> ZPoly:
        """Multiply by z**exponent."""
        return ZPoly({k + exponent: v for k, v in self.coeffs.items()})

    def scale(self, c) -> ZPoly:
        return ZPoly({k: v * c for k, v in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, ZPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def at_one(self):
        return sum(self.coeffs.values())

    def derivative_at_one(self):
        return sum(k * v for k, v in self.coeffs.items())

    def second_derivative_at_one(self):
        return sum(k * (k - 1) * v for k, v in self.coeffs.items())

    def items(self):
        """(exponent, coefficient) pairs by ascending exponent."""
        return sorted(self.coeffs.items())

    def __repr__(self):
        if not self.coeffs:
            return "ZPoly(0)"
        terms = " + ".join(f"{v}*z^{k}" for k, v in self.items())
        return f"ZPoly({terms})"


@dataclass(frozen=True)
class DistTable:
    n: int
    weight: str
    entries: tuple[tuple[Fraction, Fraction], ...]  # (S value, probability), ascending

    def as_dict(self) -> dict:
        return dict(self.entries)

    def mean(self) -> Fraction:
        return sum((v * p for v, p in self.entries), Fraction(0))

    def variance(self) -> Fraction:
        m = self.mean()
        return sum(((v - m) ** 2 * p for v, p in self.entries), Fraction(0))


@dataclass(frozen=True)
class MomentReport:
    mean: Union[Fraction, float]
    variance: Union[Fraction, float]
    exact: bool


def _check(n: int, f: WeightSpec, allow_rational: bool) -> None:
    if n < 3:
        raise EngineError(f"polygon needs n >= 3, got {n}")
    if n > GF_CAP:
        raise EngineError(f"n={n} exceeds engine cap {GF_CAP}")
    if not f.is_exact:
        raise EngineError(f"weight {f} is real-valued; use moments_numeric")
    if not allow_rational and not is_integer_valued(f, n):
        raise EngineError(f"weight {f} is not integer-valued at n={n}")


def h_table(n: int, f: WeightSpec, allow_rational: bool = False) -> dict[tuple[int, int], ZPoly]:
    """h(l, r) for every interval 1 <= l < r <= n, memoized on (l, r)."""
    _check(n, f, allow_rational)
    vals = weight_table(f, n)
    h: dict[tuple[int, int], ZPoly] = {}
    for l in range(1, n):
        h[(l, l + 1)] = ZPoly.one()
    for length in range(2, n):
        for l in range(1, n - length + 1):
            r = l + length
            acc: dict = {}
            for j in range(l + 1, r):
                w = vals[(l, j, r)]
                for a, x in h[(l, j)].coeffs.items():
                    for b, y in h[(j, r)].coeffs.items():
                        e = a + b + w
                        acc[e] = acc.get(e, 0) + x * y
            poly = ZPoly(acc)
            if poly.at_one() != catalan(length - 1):  # pragma: no cover - invariant guard
                raise EngineError(f"h({l},{r})(1) != C_{length - 1}")
            h[(l, r)] = poly
    return h


def h_polynomial(n: int, l: int, r: int, f: WeightSpec, allow_rational: bool = False) -> ZPoly:
    if not 1 <= l < r <= n:
        raise EngineError(f"bad interval ({l},{r}) for n={n}")
    return h_table(n, f, allow_rational)[(l, r)]


def distribution(n: int, f: WeightSpec) -> DistTable:
    """Exact law of the weight sum over uniform triangulations of the n-gon.

    Rational-valued weights are allowed; keys are then exact Fractions.
    """
    h = h_polynomial(n, 1, n, f, allow_rational=True)
    c = catalan(n - 2)
    entries = tuple((Fraction(k), Fraction(v, c)) for k, v in h.items())
    return DistTable(n, f.describe(), entries)


def moments_exact(n: int, f: WeightSpec) -> MomentReport:
    h = h_polynomial(n, 1, n, f, allow_rational=True)
    c = catalan(n - 2)
    d1 = Fraction(h.derivative_at_one())
    d2 = Fraction(h.second_derivative_at_one())
    mean = d1 / c
    var = (d1 + d2) / c - d1 * d1 / (c * c)
    return MomentReport(mean, var, True)


def moments_numeric(n: int, f: WeightSpec, p: Optional[PolygonSpec] = None) -> MomentReport:
    """Mean and variance in floating point, for any weight.

    Uses the first-moment recursion over intervals and the law of total
    variance for the second moment, conditioning on the apex j.
    """
    if n < 3:
        raise EngineError(f"polygon needs n >= 3, got {n}")
    vals = {t: float(v) for t, v in weight_table(f, n, p).items()}
    cat = [float(catalan(k)) for k in range(n)]
    m1 = {}
    var = {}
    for l in range(1, n):
        m1[(l, l + 1)] = 0.0
        var[(l, l + 1)] = 0.0
    for length in range(2, n):
        total = cat[length - 1]
        for l in range(1, n - length + 1):
            r = l + length
            mus, conds, within = [], [], 0.0
            for j in range(l + 1, r):
                mu = cat[j - l - 1] * cat[r - j - 1] / total
                mus.append(mu)
                conds.append(vals[(l, j, r)] + m1[(l, j)] + m1[(j, r)])
                within += mu * (var[(l, j)] + var[(j, r)])
            mean = math.fsum(mu * c for mu, c in zip(mus, conds))
            between = math.fsum(mu * (c - mean) ** 2 for mu, c in zip(mus, conds))
            m1[(l, r)] = mean
            var[(l, r)] = within + between
    return MomentReport(m1[(1, n)], var[(1, n)], False)
