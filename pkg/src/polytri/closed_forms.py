"""Closed-form moments and generating functions.

Two kinds of closed forms live here: the general mean/variance formulas for
shift-invariant weights (built from the beta/lambda sums and the triangular
matrices M and D with M D = I), and explicit per-family formulas for the
one-side, ears, degree and blue-angle statistics.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Iterator, Optional, Sequence

from .exactmath import binomial, catalan, narayana
from .polygon import PolygonSpec
from .weights import WeightSpec, classify, weight_table


class ClosedFormError(ValueError):
    pass


# ---------------------------------------------------------------------------
# general formulas for shift-invariant weights


def _require_shift_invariant(f: WeightSpec, n: int) -> None:
    if not classify(f, n)[1]:
        raise ClosedFormError(f"weight {f} is not shift-invariant at n={n}")


def beta(n: int, j: int, vals) -> object:
    """sum_{s=j+1}^{n-1} f(j,s,n) C_{s-j-1} C_{n-s-1}."""
    return sum(vals[(j, s, n)] * catalan(s - j - 1) * catalan(n - s - 1) for s in range(j + 1, n))


def _exact(x):
    return Fraction(x) if isinstance(x, (int, Fraction)) else x


def _expectations(n: int, vals) -> dict[int, object]:
    # E(S_{n,l,n}) for l = 1..n-1; E(S_{n,n-1,n}) = 0
    betas = {j: beta(n, j, vals) for j in range(1, n - 1)}
    out = {}
    for l in range(1, n):
        hp = sum(betas[j] * binomial(2 * j - 2 * l, j - l) for j in range(l, n - 1))
        out[l] = _ratio(hp, catalan(n - l - 1))
    return out


def _ratio(a, b):
    if isinstance(a, float):
        return a / b
    return Fraction(a, 1) / b


def coh1_expectation(n: int, l: int, f: WeightSpec, p: Optional[PolygonSpec] = None):
    """E(S_{n,l,n}) for a shift-invariant weight."""
    if not 1 <= l <= n - 1:
        raise ClosedFormError(f"l={l} out of range 1..{n - 1}")
    _require_shift_invariant(f, n)
    return _exact(_expectations(n, weight_table(f, n, p))[l])


def coh1_variance(n: int, f: WeightSpec, p: Optional[PolygonSpec] = None):
    """Var(S_n) for a shift-invariant weight, from the lambda sums."""
    _require_shift_invariant(f, n)
    vals = weight_table(f, n, p)
    e = _expectations(n, vals)
    lam_total = 0
    beta_total = 0
    for s in range(1, n - 1):
        lam = 0
        for j in range(s + 1, n):
            fv = vals[(s, j, n)]
            left, right = e[s + n - j], e[j]
            lam += catalan(j - s - 1) * catalan(n - j - 1) * (
                fv * fv + 2 * fv * (left + right) + 2 * left * right
            )
        lam_total += lam * binomial(2 * s - 2, s - 1)
        beta_total += beta(n, s, vals) * binomial(2 * s - 2, s - 1)
    c = catalan(n - 2)
    mean = _ratio(beta_total, c)
    return _exact(_ratio(lam_total, c) - mean * mean)


@dataclass(frozen=True)
class MDMatrices:
    M: tuple[tuple[int, ...], ...]
    D: tuple[tuple[int, ...], ...]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    size = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(size)) for j in range(size)] for i in range(size)]


def md_matrices(n: int) -> MDMatrices:
    """The (n-1)x(n-1) matrices M and D; asserts M D = I."""
    if n < 2:
        raise ClosedFormError(f"md_matrices needs n >= 2, got {n}")
    size = n - 1
    M = tuple(
        tuple(1 if i == j else (-2 * catalan(j - i - 1) if i < j else 0) for j in range(size))
        for i in range(size)
    )
    D = tuple(
        tuple(binomial(2 * (j - i), j - i) if i <= j else 0 for j in range(size)) for i in range(size)
    )
    product = matmul(M, D)
    if any(product[i][j] != (i == j) for i in range(size) for j in range(size)):
        raise ClosedFormError(f"M D != I for n={n}")
    return MDMatrices(M, D)


def first_derivative_vector(n: int, f: WeightSpec) -> list:
    """(h'_{n,1,n}, ..., h'_{n,n-1,n}) as D (beta_1, ..., beta_{n-2}, 0)."""
    _require_shift_invariant(f, n)
    vals = weight_table(f, n)
    rhs = [beta(n, j, vals) for j in range(1, n - 1)] + [0]
    D = md_matrices(n).D
    return [sum(D[i][k] * rhs[k] for k in range(n - 1)) for i in range(n - 1)]


# ---------------------------------------------------------------------------
# per-family formulas


@dataclass(frozen=True)
class Formula:
    min_n: int
    kind: str  # "value" or "gf"
    fn: Callable
    needs_w: bool = False


def _oneside_gf(n):
    out: dict[int, Fraction] = {}
    for j in range(n - 1):
        coef = catalan(j) * (2 * binomial(j + 2, n - 2 - j) - binomial(j + 1, n - 2 - j))
        if coef == 0:
            continue
        m = n - 2 - j
        # z^{2j+4-n} (1 - z^2)^m
        for i in range(m + 1):
            e = 2 * j + 4 - n + 2 * i
            out[e] = out.get(e, 0) + coef * binomial(m, i) * (-1) ** i
    return _normalize_gf(out, n)


def _ears_gf(n):
    out: dict[int, Fraction] = {0: catalan(n - 2)}
    for j in range(n - 2):
        coef = catalan(j) * (binomial(j + 1, n - 2 - j) + 2 * binomial(j + 1, n - 3 - j))
        m = n - 2 - j
        # (z - 1)^m
        for i in range(m + 1):
            out[i] = out.get(i, 0) + coef * binomial(m, i) * (-1) ** (m - i)
    return _normalize_gf(out, n)


def _normalize_gf(counts: dict, n: int) -> dict[int, Fraction]:
    c = catalan(n - 2)
    if any(e < 0 and v != 0 for e, v in counts.items()):
        raise ClosedFormError("negative powers failed to cancel")
    return {e: Fraction(v, c) for e, v in sorted(counts.items()) if v != 0}


def _degree_gf(n):
    counts = {
        s: Fraction(s * factorial(2 * n - s - 5), factorial(n - s - 2) * factorial(n - 2))
        for s in range(1, n - 1)
    }
    return _normalize_gf(counts, n)


def _blue1_gf(n):
    return _normalize_gf({j: narayana(n - 2, j) for j in range(1, n - 1)}, n)


def _oneside_general_mean(n, w):
    c = catalan(n - 2)
    s1 = sum(w ** j * catalan(j) * binomial(2 * n - 6 - 2 * j, n - 3 - j) for j in range(n - 2))
    s2 = sum(w ** j * catalan(j) * binomial(2 * n - 4 - 2 * j, n - 2 - j) for j in range(n - 2))
    return -Fraction((n - 1) * (2 * w ** (n - 2) + 3 * w), 2 * (2 * n - 5)) + 3 * w * s1 / c - w * s2 / (2 * c)


def _curious_tail(n, w):
    c = catalan(n - 2)
    s = sum(w ** j * catalan(j) * binomial(2 * n - 4 - 2 * j, n - 2 - j) for j in range(n - 2))
    return -Fraction((n - 1) * w, 3) + 2 * w * s / (3 * c)


FORMULAS: dict[str, Formula] = {
    "oneside_mean": Formula(4, "value", lambda n: Fraction(n * (n - 4), 2 * n - 5)),
    "oneside_var": Formula(
        5, "value", lambda n: Fraction(2 * n * (n - 1) * (n - 4) * (n - 5), (2 * n - 5) ** 2 * (2 * n - 7))
    ),
    "oneside_gf": Formula(4, "gf", _oneside_gf),
    "oneside_general_mean": Formula(4, "value", _oneside_general_mean, needs_w=True),
    "ears_mean": Formula(4, "value", lambda n: Fraction(n * (n - 1), 2 * (2 * n - 5))),
    "ears_var": Formula(
        6, "value", lambda n: Fraction(n * (n - 1) * (n - 4) * (n - 5), 2 * (2 * n - 5) ** 2 * (2 * n - 7))
    ),
    "ears_gf": Formula(4, "gf", _ears_gf),
    "degree_gf": Formula(4, "gf", _degree_gf),
    "degree_mean": Formula(2, "value", lambda n: Fraction(3 * (n - 2), n)),
    "degree_var": Formula(
        2, "value", lambda n: Fraction(2 * (2 * n - 3) * (n - 2) * (n - 3), n * n * (n + 1))
    ),
    "bluesum_mean": Formula(
        3, "value", lambda n: Fraction(2 ** (2 * n - 5) - binomial(2 * n - 5, n - 2), catalan(n - 2))
    ),
    "blue1_gf": Formula(4, "gf", _blue1_gf),
    "blue1_mean": Formula(4, "value", lambda n: Fraction(n - 1, 2)),
    # printed variance; disagrees with the Narayana law (see ERRATA in oracle)
    "blue1_var_printed": Formula(4, "value", lambda n: Fraction((n - 1) * (n - 2) * (n - 3), 2 * (2 * n - 5))),
    "blue1_var": Formula(4, "value", lambda n: Fraction((n - 1) * (n - 3), 4 * (2 * n - 5))),
    "curious_mean": Formula(4, "value", lambda n, w: w ** (n - 1) / 3 + _curious_tail(n, w), needs_w=True),
    "curious_mean_printed": Formula(4, "value", lambda n, w: w ** (n - 1) + _curious_tail(n, w), needs_w=True),
}


def formula_library(id: str, n: int, w=None):
    """Evaluate formula ``id`` at ``n`` (and ``w`` where it applies).

    Value ids return a Fraction; gf ids return {exponent: probability} for
    g_n, i.e. triangulation counts divided by C_{n-2}.
    """
    try:
        form = FORMULAS[id]
    except KeyError:
        raise ClosedFormError(f"unknown formula id {id!r}") from None
    if n < form.min_n:
        raise ClosedFormError(f"{id} holds for n >= {form.min_n}, got n={n}")
    if form.needs_w:
        if w is None:
            raise ClosedFormError(f"{id} needs parameter w")
        return _exact(Fraction(form.fn(n, Fraction(w))))
    return form.fn(n)


def formula_ids() -> list[str]:
    return sorted(FORMULAS)


# which formula ids describe which weight: (mean id, variance id, gf id)
_FAMILY_FORMULAS = {
    "one_side": ("oneside_mean", "oneside_var", "oneside_gf"),
    "ears": ("ears_mean", "ears_var", "ears_gf"),
    "degree_vertex1": ("degree_mean", "degree_var", "degree_gf"),
    "blue_sum": ("bluesum_mean", None, None),
    "one_side_weighted": ("oneside_general_mean", None, None),
    "curious": ("curious_mean", None, None),
}


def formulas_for(f: WeightSpec) -> tuple[Optional[str], Optional[str], Optional[str]]:
    """(mean id, variance id, gf id) for weight ``f``; None where absent."""
    if f.kind == "blue_count":
        return ("blue1_mean", "blue1_var", "blue1_gf") if f.param == 1 else (None, None, None)
    return _FAMILY_FORMULAS.get(f.kind, (None, None, None))


# ---------------------------------------------------------------------------
# angle portfolio at vertex 1


@dataclass(frozen=True)
class PortfolioQuery:
    n: int
    k: tuple[int, ...]

    def __post_init__(self):
        k = tuple(int(x) for x in self.k)
        if len(k) > self.n - 2:
            if any(k[self.n - 2:]):
                raise ClosedFormError(f"k has nonzero entries beyond index {self.n - 2}")
            k = k[: self.n - 2]
        k = k + (0,) * (self.n - 2 - len(k))
        object.__setattr__(self, "k", k)
        if any(x < 0 for x in k):
            raise ClosedFormError("k entries must be nonnegative")
        weighted = sum(i * x for i, x in enumerate(k, start=1))
        if weighted != self.n - 2:
            raise ClosedFormError(f"sum i*k_i = {weighted} != n-2 = {self.n - 2}")

    @property
    def K(self) -> int:
        return sum(self.k)


def _multinomial(counts: Sequence[int]) -> int:
    out = factorial(sum(counts))
    for c in counts:
        out //= factorial(c)
    return out


def _catalan_power(counts: Sequence[int]) -> int:
    out = 1
    for i, c in enumerate(counts):
        out *= catalan(i) ** c
    return out


def partitions_with_parts(total: int, parts: int, largest: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """Multiplicity vectors p (length ``total``) with sum p_j = parts, sum j p_j = total."""
    def rec(remaining, count, max_part):
        if count == 0:
            if remaining == 0:
                yield ()
            return
        for part in range(min(max_part, remaining - (count - 1)), 0, -1):
            for rest in rec(remaining - part, count - 1, part):
                yield (part,) + rest

    for seq in rec(total, parts, largest or total):
        vec = [0] * total
        for part in seq:
            vec[part - 1] += 1
        yield tuple(vec)


def portfolio_vectors(n: int) -> Iterator[tuple[int, ...]]:
    """Every valid k vector for the n-gon."""
    for K in range(1, n - 1):
        yield from partitions_with_parts(n - 2, K)


def z_partition(n: int, K: int) -> int:
    """Number of triangulations whose vertex 1 touches exactly K triangles."""
    if not 1 <= K <= n - 2:
        raise ClosedFormError(f"K={K} out of range 1..{n - 2}")
    return sum(_multinomial(p) * _catalan_power(p) for p in partitions_with_parts(n - 2, K))


def portfolio_probability(q: PortfolioQuery) -> Fraction:
    """P(angle classes at vertex 1 have multiplicities k_1, ..., k_{n-2})."""
    n, K = q.n, q.K
    lead = Fraction(K * factorial(2 * n - K - 5), factorial(n - K - 2) * factorial(n - 2))
    return lead / (z_partition(n, K) * catalan(n - 2)) * _multinomial(q.k) * _catalan_power(q.k)
