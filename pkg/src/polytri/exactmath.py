"""Exact combinatorics: Catalan, binomial and Narayana numbers.

Integers are Python ints and rationals are :class:`fractions.Fraction`, so
every quantity here is exact regardless of size.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from math import comb

__all__ = [
    "Fraction",
    "binomial",
    "catalan",
    "catalan_table",
    "identity_suite",
    "narayana",
    "narayana_row",
]

_catalan: list[int] = [1]
_catalan_lock = threading.Lock()


class CatalanMismatch(ArithmeticError):
    """The recurrence and the closed form disagree (should never happen)."""


def binomial(n: int, k: int) -> int:
    """n choose k, with the convention that it vanishes for k < 0 or k > n."""
    if n < 0:
        raise ValueError(f"binomial needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return comb(n, k)


def _extend_catalan(m: int) -> None:
    with _catalan_lock:
        table = _catalan
        while len(table) <= m:
            k = len(table) - 1
            nxt = sum(table[s] * table[k - s] for s in range(k + 1))
            if nxt * (k + 2) != comb(2 * k + 2, k + 1):
                raise CatalanMismatch(f"C_{k + 1}: recurrence gave {nxt}")
            table.append(nxt)


def catalan(m: int) -> int:
    """Catalan number C_m, built by the convolution recurrence and cached."""
    if m < 0:
        raise ValueError(f"catalan needs m >= 0, got {m}")
    if m >= len(_catalan):
        _extend_catalan(m)
    return _catalan[m]


def catalan_table(m: int) -> tuple[int, ...]:
    """(C_0, ..., C_m)."""
    catalan(m)
    return tuple(_catalan[: m + 1])


def narayana(n: int, k: int) -> int:
    if n < 1:
        raise ValueError(f"narayana needs n >= 1, got {n}")
    if k < 1 or k > n:
        return 0
    return binomial(n, k) * binomial(n, k - 1) // n


def narayana_row(n: int) -> tuple[int, ...]:
    """(N_{n,1}, ..., N_{n,n})."""
    return tuple(narayana(n, k) for k in range(1, n + 1))


# Identities used in the moment derivations. Each returns (lhs, rhs).

def catalan_recurrence(m: int) -> tuple[int, int]:
    return catalan(m + 1), sum(catalan(s) * catalan(m - s) for s in range(m + 1))


def central_binomial_convolution(s: int) -> tuple[int, int]:
    """2 * sum_j C_j binom(2(s-j), s-j) == binom(2s+2, s+1)."""
    lhs = 2 * sum(catalan(j) * binomial(2 * (s - j), s - j) for j in range(s + 1))
    return lhs, binomial(2 * s + 2, s + 1)


def one_side_identity_short(n: int) -> tuple[int, int]:
    lhs = sum(catalan(j) * binomial(2 * n - 6 - 2 * j, n - 3 - j) for j in range(n - 2))
    return lhs, binomial(2 * n - 5, n - 2)


def one_side_identity_long(n: int) -> tuple[int, int]:
    lhs = sum(catalan(j) * binomial(2 * n - 4 - 2 * j, n - 2 - j) for j in range(n - 2))
    return lhs, binomial(2 * n - 3, n - 1) - catalan(n - 2)


def narayana_row_sum(n: int) -> tuple[int, int]:
    return sum(narayana_row(n)), catalan(n)


def identity_suite(
    catalan_max: int = 30, one_side_max: int = 30, narayana_max: int = 15
) -> list[tuple[str, int, int, int]]:
    """Evaluate every identity over its range.

    Returns ``(name, argument, lhs, rhs)`` rows; a row holds iff lhs == rhs.
    """
    rows = []
    for m in range(catalan_max + 1):
        rows.append(("catalan_recurrence", m, *catalan_recurrence(m)))
    for s in range(catalan_max + 1):
        rows.append(("central_binomial_convolution", s, *central_binomial_convolution(s)))
    for n in range(4, one_side_max + 1):
        rows.append(("one_side_identity_short", n, *one_side_identity_short(n)))
        rows.append(("one_side_identity_long", n, *one_side_identity_long(n)))
    for n in range(1, narayana_max + 1):
        rows.append(("narayana_row_sum", n, *narayana_row_sum(n)))
    return rows
