from collections import Counter
from fractions import Fraction

import pytest

from polytri import closed_forms as cf
from polytri import weights as W
from polytri.exactmath import catalan, narayana
from polytri.gf import h_polynomial, moments_exact
from polytri.oracle import exact_distribution
from polytri.polygon import enumerate_triangulations

RANGE = range(4, 11)


def enum_moments(n, f):
    d = exact_distribution(n, f)
    return d.mean(), d.variance()


@pytest.mark.parametrize("n", RANGE)
def test_one_side_moments(n):
    mean, var = enum_moments(n, W.one_side())
    assert cf.formula_library("oneside_mean", n) == mean == Fraction(n * (n - 4), 2 * n - 5)
    if n >= 5:
        assert cf.formula_library("oneside_var", n) == var


@pytest.mark.parametrize("n", RANGE)
def test_ears_moments(n):
    mean, var = enum_moments(n, W.ears())
    assert cf.formula_library("ears_mean", n) == mean
    if n >= 6:
        assert cf.formula_library("ears_var", n) == var


@pytest.mark.parametrize("family, f", [("oneside_gf", W.one_side()), ("ears_gf", W.ears()),
                                       ("degree_gf", W.degree_vertex1()), ("blue1_gf", W.blue_count(1))])
@pytest.mark.parametrize("n", RANGE)
def test_gf_formulas(family, f, n):
    law = {int(v): p for v, p in exact_distribution(n, f).entries}
    assert cf.formula_library(family, n) == law


def test_degree_gf_pentagon():
    assert cf.formula_library("degree_gf", 5) == {1: Fraction(2, 5), 2: Fraction(2, 5), 3: Fraction(1, 5)}


@pytest.mark.parametrize("n", RANGE)
def test_degree_moments(n):
    mean, var = enum_moments(n, W.degree_vertex1())
    assert cf.formula_library("degree_mean", n) == mean == Fraction(3 * (n - 2), n)
    assert cf.formula_library("degree_var", n) == var


@pytest.mark.parametrize("n", RANGE)
def test_blue_sum_mean(n):
    assert cf.formula_library("bluesum_mean", n) == enum_moments(n, W.blue_sum())[0]


@pytest.mark.parametrize("n", RANGE)
def test_blue_count_narayana(n):
    law = exact_distribution(n, W.blue_count(1)).as_dict()
    for j in range(1, n - 1):
        assert law[j] * catalan(n - 2) == narayana(n - 2, j)
    mean, var = enum_moments(n, W.blue_count(1))
    assert cf.formula_library("blue1_mean", n) == mean == Fraction(n - 1, 2)
    assert cf.formula_library("blue1_var", n) == var


def test_blue_count_printed_variance_is_wrong():
    assert cf.formula_library("blue1_var_printed", 5) == Fraction(12, 5)
    assert cf.formula_library("blue1_var", 5) == Fraction(2, 5) == enum_moments(5, W.blue_count(1))[1]


@pytest.mark.parametrize("w", [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3)])
@pytest.mark.parametrize("n", RANGE)
def test_weighted_one_side_mean(n, w):
    assert cf.formula_library("oneside_general_mean", n, w) == enum_moments(n, W.one_side_weighted(w))[0]


@pytest.mark.parametrize("n", RANGE)
def test_weighted_one_side_reduces(n):
    assert cf.formula_library("oneside_general_mean", n, 1) == cf.formula_library("oneside_mean", n)


@pytest.mark.parametrize("w", [Fraction(1), Fraction(2), Fraction(1, 2)])
@pytest.mark.parametrize("n", RANGE)
def test_curious_mean(n, w):
    value = cf.formula_library("curious_mean", n, w)
    assert value == enum_moments(n, W.curious(w))[0]
    if w == 1:
        assert value == n - 2


def test_curious_printed_leading_term():
    assert cf.formula_library("curious_mean", 4, 2) == Fraction(22, 3)
    assert cf.formula_library("curious_mean_printed", 4, 2) == Fraction(38, 3)


def test_formula_errors():
    with pytest.raises(cf.ClosedFormError):
        cf.formula_library("nope", 5)
    with pytest.raises(cf.ClosedFormError):
        cf.formula_library("ears_var", 5)
    with pytest.raises(cf.ClosedFormError):
        cf.formula_library("curious_mean", 5)


SHIFT_INVARIANT = [f for f in W.BUILTIN_INTEGER if f.kind != "degree_vertex1"]


@pytest.mark.parametrize("f", SHIFT_INVARIANT, ids=str)
@pytest.mark.parametrize("n", RANGE)
def test_coh1_matches_engine(f, n):
    if f.kind == "blue_count" and f.param > n - 2:
        pytest.skip("p out of range")
    rep = moments_exact(n, f)
    assert cf.coh1_expectation(n, 1, f) == rep.mean
    assert cf.coh1_variance(n, f) == rep.variance


@pytest.mark.parametrize("f", [W.ears(), W.one_side(), W.blue_sum()], ids=str)
def test_coh1_subintervals(f):
    n = 9
    for l in range(1, n):
        poly = h_polynomial(n, l, n, f)
        expected = Fraction(poly.derivative_at_one(), catalan(n - l - 1))
        assert cf.coh1_expectation(n, l, f) == expected


def test_coh1_rejects_degree():
    with pytest.raises(cf.ClosedFormError):
        cf.coh1_expectation(7, 1, W.degree_vertex1())


def test_coh1_real_weight():
    from polytri.gf import moments_numeric

    num = moments_numeric(8, W.perimeter())
    assert cf.coh1_expectation(8, 1, W.perimeter()) == pytest.approx(num.mean, rel=1e-12)
    assert cf.coh1_variance(8, W.perimeter()) == pytest.approx(num.variance, rel=1e-8)


@pytest.mark.parametrize("n", range(2, 26))
def test_md_identity(n):
    md = cf.md_matrices(n)
    size = n - 1
    assert cf.matmul(md.M, md.D) == [[int(i == j) for j in range(size)] for i in range(size)]


def test_md_entries():
    md = cf.md_matrices(5)
    assert md.D[0] == (1, 2, 6, 20)
    assert md.M[0] == (1, -2, -2, -4)


@pytest.mark.parametrize("f", [W.ears(), W.blue_sum()], ids=str)
def test_first_derivative_vector(f):
    n = 8
    vec = cf.first_derivative_vector(n, f)
    for l in range(1, n):
        assert vec[l - 1] == h_polynomial(n, l, n, f).derivative_at_one()


# ---------------------------------------------------------------------------
# portfolio


def _enumerated_portfolios(n):
    counts = Counter()
    for t in enumerate_triangulations(n):
        arcs = Counter(t.fan_arcs())
        counts[tuple(arcs.get(i, 0) for i in range(1, n - 1))] += 1
    total = catalan(n - 2)
    return {k: Fraction(c, total) for k, c in counts.items()}


@pytest.mark.parametrize("n", range(4, 9))
def test_portfolio_matches_enumeration(n):
    freq = _enumerated_portfolios(n)
    vectors = list(cf.portfolio_vectors(n))
    assert set(vectors) == set(freq)
    probs = {k: cf.portfolio_probability(cf.PortfolioQuery(n, k)) for k in vectors}
    assert probs == freq
    assert sum(probs.values()) == 1


@pytest.mark.parametrize("n", range(4, 9))
def test_portfolio_marginal_is_degree_law(n):
    by_k = Counter()
    for k in cf.portfolio_vectors(n):
        by_k[sum(k)] += cf.portfolio_probability(cf.PortfolioQuery(n, k))
    assert dict(by_k) == cf.formula_library("degree_gf", n)


@pytest.mark.parametrize("n", range(4, 13))
def test_z_partition_is_degree_coefficient(n):
    h = h_polynomial(n, 1, n, W.degree_vertex1())
    for K in range(1, n - 1):
        assert cf.z_partition(n, K) == h.coeffs.get(K, 0)


def test_portfolio_examples():
    assert cf.portfolio_probability(cf.PortfolioQuery(4, (2, 0))) == Fraction(1, 2)
    assert [cf.z_partition(5, K) for K in (1, 2, 3)] == [2, 2, 1]
    assert cf.PortfolioQuery(5, (1, 1)).k == (1, 1, 0)


@pytest.mark.parametrize("k", [(1, 0), (0, 0, 1, 1), (-1, 2, 1)])
def test_portfolio_rejects(k):
    with pytest.raises(cf.ClosedFormError):
        cf.PortfolioQuery(5, k)


def test_partitions_count():
    # partitions of 10 into 3 parts
    assert len(list(cf.partitions_with_parts(10, 3))) == 8
    for vec in cf.partitions_with_parts(10, 3):
        assert sum(vec) == 3 and sum(i * c for i, c in enumerate(vec, 1)) == 10


def test_beta_uses_remaining_catalan():
    n = 7
    vals = W.weight_table(W.const_one(), n)
    # with f = 1 the sum over s is the full convolution, i.e. C_{n-j-1}
    for j in range(1, n - 1):
        assert cf.beta(n, j, vals) == catalan(n - j - 1)
