import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from polytri import weights as W
from polytri.exactmath import catalan
from polytri.polygon import validate_triangulation
from polytri.sampler import (
    SampleRun,
    SamplerError,
    make_rng,
    sample_sums,
    sample_triangles,
    sample_triangulation,
    split_law,
    weight_sum,
)


def test_split_law_pentagon():
    assert split_law(5, 1, 5).probs == {2: Fraction(2, 5), 3: Fraction(1, 5), 4: Fraction(2, 5)}


def test_split_law_single_vertex():
    assert split_law(9, 4, 6).probs == {5: 1}


def test_split_law_too_short():
    with pytest.raises(SamplerError):
        split_law(6, 2, 3)


@given(st.integers(3, 40).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 2))).flatmap(
    lambda nl: st.tuples(st.just(nl[0]), st.just(nl[1]), st.integers(nl[1] + 2, nl[0]))))
def test_split_law_normalized(args):
    n, l, r = args
    assert sum(split_law(n, l, r).probs.values()) == 1


def test_triangle():
    rng = make_rng(1)
    for _ in range(10):
        assert sample_triangulation(3, rng).triangles == ((1, 2, 3),)


def test_square_uniform():
    rng = make_rng(42)
    samples = 100_000
    hits = sum(sample_triangulation(4, rng).diagonals == ((1, 3),) for _ in range(samples))
    assert abs(hits / samples - 0.5) <= 3 * math.sqrt(0.25 / samples)


def test_mean_ears_octagon():
    values = sample_sums(SampleRun(8, W.ears(), 100_000, 42))
    mean = sum(values) / len(values)
    sd = math.sqrt(sum((v - mean) ** 2 for v in values) / (len(values) - 1))
    assert abs(mean - 28 / 11) <= 3 * sd / math.sqrt(len(values))


def test_determinism():
    a = [sample_triangulation(9, r) for r in [make_rng(7)] for _ in range(200)]
    b = [sample_triangulation(9, r) for r in [make_rng(7)] for _ in range(200)]
    assert a == b
    c = [sample_triangulation(9, r) for r in [make_rng(8)] for _ in range(200)]
    assert a != c


def test_streams_differ():
    assert sample_sums(SampleRun(9, W.blue_sum(), 50, 3), stream=1) != sample_sums(SampleRun(9, W.blue_sum(), 50, 3), stream=2)


def test_samples_are_valid():
    rng = make_rng(5)
    for n in (3, 4, 7, 12, 20):
        for _ in range(50):
            t = sample_triangulation(n, rng)
            assert validate_triangulation(n, t.diagonals) == t


def test_draw_order_left_first():
    tris = sample_triangles(10, make_rng(11))
    assert tris[0][0] == 1 and tris[0][2] == 10
    l, j, r = tris[0]
    # the left interval's triangles are emitted before the right interval's
    left = [i for i, t in enumerate(tris) if t[2] <= j and t != tris[0]]
    right = [i for i, t in enumerate(tris) if t[0] >= j]
    if left and right:
        assert max(left) < min(right)


def test_first_split_matches_law():
    n, samples = 9, 100_000
    rng = make_rng(42)
    counts = Counter(sample_triangles(n, rng)[0][1] for _ in range(samples))
    for j, p in split_law(n, 1, n).probs.items():
        p = float(p)
        assert abs(counts[j] / samples - p) <= 3 * math.sqrt(p * (1 - p) / samples)


def test_uniform_pentagon_chi_square():
    from polytri.oracle import chi_square_uniformity

    rng = make_rng(42)
    counts = Counter(sample_triangulation(6, rng).diagonals for _ in range(100_000))
    assert len(counts) == catalan(4)
    assert chi_square_uniformity(counts.values(), catalan(4)) > 1e-3


def test_weight_sum_examples():
    square = validate_triangulation(4, {(1, 3)})
    assert weight_sum(square, W.ears()) == 2
    assert weight_sum(square, W.blue_sum()) == 3
    pentagon = validate_triangulation(5, {(2, 5), (3, 5)})
    assert weight_sum(pentagon, W.blue_count(1)) == 3


def test_sample_run_validation():
    with pytest.raises(SamplerError):
        SampleRun(5, W.ears(), 0)
