from itertools import combinations

import pytest

from polytri.polygon import crosses, is_polygon_edge


def brute_force_triangulations(n):
    """Diagonal sets of every triangulation, by checking all (n-3)-subsets."""
    diagonals = [(a, b) for a, b in combinations(range(1, n + 1), 2) if not is_polygon_edge(n, a, b)]
    out = []
    for subset in combinations(diagonals, n - 3):
        if not any(crosses(d, e) for d, e in combinations(subset, 2)):
            out.append(tuple(sorted(subset)))
    return out


@pytest.fixture
def brute():
    return brute_force_triangulations
