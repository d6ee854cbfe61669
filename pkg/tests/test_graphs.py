import random
from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqlines import _pycore
from eqlines.graphs import (
    Graph,
    clique_search,
    independent_search,
    max_clique,
    max_independent_set,
    transversal_clique,
)


def brute_max_clique(g: Graph) -> list[int]:
    """Lex-least maximum clique by enumerating subsets from largest size down."""
    for k in range(g.order, 0, -1):
        for combo in combinations(range(g.order), k):
            if g.is_clique(combo):
                return list(combo)
    return []


@st.composite
def graphs(draw, max_n=11):
    n = draw(st.integers(1, max_n))
    p = draw(st.sampled_from([0.2, 0.5, 0.8]))
    seed = draw(st.integers(0, 10 ** 6))
    rng = random.Random(seed)
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)


def _bits(x):
    return [v for v in range(x.bit_length()) if x >> v & 1]


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_kernels_match_bruteforce(g):
    expected = brute_max_clique(g)
    for mod in _backends():
        assert _bits(mod.max_clique_bits(list(g.adj))) == expected


def _backends():
    from conftest import BACKENDS

    return BACKENDS


def test_examples():
    e7 = Graph.empty(7)
    assert max_independent_set(e7) == list(range(7))
    assert len(max_clique(e7)) == 1
    t = 5
    matching = Graph.from_edges(2 * t, [(i, i + t) for i in range(t)])
    assert max_independent_set(matching) == list(range(t))
    assert len(max_clique(matching)) == 2
    k5 = Graph.complete(5)
    assert len(max_independent_set(k5)) == 1
    assert max_clique(k5) == list(range(5))


def test_64_vertex_boundary(backend):
    rng = random.Random(7)
    n = 64
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < 0.3]
    g = Graph.from_edges(n, edges)
    res = backend.max_clique_bits(list(g.adj))
    clique = _bits(res)
    assert g.is_clique(clique)
    assert clique_search(g).exact
    assert clique == _bits(_pycore.max_clique_bits(list(g.adj)))


def test_heuristic_beyond_limit():
    n = 70
    edges = [(u, v) for u, v in combinations(range(n), 2) if (u + v) % 3]
    g = Graph.from_edges(n, edges)
    res = independent_search(g)
    assert not res.exact
    assert g.is_independent(res.vertices)


def test_induced_and_complement():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    h = g.induced([1, 2, 3])
    assert h.edges() == [(0, 1), (1, 2)]
    assert g.complement().edges() == [(0, 2), (0, 3), (1, 3)]


def test_transversal_clique_matches_enumeration():
    rng = random.Random(3)
    for _ in range(30):
        layers = [[3 * k + i for i in range(3)] for k in range(4)]
        n = 12
        edges = [(u, v) for u, v in combinations(range(n), 2) if u // 3 != v // 3 and rng.random() < 0.7]
        g = Graph.from_edges(n, edges)
        found = transversal_clique(g, layers)
        oracle = [c for c in product(*layers) if g.is_clique(c)]
        if oracle:
            assert found == list(oracle[0])
        else:
            assert found is None


def test_seidel_fill_backends_agree(backend):
    m = 6
    codes = np.arange(1 << 10, dtype=np.int64)
    a = backend.seidel_fill(m, codes)
    b = _pycore.seidel_fill(m, codes)
    assert np.array_equal(a, b)
    assert np.all(a[:, 0, 1:] == 1)
    assert np.allclose(a, a.transpose(0, 2, 1))


# number of isomorphism classes of graphs on m - 1 vertices
@pytest.mark.parametrize("m,count", [(2, 1), (3, 2), (4, 4), (5, 11), (6, 34), (7, 156)])
def test_orbit_counts(backend, m, count):
    reps = backend.orbit_representatives(m)
    assert len(reps) == count
    assert list(reps) == sorted(reps)


def test_orbit_count_order_8_compiled():
    from conftest import BACKENDS

    fast = [b for b in BACKENDS if b.BACKEND == "cython"]
    if not fast:
        pytest.skip("compiled extension not built")
    assert len(fast[0].orbit_representatives(8)) == 1044
