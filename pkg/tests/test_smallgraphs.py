import random

from hypothesis import given, settings
from hypothesis import strategies as st

from cyclekit.graphs import Graph, complete_graph
from cyclekit.smallgraphs import (
    CONNECTED_COUNTS,
    GRAPH_COUNTS,
    all_graphs,
    canonical_code_of_graph,
    generate_catalogue,
    graph6_decode,
    graph6_encode,
)


def test_graph6_known_encoding():
    assert graph6_encode(Graph(2, [(0, 1)])) == "A_"
    assert graph6_decode("A_").edges == ((0, 1),)


def test_graph6_round_trip_on_catalogue():
    for n in range(1, 7):
        for g in all_graphs(n):
            assert graph6_decode(graph6_encode(g)) == g


def test_stored_counts_match_classics():
    for n in range(1, 9):
        assert len(all_graphs(n)) == GRAPH_COUNTS[n]
    for n in range(1, 9):
        assert len(all_graphs(n, connected=True)) == CONNECTED_COUNTS[n]


def test_regeneration_matches_stored_files():
    for n in range(1, 7):
        regenerated = {graph6_encode(g) for g in generate_catalogue(n)}
        stored = {graph6_encode(g) for g in all_graphs(n)}
        assert regenerated == stored


def _relabel(g: Graph, perm: list[int]) -> Graph:
    return Graph(g.n, [(perm[u], perm[v]) for u, v in g.edges])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**30), st.integers(0, 2**30))
def test_canonical_code_is_isomorphism_invariant(n, gseed, pseed):
    rng = random.Random(gseed)
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5
    ]
    g = Graph(n, edges)
    perm = list(range(n))
    random.Random(pseed).shuffle(perm)
    assert canonical_code_of_graph(g) == canonical_code_of_graph(_relabel(g, perm))


def test_canonical_code_separates_non_isomorphic():
    codes = {canonical_code_of_graph(g) for g in all_graphs(6)}
    assert len(codes) == GRAPH_COUNTS[6]


def test_extreme_graphs_have_stable_codes():
    # fully symmetric graphs exercise the isolated/universal peeling path
    for n in (5, 8):
        empty = Graph(n, [])
        full = complete_graph(n)
        assert canonical_code_of_graph(empty) == 0
        perm = list(range(n))[::-1]
        assert canonical_code_of_graph(full) == canonical_code_of_graph(
            _relabel(full, perm)
        )
