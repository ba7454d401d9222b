import pytest

from cyclekit.errors import GuardError
from cyclekit.extract import (
    almost_regular_subgraph,
    bipartite_step1,
    bipartite_step2,
    blowup_biregular,
    peel_to_densest,
)
from cyclekit.graphs import (
    Graph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    empty_graph,
    random_graph,
    star_graph,
)


def clique_plus_fringe(clique_n: int, fringe: int, seed: int = 0) -> Graph:
    """A dense clique with a long sparse path hanging off it."""
    edges = [(u, v) for u in range(clique_n) for v in range(u + 1, clique_n)]
    for i in range(fringe):
        a = clique_n + i - 1 if i else 0
        edges.append((a, clique_n + i))
    return Graph(clique_n + fringe, edges)


class TestPeeling:
    def test_regular_graph_is_kept_whole(self):
        g = cycle_graph(9)
        sub = peel_to_densest(g)
        assert sub.graph.n == 9 and sub.graph.edge_count == 9

    def test_peeling_isolates_the_dense_part(self):
        g = clique_plus_fringe(12, 30)
        sub = peel_to_densest(g)
        assert set(sub.parent_vertices) == set(range(12))

    def test_average_degree_never_drops(self):
        for seed in range(5):
            g = random_graph(40, 0.2, seed)
            if g.edge_count == 0:
                continue
            sub = peel_to_densest(g)
            assert sub.graph.average_degree() >= g.average_degree()


class TestAlmostRegular:
    def test_regular_graph_ratio_one(self):
        g = complete_graph(20)  # regular and dense enough for the precondition
        report = almost_regular_subgraph(g, 0.5, 1.0)
        assert report.achieved["K"] == 1.0

    def test_clique_with_sparse_fringe(self):
        # sized so the precondition e >= n^{1+eps} holds while the clique dominates
        g = clique_plus_fringe(50, 40)
        assert g.edge_count >= g.n ** 1.5
        report = almost_regular_subgraph(g, 0.5, 1.0)
        assert report.achieved["K"] <= 2.0
        sub_vertices = set(report.subgraph.parent_vertices)
        assert sub_vertices <= set(range(51))  # the clique, possibly plus its anchor

    def test_star_precondition_fails(self):
        g = star_graph(63)
        with pytest.raises(ValueError, match="precondition"):
            almost_regular_subgraph(g, 0.5, 1.0)

    def test_achieved_values_recomputed(self):
        g = random_graph(60, 0.5, 4)
        report = almost_regular_subgraph(g, 0.5, 1.0)
        sub = report.subgraph.graph
        assert report.achieved["m"] == sub.n
        assert report.achieved["e"] == sub.edge_count
        assert report.achieved["K"] == sub.max_degree() / sub.min_degree()


class TestBipartiteSteps:
    def test_step1_on_regular_bipartite(self):
        g = complete_bipartite_graph(80, 80)
        report = bipartite_step1(g)
        assert report.passed
        e = report.achieved["e"]
        assert 80 * e >= report.achieved["x_size"] * report.achieved["max_degree"]

    def test_step1_on_complete_graph(self):
        report = bipartite_step1(complete_graph(140))
        assert report.passed
        assert report.achieved["e"] > 0

    def test_step1_guard(self):
        with pytest.raises(GuardError, match="guard"):
            bipartite_step1(cycle_graph(30))

    def test_step1_subgraph_is_bipartite_into_parts(self):
        g = random_graph(150, 0.5, 9)
        report = bipartite_step1(g)
        sub = report.subgraph
        for u, v in sub.graph.edges:
            assert (u in sub.left) != (v in sub.left)

    def test_step2_floors_on_regular_bipartite(self):
        g = complete_bipartite_graph(70, 70)
        report = bipartite_step2(g)
        assert report.passed
        gpp = report.subgraph.graph
        delta = gpp.max_degree()
        for v in report.subgraph.left:
            assert 160 * gpp.degree(v) >= delta

    def test_step2_floors_on_random_graphs(self):
        for seed in range(3):
            g = random_graph(170, 0.45, seed)
            report = bipartite_step2(g)
            assert report.passed
            assert report.achieved["discarded_edges"] < report.target["discard_cap"]
            gpp = report.subgraph.graph
            y_floor = report.target["y_floor"]
            for v in report.subgraph.right:
                assert gpp.degree(v) >= y_floor

    def test_step2_edges_exist_in_parent(self):
        g = random_graph(150, 0.5, 2)
        report = bipartite_step2(g)
        sub = report.subgraph
        for u, v in sub.graph.edges:
            assert g.has_edge(sub.to_parent(u), sub.to_parent(v))


class TestBlowupBiregular:
    def test_regular_aux(self):
        aux = complete_bipartite_graph(40, 40)
        report = blowup_biregular(aux, n=9, r=2, seed=1)
        assert report.passed
        assert report.achieved["D1"] == report.achieved["D2"] == 64

    def test_subset_graph_of_k8(self):
        from cyclekit.auxgraph import build_subset_graph

        aux = build_subset_graph(complete_graph(8), 2)
        report = blowup_biregular(aux.graph, n=8, r=2, seed=0)
        assert report.passed
        d1 = report.achieved["D1"]
        for v in report.subgraph.left:
            assert aux.graph.degree(report.subgraph.to_parent(v)) <= d1

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError, match="average degree 0"):
            blowup_biregular(empty_graph(6), n=4, r=1)

    def test_deterministic_given_seed(self):
        aux = random_graph(60, 0.4, 17)
        a = blowup_biregular(aux, n=60, r=1, seed=5)
        b = blowup_biregular(aux, n=60, r=1, seed=5)
        assert a.subgraph.parent_vertices == b.subgraph.parent_vertices
        assert a.achieved == b.achieved

    def test_floors_hold_on_random_graphs(self):
        for seed in range(4):
            aux = random_graph(80, 0.5, 100 + seed)
            report = blowup_biregular(aux, n=80, r=1, seed=seed)
            assert report.passed
            gf = report.subgraph.graph
            for v in report.subgraph.left:
                assert gf.degree(v) >= report.target["x_floor"]
            for v in report.subgraph.right:
                assert gf.degree(v) >= report.target["y_floor"]

    def test_caps_are_dyadic_and_above_quarter_degree(self):
        aux = random_graph(100, 0.3, 3)
        report = blowup_biregular(aux, n=100, r=1, seed=2)
        d1, d2 = report.achieved["D1"], report.achieved["D2"]
        assert d1 & (d1 - 1) == 0 and d2 & (d2 - 1) == 0
        avg = 2 * aux.edge_count / aux.n
        assert 4 * d1 >= avg and 4 * d2 >= avg
