import math
import random
from collections import Counter

import pytest

import oracles
from cyclekit.conflict import same_colour_relation
from cyclekit.errors import ImproperColouringError
from cyclekit.graphs import (
    EdgeColouring,
    Graph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    greedy_proper_colouring,
    random_graph,
    round_robin_colouring,
)
from cyclekit.homcount import hom_cycle
from cyclekit.search import (
    CycleSampler,
    SearchStatus,
    canonical_cycle,
    even_cycle_threshold,
    find_good_2k_cycle,
    find_rainbow_2k_cycle,
    find_rainbow_even_cycle,
    find_rainbow_theta,
    sample_homomorphic_cycle,
    validate_cycle_witness,
)


class TestCanonicalForm:
    def test_rotation_and_reflection_invariant(self):
        # canonical form of any rotation/reflection of a tuple is identical
        forms = set()
        vs = (5, 2, 7, 4, 9, 3)
        for rot in range(6):
            rotated = vs[rot:] + vs[:rot]
            forms.add(canonical_cycle(rotated))
            forms.add(canonical_cycle(tuple(reversed(rotated))))
        assert len(forms) == 1
        assert forms.pop()[0] == 2


class TestSampler:
    def test_k2_on_single_edge_is_fair(self):
        g = Graph(2, [(0, 1)])
        counts = Counter()
        rng_seed = 0
        sampler = CycleSampler(g, 4)
        rng = random.Random(rng_seed)
        for _ in range(10_000):
            counts[sampler.sample(rng)] += 1
        assert set(counts) == {(0, 1, 0, 1), (1, 0, 1, 0)}
        for v in counts.values():
            assert abs(v - 5000) < 5 * math.sqrt(2500)

    def test_c4_uniform_over_32_tuples(self):
        g = cycle_graph(4)
        sampler = CycleSampler(g, 4)
        rng = random.Random(7)
        draws = 32_000
        counts = Counter(sampler.sample(rng) for _ in range(draws))
        assert len(counts) == 32
        tv = sum(abs(c - draws / 32) for c in counts.values()) / (2 * draws)
        assert tv < 0.02

    def test_anchored_matches_enumeration_on_c6(self):
        g = cycle_graph(6)
        # enumerate all homomorphic 6-cycles through the anchor directly
        expected = set()
        adj = g.adjacency

        def rec(tup):
            if len(tup) == 6:
                if tup[0] in adj[tup[-1]] and tup[3] == 3:
                    expected.add(tuple(tup))
                return
            for u in adj[tup[-1]]:
                rec(tup + [u])

        rec([0])
        assert expected  # anchor (0, 3) is reachable in C_6
        sampler = CycleSampler(g, 6)
        rng = random.Random(3)
        seen = Counter(sampler.sample_anchored(rng, 0, 3) for _ in range(4000))
        assert set(seen) == expected
        uniform = 4000 / len(expected)
        for v in seen.values():
            assert abs(v - uniform) < 6 * math.sqrt(uniform)

    def test_anchor_without_walks_rejected(self):
        g = Graph(3, [(0, 1)])
        with pytest.raises(ValueError, match="anchor"):
            sample_homomorphic_cycle(g, 2, seed=0, anchor=(0, 2))

    def test_seeded_determinism(self):
        g = random_graph(12, 0.5, 3)
        a = sample_homomorphic_cycle(g, 3, seed=99)
        b = sample_homomorphic_cycle(g, 3, seed=99)
        assert a == b


class TestFindGood2k:
    def test_k6_any_c4(self):
        res = find_good_2k_cycle(complete_graph(6), 2, seed=1)
        assert res.status is SearchStatus.FOUND
        assert validate_cycle_witness(complete_graph(6), res.witness.vertices) == []

    def test_k4_one_factorization_certified_absent(self):
        c = round_robin_colouring(4)
        res = find_good_2k_cycle(
            c.graph, 2, erel=same_colour_relation(c), budget=2000, seed=0
        )
        assert res.status is SearchStatus.ABSENT
        assert res.phase == "exact"

    def test_k7_any_proper_colouring_has_rainbow_c4(self):
        g = complete_graph(7)
        for seed in range(3):
            c = greedy_proper_colouring(g, seed)
            assert oracles.rainbow_2k_cycle_exists(g, c, 2)
            res = find_good_2k_cycle(g, 2, erel=same_colour_relation(c), seed=seed)
            assert res.status is SearchStatus.FOUND

    def test_no_homomorphic_cycle_is_certified(self):
        g = Graph(4, [(0, 1), (1, 2)])  # a path has no closed 4-walk of girth use
        res = find_good_2k_cycle(g, 3, seed=0)
        assert res.status is SearchStatus.ABSENT
        assert hom_cycle(g, 6) > 0 or res.phase == "counting"

    def test_exact_agreement_with_oracle_small(self):
        from cyclekit.smallgraphs import all_graphs

        for g in all_graphs(5, connected=True):
            c = greedy_proper_colouring(g, 11)
            res = find_good_2k_cycle(
                g, 2, erel=same_colour_relation(c), budget=50, seed=2
            )
            exists = oracles.rainbow_2k_cycle_exists(g, c, 2)
            if exists:
                assert res.status is SearchStatus.FOUND
            else:
                assert res.status is SearchStatus.ABSENT

    def test_inconclusive_when_exact_disabled(self):
        c = round_robin_colouring(4)
        res = find_good_2k_cycle(
            c.graph,
            2,
            erel=same_colour_relation(c),
            budget=100,
            seed=0,
            exact_max_n=0,
        )
        assert res.status is SearchStatus.INCONCLUSIVE


class TestRainbow2k:
    def test_improper_rejected(self):
        g = Graph(3, [(0, 1), (1, 2)])
        c = EdgeColouring(g, {(0, 1): 0, (1, 2): 0})
        with pytest.raises(ImproperColouringError):
            find_rainbow_2k_cycle(g, c, 2)

    def test_k50_fast_positive(self):
        g = complete_graph(50)
        c = greedy_proper_colouring(g, 5)
        res = find_rainbow_2k_cycle(g, c, 2, budget=10**6, seed=1)
        assert res.status is SearchStatus.FOUND
        assert (
            validate_cycle_witness(
                g, res.witness.vertices, colouring=c, require_rainbow=True
            )
            == []
        )

    def test_hypercube_certified_absent(self):
        from cyclekit.auxgraph import hypercube_coloured

        g, c = hypercube_coloured(4)
        res = find_rainbow_2k_cycle(g, c, 2, budget=500, seed=0)
        assert res.status is SearchStatus.ABSENT
        res = find_rainbow_2k_cycle(g, c, 3, budget=500, seed=0)
        assert res.status is SearchStatus.ABSENT


class TestTheta:
    def test_theta_2_agrees_with_cycle_search(self):
        for seed in range(20):
            g = random_graph(10, 0.5, 200 + seed)
            if hom_cycle(g, 4) == 0:
                continue
            c = greedy_proper_colouring(g, seed)
            cyc = find_rainbow_2k_cycle(g, c, 2, budget=20_000, seed=seed)
            th = find_rainbow_theta(g, c, 2, 2, budget=20_000, seed=seed)
            if th.status is SearchStatus.FOUND:
                assert cyc.status is SearchStatus.FOUND
            if cyc.status is SearchStatus.ABSENT:
                assert th.status is not SearchStatus.FOUND

    def test_k60_theta_positive(self):
        g = complete_graph(60)
        c = greedy_proper_colouring(g, 3)
        res = find_rainbow_theta(g, c, 2, 3, budget=10**6, seed=4)
        assert res.status is SearchStatus.FOUND
        w = res.witness
        assert len(w.paths) == 3
        interiors = [set(p[1:-1]) for p in w.paths]
        for i in range(3):
            for j in range(i + 1, 3):
                assert not interiors[i] & interiors[j]

    def test_sparse_cycle_has_no_theta(self):
        g = cycle_graph(10)
        c = greedy_proper_colouring(g, 0)
        res = find_rainbow_theta(g, c, 2, 3, budget=5000, seed=0)
        assert res.status in (SearchStatus.INCONCLUSIVE, SearchStatus.ABSENT)


class TestEvenCycle:
    def test_threshold_helper(self):
        g = complete_bipartite_graph(4, 4)
        hom, threshold, holds = even_cycle_threshold(g, 2)
        assert hom == hom_cycle(g, 4)
        assert threshold == 64**4 * 2**6 * 8 * 4**2
        assert not holds

    def test_hypercubes_certified_absent(self):
        from cyclekit.auxgraph import hypercube_coloured

        for m in (2, 3, 4):
            g, c = hypercube_coloured(m)
            res = find_rainbow_even_cycle(g, c, budget=2000, seed=0)
            assert res.status is SearchStatus.ABSENT, m
            assert not oracles.all_rainbow_cycles(g, c)

    def test_k64_finds_some_even_rainbow_cycle(self):
        g = complete_graph(64)
        c = greedy_proper_colouring(g, 9)
        res = find_rainbow_even_cycle(g, c, budget=10**6, seed=2)
        assert res.status is SearchStatus.FOUND
        assert len(res.witness.vertices) % 2 == 0
        assert (
            validate_cycle_witness(
                g, res.witness.vertices, colouring=c, require_rainbow=True
            )
            == []
        )

    def test_randomized_only_mode_is_inconclusive_on_hypercube(self):
        from cyclekit.auxgraph import hypercube_coloured

        g, c = hypercube_coloured(4)
        res = find_rainbow_even_cycle(g, c, budget=20_000, seed=1, exact_max_n=0)
        assert res.status is SearchStatus.INCONCLUSIVE
