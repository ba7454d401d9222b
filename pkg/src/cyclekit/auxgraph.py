"""Auxiliary constructions and the pipelines built on them.

Covers the dimension-coloured hypercube (no rainbow cycle exists in it), the
ordered-tuple graph whose edges are monochromatic matchings, the r-subset
graph whose edges are complete-bipartite disjoint pairs, their intersection
bounds, K_{r,r} counting, and the searches for blown-up cycles and
colour-isomorphic disjoint cycle families.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb
from typing import Any, Iterator, Sequence

from .conflict import intersection_relation
from .errors import GuardError
from .extract import blowup_biregular
from .graphs import EdgeColouring, Graph, validate_proper
from .homcount import Certificate
from .search import (
    SearchResult,
    SearchStatus,
    _exact_good_cycle,
    canonical_cycle,
    find_good_2k_cycle,
)

TUPLE_VERTEX_GUARD = 10**6
SUBSET_VERTEX_GUARD = 10**6
AUX_EDGE_GUARD = 5 * 10**6
EXHAUSTIVE_PAIR_GUARD = 500


@dataclass(frozen=True)
class AuxiliaryGraph:
    """A materialized auxiliary graph with the base-vertex payloads."""

    graph: Graph
    labels: tuple[tuple[int, ...], ...]
    base_n: int
    r: int
    kind: str

    def payload_masks(self) -> tuple[int, ...]:
        return tuple(
            sum(1 << v for v in label) for label in self.labels
        )


# ---------------------------------------------------------------------------
# hypercube with the dimension colouring
# ---------------------------------------------------------------------------


def hypercube_coloured(m: int, max_m: int = 20) -> tuple[Graph, EdgeColouring]:
    """The m-dimensional cube with edge colour = flipped coordinate.

    2^m vertices, m 2^{m-1} edges, proper, and rainbow-cycle-free: a cycle
    flips every coordinate an even number of times, so some colour repeats.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    if m > max_m:
        raise GuardError(f"hypercube guarded at m <= {max_m}")
    n = 1 << m
    edges = []
    colours = {}
    for x in range(n):
        for i in range(m):
            y = x ^ (1 << i)
            if x < y:
                edges.append((x, y))
                colours[(x, y)] = i
    g = Graph(n, edges)
    return g, EdgeColouring(g, colours)


# ---------------------------------------------------------------------------
# monochromatic matchings and the ordered-tuple graph
# ---------------------------------------------------------------------------


def _disjoint_edge_subsets(edges: Sequence[tuple[int, int]], r: int) -> Iterator[tuple]:
    """All r-subsets of pairwise vertex-disjoint edges (index-increasing)."""
    chosen: list[tuple[int, int]] = []

    def rec(start: int, used: set[int]) -> Iterator[tuple]:
        if len(chosen) == r:
            yield tuple(chosen)
            return
        for idx in range(start, len(edges)):
            u, v = edges[idx]
            if u in used or v in used:
                continue
            chosen.append(edges[idx])
            yield from rec(idx + 1, used | {u, v})
            chosen.pop()

    yield from rec(0, set())


def count_mono_matchings(colouring: EdgeColouring, r: int) -> int:
    """Exact number of r-edge matchings within a single colour class."""
    if r < 1:
        raise ValueError("need r >= 1")
    total = 0
    for edges in colouring.classes().values():
        total += sum(1 for _ in _disjoint_edge_subsets(edges, r))
    return total


def build_tuple_graph(
    colouring: EdgeColouring,
    r: int,
    max_vertices: int = TUPLE_VERTEX_GUARD,
    max_edges: int = AUX_EDGE_GUARD,
) -> AuxiliaryGraph:
    """Graph on ordered r-tuples of distinct vertices of a coloured K_n.

    Tuples are adjacent when their coordinate sets are disjoint and the r
    coordinate-wise edges all carry one single colour, i.e. they form a
    monochromatic r-matching.  The host must be complete and properly
    coloured.
    """
    g = colouring.graph
    n = g.n
    if g.edge_count != n * (n - 1) // 2:
        raise ValueError("tuple graph is defined over a complete host")
    if validate_proper(g, colouring):
        raise ValueError("tuple graph needs a proper colouring")
    if r < 1:
        raise ValueError("need r >= 1")
    count = 1
    for i in range(r):
        count *= n - i
    if count > max_vertices:
        raise GuardError(
            f"tuple graph would have {count} vertices, above guard {max_vertices}"
        )
    labels = tuple(permutations(range(n), r))
    index = {label: i for i, label in enumerate(labels)}
    edges: set[tuple[int, int]] = set()
    for class_edges in colouring.classes().values():
        for matching in _disjoint_edge_subsets(class_edges, r):
            for assignment in permutations(matching):
                for orientation in range(1 << r):
                    heads = tuple(
                        assignment[i][(orientation >> i) & 1] for i in range(r)
                    )
                    tails = tuple(
                        assignment[i][1 - ((orientation >> i) & 1)] for i in range(r)
                    )
                    a, b = index[heads], index[tails]
                    if a < b:
                        edges.add((a, b))
                    if len(edges) > max_edges:
                        raise GuardError("tuple graph edge guard exceeded")
    return AuxiliaryGraph(
        graph=Graph(len(labels), sorted(edges)),
        labels=labels,
        base_n=n,
        r=r,
        kind="tuple",
    )


# ---------------------------------------------------------------------------
# the r-subset graph
# ---------------------------------------------------------------------------


def _common_neighbourhood_mask(g: Graph, members: Sequence[int]) -> int:
    masks = g.neighbor_masks()
    cn = (1 << g.n) - 1
    for v in members:
        cn &= masks[v]
    return cn


def subset_degree(g: Graph, members: Sequence[int], r: int) -> int:
    """Degree of an r-set in the subset graph: C(common neighbourhood, r)."""
    cn = _common_neighbourhood_mask(g, members)
    return comb(cn.bit_count(), r)


def build_subset_graph(
    g: Graph,
    r: int,
    max_vertices: int = SUBSET_VERTEX_GUARD,
    max_edges: int = AUX_EDGE_GUARD,
) -> AuxiliaryGraph:
    """Graph on r-subsets, adjacent when disjoint and completely joined in g."""
    if r < 1:
        raise ValueError("need r >= 1")
    n_subsets = comb(g.n, r)
    if n_subsets > max_vertices:
        raise GuardError(
            f"subset graph would have {n_subsets} vertices, above guard {max_vertices}"
        )
    labels = tuple(combinations(range(g.n), r))
    index = {label: i for i, label in enumerate(labels)}
    edges = []
    for i, members in enumerate(labels):
        cn = _common_neighbourhood_mask(g, members)
        if cn.bit_count() < r:
            continue
        cn_members = []
        rest = cn
        while rest:
            low = rest & -rest
            rest ^= low
            cn_members.append(low.bit_length() - 1)
        for other in combinations(cn_members, r):
            j = index[other]
            if i < j:
                edges.append((i, j))
            if len(edges) > max_edges:
                raise GuardError("subset graph edge guard exceeded")
    return AuxiliaryGraph(
        graph=Graph(len(labels), edges),
        labels=labels,
        base_n=g.n,
        r=r,
        kind="subset",
    )


def count_krr(g: Graph, r: int, max_subsets: int = SUBSET_VERTEX_GUARD) -> int:
    """Exact number of unordered K_{r,r} subgraph copies."""
    if r < 1:
        raise ValueError("need r >= 1")
    if comb(g.n, r) > max_subsets:
        raise GuardError("K_{r,r} counting guard exceeded")
    ordered = 0
    for members in combinations(range(g.n), r):
        cn = _common_neighbourhood_mask(g, members)
        ordered += comb(cn.bit_count(), r)
    assert ordered % 2 == 0
    return ordered // 2


# ---------------------------------------------------------------------------
# intersection-bound certificates
# ---------------------------------------------------------------------------


def _conflict_counts(
    aux: AuxiliaryGraph, sample_pairs: int, seed: int
) -> Iterator[tuple[int, int, int]]:
    """(x, y, #neighbours of y intersecting x) over exhaustive or sampled pairs."""
    n = aux.graph.n
    masks = aux.payload_masks()
    adj = aux.graph.adjacency
    if n <= EXHAUSTIVE_PAIR_GUARD:
        pairs: Iterator[tuple[int, int]] = (
            (x, y) for x in range(n) for y in range(n)
        )
    else:
        rng = random.Random(seed)
        pairs = ((rng.randrange(n), rng.randrange(n)) for _ in range(sample_pairs))
    for x, y in pairs:
        mx = masks[x]
        count = sum(1 for z in adj[y] if masks[z] & mx)
        yield x, y, count


def check_tuple_intersection_bound(
    aux: AuxiliaryGraph, sample_pairs: int = 2000, seed: int = 0
) -> Certificate:
    """At most r^2 neighbours of y fail to be disjoint from any fixed x."""
    if aux.kind != "tuple":
        raise ValueError("expects a tuple auxiliary graph")
    bound = aux.r * aux.r
    worst = 0
    checked = 0
    for _, _, count in _conflict_counts(aux, sample_pairs, seed):
        worst = max(worst, count)
        checked += 1
    return Certificate(
        name="tuple-intersection-bound",
        passed=worst <= bound,
        details={
            "bound": bound,
            "max_count": worst,
            "pairs_checked": checked,
            "exhaustive": aux.graph.n <= EXHAUSTIVE_PAIR_GUARD,
        },
    )


def check_subset_intersection_bound(
    aux: AuxiliaryGraph, sample_pairs: int = 2000, seed: int = 0
) -> Certificate:
    """At most r^{r+1} d(y)^{1-1/r} neighbours of y intersect any fixed x.

    Decided exactly: count^r <= r^{r(r+1)} d(y)^{r-1}.
    """
    if aux.kind != "subset":
        raise ValueError("expects a subset auxiliary graph")
    r = aux.r
    degrees = aux.graph.degrees()
    passed = True
    worst: tuple[int, ...] | None = None
    checked = 0
    for x, y, count in _conflict_counts(aux, sample_pairs, seed):
        checked += 1
        if count**r > r ** (r * (r + 1)) * degrees[y] ** (r - 1):
            passed = False
            worst = (x, y, count, degrees[y])
            break
    return Certificate(
        name="subset-intersection-bound",
        passed=passed,
        details={
            "pairs_checked": checked,
            "violation": worst,
            "exhaustive": aux.graph.n <= EXHAUSTIVE_PAIR_GUARD,
        },
    )


# ---------------------------------------------------------------------------
# blow-up cycle pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlowupWitness:
    """2k pairwise disjoint r-sets, consecutive ones completely joined."""

    classes: tuple[tuple[int, ...], ...]


def validate_blowup_witness(g: Graph, witness: BlowupWitness, r: int) -> list[str]:
    problems = []
    classes = witness.classes
    two_k = len(classes)
    if two_k < 4 or two_k % 2:
        problems.append("need an even number >= 4 of classes")
    seen: set[int] = set()
    for cls in classes:
        if len(set(cls)) != r:
            problems.append(f"class {cls} is not an r-set")
        if seen & set(cls):
            problems.append("classes are not pairwise disjoint")
        seen |= set(cls)
    for i in range(two_k):
        a, b = classes[i], classes[(i + 1) % two_k]
        for u in a:
            for v in b:
                if not g.has_edge(u, v):
                    problems.append(f"missing base edge ({u}, {v})")
    return problems


def find_blowup_cycle(
    g: Graph,
    r: int,
    k: int | None = None,
    budget: int = 10**6,
    seed: int = 0,
    max_aux_vertices: int = 20000,
    exact_aux_max_n: int = 2000,
    exact_step_cap: int = 20_000_000,
) -> SearchResult:
    """Blow-up of an even cycle: a 2k-cycle of disjoint r-sets in the subset graph.

    Randomized phase runs on the dyadically biregularized subgraph with the
    set-intersection conflict relation; certification falls back to an
    exhaustive disjointness-pruned DFS on the full subset graph.
    """
    if r < 1:
        raise ValueError("need r >= 1")
    aux = build_subset_graph(g, r, max_vertices=max_aux_vertices)
    masks = aux.payload_masks()
    claimed = max(1, r ** (r + 1) * max(1, aux.graph.max_degree()))
    ks = [k] if k is not None else list(range(2, g.n // (2 * r) + 1))
    ks = [kk for kk in ks if 2 * kk * r <= g.n]
    if not ks:
        return SearchResult(SearchStatus.ABSENT, None, 0, "counting")
    draws = 0
    details: dict[str, Any] = {}
    certified = True
    for kk in ks:
        if aux.graph.edge_count:
            try:
                ext = blowup_biregular(aux.graph, g.n, r, seed=seed)
                sub = ext.subgraph
                local_masks = tuple(
                    masks[sub.to_parent(v)] for v in range(sub.graph.n)
                )
                inner = find_good_2k_cycle(
                    sub.graph,
                    kk,
                    vrel=intersection_relation(local_masks, claimed),
                    budget=budget,
                    seed=seed,
                    exact_max_n=0,
                )
                draws += inner.draws
                if inner.status is SearchStatus.FOUND:
                    aux_ids = sub.map_vertices(inner.witness.vertices)
                    return _blowup_found(g, aux, aux_ids, r, draws, "pipeline", details)
            except (ValueError, RuntimeError):
                pass
        if aux.graph.n <= exact_aux_max_n:
            found, completed = _exact_good_cycle(
                aux.graph,
                2 * kk,
                intersection_relation(masks, claimed),
                None,
                exact_step_cap,
            )
            if found is not None:
                return _blowup_found(g, aux, found, r, draws, "exact", details)
            certified = certified and completed
        else:
            certified = False
    if certified:
        return SearchResult(SearchStatus.ABSENT, None, draws, "exact", details)
    return SearchResult(SearchStatus.INCONCLUSIVE, None, draws, None, details)


def _blowup_found(g, aux, aux_cycle, r, draws, phase, details) -> SearchResult:
    ordered = canonical_cycle(tuple(aux.labels[i] for i in aux_cycle))
    witness = BlowupWitness(classes=tuple(ordered))
    problems = validate_blowup_witness(g, witness, r)
    if problems:
        raise RuntimeError(f"blow-up witness failed validation: {problems}")
    return SearchResult(SearchStatus.FOUND, witness, draws, phase, details)


# ---------------------------------------------------------------------------
# colour-isomorphic disjoint cycles pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ColourIsoWitness:
    """r vertex-disjoint cycles, colour-isomorphic under the position matching."""

    copies: tuple[tuple[int, ...], ...]
    colours: tuple[int, ...]


def validate_colour_iso_witness(
    colouring: EdgeColouring, witness: ColourIsoWitness
) -> list[str]:
    problems = []
    copies = witness.copies
    g = colouring.graph
    two_k = len(copies[0])
    seen: set[int] = set()
    for copy in copies:
        if len(copy) != two_k or len(set(copy)) != two_k:
            problems.append("copy is not a simple cycle tuple")
        if seen & set(copy):
            problems.append("copies are not vertex-disjoint")
        seen |= set(copy)
        for i in range(two_k):
            u, v = copy[i], copy[(i + 1) % two_k]
            if not g.has_edge(u, v):
                problems.append(f"missing host edge ({u}, {v})")
    for j in range(two_k):
        cols = {
            colouring.colour(copy[j], copy[(j + 1) % two_k]) for copy in copies
        }
        if len(cols) != 1:
            problems.append(f"edge position {j} is not monochromatic across copies")
        elif witness.colours[j] not in cols:
            problems.append(f"recorded colour at position {j} is wrong")
    return problems


def find_colour_isomorphic_cycles(
    colouring: EdgeColouring,
    r: int,
    k: int,
    budget: int = 10**6,
    seed: int = 0,
    max_aux_vertices: int = TUPLE_VERTEX_GUARD,
    exact_aux_max_n: int = 2000,
    exact_step_cap: int = 20_000_000,
) -> SearchResult:
    """r colour-isomorphic pairwise disjoint C_{2k} copies in a coloured K_n."""
    if r < 1 or k < 2:
        raise ValueError("need r >= 1 and k >= 2")
    aux = build_tuple_graph(colouring, r, max_vertices=max_aux_vertices)
    masks = aux.payload_masks()
    claimed = max(1, r * r)
    vrel = intersection_relation(masks, claimed)
    draws = 0
    inner = find_good_2k_cycle(
        aux.graph, k, vrel=vrel, budget=budget, seed=seed, exact_max_n=0
    )
    draws += inner.draws
    if inner.status is SearchStatus.FOUND:
        return _colour_iso_found(
            colouring, aux, inner.witness.vertices, r, draws, "randomized"
        )
    if aux.graph.n <= exact_aux_max_n:
        found, completed = _exact_good_cycle(
            aux.graph, 2 * k, vrel, None, exact_step_cap
        )
        if found is not None:
            return _colour_iso_found(colouring, aux, found, r, draws, "exact")
        if completed:
            return SearchResult(SearchStatus.ABSENT, None, draws, "exact")
    return SearchResult(SearchStatus.INCONCLUSIVE, None, draws, None)


def _colour_iso_found(colouring, aux, tuple_cycle, r, draws, phase) -> SearchResult:
    ordered = canonical_cycle(tuple(aux.labels[i] for i in tuple_cycle))
    two_k = len(ordered)
    copies = tuple(
        tuple(ordered[j][i] for j in range(two_k)) for i in range(r)
    )
    colours = tuple(
        colouring.colour(copies[0][j], copies[0][(j + 1) % two_k])
        for j in range(two_k)
    )
    witness = ColourIsoWitness(copies=copies, colours=colours)
    problems = validate_colour_iso_witness(colouring, witness)
    if problems:
        raise RuntimeError(f"colour-isomorphic witness failed validation: {problems}")
    return SearchResult(SearchStatus.FOUND, witness, draws, phase)
