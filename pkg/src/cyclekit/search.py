"""Randomized-first, exact-fallback finders for structured cycles.

The sampler draws homomorphic 2k-cycles exactly uniformly (integer-weighted
sequential sampling from walk-count vectors), so positive results arrive fast
whenever good cycles are abundant; certified absence comes from an exhaustive
DFS gated to small instances.  Every returned witness passes an independent
validator before it leaves this module.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

from .conflict import EdgePairRelation, VertexRelation, same_colour_relation
from .errors import ImproperColouringError
from .extract import bipartite_step2
from .graphs import EdgeColouring, Graph, edge_key, validate_proper
from .homcount import hom_cycle, walk_rows, walk_table

DEFAULT_BUDGET = 10**6
DEFAULT_EXACT_MAX_N = 64
DEFAULT_EXACT_STEP_CAP = 50_000_000


class SearchStatus(str, Enum):
    FOUND = "found"
    ABSENT = "certified-absent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CycleWitness:
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class ThetaWitness:
    a: int
    b: int
    paths: tuple[tuple[int, ...], ...]  # full a..b vertex sequences


@dataclass(frozen=True)
class SearchResult:
    status: SearchStatus
    witness: CycleWitness | ThetaWitness | None
    draws: int
    phase: str | None
    details: dict[str, Any] = field(default_factory=dict)


def canonical_cycle(vertices: Sequence[int]) -> tuple[int, ...]:
    """Minimum rotation/reflection: least vertex first, smaller successor."""
    n = len(vertices)
    best = None
    for rot in range(n):
        for step in (1, -1):
            cand = tuple(vertices[(rot + step * i) % n] for i in range(n))
            if best is None or cand < best:
                best = cand
    return best


# ---------------------------------------------------------------------------
# exact-uniform sampling of homomorphic cycles
# ---------------------------------------------------------------------------


class CycleSampler:
    """Uniform draws over closed 2k-walks, exact by integer weighting."""

    def __init__(self, g: Graph, two_k: int):
        if two_k < 4 or two_k % 2:
            raise ValueError("sampler needs an even length >= 4")
        self.g = g
        self.two_k = two_k
        self._rows: dict[int, list[list[int]]] = {}
        self._start_cum: list[int] | None = None
        self.total = 0

    def rows_for(self, x: int) -> list[list[int]]:
        rows = self._rows.get(x)
        if rows is None:
            rows = walk_rows(self.g, x, self.two_k)
            self._rows[x] = rows
        return rows

    def _ensure_start(self) -> None:
        if self._start_cum is not None:
            return
        cum = []
        total = 0
        for x in range(self.g.n):
            total += self.rows_for(x)[self.two_k][x]
            cum.append(total)
        self._start_cum = cum
        self.total = total

    def sample(self, rng: random.Random) -> tuple[int, ...]:
        self._ensure_start()
        if self.total == 0:
            raise ValueError("graph has no homomorphic cycle of this length")
        target = rng.randrange(self.total)
        x0 = 0
        for x0, acc in enumerate(self._start_cum):
            if target < acc:
                break
        rows = self.rows_for(x0)
        xs = [x0]
        cur = x0
        for p in range(1, self.two_k):
            remaining = self.two_k - p
            mass = rows[remaining + 1][cur]
            pick = rng.randrange(mass)
            acc = 0
            weights = rows[remaining]
            for u in self.g.adjacency[cur]:
                acc += weights[u]
                if pick < acc:
                    xs.append(u)
                    cur = u
                    break
        return tuple(xs)

    def anchored_mass(self, a: int, b: int) -> int:
        k = self.two_k // 2
        cnt = self.rows_for(b)[k][a]
        return cnt * cnt

    def sample_anchored(self, rng: random.Random, a: int, b: int) -> tuple[int, ...]:
        if self.anchored_mass(a, b) == 0:
            raise ValueError("no homomorphic cycle through the anchor")
        k = self.two_k // 2
        first = self.sample_walk(rng, a, b)
        second = self.sample_walk(rng, b, a)
        return tuple(first[:-1]) + tuple(second[:-1])

    def sample_walk(self, rng: random.Random, src: int, dst: int) -> tuple[int, ...]:
        """Uniform k-walk from src to dst (k = two_k / 2)."""
        k = self.two_k // 2
        rows = self.rows_for(dst)
        if rows[k][src] == 0:
            raise ValueError("no walk between the endpoints")
        walk = [src]
        cur = src
        for p in range(1, k):
            remaining = k - p
            mass = rows[remaining + 1][cur]
            pick = rng.randrange(mass)
            acc = 0
            weights = rows[remaining]
            for u in self.g.adjacency[cur]:
                acc += weights[u]
                if pick < acc:
                    walk.append(u)
                    cur = u
                    break
        walk.append(dst)
        return tuple(walk)


def sample_homomorphic_cycle(
    g: Graph, k: int, seed: int, anchor: tuple[int, int] | None = None
) -> tuple[int, ...]:
    """One uniformly distributed homomorphic 2k-cycle (optionally anchored)."""
    sampler = CycleSampler(g, 2 * k)
    rng = random.Random(seed)
    if anchor is None:
        return sampler.sample(rng)
    return sampler.sample_anchored(rng, anchor[0], anchor[1])


# ---------------------------------------------------------------------------
# witness validation (reads only the graph and colouring, no search state)
# ---------------------------------------------------------------------------


def validate_cycle_witness(
    g: Graph,
    vertices: Sequence[int],
    colouring: EdgeColouring | None = None,
    vrel: VertexRelation | None = None,
    erel: EdgePairRelation | None = None,
    require_rainbow: bool = False,
) -> list[str]:
    problems = []
    n = len(vertices)
    if n < 4 or n % 2:
        problems.append(f"length {n} is not an even number >= 4")
        return problems
    for i, v in enumerate(vertices):
        u = vertices[(i + 1) % n]
        if not 0 <= v < g.n:
            problems.append(f"vertex {v} out of range")
        elif u not in g.adjacency[v]:
            problems.append(f"missing edge ({v}, {u})")
    if len(set(vertices)) != n:
        problems.append("vertices are not distinct")
    edges = [edge_key(vertices[i], vertices[(i + 1) % n]) for i in range(n)]
    if require_rainbow:
        if colouring is None:
            problems.append("rainbow check requested without a colouring")
        else:
            cols = [colouring.colour_of[e] for e in edges]
            if len(set(cols)) != n:
                problems.append("edge colours are not pairwise distinct")
    if vrel is not None:
        for i in range(n):
            for j in range(i + 1, n):
                if vrel.related(vertices[i], vertices[j]):
                    problems.append(f"vertices {vertices[i]}, {vertices[j]} conflict")
    if erel is not None:
        for i in range(n):
            for j in range(i + 1, n):
                if erel.related(edges[i], edges[j]):
                    problems.append(f"edges {edges[i]}, {edges[j]} conflict")
    return problems


def validate_theta_witness(
    g: Graph,
    witness: ThetaWitness,
    colouring: EdgeColouring | None = None,
    vrel: VertexRelation | None = None,
    erel: EdgePairRelation | None = None,
    require_rainbow: bool = False,
) -> list[str]:
    problems = []
    a, b, paths = witness.a, witness.b, witness.paths
    if len(paths) < 2:
        problems.append("need at least two paths")
    if a == b:
        problems.append("endpoints coincide")
    k = len(paths[0]) - 1
    interiors: list[tuple[int, ...]] = []
    for path in paths:
        if len(path) != k + 1:
            problems.append("paths have unequal lengths")
        if path[0] != a or path[-1] != b:
            problems.append("path endpoints are wrong")
        for u, v in zip(path, path[1:]):
            if v not in g.adjacency[u]:
                problems.append(f"missing edge ({u}, {v})")
        interior = path[1:-1]
        if len(set(interior)) != len(interior) or {a, b} & set(interior):
            problems.append("path interior not simple")
        interiors.append(interior)
    seen: set[int] = set()
    for interior in interiors:
        if seen & set(interior):
            problems.append("interiors are not pairwise disjoint")
        seen |= set(interior)
    edges = []
    for path in paths:
        edges.extend(edge_key(u, v) for u, v in zip(path, path[1:]))
    if require_rainbow:
        if colouring is None:
            problems.append("rainbow check requested without a colouring")
        else:
            cols = [colouring.colour_of[e] for e in edges]
            if len(set(cols)) != len(cols):
                problems.append("theta is not rainbow")
    vertices = sorted({v for path in paths for v in path})
    if vrel is not None:
        for i in range(len(vertices)):
            for j in range(i + 1, len(vertices)):
                if vrel.related(vertices[i], vertices[j]):
                    problems.append("related vertex pair inside theta")
    if erel is not None:
        for i in range(len(edges)):
            for j in range(i + 1, len(edges)):
                if edges[i] != edges[j] and erel.related(edges[i], edges[j]):
                    problems.append("related edge pair inside theta")
    return problems


# ---------------------------------------------------------------------------
# goodness testing and the exact phase
# ---------------------------------------------------------------------------


def _tuple_good(
    tup: Sequence[int],
    vrel: VertexRelation | None,
    erel: EdgePairRelation | None,
) -> bool:
    n = len(tup)
    if len(set(tup)) != n:
        return False
    if vrel is not None:
        for i in range(n):
            for j in range(i + 1, n):
                if vrel.related(tup[i], tup[j]):
                    return False
    if erel is not None:
        edges = [edge_key(tup[i], tup[(i + 1) % n]) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if erel.related(edges[i], edges[j]):
                    return False
    return True


class _CapExceeded(Exception):
    pass


def _exact_good_cycle(
    g: Graph,
    two_k: int,
    vrel: VertexRelation | None,
    erel: EdgePairRelation | None,
    step_cap: int,
) -> tuple[tuple[int, ...] | None, bool]:
    """Exhaustive DFS for an injective conflict-free 2k-cycle.

    Returns (witness, completed); completed=False means the step cap fired
    and absence is NOT certified.
    """
    adjm = g.neighbor_masks()
    colmat = None
    payload = None
    vpred = None
    epred = None
    if erel is not None:
        if erel.colouring is not None:
            colmat = erel.colouring.colour_matrix()
        else:
            epred = erel.related
    if vrel is not None:
        if vrel.payload_masks is not None:
            payload = vrel.payload_masks
        elif vrel.name != "equality":
            vpred = vrel.related
    steps = [step_cap]
    xs: list[int] = []
    edge_stack: list[tuple[int, int]] = []

    def spend(amount: int) -> None:
        steps[0] -= amount
        if steps[0] < 0:
            raise _CapExceeded

    def ok_vertex(u: int, union: int) -> bool:
        if payload is not None and payload[u] & union:
            return False
        if vpred is not None and any(vpred(u, y) for y in xs):
            return False
        return True

    def ok_edge(e: tuple[int, int], used_cols: int) -> tuple[bool, int]:
        if colmat is not None:
            c = colmat[e[0]][e[1]]
            if (used_cols >> c) & 1:
                return False, used_cols
            return True, used_cols | (1 << c)
        if epred is not None and any(epred(e, f) for f in edge_stack):
            return False, used_cols
        return True, used_cols

    def rec(cur: int, depth: int, visited: int, union: int, used_cols: int):
        last = depth == two_k - 1
        m = adjm[cur] & ~visited
        spend(m.bit_count() or 1)
        while m:
            low = m & -m
            m ^= low
            u = low.bit_length() - 1
            if last and not (adjm[u] >> xs[0]) & 1:
                continue
            if not ok_vertex(u, union):
                continue
            e = edge_key(cur, u)
            ok, cols2 = ok_edge(e, used_cols)
            if not ok:
                continue
            if last:
                closing = edge_key(u, xs[0])
                edge_stack.append(e)
                ok_close, _ = ok_edge(closing, cols2)
                edge_stack.pop()
                if ok_close:
                    return tuple(xs) + (u,)
                continue
            xs.append(u)
            edge_stack.append(e)
            found = rec(
                u,
                depth + 1,
                visited | low,
                union | (payload[u] if payload is not None else 0),
                cols2,
            )
            edge_stack.pop()
            xs.pop()
            if found:
                return found
        return None

    try:
        for x0 in range(g.n):
            xs.append(x0)
            found = rec(
                x0,
                1,
                1 << x0,
                payload[x0] if payload is not None else 0,
                0,
            )
            xs.pop()
            if found:
                return found, True
        return None, True
    except _CapExceeded:
        return None, False


# ---------------------------------------------------------------------------
# finders
# ---------------------------------------------------------------------------


def find_good_2k_cycle(
    g: Graph,
    k: int,
    vrel: VertexRelation | None = None,
    erel: EdgePairRelation | None = None,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    exact_max_n: int = DEFAULT_EXACT_MAX_N,
    exact_step_cap: int = DEFAULT_EXACT_STEP_CAP,
) -> SearchResult:
    """Injective 2k-cycle avoiding both relations, or certified absence.

    Phase 1 draws uniform homomorphic cycles and tests them; phase 2 is an
    exhaustive DFS when the graph is within the exact guard.  Inconclusive is
    reported when neither phase resolves within its budget.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    two_k = 2 * k
    if g.n == 0 or hom_cycle(g, two_k) == 0:
        return SearchResult(SearchStatus.ABSENT, None, 0, "counting")
    rng = random.Random(seed)
    sampler = CycleSampler(g, two_k)
    per_draw = two_k - 1
    draws = 0
    spent = 0
    while spent + per_draw <= budget:
        tup = sampler.sample(rng)
        draws += 1
        spent += per_draw
        if _tuple_good(tup, vrel, erel):
            witness = CycleWitness(canonical_cycle(tup))
            problems = validate_cycle_witness(g, witness.vertices, vrel=vrel, erel=erel)
            if problems:
                raise RuntimeError(f"invalid witness from sampler: {problems}")
            return SearchResult(SearchStatus.FOUND, witness, draws, "randomized")
    if g.n <= exact_max_n:
        found, completed = _exact_good_cycle(g, two_k, vrel, erel, exact_step_cap)
        if found is not None:
            witness = CycleWitness(canonical_cycle(found))
            problems = validate_cycle_witness(g, witness.vertices, vrel=vrel, erel=erel)
            if problems:
                raise RuntimeError(f"invalid witness from exact search: {problems}")
            return SearchResult(SearchStatus.FOUND, witness, draws, "exact")
        if completed:
            return SearchResult(SearchStatus.ABSENT, None, draws, "exact")
    return SearchResult(SearchStatus.INCONCLUSIVE, None, draws, None)


def find_rainbow_2k_cycle(
    g: Graph,
    colouring: EdgeColouring,
    k: int,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    exact_max_n: int = DEFAULT_EXACT_MAX_N,
    exact_step_cap: int = DEFAULT_EXACT_STEP_CAP,
) -> SearchResult:
    """Rainbow C_{2k}: the good-cycle search with the same-colour edge relation."""
    violations = validate_proper(g, colouring)
    if violations:
        raise ImproperColouringError(
            f"colouring is improper at vertex {violations[0].vertex}"
        )
    if 2 * k > colouring.palette_size and g.edge_count:
        return SearchResult(
            SearchStatus.ABSENT,
            None,
            0,
            "counting",
            {"reason": "palette smaller than cycle length"},
        )
    erel = same_colour_relation(colouring, claimed_s=1)
    result = find_good_2k_cycle(
        g,
        k,
        vrel=None,
        erel=erel,
        budget=budget,
        seed=seed,
        exact_max_n=exact_max_n,
        exact_step_cap=exact_step_cap,
    )
    if result.witness is not None:
        problems = validate_cycle_witness(
            g,
            result.witness.vertices,
            colouring=colouring,
            require_rainbow=True,
        )
        if problems:
            raise RuntimeError(f"rainbow witness failed validation: {problems}")
    return result


def find_rainbow_theta(
    g: Graph,
    colouring: EdgeColouring,
    k: int,
    t: int,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> SearchResult:
    """Rainbow theta: t anchored walks accepted when all pairwise unions are good.

    Anchor pairs are drawn with probability proportional to the number of
    anchored homomorphic cycles, then t walks are sampled with replacement.
    """
    violations = validate_proper(g, colouring)
    if violations:
        raise ImproperColouringError(
            f"colouring is improper at vertex {violations[0].vertex}"
        )
    if k < 2 or t < 2:
        raise ValueError("need k >= 2 and t >= 2")
    two_k = 2 * k
    if hom_cycle(g, two_k) == 0:
        return SearchResult(SearchStatus.ABSENT, None, 0, "counting")
    table = walk_table(g, k)
    anchors = []
    cum = []
    total = 0
    for a in range(g.n):
        for b in range(g.n):
            if a != b and table.counts[a][b]:
                total += table.counts[a][b] ** 2
                anchors.append((a, b))
                cum.append(total)
    if total == 0:
        return SearchResult(SearchStatus.ABSENT, None, 0, "counting")
    erel = same_colour_relation(colouring, claimed_s=1)
    sampler = CycleSampler(g, two_k)
    rng = random.Random(seed)
    per_attempt = t * (k - 1) + 1
    draws = 0
    spent = 0
    while spent + per_attempt <= budget:
        pick = rng.randrange(total)
        lo, hi = 0, len(anchors) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if pick < cum[mid]:
                hi = mid
            else:
                lo = mid + 1
        a, b = anchors[lo]
        walks = [sampler.sample_walk(rng, a, b) for _ in range(t)]
        draws += 1
        spent += per_attempt
        good = True
        for i in range(t):
            for j in range(i + 1, t):
                union = walks[i][:-1] + tuple(reversed(walks[j][1:]))
                if not _tuple_good(union, None, erel):
                    good = False
                    break
            if not good:
                break
        if good:
            if a > b:
                a, b = b, a
                walks = [tuple(reversed(w)) for w in walks]
            witness = ThetaWitness(a=a, b=b, paths=tuple(sorted(walks)))
            problems = validate_theta_witness(
                g, witness, colouring=colouring, erel=erel, require_rainbow=True
            )
            if problems:
                raise RuntimeError(f"theta witness failed validation: {problems}")
            return SearchResult(SearchStatus.FOUND, witness, draws, "randomized")
    return SearchResult(SearchStatus.INCONCLUSIVE, None, draws, None)


def even_cycle_threshold(g: Graph, k: int) -> tuple[int, int, bool]:
    """(hom(C_2k), 64^{2k} k^{3k} n max_degree^k, hom > threshold)."""
    hom = hom_cycle(g, 2 * k)
    threshold = 64 ** (2 * k) * k ** (3 * k) * g.n * g.max_degree() ** k
    return hom, threshold, hom > threshold


def find_rainbow_even_cycle(
    g: Graph,
    colouring: EdgeColouring,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    exact_max_n: int = DEFAULT_EXACT_MAX_N,
    exact_step_cap: int = DEFAULT_EXACT_STEP_CAP,
    step_guard: float = 64,
) -> SearchResult:
    """Rainbow cycle of any even length.

    Pipeline: bipartite degree-floor extraction, k = floor(log2 n), and the
    homomorphism-count threshold that guarantees a rainbow C_{2k}; below the
    threshold (every desk-scale instance) fall back to search over increasing
    even lengths, exhaustively when the graph is small enough to certify.
    """
    violations = validate_proper(g, colouring)
    if violations:
        raise ImproperColouringError(
            f"colouring is improper at vertex {violations[0].vertex}"
        )
    details: dict[str, Any] = {}
    draws = 0
    k_pipe = int(math.log2(g.n)) if g.n >= 4 else 0
    if float(g.average_degree()) >= step_guard and k_pipe >= 2:
        ext = bipartite_step2(g)
        local = ext.subgraph.graph
        hom, threshold, holds = even_cycle_threshold(local, k_pipe)
        details["pipeline"] = {
            "k": k_pipe,
            "hom": hom,
            "threshold": threshold,
            "above_threshold": holds,
            "extracted_n": local.n,
        }
        if holds:
            pulled = EdgeColouring(
                local,
                {
                    (u, v): colouring.colour(
                        ext.subgraph.to_parent(u), ext.subgraph.to_parent(v)
                    )
                    for u, v in local.edges
                },
            )
            inner = find_rainbow_2k_cycle(
                local, pulled, k_pipe, budget=budget, seed=seed, exact_max_n=0
            )
            draws += inner.draws
            if inner.status is SearchStatus.FOUND:
                mapped = CycleWitness(
                    canonical_cycle(ext.subgraph.map_vertices(inner.witness.vertices))
                )
                problems = validate_cycle_witness(
                    g, mapped.vertices, colouring=colouring, require_rainbow=True
                )
                if problems:
                    raise RuntimeError(f"pipeline witness invalid: {problems}")
                return SearchResult(
                    SearchStatus.FOUND, mapped, draws, "pipeline", details
                )
    erel = same_colour_relation(colouring, claimed_s=1)
    max_k = g.n // 2
    if g.n <= exact_max_n:
        all_complete = True
        for kk in range(2, max_k + 1):
            if 2 * kk > colouring.palette_size:
                continue  # a rainbow 2kk-cycle needs 2kk distinct colours
            found, completed = _exact_good_cycle(g, 2 * kk, None, erel, exact_step_cap)
            if found is not None:
                witness = CycleWitness(canonical_cycle(found))
                problems = validate_cycle_witness(
                    g, witness.vertices, colouring=colouring, require_rainbow=True
                )
                if problems:
                    raise RuntimeError(f"exact witness invalid: {problems}")
                return SearchResult(
                    SearchStatus.FOUND, witness, draws, "exact", details
                )
            all_complete = all_complete and completed
        if all_complete:
            return SearchResult(SearchStatus.ABSENT, None, draws, "exact", details)
        return SearchResult(SearchStatus.INCONCLUSIVE, None, draws, None, details)
    ks = [kk for kk in range(2, min(6, max_k) + 1) if 2 * kk <= colouring.palette_size]
    if ks:
        slice_budget = budget // len(ks)
        for idx, kk in enumerate(ks):
            result = find_rainbow_2k_cycle(
                g,
                colouring,
                kk,
                budget=slice_budget,
                seed=seed + idx,
                exact_max_n=0,
            )
            draws += result.draws
            if result.status is SearchStatus.FOUND:
                return SearchResult(
                    SearchStatus.FOUND, result.witness, draws, "randomized", details
                )
    return SearchResult(SearchStatus.INCONCLUSIVE, None, draws, None, details)
