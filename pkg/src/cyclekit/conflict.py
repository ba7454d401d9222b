"""Conflict relations over vertices and edges, exact bad-cycle counting, and
the closed-form bounds the counts are checked against.

A homomorphic 2k-cycle is "bad" when two of its positions are related by the
supplied vertex relation, or two of its edge slots by the supplied edge-pair
relation (indices cyclic).  Counting goes through the complement: the number
of conflict-free cycles is enumerated by a pruned DFS and subtracted from the
exact pattern-restricted homomorphism count.  A direct enumeration is kept
for witness streaming and as an independent cross-check.

Pass/fail verdicts against the bounds are decided in exact integer
arithmetic by raising both sides to the 2(k-l) power; the floating bound
values are reported round-up and are display-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Sequence

from .errors import BudgetExceededError
from .graphs import (
    BipartitePartition,
    Edge,
    EdgeColouring,
    Graph,
    edge_key,
    greedy_proper_colouring,
)
from .homcount import hom_cycle

DEFAULT_BUDGET = 10**9
DEFAULT_COLOUR_SEEDS = (101, 202, 303)


# ---------------------------------------------------------------------------
# relations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VertexRelation:
    """Symmetric predicate on vertex pairs with a claimed local sparsity."""

    related: Callable[[int, int], bool]
    sparsity_s: int
    name: str = "custom"
    payload_masks: tuple[int, ...] | None = None  # set-intersection fast path


@dataclass(frozen=True)
class EdgePairRelation:
    """Symmetric predicate on edge pairs (canonical keys) with claimed sparsity."""

    related: Callable[[Edge, Edge], bool]
    sparsity_s: int
    name: str = "custom"
    colouring: EdgeColouring | None = None  # same-colour fast path


def equality_relation() -> VertexRelation:
    return VertexRelation(related=lambda u, v: u == v, sparsity_s=1, name="equality")


def intersection_relation(
    payload_masks: Sequence[int], sparsity_s: int
) -> VertexRelation:
    """u ~ v iff the payload sets behind the vertices intersect."""
    masks = tuple(payload_masks)
    return VertexRelation(
        related=lambda u, v: bool(masks[u] & masks[v]),
        sparsity_s=sparsity_s,
        name="set-intersection",
        payload_masks=masks,
    )


def same_colour_relation(
    colouring: EdgeColouring, claimed_s: int | None = None
) -> EdgePairRelation:
    """e ~ f iff the two edges carry the same colour."""
    if claimed_s is None:
        claimed_s = _max_colour_multiplicity(colouring)
    col = colouring.colour_of
    return EdgePairRelation(
        related=lambda e, f: col[e] == col[f],
        sparsity_s=claimed_s,
        name="same-colour",
        colouring=colouring,
    )


def empty_edge_relation() -> EdgePairRelation:
    return EdgePairRelation(related=lambda e, f: False, sparsity_s=0, name="empty")


def _max_colour_multiplicity(colouring: EdgeColouring) -> int:
    g = colouring.graph
    best = 0
    for v in range(g.n):
        counts: dict[int, int] = {}
        for u in g.adjacency[v]:
            c = colouring.colour_of[edge_key(u, v)]
            counts[c] = counts.get(c, 0) + 1
        if counts:
            best = max(best, max(counts.values()))
    return best


# ---------------------------------------------------------------------------
# sparsity verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SparsityCertificate:
    relation: str
    claimed: int
    measured: int
    passed: bool


def verify_sparsity(
    g: Graph, rel: VertexRelation | EdgePairRelation
) -> SparsityCertificate:
    """Exhaustively measure the true local sparsity and compare with the claim."""
    if isinstance(rel, VertexRelation):
        measured = _measure_vertex_sparsity(g, rel)
    else:
        measured = _measure_edge_sparsity(g, rel)
    return SparsityCertificate(
        relation=rel.name,
        claimed=rel.sparsity_s,
        measured=measured,
        passed=measured <= rel.sparsity_s,
    )


def _measure_vertex_sparsity(g: Graph, rel: VertexRelation) -> int:
    if rel.name == "equality":
        return 1 if g.edge_count else 0
    best = 0
    if rel.payload_masks is not None:
        masks = rel.payload_masks
        for v in range(g.n):
            nbrs = g.adjacency[v]
            for u in range(g.n):
                mu = masks[u]
                count = sum(1 for w in nbrs if masks[w] & mu)
                if count > best:
                    best = count
        return best
    related = rel.related
    for v in range(g.n):
        nbrs = g.adjacency[v]
        for u in range(g.n):
            count = sum(1 for w in nbrs if related(u, w))
            if count > best:
                best = count
    return best


def _measure_edge_sparsity(g: Graph, rel: EdgePairRelation) -> int:
    if rel.colouring is not None:
        return _max_colour_multiplicity(rel.colouring)
    best = 0
    related = rel.related
    for w in range(g.n):
        incident = [edge_key(w, z) for z in g.adjacency[w]]
        for e in g.edges:
            count = sum(1 for f in incident if related(e, f))
            if count > best:
                best = count
    return best


# ---------------------------------------------------------------------------
# bipartite caps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BipartiteConflictParams:
    """Cross-degree and conflict caps for the two-sided lemma variant."""

    delta1: int
    delta2: int
    s1: int
    s2: int
    ell: int

    def __post_init__(self) -> None:
        for v in (self.delta1, self.delta2, self.s1, self.s2):
            if v < 0:
                raise ValueError("caps must be nonnegative")
        if self.s1 > self.delta1 or self.s2 > self.delta2:
            raise ValueError("conflict caps cannot exceed cross-degree caps")
        if self.ell < 0:
            raise ValueError("ell must be nonnegative")

    @property
    def M(self) -> int:
        return max(self.delta1 * self.s2, self.delta2 * self.s1)


def measure_bipartite_caps(
    g: Graph,
    part: BipartitePartition,
    rel: VertexRelation | EdgePairRelation,
    ell: int = 0,
) -> BipartiteConflictParams:
    """Measured Delta_i and s_i for the given relation and partition."""
    part.validate(g.n)
    left, right = part.left, part.right

    def side_caps(side_w: frozenset[int], side_z: frozenset[int]) -> tuple[int, int]:
        delta = 0
        s_cap = 0
        for w in side_w:
            nbrs = [z for z in g.adjacency[w] if z in side_z]
            delta = max(delta, len(nbrs))
            if isinstance(rel, VertexRelation):
                for u in range(g.n):
                    count = sum(1 for z in nbrs if rel.related(u, z))
                    s_cap = max(s_cap, count)
            else:
                for e in g.edges:
                    count = sum(1 for z in nbrs if rel.related(e, edge_key(w, z)))
                    s_cap = max(s_cap, count)
        return delta, s_cap

    delta1, s1 = side_caps(left, right)
    delta2, s2 = side_caps(right, left)
    return BipartiteConflictParams(
        delta1=delta1, delta2=delta2, s1=s1, s2=s2, ell=ell
    )


# ---------------------------------------------------------------------------
# pattern-restricted homomorphism totals
# ---------------------------------------------------------------------------


def _pattern_hom(g: Graph, two_k: int, part: BipartitePartition | None) -> int:
    if part is None:
        return hom_cycle(g, two_k)
    part.validate(g.n)
    total = 0
    for even_side, odd_side in (
        (part.left, part.right),
        (part.right, part.left),
    ):
        for x in even_side:
            vec = {x: 1}
            for p in range(1, two_k + 1):
                allowed = even_side if p % 2 == 0 else odd_side
                nxt: dict[int, int] = {}
                for v, cnt in vec.items():
                    for u in g.adjacency[v]:
                        if u in allowed:
                            nxt[u] = nxt.get(u, 0) + cnt
                vec = nxt
                if not vec:
                    break
            total += vec.get(x, 0)
    return total


# ---------------------------------------------------------------------------
# conflict-free cycle counting (complement side)
# ---------------------------------------------------------------------------

_FULL = -1  # sentinel: mask with all bits set


def _orientation_masks(
    g: Graph, part: BipartitePartition | None
) -> list[tuple[int, int]]:
    """(even-position mask, odd-position mask) per orientation."""
    if part is None:
        full = (1 << g.n) - 1
        return [(full, full)]
    lm = om = 0
    for v in part.left:
        lm |= 1 << v
    for v in part.right:
        om |= 1 << v
    return [(lm, om), (om, lm)]


class _Budget:
    __slots__ = ("remaining", "budget")

    def __init__(self, budget: int | None):
        self.budget = budget
        self.remaining = budget if budget is not None else -1

    def spend(self, amount: int) -> None:
        if self.budget is None:
            return
        self.remaining -= amount
        if self.remaining < 0:
            raise BudgetExceededError(self.budget)

    @property
    def used(self) -> int:
        if self.budget is None:
            return 0
        return self.budget - self.remaining


def _count_injective(
    g: Graph, two_k: int, even_mask: int, odd_mask: int, budget: _Budget
) -> int:
    adjm = g.neighbor_masks()
    total = 0
    last = two_k - 1

    def rec(v: int, depth: int, visited: int) -> int:
        side = odd_mask if depth % 2 else even_mask
        if depth == last:
            cands = adjm[v] & nbr0 & side & ~visited
            budget.spend(1)
            return cands.bit_count()
        m = adjm[v] & side & ~visited
        budget.spend(m.bit_count() or 1)
        count = 0
        while m:
            low = m & -m
            m ^= low
            count += rec(low.bit_length() - 1, depth + 1, visited | low)
        return count

    starts = even_mask
    while starts:
        low = starts & -starts
        starts ^= low
        x0 = low.bit_length() - 1
        nbr0 = adjm[x0]
        total += rec(x0, 1, low)
    return total


def _count_rainbow(
    g: Graph,
    two_k: int,
    colmat: list[list[int]],
    require_distinct: bool,
    even_mask: int,
    odd_mask: int,
    budget: _Budget,
) -> int:
    adjm = g.neighbor_masks()
    total = 0
    last = two_k - 1

    def rec(v: int, depth: int, visited: int, used: int) -> int:
        side = odd_mask if depth % 2 else even_mask
        row = colmat[v]
        if depth == last:
            cands = adjm[v] & nbr0 & side
            if require_distinct:
                cands &= ~visited
            budget.spend(1)
            count = 0
            close_row = colmat[x0_global]
            while cands:
                low = cands & -cands
                cands ^= low
                z = low.bit_length() - 1
                c1 = row[z]
                c2 = close_row[z]
                if c1 != c2 and not (used >> c1 & 1) and not (used >> c2 & 1):
                    count += 1
            return count
        m = adjm[v] & side
        if require_distinct:
            m &= ~visited
        budget.spend(m.bit_count() or 1)
        count = 0
        while m:
            low = m & -m
            m ^= low
            u = low.bit_length() - 1
            c = row[u]
            if not (used >> c & 1):
                count += rec(u, depth + 1, visited | low, used | (1 << c))
        return count

    starts = even_mask
    while starts:
        low = starts & -starts
        starts ^= low
        x0_global = low.bit_length() - 1
        nbr0 = adjm[x0_global]
        total += rec(x0_global, 1, low, 0)
    return total


def _count_disjoint(
    g: Graph,
    two_k: int,
    payload_masks: Sequence[int],
    even_mask: int,
    odd_mask: int,
    budget: _Budget,
) -> int:
    adjm = g.neighbor_masks()
    total = 0
    last = two_k - 1

    def rec(v: int, depth: int, union: int) -> int:
        side = odd_mask if depth % 2 else even_mask
        if depth == last:
            cands = adjm[v] & nbr0 & side
            budget.spend(1)
            count = 0
            while cands:
                low = cands & -cands
                cands ^= low
                z = low.bit_length() - 1
                if not payload_masks[z] & union:
                    count += 1
            return count
        m = adjm[v] & side
        budget.spend(m.bit_count() or 1)
        count = 0
        while m:
            low = m & -m
            m ^= low
            u = low.bit_length() - 1
            pu = payload_masks[u]
            if not pu & union:
                count += rec(u, depth + 1, union | pu)
        return count

    starts = even_mask
    while starts:
        low = starts & -starts
        starts ^= low
        x0 = low.bit_length() - 1
        nbr0 = adjm[x0]
        total += rec(x0, 1, payload_masks[x0])
    return total


def _count_good_generic(
    g: Graph,
    two_k: int,
    vrel: VertexRelation | None,
    erel: EdgePairRelation | None,
    even_mask: int,
    odd_mask: int,
    budget: _Budget,
) -> int:
    adjm = g.neighbor_masks()
    vrelated = vrel.related if vrel else None
    erelated = erel.related if erel else None
    xs: list[int] = []
    es: list[Edge] = []

    def vertex_ok(x: int) -> bool:
        if vrelated is None:
            return True
        return not any(vrelated(x, y) for y in xs)

    def edge_ok(e: Edge) -> bool:
        if erelated is None:
            return True
        return not any(erelated(e, f) for f in es)

    def rec(depth: int) -> int:
        v = xs[-1]
        side = odd_mask if depth % 2 else even_mask
        m = adjm[v] & side
        budget.spend(m.bit_count() or 1)
        count = 0
        last = depth == two_k - 1
        while m:
            low = m & -m
            m ^= low
            u = low.bit_length() - 1
            e = edge_key(v, u)
            if not vertex_ok(u) or not edge_ok(e):
                continue
            if last:
                if not (adjm[u] >> xs[0]) & 1:
                    continue
                closing = edge_key(u, xs[0])
                es.append(e)
                if edge_ok(closing):
                    count += 1
                es.pop()
            else:
                xs.append(u)
                es.append(e)
                count += rec(depth + 1)
                es.pop()
                xs.pop()
        return count

    total = 0
    starts = even_mask
    while starts:
        low = starts & -starts
        starts ^= low
        x0 = low.bit_length() - 1
        xs.append(x0)
        total += rec(1)
        xs.pop()
    return total


# ---------------------------------------------------------------------------
# direct enumeration (witnesses and cross-checks)
# ---------------------------------------------------------------------------


def _iter_pattern_cycles(
    g: Graph, two_k: int, even_mask: int, odd_mask: int, budget: _Budget
) -> Iterator[tuple[int, ...]]:
    adjm = g.neighbor_masks()
    xs: list[int] = []

    def rec(depth: int) -> Iterator[tuple[int, ...]]:
        v = xs[-1]
        side = odd_mask if depth % 2 else even_mask
        m = adjm[v] & side
        budget.spend(m.bit_count() or 1)
        last = depth == two_k - 1
        while m:
            low = m & -m
            m ^= low
            u = low.bit_length() - 1
            if last:
                if (adjm[u] >> xs[0]) & 1:
                    yield tuple(xs) + (u,)
            else:
                xs.append(u)
                yield from rec(depth + 1)
                xs.pop()

    starts = even_mask
    while starts:
        low = starts & -starts
        starts ^= low
        xs.append(low.bit_length() - 1)
        yield from rec(1)
        xs.pop()


def cycle_is_bad(
    cycle: Sequence[int],
    vrel: VertexRelation | None,
    erel: EdgePairRelation | None,
) -> bool:
    two_k = len(cycle)
    if vrel is not None:
        for i in range(two_k):
            for j in range(i + 1, two_k):
                if vrel.related(cycle[i], cycle[j]):
                    return True
    if erel is not None:
        es = [
            edge_key(cycle[i], cycle[(i + 1) % two_k]) for i in range(two_k)
        ]
        for i in range(two_k):
            for j in range(i + 1, two_k):
                if erel.related(es[i], es[j]):
                    return True
    return False


# ---------------------------------------------------------------------------
# the bad-cycle operation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BadCycleResult:
    count: int
    total: int
    good: int
    witnesses: tuple[tuple[int, ...], ...] | None
    steps_used: int


def enumerate_bad_cycles(
    g: Graph,
    k: int,
    vrel: VertexRelation | None = None,
    erel: EdgePairRelation | None = None,
    part: BipartitePartition | None = None,
    budget: int | None = DEFAULT_BUDGET,
    collect_witnesses: bool = False,
    max_witnesses: int = 1000,
    method: str = "complement",
) -> BadCycleResult:
    """Exact count of homomorphic 2k-cycles with a conflicting pair."""
    if k < 2:
        raise ValueError("need k >= 2")
    two_k = 2 * k
    box = _Budget(budget)
    total = _pattern_hom(g, two_k, part)
    if vrel is None and erel is None:
        return BadCycleResult(0, total, total, () if collect_witnesses else None, 0)

    if method == "direct":
        count = 0
        for omask, emask in _orientation_masks(g, part):
            for cyc in _iter_pattern_cycles(g, two_k, omask, emask, box):
                if cycle_is_bad(cyc, vrel, erel):
                    count += 1
        good = total - count
    elif method == "complement":
        good = 0
        for emask, omask in _orientation_masks(g, part):
            good += _dispatch_good(g, two_k, vrel, erel, emask, omask, box)
        count = total - good
    else:
        raise ValueError(f"unknown method {method!r}")

    witnesses: tuple[tuple[int, ...], ...] | None = None
    if collect_witnesses:
        found: list[tuple[int, ...]] = []
        wit_box = _Budget(budget)
        for emask, omask in _orientation_masks(g, part):
            if len(found) >= max_witnesses:
                break
            for cyc in _iter_pattern_cycles(g, two_k, emask, omask, wit_box):
                if cycle_is_bad(cyc, vrel, erel):
                    found.append(cyc)
                    if len(found) >= max_witnesses:
                        break
        witnesses = tuple(found)
    return BadCycleResult(count, total, good, witnesses, box.used)


def _dispatch_good(
    g: Graph,
    two_k: int,
    vrel: VertexRelation | None,
    erel: EdgePairRelation | None,
    even_mask: int,
    odd_mask: int,
    box: _Budget,
) -> int:
    v_kind = None if vrel is None else vrel.name
    e_kind = None if erel is None else erel.name
    if v_kind == "equality" and erel is None:
        return _count_injective(g, two_k, even_mask, odd_mask, box)
    if e_kind == "same-colour" and erel.colouring is not None and (
        vrel is None or v_kind == "equality"
    ):
        return _count_rainbow(
            g,
            two_k,
            erel.colouring.colour_matrix(),
            require_distinct=v_kind == "equality",
            even_mask=even_mask,
            odd_mask=odd_mask,
            budget=box,
        )
    if (
        v_kind == "set-intersection"
        and vrel.payload_masks is not None
        and erel is None
    ):
        return _count_disjoint(
            g, two_k, vrel.payload_masks, even_mask, odd_mask, box
        )
    return _count_good_generic(g, two_k, vrel, erel, even_mask, odd_mask, box)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

_ROUND_UP = 1 + 1e-12


def bound_simple(g: Graph, k: int, s: int, hom: int | None = None) -> float:
    """32 k^{3/2} s^{1/2} Delta^{1/2} n^{1/(2k)} hom^{1-1/(2k)}, rounded up."""
    if k < 2:
        raise ValueError("need k >= 2")
    if hom is None:
        hom = hom_cycle(g, 2 * k)
    delta = g.max_degree()
    if hom == 0 or s == 0 or delta == 0 or g.n == 0:
        return 0.0
    log_val = (
        math.log(32)
        + 1.5 * math.log(k)
        + 0.5 * math.log(s)
        + 0.5 * math.log(delta)
        + math.log(g.n) / (2 * k)
        + (1 - 1 / (2 * k)) * math.log(hom)
    )
    return math.exp(log_val) * _ROUND_UP


def simple_bound_holds(count: int, g: Graph, k: int, s: int, hom: int | None = None) -> bool:
    """Exact integer form of count <= bound_simple."""
    if hom is None:
        hom = hom_cycle(g, 2 * k)
    rhs = 32 ** (2 * k) * k ** (3 * k) * s**k * g.max_degree() ** k * g.n
    return count ** (2 * k) <= rhs * hom ** (2 * k - 1)


def bound_bipartite(
    g: Graph,
    k: int,
    params: BipartiteConflictParams,
    hom_low: int | None = None,
    hom_high: int | None = None,
) -> float:
    """32 k^{3/2} M^{1/2} hom(C_{2l})^{1/(2(k-l))} hom(C_{2k})^{1-1/(2(k-l))}."""
    ell = params.ell
    if k < 2 or not 0 <= ell <= k - 1:
        raise ValueError("need k >= 2 and 0 <= ell <= k-1")
    if hom_low is None:
        hom_low = hom_cycle(g, 2 * ell)
    if hom_high is None:
        hom_high = hom_cycle(g, 2 * k)
    m_val = params.M
    if hom_low == 0 or hom_high == 0 or m_val == 0:
        return 0.0
    span = 2 * (k - ell)
    log_val = (
        math.log(32)
        + 1.5 * math.log(k)
        + 0.5 * math.log(m_val)
        + math.log(hom_low) / span
        + (1 - 1 / span) * math.log(hom_high)
    )
    return math.exp(log_val) * _ROUND_UP


def bipartite_bound_holds(
    count: int,
    g: Graph,
    k: int,
    params: BipartiteConflictParams,
    hom_low: int | None = None,
    hom_high: int | None = None,
) -> bool:
    """Exact integer form of count <= bound_bipartite."""
    ell = params.ell
    if hom_low is None:
        hom_low = hom_cycle(g, 2 * ell)
    if hom_high is None:
        hom_high = hom_cycle(g, 2 * k)
    span = k - ell
    rhs = 32 ** (2 * span) * k ** (3 * span) * params.M**span
    return count ** (2 * span) <= rhs * hom_low * hom_high ** (2 * span - 1)


# ---------------------------------------------------------------------------
# the key-lemma certificate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KeyLemmaCertificate:
    passed: bool
    count: int
    bound: float
    relation: str
    k: int
    ell: int
    sparsity: SparsityCertificate
    total: int
    good: int
    params: BipartiteConflictParams | None = None
    details: dict[str, Any] = field(default_factory=dict)


def check_key_lemma(
    g: Graph,
    k: int,
    rel: VertexRelation | EdgePairRelation,
    part: BipartitePartition | None = None,
    ell: int = 0,
    budget: int | None = DEFAULT_BUDGET,
) -> KeyLemmaCertificate:
    """Assert bad-cycle count <= bound, with the relation's sparsity measured first."""
    sparsity = verify_sparsity(g, rel)
    s = sparsity.measured
    vrel = rel if isinstance(rel, VertexRelation) else None
    erel = rel if isinstance(rel, EdgePairRelation) else None
    result = enumerate_bad_cycles(
        g, k, vrel=vrel, erel=erel, part=part, budget=budget
    )
    hom_high = hom_cycle(g, 2 * k)
    if part is None:
        passed = simple_bound_holds(result.count, g, k, s, hom=hom_high)
        bound = bound_simple(g, k, s, hom=hom_high)
        params = None
    else:
        params = measure_bipartite_caps(g, part, rel, ell=ell)
        passed = bipartite_bound_holds(result.count, g, k, params, hom_high=hom_high)
        bound = bound_bipartite(g, k, params, hom_high=hom_high)
    return KeyLemmaCertificate(
        passed=passed,
        count=result.count,
        bound=bound,
        relation=rel.name,
        k=k,
        ell=ell if part is not None else 0,
        sparsity=sparsity,
        total=result.total,
        good=result.good,
        params=params,
        details={"hom": hom_high, "n": g.n, "max_degree": g.max_degree()},
    )


# ---------------------------------------------------------------------------
# dyadic diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DyadicProfile:
    k: int
    alpha: dict[int, int]
    beta: dict[int, int]
    q: int | None
    hom_short: int
    hom_long: int
    alpha_bound_ok: bool
    beta_bound_ok: bool


def dyadic_profile(
    g: Graph, k: int, s: int = 1, delta1: int | None = None
) -> DyadicProfile:
    """Per-power-of-two walk-count buckets alpha_r (length k-1) and beta_r (length k).

    alpha_r totals the walks whose endpoint pair (y, z) has between 2^{r-1}
    and 2^r - 1 walks of length k-1; beta_r is the analogue one step longer.
    The pivot q satisfies sqrt(k s hom_long / (delta1 hom_short)) <= 2^q <
    twice that, computed in exact integers.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    from .homcount import walk_row

    alpha: dict[int, int] = {}
    beta: dict[int, int] = {}
    hom_short = 0
    hom_long = 0
    for y in range(g.n):
        short_row = walk_row(g, y, k - 1)
        long_row = walk_row(g, y, k)
        for w in short_row:
            if w:
                r = w.bit_length()
                alpha[r] = alpha.get(r, 0) + w
                hom_short += w * w
        for w in long_row:
            if w:
                r = w.bit_length()
                beta[r] = beta.get(r, 0) + w
                hom_long += w * w
    alpha_ok = sum(a * (1 << (r - 1)) for r, a in alpha.items()) <= hom_short
    beta_ok = sum(b * (1 << (r - 1)) for r, b in beta.items()) <= hom_long
    if delta1 is None:
        delta1 = g.max_degree()
    q: int | None = None
    if hom_short > 0 and hom_long > 0 and delta1 > 0:
        lhs_base = delta1 * hom_short
        target = k * s * hom_long
        q = 0
        while _pow4_cmp(q, target, lhs_base) < 0:
            q += 1
        while q > -200 and _pow4_cmp(q - 1, target, lhs_base) >= 0:
            q -= 1
    return DyadicProfile(
        k=k,
        alpha=dict(sorted(alpha.items())),
        beta=dict(sorted(beta.items())),
        q=q,
        hom_short=hom_short,
        hom_long=hom_long,
        alpha_bound_ok=alpha_ok,
        beta_bound_ok=beta_ok,
    )


def _pow4_cmp(q: int, target: int, base: int) -> int:
    """Sign of 4^q * base - target, exact for negative q too."""
    if q >= 0:
        lhs = (4**q) * base
        rhs = target
    else:
        lhs = base
        rhs = (4**-q) * target
    return (lhs > rhs) - (lhs < rhs)


@dataclass(frozen=True)
class GammaDiagnostic:
    gamma: dict[tuple[int, int], int]
    claim_alpha_ok: bool
    claim_beta_ok: bool


def gamma_diagnostic(
    g: Graph,
    k: int,
    pair_related: Callable[[tuple[int, int], tuple[int, int]], bool],
    delta1: int,
    s2: int,
    part: BipartitePartition | None = None,
    guard_n: int = 12,
) -> GammaDiagnostic:
    """Brute-force gamma_{r,t} table with its two counting claims.

    gamma_{r,t} counts one-orientation pattern cycles whose (x1, x_{k+2})
    walk count sits in bucket r, whose (x2, x_{k+2}) count sits in bucket t,
    and which have (x1, x2) related to some (x_i, x_{i+1}) for 2 <= i <= k+1.
    Diagnostic only; nothing downstream consumes it.
    """
    if g.n > guard_n or k > 3:
        raise ValueError("gamma diagnostic is brute force; guarded to tiny instances")
    from .homcount import walk_table

    short = walk_table(g, k - 1).counts
    longer = walk_table(g, k).counts
    profile = dyadic_profile(g, k)
    gamma: dict[tuple[int, int], int] = {}
    box = _Budget(None)
    masks = _orientation_masks(g, part)[0]
    for cyc in _iter_pattern_cycles(g, 2 * k, masks[0], masks[1], box):
        w_r = short[cyc[0]][cyc[k + 1]]
        w_t = longer[cyc[1]][cyc[k + 1]]
        if not w_r or not w_t:
            continue
        if not any(
            pair_related((cyc[0], cyc[1]), (cyc[i], cyc[(i + 1) % (2 * k)]))
            for i in range(1, k + 1)
        ):
            continue
        key = (w_r.bit_length(), w_t.bit_length())
        gamma[key] = gamma.get(key, 0) + 1
    claim_alpha = all(
        val <= profile.alpha.get(r, 0) * delta1 * (1 << t)
        for (r, t), val in gamma.items()
    )
    claim_beta = all(
        val <= profile.beta.get(t, 0) * k * s2 * (1 << r)
        for (r, t), val in gamma.items()
    )
    return GammaDiagnostic(
        gamma=dict(sorted(gamma.items())),
        claim_alpha_ok=claim_alpha,
        claim_beta_ok=claim_beta,
    )


# ---------------------------------------------------------------------------
# sweep driver (shared by the CLI and the acceptance suite)
#
# The flat counters below unroll the DFS for lengths 4 and 6; the exhaustive
# n <= 9 sweep runs millions of them, and recursion overhead dominates
# otherwise.  They are cross-checked against the generic counters in tests.
# ---------------------------------------------------------------------------


def _flat_injective(adjm: Sequence[int], two_k: int) -> int:
    total = 0
    n = len(adjm)
    if two_k == 4:
        for x1 in range(n):
            m1 = adjm[x1]
            b1 = 1 << x1
            a = m1
            while a:
                l2 = a & -a
                a ^= l2
                x2 = l2.bit_length() - 1
                seen2 = b1 | l2
                c = adjm[x2] & ~seen2
                while c:
                    l3 = c & -c
                    c ^= l3
                    x3 = l3.bit_length() - 1
                    total += (adjm[x3] & m1 & ~(seen2 | l3)).bit_count()
        return total
    if two_k == 6:
        for x1 in range(n):
            m1 = adjm[x1]
            b1 = 1 << x1
            a = m1
            while a:
                l2 = a & -a
                a ^= l2
                x2 = l2.bit_length() - 1
                seen2 = b1 | l2
                c = adjm[x2] & ~seen2
                while c:
                    l3 = c & -c
                    c ^= l3
                    x3 = l3.bit_length() - 1
                    seen3 = seen2 | l3
                    d = adjm[x3] & ~seen3
                    while d:
                        l4 = d & -d
                        d ^= l4
                        x4 = l4.bit_length() - 1
                        seen4 = seen3 | l4
                        e = adjm[x4] & ~seen4
                        while e:
                            l5 = e & -e
                            e ^= l5
                            x5 = l5.bit_length() - 1
                            total += (
                                adjm[x5] & m1 & ~(seen4 | l5)
                            ).bit_count()
        return total
    raise ValueError("flat counter supports lengths 4 and 6")


def _flat_rainbow(adjm: Sequence[int], colflat: Sequence[int], two_k: int) -> int:
    total = 0
    n = len(adjm)
    if two_k == 4:
        for x1 in range(n):
            m1 = adjm[x1]
            r1 = x1 * n
            a = m1
            while a:
                l2 = a & -a
                a ^= l2
                x2 = l2.bit_length() - 1
                u1 = 1 << colflat[r1 + x2]
                r2 = x2 * n
                b = adjm[x2]
                while b:
                    l3 = b & -b
                    b ^= l3
                    x3 = l3.bit_length() - 1
                    c2 = colflat[r2 + x3]
                    if (u1 >> c2) & 1:
                        continue
                    u2 = u1 | (1 << c2)
                    r3 = x3 * n
                    d = adjm[x3] & m1
                    while d:
                        l4 = d & -d
                        d ^= l4
                        x4 = l4.bit_length() - 1
                        c3 = colflat[r3 + x4]
                        if (u2 >> c3) & 1:
                            continue
                        c4 = colflat[x4 * n + x1]
                        if c4 != c3 and not (u2 >> c4) & 1:
                            total += 1
        return total
    if two_k == 6:
        for x1 in range(n):
            m1 = adjm[x1]
            r1 = x1 * n
            a = m1
            while a:
                l2 = a & -a
                a ^= l2
                x2 = l2.bit_length() - 1
                u1 = 1 << colflat[r1 + x2]
                r2 = x2 * n
                b = adjm[x2]
                while b:
                    l3 = b & -b
                    b ^= l3
                    x3 = l3.bit_length() - 1
                    c2 = colflat[r2 + x3]
                    if (u1 >> c2) & 1:
                        continue
                    u2 = u1 | (1 << c2)
                    r3 = x3 * n
                    c_ = adjm[x3]
                    while c_:
                        l4 = c_ & -c_
                        c_ ^= l4
                        x4 = l4.bit_length() - 1
                        c3 = colflat[r3 + x4]
                        if (u2 >> c3) & 1:
                            continue
                        u3 = u2 | (1 << c3)
                        r4 = x4 * n
                        d = adjm[x4]
                        while d:
                            l5 = d & -d
                            d ^= l5
                            x5 = l5.bit_length() - 1
                            c4 = colflat[r4 + x5]
                            if (u3 >> c4) & 1:
                                continue
                            u4 = u3 | (1 << c4)
                            r5 = x5 * n
                            e = adjm[x5] & m1
                            while e:
                                l6 = e & -e
                                e ^= l6
                                x6 = l6.bit_length() - 1
                                c5 = colflat[r5 + x6]
                                if (u4 >> c5) & 1:
                                    continue
                                c6 = colflat[x6 * n + x1]
                                if c6 != c5 and not (u4 >> c6) & 1:
                                    total += 1
        return total
    raise ValueError("flat counter supports lengths 4 and 6")


def key_lemma_rows(
    g: Graph,
    instance_id: str,
    ks: Sequence[int] = (2, 3),
    colour_seeds: Sequence[int] = DEFAULT_COLOUR_SEEDS,
) -> list[dict[str, Any]]:
    """Key-lemma rows for one graph: equality plus seeded same-colour relations."""
    rows: list[dict[str, Any]] = []
    colourings = [
        (seed, greedy_proper_colouring(g, seed)) for seed in colour_seeds
    ]
    box = _Budget(None)
    full = (1 << g.n) - 1
    adjm = g.neighbor_masks()
    colflats: list[tuple[int, list[int]]] = []
    for seed, colouring in colourings:
        mat = colouring.colour_matrix()
        colflats.append((seed, [c for row in mat for c in row]))
    for k in ks:
        two_k = 2 * k
        hom = hom_cycle(g, two_k)
        s_eq = 1 if g.edge_count else 0
        if two_k in (4, 6):
            good = _flat_injective(adjm, two_k)
        else:
            good = _count_injective(g, two_k, full, full, box)
        rows.append(_sweep_row(f"{instance_id}-eq", g, k, s_eq, hom - good, hom))
        for idx, (seed, colouring) in enumerate(colourings):
            s_col = 1 if g.edge_count else 0
            if two_k in (4, 6):
                good = _flat_rainbow(adjm, colflats[idx][1], two_k)
            else:
                good = _count_rainbow(
                    g, two_k, colouring.colour_matrix(), False, full, full, box
                )
            rows.append(
                _sweep_row(f"{instance_id}-c{seed}", g, k, s_col, hom - good, hom)
            )
    return rows


def _sweep_row(
    instance_id: str, g: Graph, k: int, s: int, bad: int, hom: int
) -> dict[str, Any]:
    bound = bound_simple(g, k, s, hom=hom)
    passed = simple_bound_holds(bad, g, k, s, hom=hom)
    return {
        "instance-id": f"{instance_id}-k{k}",
        "n": g.n,
        "e": g.edge_count,
        "k": k,
        "bad-count": bad,
        "bound": bound,
        "margin": bound - bad,
        "pass": passed,
    }


def sweep_chunk(args: tuple[list[tuple[str, str]], tuple[int, ...], tuple[int, ...]]):
    """Multiprocessing worker: [(instance_id, graph6)] -> sweep rows."""
    from .smallgraphs import graph6_decode

    items, ks, seeds = args
    rows: list[dict[str, Any]] = []
    for instance_id, g6 in items:
        rows.extend(key_lemma_rows(graph6_decode(g6), instance_id, ks, seeds))
    return rows
