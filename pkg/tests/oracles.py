"""Independent brute-force oracles used only by the test suite.

Everything here re-reads adjacency and colours from scratch and avoids the
library's walk-table DP, pruned DFS counters, and pipelines, so agreement is
meaningful.
"""

from __future__ import annotations

from itertools import combinations, permutations, product

from cyclekit.graphs import EdgeColouring, Graph, edge_key


def hom_cycle_pure(g: Graph, two_k: int) -> int:
    """Check every tuple in V^{2k} directly; only viable for tiny graphs."""
    if two_k == 0:
        return g.n
    masks = g.neighbor_masks()
    count = 0
    for tup in product(range(g.n), repeat=two_k):
        if all(
            (masks[tup[i]] >> tup[(i + 1) % two_k]) & 1 for i in range(two_k)
        ):
            count += 1
    return count


def hom_cycle_enumerated(g: Graph, two_k: int) -> int:
    """Tuple enumeration with adjacency pruning; the closing vertex is counted
    through a neighbourhood intersection."""
    if two_k == 0:
        return g.n
    if two_k == 2:
        return sum(len(g.adjacency[x]) for x in range(g.n))
    masks = g.neighbor_masks()
    adj = g.adjacency
    total = 0

    def rec(v: int, depth: int, first_mask: int) -> int:
        if depth == two_k - 1:
            return (masks[v] & first_mask).bit_count()
        acc = 0
        for u in adj[v]:
            acc += rec(u, depth + 1, first_mask)
        return acc

    for x0 in range(g.n):
        total += rec(x0, 1, masks[x0])
    return total


def list_homomorphic_cycles(g: Graph, two_k: int) -> list[tuple[int, ...]]:
    """Every homomorphic 2k-cycle tuple, by direct DFS enumeration."""
    masks = g.neighbor_masks()
    adj = g.adjacency
    out: list[tuple[int, ...]] = []

    def rec(tup: list[int]) -> None:
        if len(tup) == two_k:
            if (masks[tup[-1]] >> tup[0]) & 1:
                out.append(tuple(tup))
            return
        for u in adj[tup[-1]]:
            tup.append(u)
            rec(tup)
            tup.pop()

    for x0 in range(g.n):
        rec([x0])
    return out


def count_c4_subgraphs(g: Graph) -> int:
    """4-cycle subgraphs by checking the three pairings of every 4-set."""
    masks = g.neighbor_masks()

    def adj(a: int, b: int) -> bool:
        return bool((masks[a] >> b) & 1)

    count = 0
    for a, b, c, d in combinations(range(g.n), 4):
        for order in ((a, b, c, d), (a, c, b, d), (a, b, d, c)):
            w, x, y, z = order
            if adj(w, x) and adj(x, y) and adj(y, z) and adj(z, w):
                count += 1
    return count


def bad_cycle_count(
    g: Graph,
    k: int,
    vertex_related=None,
    edge_related=None,
    pattern: tuple[set[int], set[int]] | None = None,
) -> int:
    """Count homomorphic 2k-cycles with a conflicting pair, by full enumeration."""
    two_k = 2 * k
    masks = g.neighbor_masks()
    adj = g.adjacency
    count = 0

    def is_bad(tup: tuple[int, ...]) -> bool:
        if vertex_related is not None:
            for i in range(two_k):
                for j in range(i + 1, two_k):
                    if vertex_related(tup[i], tup[j]):
                        return True
        if edge_related is not None:
            es = [edge_key(tup[i], tup[(i + 1) % two_k]) for i in range(two_k)]
            for i in range(two_k):
                for j in range(i + 1, two_k):
                    if edge_related(es[i], es[j]):
                        return True
        return False

    def rec(tup: list[int], sides) -> None:
        nonlocal count
        depth = len(tup)
        if depth == two_k:
            if (masks[tup[-1]] >> tup[0]) & 1 and is_bad(tuple(tup)):
                count += 1
            return
        for u in adj[tup[-1]]:
            if sides is None or u in sides[depth % 2]:
                tup.append(u)
                rec(tup, sides)
                tup.pop()

    orientations = [None] if pattern is None else [pattern, (pattern[1], pattern[0])]
    for sides in orientations:
        for x0 in range(g.n):
            if sides is None or x0 in sides[0]:
                rec([x0], sides)
    return count


def rainbow_2k_cycle_exists(g: Graph, c: EdgeColouring, k: int) -> bool:
    """Is there an injective 2k-cycle with pairwise distinct edge colours?"""
    two_k = 2 * k
    adj = g.adjacency
    masks = g.neighbor_masks()

    def rec(tup: list[int], used: set[int]) -> bool:
        depth = len(tup)
        if depth == two_k:
            if not (masks[tup[-1]] >> tup[0]) & 1:
                return False
            close = c.colour(tup[-1], tup[0])
            return close not in used
        for u in adj[tup[-1]]:
            if u in tup:
                continue
            col = c.colour(tup[-1], u)
            if col in used:
                continue
            tup.append(u)
            used.add(col)
            if rec(tup, used):
                return True
            used.discard(col)
            tup.pop()
        return False

    for x0 in range(g.n):
        if rec([x0], set()):
            return True
    return False


def all_rainbow_cycles(g: Graph, c: EdgeColouring, max_len: int | None = None):
    """Every simple rainbow cycle (as a vertex tuple), enumerated exhaustively.

    Cycles are rooted at their minimum vertex with the smaller second vertex,
    so each appears once.  Pruning on repeated colours keeps this fast: a
    rainbow cycle cannot be longer than the palette.
    """
    adj = g.adjacency
    masks = g.neighbor_masks()
    limit = max_len or g.n
    found = []

    def rec(tup: list[int], used: set[int], root: int) -> None:
        v = tup[-1]
        if len(tup) >= 3 and (masks[v] >> root) & 1:
            close = c.colour(v, root)
            if close not in used and tup[1] < tup[-1]:
                found.append(tuple(tup))
        if len(tup) >= limit:
            return
        for u in adj[v]:
            if u <= root or u in tup:
                continue
            col = c.colour(v, u)
            if col in used:
                continue
            tup.append(u)
            used.add(col)
            rec(tup, used, root)
            used.discard(col)
            tup.pop()

    for root in range(g.n):
        rec([root], set(), root)
    return found


def blowup_cycle_exists(g: Graph, r: int, k: int) -> bool:
    """Direct search for 2k pairwise disjoint r-sets, cyclically completely joined."""
    masks = g.neighbor_masks()
    subsets = list(combinations(range(g.n), r))
    set_masks = [sum(1 << v for v in s) for s in subsets]

    def complete(i: int, j: int) -> bool:
        return all(
            (masks[u] >> v) & 1 for u in subsets[i] for v in subsets[j]
        )

    two_k = 2 * k

    def rec(chain: list[int], union: int) -> bool:
        if len(chain) == two_k:
            return complete(chain[-1], chain[0])
        for idx in range(len(subsets)):
            if set_masks[idx] & union:
                continue
            if not complete(chain[-1], idx):
                continue
            chain.append(idx)
            if rec(chain, union | set_masks[idx]):
                return True
            chain.pop()
        return False

    for start in range(len(subsets)):
        if rec([start], set_masks[start]):
            return True
    return False


def colour_iso_disjoint_cycles_exist(c: EdgeColouring, r: int, k: int) -> bool:
    """Direct search for r vertex-disjoint colour-isomorphic 2k-cycles in K_n.

    Copies are aligned position-by-position, which covers every rotation and
    reflection because all orderings of the first copy are tried.
    """
    if r != 2:
        raise NotImplementedError("oracle written for r = 2")
    g = c.graph
    n = g.n
    two_k = 2 * k
    if n < 2 * two_k:
        return False
    for first in permutations(range(n), two_k):
        if first[0] != min(first):
            continue
        colours = [
            c.colour(first[i], first[(i + 1) % two_k]) for i in range(two_k)
        ]
        rest = [v for v in range(n) if v not in first]
        for second in permutations(rest, two_k):
            ok = True
            for i in range(two_k):
                if c.colour(second[i], second[(i + 1) % two_k]) != colours[i]:
                    ok = False
                    break
            if ok:
                return True
    return False


def mono_matchings_count(c: EdgeColouring, r: int) -> int:
    """r-edge single-colour matchings, by checking all r-subsets per class."""
    by_colour: dict[int, list] = {}
    for e, col in c.colour_of.items():
        by_colour.setdefault(col, []).append(e)
    total = 0
    for edges in by_colour.values():
        for combo in combinations(edges, r):
            vertices = [v for e in combo for v in e]
            if len(set(vertices)) == 2 * r:
                total += 1
    return total


def count_krr_brute(g: Graph, r: int) -> int:
    """Unordered K_{r,r} subgraph copies by testing disjoint subset pairs."""
    masks = g.neighbor_masks()
    subsets = list(combinations(range(g.n), r))
    count = 0
    for i, j in combinations(range(len(subsets)), 2):
        a, b = subsets[i], subsets[j]
        if set(a) & set(b):
            continue
        if all((masks[u] >> v) & 1 for u in a for v in b):
            count += 1
    return count
