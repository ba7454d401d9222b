"""Isomorph-free catalogues of small graphs.

Catalogues are stored as graph6 lines under ``cyclekit/data`` and validated
against the classical counts of graphs up to isomorphism.  When a data file
is missing the catalogue is regenerated in memory by vertex augmentation with
canonical-form deduplication (slow for n = 9, so that file ships with the
package).
"""

from __future__ import annotations

import gzip
from functools import lru_cache
from importlib import resources
from multiprocessing import get_context

from .graphs import Graph

# graphs on n vertices up to isomorphism, and connected ones (classical values)
GRAPH_COUNTS = {1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044, 8: 12346, 9: 274668}
CONNECTED_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117, 9: 261080}


# ---------------------------------------------------------------------------
# graph6 (n <= 62 is enough here)
# ---------------------------------------------------------------------------


def graph6_encode(g: Graph) -> str:
    if g.n > 62:
        raise ValueError("graph6 writer limited to n <= 62")
    bits = []
    masks = g.neighbor_masks()
    for j in range(1, g.n):
        for i in range(j):
            bits.append((masks[i] >> j) & 1)
    while len(bits) % 6:
        bits.append(0)
    chars = [chr(g.n + 63)]
    for pos in range(0, len(bits), 6):
        val = 0
        for b in bits[pos : pos + 6]:
            val = (val << 1) | b
        chars.append(chr(val + 63))
    return "".join(chars)


def graph6_decode(line: str) -> Graph:
    line = line.strip()
    if not line:
        raise ValueError("empty graph6 line")
    n = ord(line[0]) - 63
    if n < 0 or n > 62:
        raise ValueError(f"unsupported graph6 header {line[0]!r}")
    bits = []
    for ch in line[1:]:
        val = ord(ch) - 63
        if not 0 <= val < 64:
            raise ValueError(f"bad graph6 character {ch!r}")
        bits.extend((val >> shift) & 1 for shift in range(5, -1, -1))
    edges = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if idx < len(bits) and bits[idx]:
                edges.append((i, j))
            idx += 1
    return Graph(n, edges)


# ---------------------------------------------------------------------------
# canonical form
#
# The canonical code of a graph is the maximum, over vertex orderings
# consistent with iterated colour refinement (after peeling isolated and
# universal vertices, which any automorphism fixes setwise and whose internal
# order never affects the packed bits), of the row-major upper-triangle
# adjacency bitstring.  Equal codes reconstruct equal adjacency, so the code
# is a complete isomorphism invariant.
# ---------------------------------------------------------------------------


def _refine(colours: list[int], nbrs: list[list[int]]) -> list[int]:
    k = len(colours)
    while True:
        sigs = [
            (colours[v], tuple(sorted(colours[u] for u in nbrs[v])))
            for v in range(k)
        ]
        order = {sig: i for i, sig in enumerate(sorted(set(sigs)))}
        new = [order[sigs[v]] for v in range(k)]
        if len(set(new)) == len(set(colours)):
            return new
        colours = new


def _search_core(nbrs: list[list[int]], masks: list[int]) -> list[int]:
    """Max-code ordering of a graph with no isolated or universal vertices."""
    k = len(nbrs)
    best_code = -1
    best_order: list[int] = []

    def leaf(colours: list[int]) -> None:
        nonlocal best_code, best_order
        order = sorted(range(k), key=lambda v: colours[v])
        pos = [0] * k
        for i, v in enumerate(order):
            pos[v] = i
        code = 0
        for v in range(k):
            pv = pos[v]
            for u in nbrs[v]:
                pu = pos[u]
                if pv < pu:
                    code |= 1 << (pv * k - pv * (pv + 1) // 2 + pu - pv - 1)
        if code > best_code:
            best_code = code
            best_order = order

    def descend(colours: list[int]) -> None:
        colours = _refine(colours, nbrs)
        target_colour = None
        cells: dict[int, list[int]] = {}
        for v in range(k):
            cells.setdefault(colours[v], []).append(v)
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target_colour = c
                break
        if target_colour is None:
            leaf(colours)
            return
        for v in cells[target_colour]:
            branched = [colours[u] * 2 + (0 if u == v else 1) for u in range(k)]
            descend(branched)

    descend([0] * k)
    return best_order


def _canonical_order(vertices: list[int], masks: list[int]) -> list[int]:
    if not vertices:
        return []
    k = len(vertices)
    vset = set(vertices)
    local_deg = {
        v: bin(masks[v] & _mask_of(vset)).count("1") for v in vertices
    }
    universal = sorted(v for v in vertices if local_deg[v] == k - 1)
    isolated = sorted(v for v in vertices if local_deg[v] == 0 and k > 1)
    if k == 1:
        return list(vertices)
    if universal or isolated:
        middle = [v for v in vertices if v not in set(universal) | set(isolated)]
        return universal + _canonical_order(middle, masks) + isolated
    index = {v: i for i, v in enumerate(vertices)}
    sub_nbrs = [
        [index[u] for u in vertices if (masks[v] >> u) & 1] for v in vertices
    ]
    sub_masks = [0] * k
    for i, row in enumerate(sub_nbrs):
        for j in row:
            sub_masks[i] |= 1 << j
    order = _search_core(sub_nbrs, sub_masks)
    return [vertices[i] for i in order]


def _mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def canonical_code(n: int, masks: list[int]) -> int:
    """Packed row-major upper-triangle bits under the canonical ordering."""
    order = _canonical_order(list(range(n)), list(masks))
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    code = 0
    for v in range(n):
        mv = masks[v]
        pv = pos[v]
        while mv:
            low = mv & -mv
            u = low.bit_length() - 1
            mv ^= low
            pu = pos[u]
            if pv < pu:
                code |= 1 << (pv * n - pv * (pv + 1) // 2 + pu - pv - 1)
    return code


def canonical_code_of_graph(g: Graph) -> int:
    return canonical_code(g.n, list(g.neighbor_masks()))


def _code_to_graph(n: int, code: int) -> Graph:
    edges = []
    idx = 0
    for i in range(n):
        for j in range(i + 1, n):
            if (code >> idx) & 1:
                edges.append((i, j))
            idx += 1
    return Graph(n, edges)


# ---------------------------------------------------------------------------
# generation by augmentation
# ---------------------------------------------------------------------------


def _augment_chunk(args: tuple[int, list[int]]) -> set[int]:
    n, parent_codes = args
    out: set[int] = set()
    for pcode in parent_codes:
        parent = _code_to_graph(n - 1, pcode)
        base = list(parent.neighbor_masks()) + [0]
        for mask in range(1 << (n - 1)):
            masks = list(base)
            masks[n - 1] = mask
            rest = mask
            while rest:
                low = rest & -rest
                masks[low.bit_length() - 1] |= 1 << (n - 1)
                rest ^= low
            out.add(canonical_code(n, masks))
    return out


def generate_catalogue(n: int, processes: int | None = None) -> list[Graph]:
    """All graphs on n vertices up to isomorphism (sorted deterministically)."""
    if n < 1:
        raise ValueError("need n >= 1")
    if n == 1:
        return [Graph(1, [])]
    parents = [canonical_code_of_graph(g) for g in generate_catalogue_cached(n - 1)]
    codes: set[int] = set()
    if processes and processes > 1 and len(parents) > 64:
        chunks = [
            (n, parents[i::processes * 4]) for i in range(processes * 4)
        ]
        with get_context("fork").Pool(processes) as pool:
            for part in pool.imap_unordered(_augment_chunk, chunks):
                codes |= part
    else:
        codes = _augment_chunk((n, parents))
    graphs = [_code_to_graph(n, code) for code in codes]
    graphs.sort(key=lambda g: (g.edge_count, graph6_encode(g)))
    return graphs


@lru_cache(maxsize=None)
def generate_catalogue_cached(n: int) -> tuple[Graph, ...]:
    return tuple(generate_catalogue(n))


# ---------------------------------------------------------------------------
# stored catalogues
# ---------------------------------------------------------------------------


def _data_text(name: str) -> str | None:
    pkg = resources.files("cyclekit").joinpath("data")
    plain = pkg.joinpath(name)
    gz = pkg.joinpath(name + ".gz")
    try:
        if plain.is_file():
            return plain.read_text()
        if gz.is_file():
            return gzip.decompress(gz.read_bytes()).decode()
    except FileNotFoundError:
        return None
    return None


@lru_cache(maxsize=None)
def all_graphs(n: int, connected: bool = False) -> tuple[Graph, ...]:
    """Catalogue of graphs on exactly n vertices, from data or regenerated."""
    if n not in GRAPH_COUNTS:
        raise ValueError(f"no catalogue for n={n}")
    text = _data_text(f"graphs_n{n}.g6")
    if text is not None:
        graphs = tuple(graph6_decode(line) for line in text.split() if line)
    else:
        graphs = tuple(generate_catalogue(n, processes=2))
    if len(graphs) != GRAPH_COUNTS[n]:
        raise RuntimeError(
            f"catalogue for n={n} has {len(graphs)} graphs, expected {GRAPH_COUNTS[n]}"
        )
    if connected:
        graphs = tuple(g for g in graphs if g.is_connected())
        if len(graphs) != CONNECTED_COUNTS[n]:
            raise RuntimeError(
                f"connected catalogue for n={n} has {len(graphs)} graphs, "
                f"expected {CONNECTED_COUNTS[n]}"
            )
    return graphs


def write_catalogue(n: int, path: str, processes: int | None = None) -> int:
    """Generate and store the n-vertex catalogue; returns the graph count."""
    graphs = generate_catalogue(n, processes=processes)
    payload = "\n".join(graph6_encode(g) for g in graphs) + "\n"
    if path.endswith(".gz"):
        with gzip.open(path, "wt") as fh:
            fh.write(payload)
    else:
        with open(path, "w") as fh:
            fh.write(payload)
    return len(graphs)
