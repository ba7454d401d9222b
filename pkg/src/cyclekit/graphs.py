"""Graphs, edge colourings and the generators shared by every other module.

Vertices are dense 0-based integers.  Graphs and colourings are immutable
after construction, so every read operation is safe to call concurrently.
Edges are stored once, undirected, keyed by their canonical (min, max) form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import GraphFormatError

Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    """Canonical (min, max) form of an undirected edge."""
    return (u, v) if u < v else (v, u)


class Graph:
    """Undirected simple graph with per-vertex sorted adjacency lists."""

    __slots__ = ("n", "adjacency", "edges", "_masks")

    def __init__(self, n: int, edges: Iterable[Edge]):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        canonical: list[Edge] = []
        seen: set[Edge] = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"vertex index out of range in edge ({u}, {v})")
            e = edge_key(u, v)
            if e in seen:
                raise ValueError(f"duplicate edge ({e[0]}, {e[1]})")
            seen.add(e)
            canonical.append(e)
        canonical.sort()
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in canonical:
            adj[u].append(v)
            adj[v].append(u)
        self.n = n
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(a)) for a in adj
        )
        self.edges: tuple[Edge, ...] = tuple(canonical)
        self._masks: tuple[int, ...] | None = None

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def min_degree(self) -> int:
        return min((len(a) for a in self.adjacency), default=0)

    def average_degree(self) -> Fraction:
        if self.n == 0:
            return Fraction(0)
        return Fraction(2 * len(self.edges), self.n)

    def neighbor_masks(self) -> tuple[int, ...]:
        """Adjacency as bitmasks, built lazily on first use."""
        if self._masks is None:
            masks = [0] * self.n
            for u, v in self.edges:
                masks[u] |= 1 << v
                masks[v] |= 1 << u
            self._masks = tuple(masks)
        return self._masks

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.neighbor_masks()[u] >> v & 1)

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n

    def bipartition(self) -> tuple[set[int], set[int]] | None:
        """2-colouring by BFS per component, or None if an odd cycle exists."""
        colour = [-1] * self.n
        for start in range(self.n):
            if colour[start] >= 0:
                continue
            colour[start] = 0
            queue = [start]
            while queue:
                x = queue.pop()
                for y in self.adjacency[x]:
                    if colour[y] < 0:
                        colour[y] = 1 - colour[x]
                        queue.append(y)
                    elif colour[y] == colour[x]:
                        return None
        return {v for v in range(self.n) if colour[v] == 0}, {
            v for v in range(self.n) if colour[v] == 1
        }

    def induced_subgraph(self, vertices: Iterable[int]) -> "Subgraph":
        vs = sorted(set(vertices))
        index = {v: i for i, v in enumerate(vs)}
        edges = [
            (index[u], index[v]) for u, v in self.edges if u in index and v in index
        ]
        return Subgraph(graph=Graph(len(vs), edges), parent_vertices=tuple(vs))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Graph(n={self.n}, m={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.n, self.edges))


@dataclass(frozen=True)
class Subgraph:
    """A re-indexed subgraph plus the map back to its parent's vertex ids.

    ``parent_vertices[i]`` is the parent index of local vertex ``i``.  When the
    subgraph is bipartite by construction, ``left to right`` hold the two sides
    in local indices.
    """

    graph: Graph
    parent_vertices: tuple[int, ...]
    left: frozenset[int] | None = None
    right: frozenset[int] | None = None

    def to_parent(self, local: int) -> int:
        return self.parent_vertices[local]

    def map_vertices(self, seq: Iterable[int]) -> tuple[int, ...]:
        return tuple(self.parent_vertices[v] for v in seq)


@dataclass(frozen=True)
class BipartitePartition:
    """Two disjoint vertex sets of a host graph."""

    left: frozenset[int]
    right: frozenset[int]

    @staticmethod
    def of(left: Iterable[int], right: Iterable[int]) -> "BipartitePartition":
        return BipartitePartition(frozenset(left), frozenset(right))

    def validate(self, n: int) -> None:
        if self.left & self.right:
            raise ValueError("partition sides overlap")
        for v in self.left | self.right:
            if not (0 <= v < n):
                raise ValueError(f"partition vertex {v} out of range")


class EdgeColouring:
    """Colour assignment defined on exactly the edge set of its graph."""

    __slots__ = ("graph", "colour_of", "_classes", "_matrix")

    def __init__(self, graph: Graph, colour_of: Mapping[Edge, int]):
        mapping: dict[Edge, int] = {}
        for (u, v), c in colour_of.items():
            if c < 0:
                raise ValueError(f"negative colour {c} on edge ({u}, {v})")
            mapping[edge_key(u, v)] = c
        edge_set = set(graph.edges)
        missing = edge_set - mapping.keys()
        if missing:
            raise ValueError(f"colouring does not cover edge {sorted(missing)[0]}")
        extra = mapping.keys() - edge_set
        if extra:
            raise ValueError(f"colouring mentions non-edge {sorted(extra)[0]}")
        self.graph = graph
        self.colour_of: dict[Edge, int] = mapping
        self._classes: dict[int, tuple[Edge, ...]] | None = None
        self._matrix: list[list[int]] | None = None

    def colour(self, u: int, v: int) -> int:
        return self.colour_of[edge_key(u, v)]

    @property
    def palette_size(self) -> int:
        return len(set(self.colour_of.values()))

    def classes(self) -> dict[int, tuple[Edge, ...]]:
        if self._classes is None:
            buckets: dict[int, list[Edge]] = {}
            for e in sorted(self.colour_of):
                buckets.setdefault(self.colour_of[e], []).append(e)
            self._classes = {c: tuple(es) for c, es in sorted(buckets.items())}
        return self._classes

    def colour_matrix(self) -> list[list[int]]:
        """Dense colour lookup with -1 on non-edges; for counting inner loops."""
        if self._matrix is None:
            n = self.graph.n
            mat = [[-1] * n for _ in range(n)]
            for (u, v), c in self.colour_of.items():
                mat[u][v] = c
                mat[v][u] = c
            self._matrix = mat
        return self._matrix


@dataclass(frozen=True)
class ProperViolation:
    vertex: int
    colour: int
    first: Edge
    second: Edge


def validate_proper(g: Graph, c: EdgeColouring) -> list[ProperViolation]:
    """All vertices whose incident edges repeat a colour; empty iff proper."""
    if c.graph is not g and c.graph.edges != g.edges:
        raise ValueError("colouring is not defined on this graph's edge set")
    violations = []
    for v in range(g.n):
        seen: dict[int, Edge] = {}
        for u in g.adjacency[v]:
            e = edge_key(u, v)
            col = c.colour_of[e]
            if col in seen:
                violations.append(ProperViolation(v, col, seen[col], e))
            else:
                seen[col] = e
    return violations


# ---------------------------------------------------------------------------
# document formats
#
# Plain graph:     first non-comment line is n, then one "u v" line per edge.
# Coloured graph:  same, with "u v c" lines.  '#' starts a comment, blank
# lines are skipped, LF and CRLF both accepted.
# ---------------------------------------------------------------------------


def _parse_document(text: str, coloured: bool | None):
    n: int | None = None
    edges: list[Edge] = []
    colours: dict[Edge, int] = {}
    seen: set[Edge] = set()
    width: int | None = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 1:
                raise GraphFormatError("expected a single vertex count", line_no)
            try:
                n = int(parts[0])
            except ValueError:
                raise GraphFormatError(f"invalid vertex count {parts[0]!r}", line_no)
            if n < 0:
                raise GraphFormatError("vertex count must be nonnegative", line_no)
            continue
        if coloured is None and width is None:
            width = len(parts)
        expected = 3 if (coloured or (coloured is None and width == 3)) else 2
        if len(parts) != expected:
            raise GraphFormatError(
                f"malformed line: expected {expected} fields, got {len(parts)}",
                line_no,
            )
        try:
            fields = [int(p) for p in parts]
        except ValueError:
            raise GraphFormatError(f"malformed line {line!r}", line_no)
        u, v = fields[0], fields[1]
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", line_no)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex index out of range in ({u}, {v})", line_no)
        e = edge_key(u, v)
        if e in seen:
            raise GraphFormatError(f"duplicate edge ({e[0]}, {e[1]})", line_no)
        seen.add(e)
        edges.append(e)
        if expected == 3:
            if fields[2] < 0:
                raise GraphFormatError(f"negative colour {fields[2]}", line_no)
            colours[e] = fields[2]
    if n is None:
        raise GraphFormatError("empty document: missing vertex count")
    g = Graph(n, edges)
    if colours or (coloured or (coloured is None and width == 3)):
        return g, EdgeColouring(g, colours) if (width == 3 or coloured) else None
    return g, None


def load_graph(text: str) -> Graph:
    """Parse a plain edge-list document."""
    g, _ = _parse_document(text, coloured=False)
    return g


def load_coloured_graph(text: str) -> tuple[Graph, EdgeColouring]:
    """Parse a coloured edge-list document ("u v c" lines)."""
    g, c = _parse_document(text, coloured=True)
    if c is None:  # graph with no edges: empty colouring is valid
        c = EdgeColouring(g, {})
    return g, c


def load_document(text: str) -> tuple[Graph, EdgeColouring | None]:
    """Parse either format, sniffing by the width of the first edge line."""
    return _parse_document(text, coloured=None)


def serialize_graph(g: Graph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def serialize_coloured_graph(g: Graph, c: EdgeColouring) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v} {c.colour_of[(u, v)]}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def empty_graph(n: int) -> Graph:
    return Graph(n, [])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def random_graph(n: int, p: float, seed: int) -> Graph:
    """G(n, p): each pair independently an edge, deterministic given seed."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return Graph(n, edges)


def greedy_proper_colouring(g: Graph, seed: int = 0) -> EdgeColouring:
    """Proper colouring with at most 2*max_degree - 1 colours (greedy bound)."""
    order = list(g.edges)
    random.Random(seed).shuffle(order)
    used: list[set[int]] = [set() for _ in range(g.n)]
    colours: dict[Edge, int] = {}
    for u, v in order:
        c = 0
        busy = used[u] | used[v]
        while c in busy:
            c += 1
        colours[(u, v)] = c
        used[u].add(c)
        used[v].add(c)
    return EdgeColouring(g, colours)


def round_robin_colouring(n: int) -> EdgeColouring:
    """1-factorization of K_n (n even) by the circle method; n-1 colours.

    Colour class r is a perfect matching: hub n-1 meets r, and i+j = 2r
    (mod n-1) pairs the rest.
    """
    if n < 2 or n % 2:
        raise ValueError("one-factorization needs an even number of vertices")
    g = complete_graph(n)
    colours: dict[Edge, int] = {}
    mod = n - 1
    for r in range(mod):
        colours[edge_key(r, n - 1)] = r
        for i in range(1, n // 2):
            a = (r + i) % mod
            b = (r - i) % mod
            colours[edge_key(a, b)] = r
    return EdgeColouring(g, colours)


def bipartite_subgraph(g: Graph, part: BipartitePartition) -> Subgraph:
    """Subgraph keeping exactly the edges with one endpoint in each side."""
    part.validate(g.n)
    vs = sorted(part.left | part.right)
    index = {v: i for i, v in enumerate(vs)}
    edges = []
    for u, v in g.edges:
        if (u in part.left and v in part.right) or (
            u in part.right and v in part.left
        ):
            edges.append((index[u], index[v]))
    return Subgraph(
        graph=Graph(len(vs), edges),
        parent_vertices=tuple(vs),
        left=frozenset(index[v] for v in part.left),
        right=frozenset(index[v] for v in part.right),
    )
