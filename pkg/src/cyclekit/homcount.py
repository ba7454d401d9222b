"""Exact walk tables, even-cycle homomorphism counts, and certified inequalities.

All counts are Python integers, hence exact at any size; floating point only
appears in the advisory spectral cross-check.  Inequality certificates are
decided by integer cross-multiplication, never by root extraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .errors import GuardError, SpectralError
from .graphs import BipartitePartition, Graph

WALK_TABLE_GUARD = 5000
SPECTRAL_GUARD = 2000


@dataclass(frozen=True)
class WalkTable:
    """counts[x][y] = number of k-edge walks from x to y."""

    k: int
    counts: tuple[tuple[int, ...], ...]

    def row_sum(self, x: int) -> int:
        return sum(self.counts[x])


def walk_row(g: Graph, source: int, k: int) -> list[int]:
    """Vector of k-step walk counts from a single source (per-source DP)."""
    if k < 0:
        raise ValueError("walk length must be nonnegative")
    row = [0] * g.n
    row[source] = 1
    adj = g.adjacency
    for _ in range(k):
        nxt = [0] * g.n
        for v, cnt in enumerate(row):
            if cnt:
                for u in adj[v]:
                    nxt[u] += cnt
        row = nxt
    return row


def walk_rows(g: Graph, source: int, k: int) -> list[list[int]]:
    """All of A^0 .. A^k applied to e_source; used by the samplers."""
    rows = [[0] * g.n]
    rows[0][source] = 1
    adj = g.adjacency
    for _ in range(k):
        prev = rows[-1]
        nxt = [0] * g.n
        for v, cnt in enumerate(prev):
            if cnt:
                for u in adj[v]:
                    nxt[u] += cnt
        rows.append(nxt)
    return rows


def walk_table(g: Graph, k: int, max_n: int = WALK_TABLE_GUARD) -> WalkTable:
    """Full n-by-n table of k-step walk counts."""
    if g.n > max_n:
        raise GuardError(
            f"walk table for n={g.n} exceeds guard {max_n}; use walk_row per source"
        )
    return WalkTable(k=k, counts=tuple(tuple(walk_row(g, x, k)) for x in range(g.n)))


def hom_cycle(g: Graph, length: int) -> int:
    """Homomorphism count of the closed walk of the given even length.

    Length 0 is the one-vertex graph convention (count n); length 2 counts
    ordered edges (2|E|); length 2k counts closed 2k-step walks.
    """
    if length < 0 or length % 2:
        raise ValueError("cycle length must be even and nonnegative")
    if length == 0:
        return g.n
    if length == 2:
        return 2 * g.edge_count
    k = length // 2
    total = 0
    for x in range(g.n):
        row = walk_row(g, x, k)
        total += sum(c * c for c in row)
    return total


def hom_cycle_spectral(g: Graph, length: int, max_n: int = SPECTRAL_GUARD) -> float:
    """Advisory floating cross-check: sum of adjacency eigenvalues to the power.

    Relative accuracy target against hom_cycle is 1e-6 for well-conditioned
    sizes (dense eigendecomposition, guarded at n <= 2000).
    """
    if length <= 0 or length % 2:
        raise ValueError("spectral count needs a positive even length")
    if g.n > max_n:
        raise GuardError(f"dense eigendecomposition guarded at n <= {max_n}")
    import numpy as np

    mat = np.zeros((g.n, g.n))
    for u, v in g.edges:
        mat[u, v] = 1.0
        mat[v, u] = 1.0
    try:
        eigs = np.linalg.eigvalsh(mat)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - numpy rarely fails
        raise SpectralError(f"eigensolver failed: {exc}") from exc
    value = float(np.sum(eigs**length))
    if value != value:  # pragma: no cover
        raise SpectralError("eigensolver produced NaN")
    return value


@dataclass(frozen=True)
class Certificate:
    """Outcome of an exact inequality check."""

    name: str
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)


def check_ratio_monotonicity(g: Graph, kmax: int) -> Certificate:
    """hom(C_{2l}) * hom(C_{2l-4}) >= hom(C_{2l-2})^2 for 2 <= l <= kmax."""
    if g.edge_count == 0:
        raise ValueError("ratio monotonicity requires a non-empty graph")
    if kmax < 2:
        raise ValueError("need kmax >= 2")
    homs = [hom_cycle(g, 2 * l) for l in range(kmax + 1)]
    first_violation = None
    for l in range(2, kmax + 1):
        if homs[l] * homs[l - 2] < homs[l - 1] ** 2:
            first_violation = l
            break
    return Certificate(
        name="ratio-monotonicity",
        passed=first_violation is None,
        details={"kmax": kmax, "homs": homs, "first_violation": first_violation},
    )


def check_interpolation(g: Graph, k: int, ell: int) -> Certificate:
    """hom(C_{2k-2})^(k-l) <= hom(C_{2l}) * hom(C_{2k})^(k-l-1)."""
    if k < 2 or not 0 <= ell <= k - 1:
        raise ValueError("need k >= 2 and 0 <= ell <= k-1")
    mid = hom_cycle(g, 2 * k - 2)
    low = hom_cycle(g, 2 * ell)
    high = hom_cycle(g, 2 * k)
    lhs = mid ** (k - ell)
    rhs = low * high ** (k - ell - 1)
    return Certificate(
        name="interpolation",
        passed=lhs <= rhs,
        details={"k": k, "ell": ell, "lhs": lhs, "rhs": rhs},
    )


def check_sidorenko(g: Graph, k: int) -> Certificate:
    """hom(C_{2k}) * n^{2k} >= (2|E|)^{2k}."""
    if k < 2:
        raise ValueError("need k >= 2")
    if g.n < 1:
        raise ValueError("need at least one vertex")
    hom = hom_cycle(g, 2 * k)
    lhs = hom * g.n ** (2 * k)
    rhs = (2 * g.edge_count) ** (2 * k)
    return Certificate(
        name="sidorenko",
        passed=lhs >= rhs,
        details={"k": k, "hom": hom, "lhs": lhs, "rhs": rhs},
    )


def check_bipartite_mindeg(g: Graph, part: BipartitePartition, k: int) -> Certificate:
    """hom(C_{2k}) >= s^k t^k for a bipartite graph with side degree floors s, t."""
    if k < 1:
        raise ValueError("need k >= 1")
    part.validate(g.n)
    for u, v in g.edges:
        crosses = (u in part.left) != (v in part.left)
        if not crosses or (u not in part.left | part.right) or (
            v not in part.left | part.right
        ):
            raise ValueError(f"edge ({u}, {v}) does not cross the partition")
    s = min((g.degree(v) for v in part.left), default=0)
    t = min((g.degree(v) for v in part.right), default=0)
    hom = hom_cycle(g, 2 * k)
    rhs = s**k * t**k
    return Certificate(
        name="bipartite-mindeg",
        passed=hom >= rhs,
        details={"k": k, "s": s, "t": t, "hom": hom, "rhs": rhs},
    )
