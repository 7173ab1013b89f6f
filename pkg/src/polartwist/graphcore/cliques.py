"""Maximal clique search: Bron-Kerbosch with Tomita pivoting on int bitsets."""
from __future__ import annotations

from collections import Counter

from .graph import DenseGraph, ids_of


class NotAnEdge(ValueError):
    pass


def _bron_kerbosch(R: list[int], P: int, X: int, rows: list[int], out: list[list[int]]):
    if not P and not X:
        out.append(list(R))
        return
    best, pivot = -1, 0
    for u in ids_of(P | X):
        c = (P & rows[u]).bit_count()
        if c > best:
            best, pivot = c, u
    for v in ids_of(P & ~rows[pivot]):
        bit = 1 << v
        R.append(v)
        _bron_kerbosch(R, P & rows[v], X & rows[v], rows, out)
        R.pop()
        P &= ~bit
        X |= bit


def is_maximal_clique(G: DenseGraph, clique) -> bool:
    rows = G.rows
    common = -1
    for v in clique:
        common &= rows[v]
        for u in clique:
            if u != v and not (rows[v] >> u) & 1:
                return False
    return common == 0


def maximal_cliques_through_edge(G: DenseGraph, x: int, y: int) -> list[frozenset[int]]:
    """All maximal cliques of ``G`` containing the edge ``{x, y}``."""
    rows = G.rows
    if not (rows[x] >> y) & 1:
        raise NotAnEdge(f"{x} and {y} are not adjacent")
    out: list[list[int]] = []
    _bron_kerbosch([x, y], rows[x] & rows[y], 0, rows, out)
    cliques = [frozenset(c) for c in out]
    for c in cliques:
        if not is_maximal_clique(G, c):
            raise AssertionError(f"non-maximal clique {sorted(c)}")
    return cliques


def maximal_cliques(G: DenseGraph) -> list[frozenset[int]]:
    """Every maximal clique once, each found from its smallest vertex."""
    rows = G.rows
    out: list[list[int]] = []
    for v in range(G.n):
        higher = rows[v] >> (v + 1) << (v + 1)
        lower = rows[v] & ((1 << v) - 1)
        _bron_kerbosch([v], higher, lower, rows, out)
    return [frozenset(c) for c in out]


def clique_census(cliques) -> dict[int, int]:
    """Multiset of clique sizes as ``{size: count}``."""
    return dict(sorted(Counter(len(c) for c in cliques).items()))
