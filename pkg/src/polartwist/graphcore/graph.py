"""Undirected simple graphs on vertices ``0..n-1``.

Adjacency is stored as sorted neighbour lists (CSR).  Dense views are built on
demand: a ``uint8`` adjacency matrix for BLAS-based all-pairs work and
Python-int bit rows for clique search and popcount scans.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

DENSE_LIMIT = 12_000


class GraphError(ValueError):
    pass


class DenseGraph:
    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray, labels=None, check: bool = True):
        self.n = int(n)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int32)
        self.labels = labels
        if len(self.indptr) != self.n + 1:
            raise GraphError("indptr has the wrong length")
        if check:
            self.validate()

    # -- construction -----------------------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges, labels=None) -> "DenseGraph":
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        e = e.reshape(-1, 2)
        if len(e) and (e[:, 0] == e[:, 1]).any():
            raise GraphError("loops are not allowed")
        both = np.concatenate([e, e[:, ::-1]])
        keys = np.unique(both[:, 0] * n + both[:, 1])
        rows, cols = keys // n, keys % n
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return cls(n, indptr, cols, labels=labels, check=False)

    @classmethod
    def from_adjacency(cls, A, labels=None) -> "DenseGraph":
        A = np.asarray(A)
        n = A.shape[0]
        if A.shape != (n, n):
            raise GraphError("adjacency matrix must be square")
        if (A != A.T).any() or np.diag(A).any():
            raise GraphError("adjacency matrix must be symmetric with zero diagonal")
        rows, cols = np.nonzero(A)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return cls(n, indptr, cols, labels=labels, check=False)

    @classmethod
    def from_neighbor_lists(cls, lists, labels=None, check: bool = True) -> "DenseGraph":
        lists = [np.sort(np.asarray(x, dtype=np.int32)) for x in lists]
        indptr = np.zeros(len(lists) + 1, dtype=np.int64)
        np.cumsum([len(x) for x in lists], out=indptr[1:])
        indices = np.concatenate(lists) if lists else np.zeros(0, np.int32)
        return cls(len(lists), indptr, indices, labels=labels, check=check)

    @classmethod
    def from_row_blocks(cls, blocks, n: int, labels=None) -> "DenseGraph":
        """Assemble from ``(rows, nbrs)`` blocks covering every vertex once.

        ``rows`` must be consecutive within a block.  ``nbrs`` is a 2-d array
        of sorted rows or a list of 1-d arrays (sorted here).  Blocks are
        flattened on arrival and released while copying, so peak memory stays
        near one copy of the adjacency.
        """
        store = []
        lens = np.zeros(n, dtype=np.int64)
        for r, nb in blocks:
            r = np.asarray(r)
            if len(r) and r[-1] - r[0] + 1 != len(r):
                raise GraphError("block rows must be consecutive")
            if isinstance(nb, list):
                lens[r] = [len(x) for x in nb]
                flat = np.concatenate([np.sort(x) for x in nb]).astype(np.int32) if nb else np.zeros(0, np.int32)
            else:
                lens[r] = nb.shape[1]
                flat = np.ascontiguousarray(nb, dtype=np.int32).ravel()
            store.append((int(r[0]) if len(r) else 0, flat))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(lens, out=indptr[1:])
        indices = np.empty(indptr[-1], dtype=np.int32)
        store.reverse()
        while store:
            start, flat = store.pop()
            indices[indptr[start] : indptr[start] + len(flat)] = flat
            del flat
        return cls(n, indptr, indices, labels, check=False)

    @classmethod
    def from_networkx(cls, g) -> "DenseGraph":
        nodes = sorted(g.nodes())
        pos = {v: i for i, v in enumerate(nodes)}
        return cls.from_edges(len(nodes), [(pos[u], pos[v]) for u, v in g.edges()])

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges().tolist())
        return g

    def validate(self):
        """Check sortedness, irreflexivity and symmetry."""
        n, ip, ix = self.n, self.indptr, self.indices
        if len(ix) != ip[-1]:
            raise GraphError("indices length does not match indptr")
        if len(ix) and (ix.min() < 0 or ix.max() >= n):
            raise GraphError("neighbour out of range")
        rows = self.row_of_entries()
        if (rows == ix).any():
            raise GraphError("graph has a loop")
        keys = rows * n + ix
        if len(keys) > 1 and (np.diff(keys) <= 0).any():
            raise GraphError("neighbour lists must be sorted and duplicate-free")
        rev = np.sort(ix.astype(np.int64) * n + rows)
        if not np.array_equal(rev, keys):
            raise GraphError("adjacency is not symmetric")

    # -- basic queries ----------------------------------------------------
    def row_of_entries(self) -> np.ndarray:
        return np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def num_edges(self) -> int:
        return int(self.indptr[-1] // 2)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        j = np.searchsorted(row, v)
        return bool(j < len(row) and row[j] == v)

    def edges(self) -> np.ndarray:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        rows = self.row_of_entries()
        keep = rows < self.indices
        return np.stack([rows[keep], self.indices[keep].astype(np.int64)], axis=1)

    def adjacency(self) -> np.ndarray:
        """Dense ``uint8`` adjacency matrix."""
        if self.n > DENSE_LIMIT:
            raise GraphError(f"dense matrix for n={self.n} exceeds the limit {DENSE_LIMIT}")
        A = np.zeros((self.n, self.n), dtype=np.uint8)
        A[self.row_of_entries(), self.indices] = 1
        return A

    @cached_property
    def rows(self) -> list[int]:
        """Adjacency rows as Python-int bitsets (bit ``j`` of row ``i``)."""
        nbytes = (self.n + 7) // 8
        out = []
        for v in range(self.n):
            flags = np.zeros(nbytes * 8, dtype=bool)
            flags[self.neighbors(v)] = True
            out.append(int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little"))
        return out

    def complement(self) -> "DenseGraph":
        A = 1 - self.adjacency()
        np.fill_diagonal(A, 0)
        return DenseGraph.from_adjacency(A)

    def induced(self, vertices) -> "DenseGraph":
        vs = np.asarray(vertices, dtype=np.int64)
        A = self.adjacency()[np.ix_(vs, vs)]
        return DenseGraph.from_adjacency(A)

    def relabel(self, perm) -> "DenseGraph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        perm = np.asarray(perm, dtype=np.int64)
        e = self.edges()
        return DenseGraph.from_edges(self.n, perm[e])

    def __eq__(self, other):
        return (
            isinstance(other, DenseGraph)
            and self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __repr__(self):
        return f"DenseGraph(n={self.n}, edges={self.num_edges})"


def bits_of(ids, n: int) -> int:
    flags = np.zeros(((n + 7) // 8) * 8, dtype=bool)
    flags[np.asarray(ids, dtype=np.int64)] = True
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


def ids_of(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# small named graphs used throughout the tests and demos


def complete_graph(n: int) -> DenseGraph:
    A = np.ones((n, n), dtype=np.uint8)
    np.fill_diagonal(A, 0)
    return DenseGraph.from_adjacency(A)


def cycle_graph(n: int) -> DenseGraph:
    return DenseGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> DenseGraph:
    return DenseGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def petersen_graph() -> DenseGraph:
    """Kneser graph K(5, 2): 2-subsets of a 5-set, adjacent when disjoint."""
    import itertools

    verts = list(itertools.combinations(range(5), 2))
    edges = [(i, j) for i, a in enumerate(verts) for j, b in enumerate(verts) if i < j and not set(a) & set(b)]
    return DenseGraph.from_edges(10, edges)


def rook_graph(m: int) -> DenseGraph:
    """m x m rook's graph: cells adjacent when they share a row or column."""
    cells = [(i, j) for i in range(m) for j in range(m)]
    edges = [
        (a, b)
        for a, (i, j) in enumerate(cells)
        for b, (k, l) in enumerate(cells)
        if a < b and (i == k or j == l)
    ]
    return DenseGraph.from_edges(m * m, edges)


def star_graph(leaves: int) -> DenseGraph:
    return DenseGraph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])
