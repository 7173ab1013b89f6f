"""Strong regularity, distance regularity and neighbourhood counts.

Failures are returned as :class:`CounterexampleReport` values, never raised.
Sampled modes draw base vertices from ``numpy.random.default_rng(seed)`` and
label their results ``mode="sampled"``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import DENSE_LIMIT, DenseGraph

BLOCK = 4096


class Disconnected(ValueError):
    pass


class NotSRG(ValueError):
    pass


@dataclass(frozen=True)
class SrgParams:
    v: int
    k: int
    lam: int
    mu: int
    mode: str = "full"
    samples: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.k * (self.k - self.lam - 1) != (self.v - self.k - 1) * self.mu:
            raise ValueError(f"infeasible SRG parameters {self.as_tuple()}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.v, self.k, self.lam, self.mu)

    def complement(self) -> "SrgParams":
        v, k, lam, mu = self.as_tuple()
        return SrgParams(v, v - k - 1, v - 2 - 2 * k + mu, v - 2 * k + lam)


@dataclass(frozen=True)
class CounterexampleReport:
    """First place where a regularity claim fails."""

    check: str
    reason: str
    vertices: tuple
    observed: int
    expected: int | None = None
    mode: str = "full"

    def __bool__(self):
        return False


@dataclass(frozen=True)
class IntersectionArray:
    b: tuple[int, ...]
    c: tuple[int, ...]
    mode: str = "full"
    bases: int | None = None

    @property
    def diameter(self) -> int:
        return len(self.c)

    def as_lists(self) -> tuple[list[int], list[int]]:
        return list(self.b), list(self.c)

    def __str__(self):
        return "{" + ",".join(map(str, self.b)) + ";" + ",".join(map(str, self.c)) + "}"


def common_neighbors(G: DenseGraph, x: int, y: int) -> np.ndarray:
    if x == y:
        raise ValueError("common_neighbors needs two distinct vertices")
    return np.intersect1d(G.neighbors(x), G.neighbors(y), assume_unique=True)


def _regular_degree(G: DenseGraph, check: str, mode: str):
    deg = G.degrees
    bad = np.nonzero(deg != deg[0])[0]
    if len(bad):
        return CounterexampleReport(check, "degree not constant", (0, int(bad[0])), int(deg[bad[0]]), int(deg[0]), mode)
    return int(deg[0])


def check_srg(G: DenseGraph, sample: int | None = None, seed: int | None = None):
    """Return :class:`SrgParams` or a :class:`CounterexampleReport`.

    Full mode examines every pair (BLAS product of the adjacency matrix).
    Sampled mode (``sample`` base vertices, ``seed`` mandatory) examines every
    pair containing a sampled base vertex.
    """
    n = G.n
    if n < 3:
        raise ValueError("need at least 3 vertices")
    mode = "full" if sample is None else "sampled"
    k = _regular_degree(G, "srg", mode)
    if isinstance(k, CounterexampleReport):
        return k
    ref = {"lam": None, "mu": None}
    if mode == "full" and n <= DENSE_LIMIT:
        A = G.adjacency().astype(np.float32)
        for s in range(0, n, BLOCK):
            rows = np.arange(s, min(n, s + BLOCK))
            C = (A[rows] @ A).astype(np.int64)
            for r, x in enumerate(rows):
                hit = _base_scan(int(x), C[r], A[r], ref, all_partners=False)
                if hit:
                    return _srg_failure(G, hit, mode)
    else:
        if mode == "sampled":
            if seed is None:
                raise ValueError("sampled mode needs a seed")
            rng = np.random.default_rng(seed)
            bases = np.sort(rng.choice(n, size=min(sample, n), replace=False))
        else:
            bases = np.arange(n)
        for x in bases:
            c = common_counts(G, int(x))
            a = np.zeros(n, dtype=np.uint8)
            a[G.neighbors(int(x))] = 1
            # in sampled mode every other vertex is a partner of the base
            hit = _base_scan(int(x), c, a, ref, all_partners=(mode == "sampled"))
            if hit:
                return _srg_failure(G, hit, mode)
    lam = ref["lam"][0] if ref["lam"] else 0
    mu = ref["mu"][0] if ref["mu"] else 0
    try:
        return SrgParams(n, k, lam, mu, mode, None if sample is None else len(bases), seed)
    except ValueError:
        return CounterexampleReport("srg", "parameters violate k(k-λ-1)=(v-k-1)μ", (), lam, None, mode)


def _base_scan(x: int, c: np.ndarray, a: np.ndarray, ref: dict, all_partners: bool):
    n = len(c)
    idx = np.arange(n)
    partner = (idx != x) if all_partners else (idx > x)
    for adj, key in ((1, "lam"), (0, "mu")):
        sel = np.nonzero((a == adj) & partner)[0]
        if not len(sel):
            continue
        if ref[key] is None:
            ref[key] = (int(c[sel[0]]), (x, int(sel[0])))
        bad = sel[c[sel] != ref[key][0]]
        if len(bad):
            return x, int(bad[0]), int(c[bad[0]]), ref[key][0]
    return None


def _srg_failure(G, hit, mode):
    x, y, obs, exp = hit
    kind = "λ" if G.has_edge(x, y) else "μ"
    return CounterexampleReport("srg", f"{kind} count differs", (min(x, y), max(x, y)), obs, exp, mode)


def common_counts(G: DenseGraph, x: int) -> np.ndarray:
    """``|N(x) ∩ N(y)|`` for every vertex ``y``."""
    nb = G.neighbors(x)
    out = np.zeros(G.n, dtype=np.int64)
    for s in range(0, len(nb), 512):
        chunk = nb[s : s + 512]
        parts = [G.neighbors(int(z)) for z in chunk]
        out += np.bincount(np.concatenate(parts), minlength=G.n)
    return out


def bfs_distances(G: DenseGraph, x: int) -> np.ndarray:
    """Distances from ``x`` (``-1`` for unreachable vertices)."""
    dist = np.full(G.n, -1, dtype=np.int32)
    dist[x] = 0
    frontier = np.array([x], dtype=np.int64)
    d = 0
    ip, ix = G.indptr, G.indices
    while len(frontier):
        d += 1
        starts, ends = ip[frontier], ip[frontier + 1]
        lens = ends - starts
        pos = np.repeat(starts - np.concatenate([[0], np.cumsum(lens)[:-1]]), lens) + np.arange(lens.sum())
        nxt = np.unique(ix[pos])
        nxt = nxt[dist[nxt] < 0]
        dist[nxt] = d
        frontier = nxt.astype(np.int64)
    return dist


def _layer_counts(G: DenseGraph, dist: np.ndarray) -> np.ndarray:
    """Per vertex: neighbours at distance d-1, d, d+1 (columns 0, 1, 2)."""
    out = np.zeros((G.n, 3), dtype=np.int64)
    ip, ix = G.indptr, G.indices
    for s in range(0, G.n, BLOCK * 4):
        e = min(G.n, s + BLOCK * 4)
        nd = dist[ix[ip[s] : ip[e]]]
        own = np.repeat(dist[s:e], np.diff(ip[s : e + 1]))
        row = np.repeat(np.arange(s, e), np.diff(ip[s : e + 1])) - s
        delta = nd - own + 1
        for col in range(3):
            out[s:e, col] = np.bincount(row[delta == col], minlength=e - s)
    return out


def check_drg(G: DenseGraph, sample: int | None = None, seed: int | None = None):
    """Intersection array from BFS layers, or a counterexample.

    ``sample=None`` uses every vertex as a base; otherwise ``sample`` bases
    drawn with ``seed``.
    """
    mode = "full" if sample is None else "sampled"
    if mode == "sampled" and seed is None:
        raise ValueError("sampled mode needs a seed")
    k = _regular_degree(G, "drg", mode)
    if isinstance(k, CounterexampleReport):
        return k
    if mode == "full":
        bases = np.arange(G.n)
    else:
        rng = np.random.default_rng(seed)
        bases = np.sort(rng.choice(G.n, size=min(sample, G.n), replace=False))
    ref = None
    for x in bases:
        dist = bfs_distances(G, int(x))
        if (dist < 0).any():
            raise Disconnected(f"vertex {int(np.argmin(dist))} unreachable from {int(x)}")
        d = int(dist.max())
        cnt = _layer_counts(G, dist)
        b, c = [], []
        for i in range(d + 1):
            layer = np.nonzero(dist == i)[0]
            for col, name in ((0, "c"), (2, "b")):
                vals = cnt[layer, col]
                bad = np.nonzero(vals != vals[0])[0]
                if len(bad):
                    return CounterexampleReport(
                        "drg",
                        f"{name}_{i} varies within the layer of base {int(x)}",
                        (int(x), int(layer[0]), int(layer[bad[0]])),
                        int(vals[bad[0]]),
                        int(vals[0]),
                        mode,
                    )
            if i < d:
                b.append(int(cnt[layer[0], 2]))
            if i > 0:
                c.append(int(cnt[layer[0], 0]))
        arr = (tuple(b), tuple(c))
        if ref is None:
            ref = (arr, int(x))
        elif arr != ref[0]:
            return CounterexampleReport(
                "drg", f"intersection array at base {int(x)} differs from base {ref[1]}", (ref[1], int(x)), 0, None, mode
            )
    return IntersectionArray(ref[0][0], ref[0][1], mode, len(bases))


def distance2_degree(G: DenseGraph, x: int) -> int:
    """Number of vertices at distance exactly 2 from ``x``."""
    nb = G.neighbors(x)
    if not len(nb):
        return 0
    mark = np.zeros(G.n, dtype=bool)
    for s in range(0, len(nb), 512):
        mark[np.concatenate([G.neighbors(int(z)) for z in nb[s : s + 512]])] = True
    mark[nb] = False
    mark[x] = False
    return int(mark.sum())


def edges_within(G: DenseGraph, vertices: np.ndarray) -> int:
    mark = np.zeros(G.n, dtype=bool)
    mark[vertices] = True
    total = 0
    for z in vertices:
        total += int(mark[G.neighbors(int(z))].sum())
    return total // 2


@dataclass
class FourVertexResult:
    alpha: int
    beta: int
    mode: str = "full"
    pairs: int | None = None
    seed: int | None = None


def four_vertex_condition(G: DenseGraph, sample: int | None = None, seed: int | None = None, srg=None):
    """Sims' criterion: edges inside ``N(x) ∩ N(y)`` constant on edges and on non-edges.

    Full mode scans all pairs with dense products.  Sampled mode draws
    ``sample`` adjacent and ``sample`` nonadjacent pairs with ``seed``.
    Returns :class:`FourVertexResult` or a :class:`CounterexampleReport`.
    """
    srg = check_srg(G, sample=sample, seed=seed) if srg is None else srg
    if not isinstance(srg, SrgParams):
        raise NotSRG(str(srg))
    if sample is None:
        return _fvc_full(G)
    if seed is None:
        raise ValueError("sampled mode needs a seed")
    rng = np.random.default_rng(seed)
    ref = {}
    n = G.n
    for adj in (1, 0):
        key = "alpha" if adj else "beta"
        for _ in range(sample):
            x = int(rng.integers(n))
            if adj:
                nb = G.neighbors(x)
                y = int(nb[rng.integers(len(nb))])
            else:
                while True:
                    y = int(rng.integers(n))
                    if y != x and not G.has_edge(x, y):
                        break
            e = edges_within(G, common_neighbors(G, x, y))
            if key not in ref:
                ref[key] = (e, (x, y))
            elif e != ref[key][0]:
                return CounterexampleReport(
                    "4vc",
                    f"{'adjacent' if adj else 'nonadjacent'} pairs {ref[key][1]} and {(x, y)} differ",
                    (ref[key][1], (x, y)),
                    e,
                    ref[key][0],
                    "sampled",
                )
    return FourVertexResult(ref["alpha"][0], ref["beta"][0], "sampled", 2 * sample, seed)


def fvc_counts(G: DenseGraph, x: int, A: np.ndarray | None = None) -> np.ndarray:
    """Edges inside ``N(x) ∩ N(y)`` for every ``y`` (dense)."""
    A = G.adjacency().astype(np.float32) if A is None else A
    nb = G.neighbors(x)
    sub = A[:, nb]
    T = sub @ A[np.ix_(nb, nb)]
    return np.rint(0.5 * (T * sub).sum(axis=1)).astype(np.int64)


def fvc_neighbor_counts(G: DenseGraph, x: int) -> np.ndarray:
    """Edges inside ``N(x) ∩ N(y)`` for every neighbour ``y`` of ``x``, in the
    order of ``G.neighbors(x)``.

    These are the triangle counts of the subgraph induced on ``N(x)``, so only
    a ``k x k`` block is ever dense and large sparse graphs are fine.
    """
    nb = G.neighbors(x)
    k = len(nb)
    pos = np.full(G.n, -1, dtype=np.int64)
    pos[nb] = np.arange(k)
    H = np.zeros((k, k), dtype=np.float32)
    for i, u in enumerate(nb):
        w = pos[G.neighbors(int(u))]
        H[i, w[w >= 0]] = 1
    return np.rint(0.5 * ((H @ H) * H).sum(axis=1)).astype(np.int64)


def _fvc_full(G: DenseGraph):
    A = G.adjacency().astype(np.float32)
    ref = {}
    idx = np.arange(G.n)
    for x in range(G.n):
        e = fvc_counts(G, x, A)
        adjrow = A[x] > 0
        for adj, key in ((True, "alpha"), (False, "beta")):
            sel = np.nonzero((adjrow == adj) & (idx > x))[0]
            if not len(sel):
                continue
            if key not in ref:
                ref[key] = (int(e[sel[0]]), (x, int(sel[0])))
            bad = sel[e[sel] != ref[key][0]]
            if len(bad):
                return CounterexampleReport(
                    "4vc",
                    f"{'adjacent' if adj else 'nonadjacent'} pair edge count differs",
                    (x, int(bad[0])),
                    int(e[bad[0]]),
                    ref[key][0],
                    "full",
                )
    return FourVertexResult(ref.get("alpha", (0,))[0], ref.get("beta", (0,))[0], "full")
