"""D5,5(q) and its twist on lines through a point.

``Γ`` has the Greeks of O+(10, q) as vertices, adjacent when they meet in a
plane.  For the fixed singular point ``P = <e0>``, ``Γ'`` replaces the Greeks
through ``P`` by the totally singular lines through ``P``.  Lines through ``P``
are numbered by their image in the residue ``P^perp / P``, which for this ``P``
is simply coordinates 2..9 (the residue is O+(8, q) in the standard form).

Vertex numbering of ``Γ'``: lines first (``0 .. nc-1``, in residue point
order), then the Greeks off ``P`` (``nc + i`` for the ``i``-th such Greek).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .graphcore import (
    DenseGraph,
    clique_census,
    is_maximal_clique,
    maximal_cliques,
)
from .linalg import PointIndex, Subspace, contains, enumerate_subspaces, gaussian, intersect, span, sum_space
from .quadspace import (
    MaximalFamilies,
    QuadraticSpace,
    cached_maximals,
    family_size,
    meet_graph_rows,
    SizeBudgetExceeded,
    point_incidence,
)

CENSUS_LIMIT = 5000


class ClassificationMismatch(AssertionError):
    def __init__(self, tally: "FactOneTally", message: str):
        super().__init__(message)
        self.tally = tally


class WitnessUnavailable(LookupError):
    pass


def srg_parameters(q: int) -> tuple[int, int, int, int]:
    v = (q + 1) * (q**2 + 1) * (q**3 + 1) * (q**4 + 1)
    k = q * gaussian(5, 3, q)
    lam = q - 1 + q**2 * (q + 1) * (q**2 + q + 1)
    mu = (q**2 + 1) * (q**2 + q + 1)
    return v, k, lam, mu


def _npoints(q: int, d: int) -> int:
    return (q**d - 1) // (q - 1)


@dataclass
class D5Context:
    q: int
    space: QuadraticSpace
    fams: MaximalFamilies
    through_p: np.ndarray  # bool per Greek
    C: np.ndarray  # Greek ids through P
    D: np.ndarray  # Greek ids off P
    res_space: QuadraticSpace
    res_vectors: np.ndarray  # (nc, 8) residue singular points = lines through P
    d_res: np.ndarray  # (|D|, nc) bool: line meets the Greek in a point
    c_res: np.ndarray  # (|C|, nc) bool: line lies in the Greek
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def P(self) -> Subspace:
        return self.space.point(np.eye(self.space.dim, dtype=np.uint8)[0])

    @property
    def nc(self) -> int:
        return len(self.res_vectors)

    @property
    def n_vertices(self) -> int:
        return self.nc + len(self.D)

    def line(self, i: int) -> Subspace:
        """The totally singular line through ``P`` numbered ``i``."""
        v = np.zeros((2, self.space.dim), dtype=np.uint8)
        v[0, 0] = 1
        v[1, 2:] = self.res_vectors[i]
        return span(self.space.field, v, self.space.dim)

    def vertex(self, v: int) -> tuple[str, Subspace]:
        if v < self.nc:
            return "line", self.line(v)
        return "greek", self.fams.greek(int(self.D[v - self.nc]))

    def d_vertex(self, greek_id: int) -> int:
        j = np.searchsorted(self.D, greek_id)
        if j >= len(self.D) or self.D[j] != greek_id:
            raise KeyError(f"Greek {greek_id} contains P")
        return self.nc + int(j)

    # -- point-set view (for small q) -------------------------------------
    @cached_property
    def sing_vectors(self) -> np.ndarray:
        return self.space.points.vectors[self.space.singular_point_ids]

    @cached_property
    def _sing_ordinal(self) -> np.ndarray:
        table = np.full(self.space.points.count, -1, dtype=np.int64)
        table[self.space.singular_point_ids] = np.arange(len(self.space.singular_point_ids))
        return table

    @cached_property
    def ginc(self) -> np.ndarray:
        """``(|Greeks|, #singular points)`` incidence as uint8."""
        return point_incidence(self.space, self.fams.greeks, self.sing_vectors).astype(np.uint8)

    @cached_property
    def linc(self) -> np.ndarray:
        """``(nc, #singular points)`` incidence of the lines through ``P``."""
        out = np.zeros((self.nc, len(self.sing_vectors)), dtype=np.uint8)
        for i in range(self.nc):
            out[i] = self.mask(self.line(i))
        return out

    @cached_property
    def p_mask(self) -> np.ndarray:
        return self.mask(self.P)

    def mask(self, U: Subspace) -> np.ndarray:
        """Singular points of ``U`` as a 0/1 vector."""
        out = np.zeros(len(self.sing_vectors), dtype=np.uint8)
        if U.dim:
            ids = self.space.points.index(U.vectors())
            ids = self._sing_ordinal[ids[ids >= 0]]
            out[ids[ids >= 0]] = 1
        return out

    def greek_meets(self, m: np.ndarray) -> np.ndarray:
        """Number of points each Greek shares with the point set ``m``."""
        return self.ginc @ m.astype(np.int64)

    def dim_of(self, m: np.ndarray) -> int:
        s = int(m.sum())
        d = 0
        while _npoints(self.q, d) < s:
            d += 1
        if _npoints(self.q, d) != s:
            raise ValueError(f"{s} points do not form a subspace")
        return d

    def greeks_to_vertices(self, gids) -> np.ndarray:
        gids = np.asarray(gids)
        if self.through_p[gids].any():
            raise ValueError("Greek through P is not a vertex")
        return self.nc + np.searchsorted(self.D, gids)


def _residue_point_ids(ctx_space: QuadraticSpace, res_index: PointIndex, ordinal: np.ndarray, greeks: np.ndarray, through: bool):
    """Residue points (as ordinals) of ``x ∩ P^perp`` for each Greek ``x``."""
    F = ctx_space.field
    m, n, N = greeks.shape
    if through:
        # RREF puts e0 first; the remaining rows already lie in P^perp
        rows = greeks[:, 1:, :]
    else:
        c = greeks[:, :, 1]
        k = (c != 0).argmax(axis=1)
        ck = c[np.arange(m), k]
        f = F.mul[c, F.inv[ck][:, None]]
        mk = greeks[np.arange(m), k]
        rows = F.sub[greeks, F.mul[f[:, :, None], mk[:, None, :]]]
        keep = np.ones((m, n), dtype=bool)
        keep[np.arange(m), k] = False
        rows = rows[keep].reshape(m, n - 1, N)
    combos = PointIndex(F, n - 1).vectors
    out = np.zeros((m, len(combos)), dtype=np.int64)
    for s in range(0, m, 4096):
        vecs = F.matmul(combos[None], rows[s : s + 4096])
        idx = res_index.index(vecs[:, :, 2:])
        if (idx < 0).any():
            raise AssertionError("a point of x ∩ P^perp projected to zero")
        out[s : s + 4096] = ordinal[idx]
    if (out < 0).any():
        raise AssertionError("projection left the residue quadric")
    return out


def d5_context(q: int, cache_dir=None, families: MaximalFamilies | None = None) -> D5Context:
    space = QuadraticSpace(q, 5)
    fams = families if families is not None else cached_maximals(space, cache_dir)
    e0 = np.zeros(space.dim, dtype=np.uint8)
    e0[0] = 1
    through = (fams.greeks[:, 0, :] == e0).all(axis=1)
    C, D = np.nonzero(through)[0], np.nonzero(~through)[0]
    res = QuadraticSpace(q, 4)
    rid = res.singular_point_ids
    ordinal = np.full(res.points.count, -1, dtype=np.int64)
    ordinal[rid] = np.arange(len(rid))
    res_vectors = res.points.vectors[rid]
    nc = len(rid)

    def incidence(ids, thr):
        pts = _residue_point_ids(space, res.points, ordinal, fams.greeks[ids], thr)
        M = np.zeros((len(ids), nc), dtype=bool)
        M[np.arange(len(ids))[:, None], pts] = True
        return M

    ctx = D5Context(q, space, fams, through, C, D, res, res_vectors, incidence(D, False), incidence(C, True))
    if len(C) != nc or len(C) + len(D) != family_size(5, q):
        raise AssertionError("vertex counts of Γ and Γ' differ")
    return ctx


# ----------------------------------------------------------------------------
# graphs


def build_gamma(ctx: D5Context) -> DenseGraph:
    """Greeks, adjacent when they meet in a plane."""
    return DenseGraph.from_row_blocks(meet_graph_rows(ctx.fams), len(ctx.fams.greeks))


def residue_collinearity(ctx: D5Context) -> np.ndarray:
    """``(nc, nc)`` bool: lines through P spanning a totally singular plane."""
    R = ctx.res_vectors
    G = ctx.res_space.B(R[:, None, :], R[None, :, :]) == 0
    np.fill_diagonal(G, False)
    return G


def build_gamma_prime(ctx: D5Context) -> DenseGraph:
    """Lines through ``P`` and Greeks off ``P`` with the three twisted rules."""
    nc = ctx.nc
    n = ctx.n_vertices
    pos = np.full(len(ctx.fams.greeks), -1, dtype=np.int64)
    pos[ctx.D] = nc + np.arange(len(ctx.D))
    coll = residue_collinearity(ctx)
    dT = np.ascontiguousarray(ctx.d_res.T)

    def line_rows():
        r = np.arange(nc)
        lists = [np.concatenate([np.nonzero(coll[i])[0], nc + np.nonzero(dT[i])[0]]) for i in r]
        yield r, lists

    def greek_rows():
        for r, nb in meet_graph_rows(ctx.fams, ctx.D):
            lines = ctx.d_res[np.searchsorted(ctx.D, r)]
            mapped = pos[nb]
            lists = []
            for i in range(len(r)):
                m = mapped[i]
                lists.append(np.concatenate([np.nonzero(lines[i])[0], m[m >= 0]]))
            yield nc + np.searchsorted(ctx.D, r), lists

    def blocks():
        yield from line_rows()
        yield from greek_rows()

    return DenseGraph.from_row_blocks(blocks(), n)


def degree_decomposition(ctx: D5Context, Gp: DenseGraph) -> dict:
    """Neighbours of one line vertex and one Greek vertex, split by side."""
    nc = ctx.nc
    line_nb = Gp.neighbors(0)
    greek_nb = Gp.neighbors(nc)
    q = ctx.q
    return {
        "line": (int((line_nb < nc).sum()), int((line_nb >= nc).sum())),
        "line_expected": (q * (q**2 + 1) * (q**2 + q + 1), q * q**3 * (q + 1) * (q**2 + 1)),
        "greek": (int((greek_nb < nc).sum()), int((greek_nb >= nc).sum())),
        "greek_expected": (_npoints(q, 4), q * gaussian(5, 3, q) - _npoints(q, 4)),
    }


# ----------------------------------------------------------------------------
# common neighbourhoods


@dataclass
class FactOneTally:
    case: int
    variant: str
    subcases: dict[str, np.ndarray]
    oracle: np.ndarray
    overlaps: dict[str, int] = field(default_factory=dict)

    @property
    def counts(self) -> dict[str, int]:
        return {k: len(v) for k, v in self.subcases.items()}

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def matches(self) -> bool:
        if not self.subcases:
            return len(self.oracle) == 0
        u = np.concatenate(list(self.subcases.values()))
        return len(np.unique(u)) == len(u) and np.array_equal(np.sort(u), self.oracle)


def proof_counts(q: int) -> dict[tuple[int, str], dict[str, int]]:
    """Sub-case sizes from the SRG argument, evaluated at ``q``."""
    return {
        (1, "line"): {"1a": q + 1, "1b": q - 1, "1c": (q**2 + q) * q**2 * (q + 1) + (q**2 - 1) * (q + 1)},
        (1, "plane"): {
            "1a": q**3 + q**2 + q + 1,
            "1b": q - 2,
            "1c": (q**2 + q + 1) * ((q**2 + 1) * (q + 1) - 2 * q - 1),
        },
        (2, ""): {"2a": q**3 + q**2 + q, "2b": q**4 - 1, "2c": q**2 * (q**2 + q + 1) * q},
        (3, ""): {"3a": q - 1 + q**2 * (q + 1) ** 2, "3b": q**4 * (q + 1)},
        (4, "point"): {"4a": q + 1, "4b": (q**2 + q + 1) * (q**2 + 1) - (q + 1)},
        (5, ""): {"5a": q**2 + q + 1, "5b": q * (q**3 + q**2 + q)},
    }


def pair_case(ctx: D5Context, Gp: DenseGraph, x: int, y: int) -> int:
    if x == y:
        raise ValueError("distinct vertices required")
    nc = ctx.nc
    if x >= nc and y < nc:
        x, y = y, x
    adj = Gp.has_edge(x, y)
    lx, ly = x < nc, y < nc
    if not lx and not ly:
        return 1 if adj else 4
    if lx and not ly:
        return 2 if adj else 5
    return 3 if adj else 6


def classify_common_neighborhood(ctx: D5Context, Gp: DenseGraph, x: int, y: int, strict: bool = True) -> FactOneTally:
    """Compute every sub-case set geometrically and compare with ``Γ'(x) ∩ Γ'(y)``."""
    nc = ctx.nc
    if x >= nc and y < nc:
        x, y = y, x
    case = pair_case(ctx, Gp, x, y)
    oracle = np.intersect1d(Gp.neighbors(x), Gp.neighbors(y))
    q = ctx.q
    off = ~ctx.through_p
    coll = ctx._cache.get("coll")
    if coll is None:
        coll = ctx._cache["coll"] = residue_collinearity(ctx)

    def gsel(cond, exclude=()):
        cond = cond & off
        gids = np.nonzero(cond)[0]
        v = ctx.greeks_to_vertices(gids)
        return np.setdiff1d(v, np.asarray(exclude, dtype=np.int64))

    def lines(cond, exclude=()):
        return np.setdiff1d(np.nonzero(cond)[0], np.asarray(exclude, dtype=np.int64))

    sub: dict[str, np.ndarray] = {}
    overlaps: dict[str, int] = {}
    variant = ""
    if case in (1, 4):
        gx, gy = (int(ctx.D[v - nc]) for v in (x, y))
        rx, ry = ctx.d_res[x - nc], ctx.d_res[y - nc]
        mx, my = ctx.ginc[gx], ctx.ginc[gy]
        xy = mx & my
        pperp = _pperp_mask(ctx)
        variant_dim = ctx.dim_of(xy & pperp)
        variant = {0: "empty", 1: "point", 2: "line", 3: "plane"}[variant_dim]
        sub[f"{case}a"] = lines(rx & ry)
        if case == 1:
            meet = ctx.greek_meets(xy)
            sub["1b"] = gsel(meet == _npoints(q, 3), (x, y))
            sub["1c"] = gsel(meet == _npoints(q, 2), (x, y))
        else:
            p3 = _npoints(q, 3)
            sub["4b"] = gsel((ctx.greek_meets(mx) == p3) & (ctx.greek_meets(my) == p3))
    elif case in (2, 5):
        gy = int(ctx.D[y - nc])
        ry = ctx.d_res[y - nc]
        my = ctx.ginc[gy]
        lx = ctx.linc[x]
        if case == 2:
            sub["2a"] = lines(ry.copy(), (x,))
            M = (ctx.linc[ry].max(axis=0) | ctx.p_mask).astype(np.uint8)
            b = gsel(ctx.greek_meets(M) == _npoints(q, 4), (y,))
            R = lx & my
            c_literal = gsel((ctx.greek_meets(my) == _npoints(q, 3)) & (ctx.ginc @ R.astype(np.int64) == 1), (y,))
            overlaps["2b∩2c"] = len(np.intersect1d(b, c_literal))
            sub["2b"] = b
            sub["2c"] = np.setdiff1d(c_literal, b)
        else:
            U = intersect(ctx.space.perp(ctx.line(x)), ctx.fams.greek(gy))
            mu = ctx.mask(U)
            hit = (ctx.linc.astype(np.int64) @ (mu & ~ctx.p_mask).astype(np.int64)) > 0
            sub["5a"] = lines(hit)
            sub["5b"] = gsel((ctx.greek_meets(lx) == 1) & (ctx.greek_meets(my) == _npoints(q, 3)))
            inside = gsel((ctx.greek_meets(lx) == 1) & (ctx.greek_meets(mu & my) == _npoints(q, 3)))
            overlaps["5b within x^perp∩y"] = len(inside)
    else:
        both = coll[x] & coll[y]
        if case == 3:
            sub["3a"] = lines(both, (x, y))
            pi = sum_space(ctx.line(x), ctx.line(y))
            sub["3b"] = gsel(ctx.greek_meets(ctx.mask(pi)) == _npoints(q, 2))
        else:
            sub["6"] = lines(both, (x, y))
    tally = FactOneTally(case, variant, sub, oracle, overlaps)
    if strict and not tally.matches:
        raise ClassificationMismatch(tally, f"case {case}{variant and '/' + variant}: {tally.counts} vs |oracle| {len(oracle)}")
    return tally


def _pperp_mask(ctx: D5Context) -> np.ndarray:
    m = ctx._cache.get("pperp")
    if m is None:
        # B(e0, v) = v1
        m = ctx._cache["pperp"] = (ctx.sing_vectors[:, 1] == 0).astype(np.uint8)
    return m


def sample_case_pairs(ctx: D5Context, Gp: DenseGraph, case: int, count: int, seed: int) -> list[tuple[int, int]]:
    """``count`` distinct random pairs of the given Fact-1 case."""
    rng = np.random.default_rng(seed)
    nc, n = ctx.nc, Gp.n
    want_adj = case in (1, 2, 3)
    kind = {1: (False, False), 2: (True, False), 3: (True, True), 4: (False, False), 5: (True, False), 6: (True, True)}[case]
    out: set[tuple[int, int]] = set()
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 200 * count:
            raise RuntimeError(f"could not draw {count} pairs for case {case}")
        x = int(rng.integers(nc)) if kind[0] else int(rng.integers(nc, n))
        if want_adj:
            nb = Gp.neighbors(x)
            nb = nb[nb < nc] if kind[1] else nb[nb >= nc]
            if not len(nb):
                continue
            y = int(nb[rng.integers(len(nb))])
        else:
            y = int(rng.integers(nc)) if kind[1] else int(rng.integers(nc, n))
            if y == x or Gp.has_edge(x, y):
                continue
        out.add((min(x, y), max(x, y)))
    return sorted(out)


# ----------------------------------------------------------------------------
# residue lemma


@dataclass
class ResidueReport:
    mode: str
    dd_pairs: int
    dc_pairs: int
    dd_dims: dict[int, int]
    dc_dims: dict[int, int]
    violations: list = field(default_factory=list)
    seed: int | None = None

    @property
    def ok(self) -> bool:
        return not self.violations


def residue_lemma_check(ctx: D5Context, sample: int | None = None, seed: int | None = None) -> ResidueReport:
    """Meets of the residue solids ``(P^perp ∩ x)/P``: dims in {4,2,0} for
    x, y off P and in {3,1} against ``x'/P`` for x' through P."""
    q = ctx.q
    dim_of = {_npoints(q, d): d for d in range(6)}
    Dm = ctx.d_res.astype(np.float32)
    Cm = ctx.c_res.astype(np.float32)
    viol = []
    dd: dict[int, int] = {}
    dc: dict[int, int] = {}

    def tally(counts, allowed, store, kind, pairs):
        vals, freq = np.unique(counts, return_counts=True)
        for v, f in zip(vals.tolist(), freq.tolist()):
            d = dim_of.get(int(v), -1)
            store[d] = store.get(d, 0) + int(f)
            if d not in allowed:
                i = int(np.nonzero(counts == v)[0][0])
                viol.append((kind, pairs[i], d))

    if sample is None:
        nd = len(ctx.D)
        for s in range(0, nd, 2048):
            block = np.rint(Dm[s : s + 2048] @ Dm.T).astype(np.int64)
            r, c = np.nonzero(np.ones_like(block, dtype=bool))
            tally(block.ravel(), {4, 2, 0}, dd, "DxD", list(zip(r + s, c)))
            blockc = np.rint(Dm[s : s + 2048] @ Cm.T).astype(np.int64)
            r2, c2 = np.nonzero(np.ones_like(blockc, dtype=bool))
            tally(blockc.ravel(), {3, 1}, dc, "DxC", list(zip(r2 + s, c2)))
        return ResidueReport("full", nd * nd, nd * len(ctx.C), dd, dc, viol)
    if seed is None:
        raise ValueError("sampled mode needs a seed")
    rng = np.random.default_rng(seed)
    a = rng.integers(len(ctx.D), size=sample)
    b = rng.integers(len(ctx.D), size=sample)
    c = rng.integers(len(ctx.C), size=sample)
    cnt_dd = (ctx.d_res[a] & ctx.d_res[b]).sum(axis=1)
    cnt_dc = (ctx.d_res[a] & ctx.c_res[c]).sum(axis=1)
    tally(cnt_dd, {4, 2, 0}, dd, "DxD", list(zip(a.tolist(), b.tolist())))
    tally(cnt_dc, {3, 1}, dc, "DxC", list(zip(a.tolist(), c.tolist())))
    return ResidueReport("sampled", sample, sample, dd, dc, viol, seed)


# ----------------------------------------------------------------------------
# cliques

CLIQUE_TYPES = ("i", "ii", "iii", "iv", "v", "vi", "vii")


def clique_type_formula(q: int, kind: str) -> tuple[int, int]:
    """Expected ``(a, b)`` = (lines through P, Greeks off P) of each clique type."""
    return {
        "i": (1, q**3 + q**2 + q + 1),
        "ii": (q + 1, q**3 + q**2),
        "iii": (q**3 + q**2 + q + 1, 0),
        "iv": (0, q**4 + q**3 + q**2 + q),
        "v": (0, q**4 + q**3 + q**2 + q),
        "vi": (q**3 + q**2 + q + 1, q**4),
        "vii": (q**2 + q + 1, q**4),
    }[kind]


def _witnesses(ctx: D5Context, kind: str, limit: int):
    """Subspaces playing the role of L, S, the Latin or the Greek for ``kind``."""
    P = ctx.P
    pperp = ctx.space.perp(P)
    e0 = ctx.P.basis[0]
    found = 0
    if kind == "iii":
        for g in ctx.C[:limit]:
            yield ctx.fams.greek(int(g))
        return
    if kind == "vi":
        for i in np.nonzero((ctx.fams.latins[:, 0, :] == e0).all(axis=1))[0][:limit]:
            yield ctx.fams.latin(int(i))
        return
    dim = 2 if kind in ("i", "ii") else 4
    pool = ctx.C if kind in ("v", "vii") else ctx.D
    for g in pool:
        G = ctx.fams.greek(int(g))
        for S in enumerate_subspaces(G, dim):
            has_p = S.dim and contains(S, e0)
            in_perp = S <= pperp
            ok = {
                "i": not in_perp,
                "ii": in_perp and not has_p,
                "iv": not in_perp,
                "v": not has_p,
                "vii": has_p,
            }[kind]
            if ok:
                yield S
                found += 1
                if found >= limit:
                    return
                break


def clique_vertices(ctx: D5Context, kind: str, W: Subspace) -> np.ndarray:
    """Vertices of ``Γ'`` forming the clique of type ``kind`` with witness ``W``."""
    q = ctx.q
    mw = ctx.mask(W)
    meet = ctx.greek_meets(mw)
    off = ~ctx.through_p
    lines_meet = ctx.linc.astype(np.int64) @ (mw & ~ctx.p_mask).astype(np.int64)
    lines_in = (ctx.linc.astype(np.int64) @ mw.astype(np.int64)) == q + 1
    if kind in ("i", "ii"):
        greeks = np.nonzero(off & (meet == q + 1))[0]
        lines = np.nonzero(lines_meet > 0)[0]
    elif kind == "iii":
        greeks = np.zeros(0, dtype=np.int64)
        lines = np.nonzero(lines_in)[0]
    elif kind in ("iv", "v"):
        greeks = np.nonzero(off & (meet >= _npoints(q, 3)))[0]
        lines = np.zeros(0, dtype=np.int64)
    elif kind == "vi":
        greeks = np.nonzero(off & (meet == _npoints(q, 4)))[0]
        lines = np.nonzero(lines_in)[0]
    elif kind == "vii":
        greeks = np.nonzero(off & (meet == _npoints(q, 3)))[0]
        lines = np.nonzero(lines_in)[0]
    else:
        raise ValueError(f"unknown clique type {kind!r}")
    return np.concatenate([lines, ctx.greeks_to_vertices(greeks)]).astype(np.int64)


@dataclass
class CliqueCheck:
    """One constructed clique of a given type and what was verified about it."""

    kind: str
    witness: Subspace
    vertices: np.ndarray
    split: tuple[int, int]
    expected: tuple[int, int]
    is_clique: bool
    extenders: int  # vertices adjacent to every member

    @property
    def maximal(self) -> bool:
        return self.is_clique and self.extenders == 0

    @property
    def ok(self) -> bool:
        return self.maximal and self.split == self.expected


def check_clique(G: DenseGraph, vertices) -> tuple[bool, int]:
    """``(is a clique, number of outside vertices adjacent to all of it)``."""
    rows = G.rows
    vs = [int(v) for v in vertices]
    members = 0
    for v in vs:
        members |= 1 << v
    common = -1
    for v in vs:
        if (rows[v] | (1 << v)) & members != members:
            return False, 0
        common &= rows[v]
    return True, (common & ~members).bit_count()


def clique_family(ctx: D5Context, Gp: DenseGraph, kind: str, limit: int = 3) -> list[CliqueCheck]:
    """Build up to ``limit`` cliques of the given type from witness subspaces and
    record their ``(a, b)`` split, clique property and maximality."""
    expected = clique_type_formula(ctx.q, kind)
    out = []
    for W in _witnesses(ctx, kind, limit):
        vs = clique_vertices(ctx, kind, W)
        split = (int((vs < ctx.nc).sum()), int((vs >= ctx.nc).sum()))
        is_clique, ext = check_clique(Gp, vs)
        out.append(CliqueCheck(kind, W, vs, split, expected, is_clique, ext))
    if not out:
        raise WitnessUnavailable(f"no witness subspace for clique type ({kind})")
    return out


def latin_point_clique(ctx: D5Context, latin_id: int, point: np.ndarray) -> np.ndarray:
    """Line ``<P, R>`` plus the Greeks off ``P`` meeting the Latin in a
    hyperplane through ``R``, for a Latin not through ``P`` and ``R`` in
    ``L ∩ P^perp``.  A maximal clique of type ``(1, q^3+q^2+q)`` at q = 2."""
    q = ctx.q
    L = ctx.fams.latin(latin_id)
    R = ctx.mask(ctx.space.point(point))
    if not contains(L, point) or point[1] != 0:
        raise ValueError("R must lie in L ∩ P^perp")
    meet = ctx.greek_meets(ctx.mask(L))
    greeks = np.nonzero(~ctx.through_p & (meet == _npoints(q, 4)) & (ctx.ginc @ R.astype(np.int64) == 1))[0]
    line = np.nonzero(ctx.linc.astype(np.int64) @ R.astype(np.int64) == 1)[0]
    return np.concatenate([line, ctx.greeks_to_vertices(greeks)]).astype(np.int64)


def gamma_clique(ctx: D5Context, W: Subspace) -> np.ndarray:
    """Maximal clique of ``Γ`` from a line (Greeks through it) or a solid
    (Greeks meeting it in at least a plane)."""
    meet = ctx.greek_meets(ctx.mask(W))
    if W.dim == 2:
        return np.nonzero(meet == ctx.q + 1)[0]
    if W.dim == 4:
        return np.nonzero(meet >= _npoints(ctx.q, 3))[0]
    raise ValueError("witness must be a line or a solid")


@dataclass
class CliqueIntersectionReport:
    sizes: dict[str, int]
    maximal: bool
    max_meet: int
    bound: int
    line_in_solid: int
    coplanar_lines: int
    pairs: int

    @property
    def ok(self) -> bool:
        q_bound = self.bound
        return self.maximal and self.max_meet <= q_bound and self.line_in_solid == q_bound


def clique_intersection_check(ctx: D5Context, G: DenseGraph, pairs: int = 2000, seed: int = 0) -> CliqueIntersectionReport:
    """Both clique families of ``Γ``: sizes, maximality, and pairwise meets."""
    q = ctx.q
    rng = np.random.default_rng(seed)
    g0 = ctx.fams.greek(0)
    lines = list(enumerate_subspaces(g0, 2))
    solids = list(enumerate_subspaces(g0, 4))
    # a second Greek meeting the first in a plane supplies lines and solids off g0
    g1 = ctx.fams.greek(int(G.neighbors(0)[0]))
    lines += list(enumerate_subspaces(g1, 2))
    solids += list(enumerate_subspaces(g1, 4))
    cl = [gamma_clique(ctx, L) for L in lines]
    cs = [gamma_clique(ctx, S) for S in solids]
    sizes = {"line": len(cl[0]), "solid": len(cs[0])}
    maximal = all(is_maximal_clique(G, c.tolist()) for c in cl[:20] + cs[:20])
    maximal &= {len(c) for c in cl} == {sizes["line"]} and {len(c) for c in cs} == {sizes["solid"]}
    allc = cl + cs
    best = 0
    for _ in range(pairs):
        i, j = rng.choice(len(allc), size=2, replace=False)
        if i < len(cl) and j < len(cl) and lines[i] == lines[j]:
            continue
        if i >= len(cl) and j >= len(cl) and solids[i - len(cl)] == solids[j - len(cl)]:
            continue
        best = max(best, len(np.intersect1d(allc[i], allc[j])))
    L = lines[0]
    S = next(S for S in solids if L <= S)
    in_solid = len(np.intersect1d(gamma_clique(ctx, L), gamma_clique(ctx, S)))
    L2 = next(M for M in lines if M != L and intersect(M, L).dim == 1)
    coplanar = len(np.intersect1d(gamma_clique(ctx, L), gamma_clique(ctx, L2)))
    best = max(best, in_solid, coplanar)
    return CliqueIntersectionReport(sizes, maximal, best, q**2 + q + 1, in_solid, coplanar, pairs)


def maximal_clique_census(G: DenseGraph) -> tuple[dict[int, int], list[frozenset[int]]]:
    """Size census of all maximal cliques (each found once from its smallest vertex)."""
    if G.n > CENSUS_LIMIT:
        raise SizeBudgetExceeded(f"clique census limited to {CENSUS_LIMIT} vertices")
    cliques = maximal_cliques(G)
    return clique_census(cliques), cliques


def classify_census(ctx: D5Context, cliques) -> dict[tuple[int, int, int], int]:
    """Count maximal cliques of ``Γ'`` by ``(size, a, b)``."""
    out: dict[tuple[int, int, int], int] = {}
    for c in cliques:
        a = sum(1 for v in c if v < ctx.nc)
        key = (len(c), a, len(c) - a)
        out[key] = out.get(key, 0) + 1
    return dict(sorted(out.items()))


def census_types(q: int) -> dict[tuple[int, int, int], list[str]]:
    """``(size, a, b)`` of each clique type in the classification."""
    out: dict[tuple[int, int, int], list[str]] = {}
    for k in CLIQUE_TYPES:
        a, b = clique_type_formula(q, k)
        out.setdefault((a + b, a, b), []).append(k)
    return out


@dataclass
class NonIsomorphismCertificate:
    gamma_sizes: dict[int, int]
    gamma_prime_sizes: dict[int, int]
    size: int

    @property
    def valid(self) -> bool:
        return self.gamma_prime_sizes.get(self.size, 0) > 0 and self.gamma_sizes.get(self.size, 0) == 0


def non_isomorphism_certificate(q: int, gamma_census: dict[int, int], gamma_prime_census: dict[int, int]):
    return NonIsomorphismCertificate(gamma_census, gamma_prime_census, q**3 + q**2 + q + 2)


def unlisted_types(q: int, by_type: dict[tuple[int, int, int], int]) -> dict[tuple[int, int, int], int]:
    """Census entries whose ``(size, a, b)`` matches none of the listed types."""
    known = census_types(q)
    return {k: v for k, v in by_type.items() if k not in known}
