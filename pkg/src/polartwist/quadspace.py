"""Hyperbolic quadratic spaces O+(2n, q) and their polar geometry.

The form is fixed to ``Q(x) = x0*x1 + x2*x3 + ... + x_{2n-2}*x_{2n-1}``.  With
that model the reference maximal ``<e0, e2, ..., e_{2n-2}>`` is declared Greek
and every other maximal totally singular subspace is sorted into its family
by the closure walk in :func:`enumerate_maximals`.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .gf import FieldTables, field_new
from .linalg import (
    DimensionMismatch,
    PointIndex,
    Subspace,
    all_vectors,
    batch_rref,
    contains,
    intersect,
    nullspace,
    span,
    whole_space,
)

CACHE_VERSION = 1
MAX_MAXIMALS = 400_000


class NotSingular(ValueError):
    pass


class SizeBudgetExceeded(RuntimeError):
    pass


def polar_point_count(n: int, q: int) -> int:
    """Singular points of O+(2n, q)."""
    return (q ** (n - 1) + 1) * (q**n - 1) // (q - 1)


def family_size(n: int, q: int) -> int:
    """Maximals of one family in O+(2n, q)."""
    out = 1
    for i in range(1, n):
        out *= q**i + 1
    return out


class QuadraticSpace:
    """GF(q)^{2n} with the standard hyperbolic quadratic form."""

    def __init__(self, q: int | FieldTables, n: int):
        self.field = q if isinstance(q, FieldTables) else field_new(q)
        self.n = int(n)
        self.dim = 2 * self.n
        if self.n < 1 or self.dim > 12:
            raise ValueError("need 1 <= n <= 6")
        # column permutation with B(u, v) = u . v[swap]
        self.swap = np.arange(self.dim).reshape(-1, 2)[:, ::-1].ravel()

    def __repr__(self):
        return f"QuadraticSpace(O+({self.dim},{self.field.q}))"

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def form_matrix(self) -> np.ndarray:
        """Upper triangular coefficient matrix of Q."""
        m = np.zeros((self.dim, self.dim), dtype=np.uint8)
        m[np.arange(0, self.dim, 2), np.arange(1, self.dim, 2)] = 1
        return m

    @property
    def form_hash(self) -> str:
        return hashlib.sha256(self.form_matrix.tobytes()).hexdigest()[:16]

    def _check(self, v: np.ndarray):
        if v.shape[-1] != self.dim:
            raise DimensionMismatch(f"vector length {v.shape[-1]} in a {self.dim}-space")

    def Q(self, v) -> np.ndarray | int:
        """Evaluate Q on a vector or on a stack of vectors (last axis)."""
        F = self.field
        v = np.asarray(v, dtype=np.uint8)
        self._check(v)
        prod = F.mul[v[..., 0::2], v[..., 1::2]]
        acc = prod[..., 0]
        for i in range(1, self.n):
            acc = F.add[acc, prod[..., i]]
        return int(acc) if acc.ndim == 0 else acc

    def B(self, u, v) -> np.ndarray | int:
        """Polar bilinear form B(u, v) = Q(u+v) - Q(u) - Q(v)."""
        u = np.asarray(u, dtype=np.uint8)
        v = np.asarray(v, dtype=np.uint8)
        self._check(u)
        self._check(v)
        out = self.field.dot(u, v[..., self.swap])
        return int(out) if np.ndim(out) == 0 else out

    def perp(self, U: Subspace) -> Subspace:
        if U.n != self.dim:
            raise DimensionMismatch("subspace of a different ambient space")
        if U.dim == 0:
            return whole_space(self.field, self.dim)
        return span(self.field, nullspace(self.field, U.basis[:, self.swap]), self.dim)

    def is_totally_singular(self, U: Subspace) -> bool:
        b = U.basis
        if U.dim == 0:
            return True
        if np.any(self.Q(b) != 0):
            return False
        gram = np.asarray(self.B(b[:, None, :], b[None, :, :]))
        return not gram.any()

    @cached_property
    def points(self) -> PointIndex:
        return PointIndex(self.field, self.dim)

    @cached_property
    def singular_point_ids(self) -> np.ndarray:
        P = self.points
        return np.nonzero(self.Q(P.vectors) == 0)[0]

    def point(self, v) -> Subspace:
        return span(self.field, [v], self.dim)

    def reference_greek(self) -> Subspace:
        e = np.eye(self.dim, dtype=np.uint8)
        return span(self.field, e[0::2], self.dim)


def enumerate_singular_points(space: QuadraticSpace) -> list[Subspace]:
    """All singular points, in point-index order."""
    P = space.points
    F = space.field
    return [span(F, P.vectors[i : i + 1], space.dim) for i in space.singular_point_ids]


def find_singular_vector(space: QuadraticSpace, W: Subspace) -> np.ndarray | None:
    """A nonzero singular vector of ``W``, searched in small spans first."""
    F = space.field
    for k in range(1, W.dim + 1):
        coeffs = all_vectors(F.q, k)[1:]
        vecs = F.matmul(coeffs, W.basis[:k])
        hit = np.nonzero(space.Q(vecs) == 0)[0]
        if len(hit):
            return vecs[hit[0]]
    return None


def hyperbolic_basis(space: QuadraticSpace, first=None) -> np.ndarray:
    """Rows ``e0, f0, e1, f1, ...`` with Q(e_i) = Q(f_i) = 0 and B(e_i, f_j) = [i == j].

    ``first`` (a singular vector) is used as ``e0`` when given.  For the
    standard form and ``first = e0`` the result is the identity matrix.
    """
    F = space.field
    W = whole_space(F, space.dim)
    rows = []
    e = None if first is None else np.asarray(first, dtype=np.uint8)
    while W.dim:
        if e is None:
            e = find_singular_vector(space, W)
            if e is None:
                raise ValueError("anisotropic residue; form is not hyperbolic")
        f = None
        for b in W.basis:
            c = space.B(e, b)
            if c:
                f = F.mul[F.inv[c], b]
                break
        if f is None:
            raise ValueError("degenerate form")
        f = F.sub[f, F.mul[space.Q(f), e]]
        rows += [e, f]
        W = intersect(W, space.perp(span(F, [e, f], space.dim)))
        e = None
    return np.array(rows, dtype=np.uint8)


def _inverse(F: FieldTables, M: np.ndarray) -> np.ndarray:
    n = M.shape[0]
    R, rank = batch_rref(F, np.hstack([M, np.eye(n, dtype=np.uint8)])[None])
    if rank[0] != n or not np.array_equal(R[0, :, :n], np.eye(n, dtype=np.uint8)):
        raise ValueError("singular matrix")
    return R[0, :, n:]


class Residue:
    """The quotient P^perp / P of a singular point, again hyperbolic."""

    def __init__(self, space: QuadraticSpace, P: Subspace):
        if P.dim != 1 or space.Q(P.basis[0]) != 0:
            raise NotSingular(f"{P} is not a singular point")
        self.parent = space
        self.P = P
        self.space = QuadraticSpace(space.field, space.n - 1)
        self.frame = hyperbolic_basis(space, P.basis[0])
        self._coords = _inverse(space.field, self.frame)
        self.Pperp = space.perp(P)

    def project(self, v) -> np.ndarray:
        """Residue coordinates of vectors of P^perp (stacked along axis 0)."""
        F = self.parent.field
        v = np.asarray(v, dtype=np.uint8)
        c = F.matmul(v, self._coords)
        if np.any(c[..., 1] != 0):
            raise ValueError("vector not in P^perp")
        return c[..., 2:]

    def lift(self, w) -> np.ndarray:
        F = self.parent.field
        w = np.asarray(w, dtype=np.uint8)
        return F.matmul(w, self.frame[2:])

    def project_subspace(self, U: Subspace) -> Subspace:
        """Image of ``U`` (contained in P^perp) in the residue."""
        if U.dim == 0:
            return span(self.parent.field, np.zeros((0, self.space.dim), np.uint8), self.space.dim)
        return span(self.parent.field, self.project(U.basis), self.space.dim)

    def lift_subspace(self, S: Subspace) -> Subspace:
        """Preimage ``<P, lift(S)>`` of a residue subspace."""
        rows = [self.P.basis]
        if S.dim:
            rows.append(self.lift(S.basis))
        return span(self.parent.field, np.vstack(rows), self.parent.dim)


def residue(space: QuadraticSpace, P: Subspace) -> Residue:
    return Residue(space, P)


def ts_lines_through(space: QuadraticSpace, P: Subspace) -> list[Subspace]:
    """Totally singular lines through the singular point ``P``."""
    res = Residue(space, P)
    pts = res.space.points
    ids = res.space.singular_point_ids
    return [res.lift_subspace(span(space.field, pts.vectors[i : i + 1], res.space.dim)) for i in ids]


# ----------------------------------------------------------------------------
# maximal totally singular subspaces


def _encode_keys(F: FieldTables, R: np.ndarray) -> np.ndarray:
    """Injective uint64 key of full-rank RREF matrices ``(M, k, N)``."""
    m, k, N = R.shape
    nz = R != 0
    piv = nz.argmax(axis=2)
    is_piv = np.zeros((m, N), dtype=bool)
    np.put_along_axis(is_piv, piv, True, axis=1)
    free_cols = np.argsort(is_piv, axis=1, kind="stable")[:, : N - k]
    free = np.take_along_axis(R, np.broadcast_to(free_cols[:, None, :], (m, k, N - k)), axis=2)
    key = np.zeros(m, dtype=np.uint64)
    q = np.uint64(F.q)
    for x in free.reshape(m, -1).T:
        key = key * q + x.astype(np.uint64)
    mask = (is_piv.astype(np.uint64) << np.arange(N, dtype=np.uint64)).sum(axis=1, dtype=np.uint64)
    return (key << np.uint64(N)) | mask


def _key_bits(q: int, k: int, N: int) -> float:
    return k * (N - k) * np.log2(q) + N


def _duals(space: QuadraticSpace, M: np.ndarray) -> np.ndarray:
    """For maximals ``M`` (B, n, N) return ``D`` with B(D[i], M[j]) = [i == j]."""
    F = space.field
    nb, n, N = M.shape
    K = M[:, :, space.swap]
    aug = np.concatenate([K, np.broadcast_to(np.eye(n, dtype=np.uint8), (nb, n, n))], axis=2)
    R, rank = batch_rref(F, aug)
    assert (rank == n).all()
    piv = (R[:, :, :N] != 0).argmax(axis=2)
    E = R[:, :, N:]
    D = np.zeros((nb, n, N), dtype=np.uint8)
    b = np.arange(nb)[:, None, None]
    i = np.arange(n)[None, :, None]
    D[b, i, piv[:, None, :]] = E.transpose(0, 2, 1)
    return D


def hyperplane_functionals(q: int, n: int) -> np.ndarray:
    """Normalised nonzero functionals on GF(q)^n, one per hyperplane."""
    return PointIndex(field_new(q), n).vectors


def opposite_maximals(space: QuadraticSpace, M: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """For each maximal ``M[b]`` and functional ``phis[h]``, the RREF of the
    unique maximal of the other family through the hyperplane ``ker phi``.

    Output shape ``(B, H, n, N)``.
    """
    F = space.field
    nb, n, N = M.shape
    nh = len(phis)
    D = _duals(space, M)
    W = F.matmul(phis[None], D)  # (B, H, N): B(W, m_i) = phi_i
    lead = (phis != 0).argmax(axis=1)  # phi[lead] == 1
    Mk = M[:, lead, :]  # (B, H, N)
    Qw = space.Q(W)
    v = F.sub[W, F.mul[Qw[..., None], Mk]]
    # rows m_j - phi_j m_k span ker phi; row k is replaced by v
    rows = F.sub[M[:, None, :, :], F.mul[phis[None, :, :, None], Mk[:, :, None, :]]]
    rows[:, np.arange(nh), lead, :] = v
    R, rank = batch_rref(F, rows.reshape(nb * nh, n, N))
    assert (rank == n).all()
    return R.reshape(nb, nh, n, N)


@dataclass
class MaximalFamilies:
    """Both families of maximals plus their "meet in a hyperplane" incidences.

    ``greek_nbr[g, h]`` is the Latin through the hyperplane ``ker phis[h]`` of
    Greek ``g`` (in that Greek's RREF coordinates); ``latin_nbr`` likewise.
    """

    space: QuadraticSpace
    greeks: np.ndarray
    latins: np.ndarray
    greek_keys: np.ndarray
    latin_keys: np.ndarray
    greek_nbr: np.ndarray
    latin_nbr: np.ndarray
    phis: np.ndarray = field(repr=False)

    def subspace(self, family: str, i: int) -> Subspace:
        arr = self.greeks if family == "greek" else self.latins
        return Subspace(self.space.field, self.space.dim, arr[i])

    def greek(self, i: int) -> Subspace:
        return self.subspace("greek", i)

    def latin(self, i: int) -> Subspace:
        return self.subspace("latin", i)

    def locate(self, U: Subspace) -> tuple[str, int] | None:
        """Family and index of a maximal, or None if ``U`` is not one."""
        if U.dim != self.space.n:
            return None
        key = _encode_keys(self.space.field, U.basis[None].copy())[0]
        for fam, keys in (("greek", self.greek_keys), ("latin", self.latin_keys)):
            j = np.searchsorted(keys, key)
            if j < len(keys) and keys[j] == key:
                return fam, int(j)
        return None

    def content_hash(self) -> str:
        h = hashlib.sha256()
        for a in (self.greek_keys, self.latin_keys, self.greek_nbr, self.latin_nbr):
            h.update(np.ascontiguousarray(a).tobytes())
        return h.hexdigest()


def enumerate_maximals(space: QuadraticSpace, chunk: int = 120_000) -> MaximalFamilies:
    """Closure walk over maximals, stepping between families through shared
    hyperplanes.

    Starting from the reference Greek, every maximal ``M`` and every hyperplane
    ``H`` of ``M`` gives the unique maximal of the other family through ``H``
    (the second singular point of the rank-1 residue ``H^perp / H``).  New
    maximals are canonicalised and deduplicated by key until nothing new appears.
    """
    F, n, N = space.field, space.n, space.dim
    expected = family_size(n, F.q)
    if 2 * expected > MAX_MAXIMALS:
        raise SizeBudgetExceeded(f"O+({N},{F.q}) has {2 * expected} maximals")
    if _key_bits(F.q, n, N) > 63:
        raise SizeBudgetExceeded(f"keys for O+({N},{F.q}) do not fit in 64 bits")
    phis = hyperplane_functionals(F.q, n)
    nh = len(phis)
    step = max(1, chunk // nh)

    ref = space.reference_greek().basis[None].copy()
    mats = [[ref], []]
    keys = [[_encode_keys(F, ref)], []]
    seen = [np.sort(keys[0][0]), np.zeros(0, dtype=np.uint64)]
    cand = [[], []]
    frontier, fam = ref, 0
    while len(frontier):
        other = 1 - fam
        new_mats, new_keys = [], []
        for s in range(0, len(frontier), step):
            R = opposite_maximals(space, frontier[s : s + step], phis)
            flat = R.reshape(-1, n, N)
            k = _encode_keys(F, flat)
            cand[fam].append(k.reshape(-1, nh))
            uk, first = np.unique(k, return_index=True)
            fresh = ~np.isin(uk, seen[other])
            if new_keys:
                fresh &= ~np.isin(uk, np.concatenate(new_keys))
            new_keys.append(uk[fresh])
            new_mats.append(flat[first[fresh]])
        nk = np.concatenate(new_keys) if new_keys else np.zeros(0, np.uint64)
        frontier = np.concatenate(new_mats) if new_mats else np.zeros((0, n, N), np.uint8)
        if len(nk):
            keys[other].append(nk)
            mats[other].append(frontier)
            seen[other] = np.sort(np.concatenate([seen[other], nk]))
        fam = other

    out = []
    for f in (0, 1):
        k = np.concatenate(keys[f])
        m = np.concatenate(mats[f])
        order = np.argsort(k)
        out.append((k[order], m[order], order))
    (gk, gm, gord), (lk, lm, lord) = out
    if len(gk) != expected or len(lk) != expected:
        raise AssertionError(f"closure found {len(gk)}/{len(lk)} maximals, expected {expected}")

    def resolve(cands, own_order, target_keys):
        c = np.concatenate(cands)
        # rows of c follow discovery order; reorder to sorted-key order
        inv = np.empty_like(own_order)
        inv[own_order] = np.arange(len(own_order))
        rows = np.empty_like(c)
        rows[inv] = c
        ids = np.searchsorted(target_keys, rows)
        assert np.all(target_keys[ids] == rows)
        return ids.astype(np.int32)

    greek_nbr = resolve(cand[0], gord, lk)
    latin_nbr = resolve(cand[1], lord, gk)
    return MaximalFamilies(space, gm, lm, gk, lk, greek_nbr, latin_nbr, phis)


def save_families(fams: MaximalFamilies, path) -> str:
    """Write the enumeration to an ``.npz`` cache; returns the content hash.

    Layout: arrays ``greeks, latins, greek_keys, latin_keys, greek_nbr,
    latin_nbr, phis`` plus a JSON ``meta`` string holding ``version, q, dim,
    form`` (the upper triangular form matrix) and ``content_hash``.
    """
    sp = fams.space
    digest = fams.content_hash()
    meta = {
        "version": CACHE_VERSION,
        "q": sp.q,
        "dim": sp.dim,
        "form": sp.form_matrix.tolist(),
        "form_hash": sp.form_hash,
        "content_hash": digest,
    }
    np.savez_compressed(
        path,
        meta=np.array(json.dumps(meta, sort_keys=True)),
        greeks=fams.greeks,
        latins=fams.latins,
        greek_keys=fams.greek_keys,
        latin_keys=fams.latin_keys,
        greek_nbr=fams.greek_nbr,
        latin_nbr=fams.latin_nbr,
        phis=fams.phis,
    )
    return digest


def load_families(space: QuadraticSpace, path) -> MaximalFamilies:
    with np.load(path) as z:
        meta = json.loads(str(z["meta"]))
        if (meta["version"], meta["q"], meta["dim"], meta["form_hash"]) != (
            CACHE_VERSION,
            space.q,
            space.dim,
            space.form_hash,
        ):
            raise ValueError(f"cache {path} does not match {space}")
        fams = MaximalFamilies(
            space,
            z["greeks"],
            z["latins"],
            z["greek_keys"],
            z["latin_keys"],
            z["greek_nbr"],
            z["latin_nbr"],
            z["phis"],
        )
    if fams.content_hash() != meta["content_hash"]:
        raise ValueError(f"cache {path} is corrupt (content hash mismatch)")
    return fams


def cached_maximals(space: QuadraticSpace, cache_dir=None) -> MaximalFamilies:
    """``enumerate_maximals`` with an optional on-disk cache keyed by (q, 2n, form)."""
    if cache_dir is None:
        return enumerate_maximals(space)
    path = Path(cache_dir) / f"maximals_q{space.q}_d{space.dim}_{space.form_hash}.npz"
    if path.exists():
        return load_families(space, path)
    fams = enumerate_maximals(space)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_families(fams, path)
    return fams


class PolarIndex:
    """Singular points, totally singular lines and both families of maximals."""

    def __init__(self, space: QuadraticSpace, families: MaximalFamilies | None = None):
        self.space = space
        self.families = families if families is not None else enumerate_maximals(space)
        self.points = enumerate_singular_points(space)

    @property
    def greeks(self) -> list[Subspace]:
        return [self.families.greek(i) for i in range(len(self.families.greeks))]

    @property
    def latins(self) -> list[Subspace]:
        return [self.families.latin(i) for i in range(len(self.families.latins))]

    def lines_through(self, P: Subspace) -> list[Subspace]:
        return ts_lines_through(self.space, P)

    def vertex_id(self, U: Subspace) -> tuple[str, int] | None:
        return self.families.locate(U)


class Polarity:
    """Polarity of a fixed even-dimensional subspace ``L`` from a nondegenerate form.

    Coordinates inside ``L`` are read off at the pivot columns of its RREF
    basis.  ``kind="symplectic"`` uses the standard alternating Gram matrix,
    ``kind="orthogonal"`` the identity.
    """

    def __init__(self, L: Subspace, kind: str = "symplectic"):
        m = L.dim
        F = L.field
        if kind == "symplectic":
            if m % 2:
                raise ValueError("symplectic polarity needs even dimension")
            G = np.zeros((m, m), dtype=np.uint8)
            G[np.arange(0, m, 2), np.arange(1, m, 2)] = 1
            G[np.arange(1, m, 2), np.arange(0, m, 2)] = F.neg[1]
        elif kind == "orthogonal":
            G = np.eye(m, dtype=np.uint8)
        else:
            raise ValueError(f"unknown polarity kind {kind!r}")
        self.L = L
        self.kind = kind
        self.gram = G
        self._piv = list(L.pivots)

    def coords(self, U: Subspace) -> np.ndarray:
        if not U <= self.L:
            raise ValueError("subspace not contained in L")
        return U.basis[:, self._piv]

    def __call__(self, S: Subspace) -> Subspace:
        F = self.L.field
        if S.dim == 0:
            return self.L
        c = self.coords(S)
        K = nullspace(F, F.matmul(c, self.gram))
        if len(K) == 0:
            return span(F, np.zeros((0, self.L.n), np.uint8), self.L.n)
        return span(F, F.matmul(K, self.L.basis), self.L.n)


def polarity(L: Subspace, kind: str = "symplectic") -> Polarity:
    return Polarity(L, kind)


def maximal_family(space: QuadraticSpace, M: Subspace) -> str:
    """Family of a maximal by the parity of its meet with the reference Greek."""
    d = intersect(M, space.reference_greek()).dim
    return "greek" if (space.n - d) % 2 == 0 else "latin"


def contains_point(U: Subspace, P: Subspace) -> bool:
    return contains(U, P.basis[0])


def point_incidence(space: QuadraticSpace, maximals: np.ndarray, vectors: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """``out[i, j]`` is True iff the singular vector ``vectors[j]`` lies in ``maximals[i]``.

    A singular point lies in a maximal ``M`` exactly when it is orthogonal to
    ``M``, so the test is one product with the swapped basis.
    """
    F = space.field
    V = np.ascontiguousarray(np.asarray(vectors, dtype=np.uint8).T)
    out = np.zeros((len(maximals), V.shape[1]), dtype=bool)
    for s in range(0, len(maximals), chunk):
        K = maximals[s : s + chunk][:, :, space.swap]
        out[s : s + chunk] = ~F.matmul(K, V).any(axis=1)
    return out


def meet_graph_rows(fams: MaximalFamilies, rows=None, chunk: int = 1024):
    """Yield ``(rows, nbrs)`` blocks of the Greek graph "meet in codimension 2".

    Two Greeks meet in an ``(n-2)``-space exactly when some Latin meets both in
    a hyperplane, so the neighbours of ``g`` are the two-step set
    Greek -> Latin -> Greek minus ``g`` itself.  ``nbrs`` is a sorted
    ``(len(rows), k)`` int32 array; every row has the same length ``k``.
    """
    q = fams.space.q
    nh = fams.greek_nbr.shape[1]
    rows = np.arange(len(fams.greeks)) if rows is None else np.asarray(rows)
    for s in range(0, len(rows), chunk):
        r = rows[s : s + chunk]
        two = fams.latin_nbr[fams.greek_nbr[r]].reshape(len(r), -1)
        two.sort(axis=1)
        first = np.ones_like(two, dtype=bool)
        first[:, 1:] = two[:, 1:] != two[:, :-1]
        first &= two != r[:, None]
        cnt = first.sum(axis=1)
        if (cnt != cnt[0]).any() or cnt[0] * (q + 1) + nh != two.shape[1]:
            raise AssertionError("meet graph is not regular; enumeration is inconsistent")
        yield r, two[first].reshape(len(r), -1).astype(np.int32)
