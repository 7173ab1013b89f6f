"""Vectors and subspaces of GF(q)^n in canonical reduced row echelon form.

A :class:`Subspace` is identified by its RREF basis, so equality and hashing
are exact set equality.  The row reduction is batched (``batch_rref``) so that
the enumeration code can canonicalise many subspaces with a handful of numpy
operations.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

import numpy as np

from .gf import FieldTables

MAX_N = 12


class DimensionMismatch(ValueError):
    pass


def batch_rref(F: FieldTables, mats) -> tuple[np.ndarray, np.ndarray]:
    """Row reduce a stack of matrices of shape ``(B, r, c)``.

    Returns ``(R, rank)``; the first ``rank[b]`` rows of ``R[b]`` are the RREF
    basis and the rest are zero.
    """
    A = np.array(mats, dtype=np.uint8, copy=True)
    if A.ndim != 3:
        raise ValueError("expected a (B, r, c) stack")
    nb, r, c = A.shape
    rank = np.zeros(nb, dtype=np.intp)
    if nb == 0 or r == 0:
        return A, rank
    rows = np.arange(r)
    for col in range(c):
        if (rank >= r).all():
            break
        cand = (A[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        sel = np.nonzero(has)[0]
        piv = cand[sel].argmax(axis=1)
        tgt = rank[sel]
        row_p = A[sel, piv]
        row_t = A[sel, tgt]
        A[sel, piv] = row_t
        prow = F.mul[F.inv[row_p[:, col]][:, None], row_p]
        A[sel, tgt] = prow
        sub = A[sel]
        factors = sub[:, :, col].copy()
        factors[np.arange(len(sel)), tgt] = 0
        A[sel] = F.sub[sub, F.mul[factors[:, :, None], prow[:, None, :]]]
        rank[sel] += 1
    return A, rank


def rref(F: FieldTables, M) -> tuple[np.ndarray, tuple[int, ...]]:
    """RREF basis (zero rows dropped) and pivot columns of a single matrix."""
    M = np.asarray(M, dtype=np.uint8)
    if M.ndim != 2:
        raise ValueError("expected a matrix")
    R, rank = batch_rref(F, M[None])
    R = R[0, : rank[0]]
    return R, pivots_of(R)


def pivots_of(R: np.ndarray) -> tuple[int, ...]:
    return tuple(int(np.argmax(row != 0)) for row in R)


def nullspace(F: FieldTables, M) -> np.ndarray:
    """Basis (as rows) of ``{x : M x^T = 0}``."""
    M = np.asarray(M, dtype=np.uint8)
    c = M.shape[1]
    R, piv = rref(F, M)
    free = [j for j in range(c) if j not in piv]
    out = np.zeros((len(free), c), dtype=np.uint8)
    for t, f in enumerate(free):
        out[t, f] = 1
        for i, p in enumerate(piv):
            out[t, p] = F.neg[R[i, f]]
    return out


class Subspace:
    """A subspace of GF(q)^n held as its RREF basis."""

    __slots__ = ("field", "n", "basis", "_key", "_hash")

    def __init__(self, F: FieldTables, n: int, basis: np.ndarray):
        # basis must already be in RREF; use span() from outside
        self.field = F
        self.n = int(n)
        basis = np.ascontiguousarray(basis, dtype=np.uint8).reshape(-1, n)
        basis.setflags(write=False)
        self.basis = basis
        self._key = (F.q, self.n, basis.shape[0], basis.tobytes())
        self._hash = hash(self._key)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def key(self) -> tuple:
        return self._key

    @property
    def pivots(self) -> tuple[int, ...]:
        return pivots_of(self.basis)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __le__(self, other: "Subspace") -> bool:
        return all(contains(other, v) for v in self.basis)

    def __repr__(self):
        rows = ["".join(format(int(x), "x") for x in row) for row in self.basis]
        return f"Subspace(q={self.field.q}, n={self.n}, dim={self.dim}, [{' '.join(rows)}])"

    def vectors(self) -> np.ndarray:
        """All ``q**dim`` vectors of the subspace."""
        F = self.field
        coeffs = all_vectors(F.q, self.dim)
        return F.matmul(coeffs, self.basis) if self.dim else np.zeros((1, self.n), np.uint8)


def all_vectors(q: int, k: int) -> np.ndarray:
    """Every vector of GF(q)^k as rows, in lexicographic order."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.uint8)
    grids = np.indices((q,) * k).reshape(k, -1).T
    return grids.astype(np.uint8)


def _as_matrix(vectors, n: int | None) -> np.ndarray:
    rows = [np.asarray(v, dtype=np.uint8).ravel() for v in vectors]
    if not rows:
        if n is None:
            raise DimensionMismatch("ambient dimension unknown for an empty span")
        return np.zeros((0, n), dtype=np.uint8)
    lens = {len(r) for r in rows}
    if len(lens) != 1 or (n is not None and lens != {n}):
        raise DimensionMismatch(f"vectors of lengths {sorted(lens)} (expected {n})")
    return np.vstack(rows)


def span(F: FieldTables, vectors: Iterable | np.ndarray, n: int | None = None) -> Subspace:
    """Canonical subspace spanned by ``vectors``."""
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        M = vectors.astype(np.uint8)
        if n is not None and M.shape[1] != n:
            raise DimensionMismatch(f"vectors of length {M.shape[1]} (expected {n})")
    else:
        M = _as_matrix(list(vectors), n)
    if M.size and int(M.max()) >= F.q:
        raise ValueError("coordinate outside the field")
    R, _ = rref(F, M)
    return Subspace(F, M.shape[1], R)


def zero_space(F: FieldTables, n: int) -> Subspace:
    return Subspace(F, n, np.zeros((0, n), dtype=np.uint8))


def whole_space(F: FieldTables, n: int) -> Subspace:
    return Subspace(F, n, np.eye(n, dtype=np.uint8))


def _check_same(U: Subspace, W: Subspace):
    if U.n != W.n or U.field != W.field:
        raise DimensionMismatch(f"ambient spaces differ: {U.n} vs {W.n}")


def dim(U: Subspace) -> int:
    return U.dim


def sum_space(U: Subspace, W: Subspace) -> Subspace:
    _check_same(U, W)
    return span(U.field, np.vstack([U.basis, W.basis]), U.n)


def intersect(U: Subspace, W: Subspace) -> Subspace:
    """Set-theoretic intersection, via the annihilator of ``W``."""
    _check_same(U, W)
    F = U.field
    if U.dim == 0 or W.dim == W.n:
        return U
    if W.dim == 0:
        return zero_space(F, U.n)
    ann = nullspace(F, W.basis)
    coeff = F.matmul(U.basis, ann.T)  # (dim U, n - dim W)
    c = nullspace(F, coeff.T)
    if len(c) == 0:
        return zero_space(F, U.n)
    return span(F, F.matmul(c, U.basis), U.n)


def reduce_vector(U: Subspace, v) -> np.ndarray:
    """Remainder of ``v`` after elimination against the RREF basis of ``U``."""
    F = U.field
    v = np.array(v, dtype=np.uint8).ravel()
    if len(v) != U.n:
        raise DimensionMismatch(f"vector of length {len(v)} in GF(q)^{U.n}")
    for row, p in zip(U.basis, U.pivots):
        c = v[p]
        if c:
            v = F.sub[v, F.mul[c, row]]
    return v


def contains(U: Subspace, v) -> bool:
    return not reduce_vector(U, v).any()


def is_subspace(U: Subspace, W: Subspace) -> bool:
    """True iff ``U`` is contained in ``W``."""
    _check_same(U, W)
    return all(contains(W, v) for v in U.basis)


def gaussian(n: int, k: int, q: int) -> int:
    """Gaussian binomial coefficient: the number of k-subspaces of GF(q)^n."""
    if k < 0 or k > n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def rref_patterns(q: int, m: int, k: int) -> Iterator[np.ndarray]:
    """All k x m matrices in RREF with rank k, grouped by pivot pattern.

    Yields one ``(count, k, m)`` array per pivot pattern.
    """
    for piv in itertools.combinations(range(m), k):
        free = [(i, j) for i in range(k) for j in range(piv[i] + 1, m) if j not in piv]
        fills = all_vectors(q, len(free))
        out = np.zeros((len(fills), k, m), dtype=np.uint8)
        for i, p in enumerate(piv):
            out[:, i, p] = 1
        for t, (i, j) in enumerate(free):
            out[:, i, j] = fills[:, t]
        yield out


def enumerate_subspaces(W: Subspace, k: int) -> Iterator[Subspace]:
    """Every k-subspace of ``W`` exactly once, canonical."""
    F, m = W.field, W.dim
    if not 0 <= k <= m:
        return
    if k == 0:
        yield zero_space(F, W.n)
        return
    for coeff in rref_patterns(F.q, m, k):
        R, _ = batch_rref(F, F.matmul(coeff, W.basis))
        for basis in R:
            yield Subspace(F, W.n, basis)


def random_vector(F: FieldTables, n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, F.q, size=n).astype(np.uint8)


def random_subspace(F: FieldTables, n: int, k: int, rng: np.random.Generator) -> Subspace:
    """Uniform-ish random subspace of dimension ``k`` (rejection on rank)."""
    while True:
        S = span(F, rng.integers(0, F.q, size=(k, n)).astype(np.uint8), n)
        if S.dim == k:
            return S


class PointIndex:
    """Numbering of the points (1-spaces) of PG(n-1, q).

    Each point is stored by its normalised representative (first nonzero
    coordinate equal to 1).  Subspaces can be turned into bitsets over the
    point numbering, which makes meets and containment a single AND.
    """

    MAX_VECTORS = 1 << 21

    def __init__(self, F: FieldTables, n: int):
        if F.q**n > self.MAX_VECTORS:
            raise ValueError(f"point table for GF({F.q})^{n} is too large")
        self.field = F
        self.n = n
        self.weights = (F.q ** np.arange(n - 1, -1, -1)).astype(np.int64)
        allv = all_vectors(F.q, n)
        codes = allv.astype(np.int64) @ self.weights
        norm = self.normalize(allv)
        ncodes = norm.astype(np.int64) @ self.weights
        reps = np.unique(ncodes[1:])
        self.vectors = all_vectors(F.q, n)[reps]
        self.count = len(reps)
        table = np.full(F.q**n, -1, dtype=np.int64)
        table[codes[1:]] = np.searchsorted(reps, ncodes[1:])
        self._table = table

    def normalize(self, vecs: np.ndarray) -> np.ndarray:
        F = self.field
        vecs = np.asarray(vecs, dtype=np.uint8)
        nz = vecs != 0
        lead_pos = nz.argmax(axis=-1)
        lead = np.take_along_axis(vecs, lead_pos[..., None], axis=-1)
        return F.mul[F.inv[lead], vecs]

    def index(self, vecs: np.ndarray) -> np.ndarray:
        """Point number of each vector (``-1`` for the zero vector)."""
        vecs = np.asarray(vecs, dtype=np.uint8)
        return self._table[vecs.astype(np.int64) @ self.weights]

    def mask_of_ids(self, ids: np.ndarray) -> int:
        ids = np.asarray(ids, dtype=np.int64)
        ids = ids[ids >= 0]
        flags = np.zeros(self.count, dtype=bool)
        flags[ids] = True
        return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")

    def bits(self, U: Subspace) -> int:
        """Bitset of the points lying in ``U``."""
        if U.dim == 0:
            return 0
        return self.mask_of_ids(self.index(U.vectors()))

    def ids_of_mask(self, mask: int) -> np.ndarray:
        nbytes = (self.count + 7) // 8
        raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.nonzero(np.unpackbits(raw, bitorder="little")[: self.count])[0]

    def dim_of_count(self, npoints: int) -> int:
        """Dimension of a subspace containing ``npoints`` points."""
        q, d, total = self.field.q, 0, 0
        while total < npoints:
            total += q**d
            d += 1
        if total != npoints:
            raise ValueError(f"{npoints} is not a projective point count")
        return d

    def dim_of_mask(self, mask: int) -> int:
        return self.dim_of_count(mask.bit_count())

    def subspace_of_mask(self, mask: int) -> Subspace:
        return span(self.field, self.vectors[self.ids_of_mask(mask)], self.n)
