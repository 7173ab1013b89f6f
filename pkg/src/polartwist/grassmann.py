"""Grassmann graphs and the two descriptions of the twisted Grassmann graph.

``H`` is always the hyperplane of the first ``2k`` coordinates of
GF(q)^(2k+1).
"""
from __future__ import annotations

import numpy as np

from .gf import field_new
from .graphcore import DenseGraph, SwitchingPartition, ValidationReport, gm_switch, gm_validate
from .linalg import PointIndex, Subspace, enumerate_subspaces, gaussian, intersect, span, whole_space
from .quadspace import SizeBudgetExceeded, polarity

MAX_VERTICES = 20_000


class ValidationFailed(AssertionError):
    def __init__(self, report: ValidationReport):
        super().__init__(f"switching partition invalid: {report.summary()}")
        self.report = report


def _budget(count: int):
    if count > MAX_VERTICES:
        raise SizeBudgetExceeded(f"{count} vertices exceed the budget of {MAX_VERTICES}")


def _masks(pts: PointIndex, spaces: list[Subspace]) -> np.ndarray:
    out = np.zeros((len(spaces), pts.count), dtype=np.float32)
    for i, U in enumerate(spaces):
        if U.dim:
            ids = pts.index(U.vectors())
            out[i, ids[ids >= 0]] = 1
    return out


def _npoints(q: int, d: int) -> int:
    return (q**d - 1) // (q - 1)


def meet_counts(q: int, n: int, A: list[Subspace], B: list[Subspace]) -> np.ndarray:
    """Number of common points for every pair ``(A[i], B[j])``."""
    pts = PointIndex(field_new(q), n)
    return np.rint(_masks(pts, A) @ _masks(pts, B).T).astype(np.int64)


def k_spaces(q: int, n: int, k: int) -> list[Subspace]:
    _budget(gaussian(n, k, q))
    return list(enumerate_subspaces(whole_space(field_new(q), n), k))


def grassmann_graph(q: int, n: int, k: int) -> DenseGraph:
    """k-spaces of GF(q)^n, adjacent when they meet in a (k-1)-space."""
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    V = k_spaces(q, n, k)
    M = meet_counts(q, n, V, V)
    A = M == _npoints(q, k - 1)
    np.fill_diagonal(A, False)
    return DenseGraph.from_adjacency(A, labels=V)


def hyperplane(q: int, k: int) -> Subspace:
    n = 2 * k + 1
    return span(field_new(q), np.eye(n, dtype=np.uint8)[: 2 * k], n)


def twisted_grassmann_vertexswap(q: int, k: int) -> DenseGraph:
    """(k+1)-spaces off ``H`` together with (k-1)-spaces of ``H``.

    Two (k+1)-spaces are adjacent when they meet in a k-space, two
    (k-1)-spaces when they meet in a (k-2)-space, and mixed pairs when
    incident.  Vertex order: the (k+1)-spaces first, then the (k-1)-spaces.
    """
    n = 2 * k + 1
    H = hyperplane(q, k)
    _budget(gaussian(n, k + 1, q))
    big = [X for X in k_spaces(q, n, k + 1) if not X <= H]
    small = list(enumerate_subspaces(H, k - 1))
    V = big + small
    M = meet_counts(q, n, V, V)
    nb = len(big)
    A = np.zeros(M.shape, dtype=bool)
    A[:nb, :nb] = M[:nb, :nb] == _npoints(q, k)
    A[nb:, nb:] = M[nb:, nb:] == _npoints(q, k - 2)
    inc = M[:nb, nb:] == _npoints(q, k - 1)
    A[:nb, nb:] = inc
    A[nb:, :nb] = inc.T
    np.fill_diagonal(A, False)
    if len(V) != gaussian(n, k + 1, q):
        raise AssertionError("vertex count differs from the Grassmann graph")
    return DenseGraph.from_adjacency(A, labels=V)


def munemasa_partition(q: int, k: int, kind: str = "symplectic") -> tuple[DenseGraph, SwitchingPartition]:
    """``J_q(2k+1, k+1)`` with ``D`` = the (k+1)-spaces of ``H`` and one cell per
    pair ``{T, T^σ}`` of k-spaces of ``H``, holding the (k+1)-spaces off ``H``
    whose meet with ``H`` is ``T`` or ``T^σ``."""
    n = 2 * k + 1
    G = grassmann_graph(q, n, k + 1)
    H = hyperplane(q, k)
    sigma = polarity(H, kind)
    D, cells, names = [], {}, {}
    for i, X in enumerate(G.labels):
        if X <= H:
            D.append(i)
            continue
        T = intersect(X, H)
        Ts = sigma(T)
        key = min(T.key, Ts.key), max(T.key, Ts.key)
        cells.setdefault(key, []).append(i)
        names.setdefault(key, (T, Ts))
    keys = sorted(cells)
    part = SwitchingPartition([cells[c] for c in keys], D, G.n, [names[c] for c in keys])
    return G, part


def twisted_grassmann_switch(q: int, k: int, kind: str = "symplectic") -> tuple[DenseGraph, SwitchingPartition]:
    """Godsil-McKay switch of ``J_q(2k+1, k+1)`` along :func:`munemasa_partition`."""
    G, part = munemasa_partition(q, k, kind)
    report = gm_validate(G, part)
    if not report.valid:
        raise ValidationFailed(report)
    S = gm_switch(G, part, report)
    S.labels = G.labels
    return S, part
