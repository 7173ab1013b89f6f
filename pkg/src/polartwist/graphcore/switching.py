"""Godsil-McKay switching: partition validation and the switch itself."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import DenseGraph


class NotAPartition(ValueError):
    pass


class InvalidPartition(ValueError):
    pass


@dataclass
class SwitchingPartition:
    """Cells ``C_1..C_t`` and the switching set ``D``; together all vertices."""

    cells: list[np.ndarray]
    D: np.ndarray
    n: int
    names: list | None = None

    def __post_init__(self):
        self.cells = [np.sort(np.asarray(c, dtype=np.int64)) for c in self.cells]
        self.D = np.sort(np.asarray(self.D, dtype=np.int64))
        owner = np.full(self.n, -2, dtype=np.int64)
        for i, c in enumerate(self.cells):
            if not len(c):
                raise NotAPartition(f"cell {i} is empty")
            if (owner[c] != -2).any():
                raise NotAPartition(f"cell {i} overlaps another part")
            owner[c] = i
        if (owner[self.D] != -2).any():
            raise NotAPartition("D overlaps a cell")
        owner[self.D] = -1
        if (owner == -2).any():
            raise NotAPartition(f"vertex {int(np.argmax(owner == -2))} lies in no part")
        self.owner = owner

    @property
    def sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.cells], dtype=np.int64)


@dataclass
class Violation:
    kind: str  # "equitable" or "switching"
    vertex: int
    cell: int
    count: int
    expected: object


@dataclass
class ValidationReport:
    valid: bool
    cells: int
    d_size: int
    violations: list[Violation] = field(default_factory=list)
    quotient: np.ndarray | None = None  # quotient[i, j]: neighbours in C_j of a vertex of C_i
    d_counts: np.ndarray | None = None  # d_counts[r, j]: neighbours of D[r] in C_j
    half_pairs: int = 0
    equitable: bool = True  # condition (a)
    switchable: bool = True  # condition (b): the switch is well defined

    def summary(self) -> dict:
        return {
            "valid": self.valid,
            "equitable": self.equitable,
            "switchable": self.switchable,
            "cells": self.cells,
            "switching_set": self.d_size,
            "violations": len(self.violations),
            "half_pairs": self.half_pairs,
            "first_violations": [v.__dict__ for v in self.violations[:5]],
        }


def cell_counts(G: DenseGraph, owner: np.ndarray, t: int, vertices: np.ndarray) -> np.ndarray:
    """Neighbour counts of ``vertices`` in each cell (``owner`` -1 marks D)."""
    out = np.zeros((len(vertices), t), dtype=np.int64)
    for s in range(0, len(vertices), 2048):
        vs = vertices[s : s + 2048]
        parts = [owner[G.neighbors(int(v))] for v in vs]
        lens = np.array([len(x) for x in parts])
        rows = np.repeat(np.arange(len(vs)), lens)
        cells = np.concatenate(parts) if parts else np.zeros(0, np.int64)
        keep = cells >= 0
        flat = np.bincount(rows[keep] * t + cells[keep], minlength=len(vs) * t)
        out[s : s + len(vs)] = flat.reshape(len(vs), t)
    return out


def gm_validate(G: DenseGraph, part: SwitchingPartition, max_violations: int = 1000) -> ValidationReport:
    """Check both Godsil-McKay conditions and list every violation found.

    (a) the cells are equitable in the subgraph induced on the cells;
    (b) each vertex of D has 0, |C|/2 or |C| neighbours in every cell C
        (|C|/2 only counts when |C| is even).
    """
    if part.n != G.n:
        raise NotAPartition("partition is for a different vertex count")
    t = len(part.cells)
    sizes = part.sizes
    viol: list[Violation] = []
    quotient = np.zeros((t, t), dtype=np.int64)
    n_eq = 0
    for i, c in enumerate(part.cells):
        cnt = cell_counts(G, part.owner, t, c)
        quotient[i] = cnt[0]
        n_eq += int((cnt != cnt[0]).sum())
        bad_rows = np.nonzero((cnt != cnt[0]).any(axis=1))[0]
        for r in bad_rows:
            for j in np.nonzero(cnt[r] != cnt[0])[0]:
                if len(viol) < max_violations:
                    viol.append(Violation("equitable", int(c[r]), int(j), int(cnt[r, j]), int(cnt[0, j])))
    dc = cell_counts(G, part.owner, t, part.D)
    half = np.where(sizes % 2 == 0, sizes // 2, -1)
    ok = (dc == 0) | (dc == sizes[None, :]) | (dc == half[None, :])
    for r, j in zip(*np.nonzero(~ok)):
        if len(viol) < max_violations:
            viol.append(Violation("switching", int(part.D[r]), int(j), int(dc[r, j]), (0, int(half[j]), int(sizes[j]))))
    n_sw = int((~ok).sum())
    return ValidationReport(
        valid=n_eq == 0 and n_sw == 0,
        cells=t,
        d_size=len(part.D),
        violations=viol,
        quotient=quotient,
        d_counts=dc,
        half_pairs=int(((dc == half[None, :]) & (half[None, :] > 0)).sum()),
        equitable=n_eq == 0,
        switchable=n_sw == 0,
    )


def gm_switch(
    G: DenseGraph, part: SwitchingPartition, report: ValidationReport | None = None, require_equitable: bool = True
) -> DenseGraph:
    """Complement the adjacency between ``x`` in D and each cell where ``x``
    has exactly half of its neighbours.

    With ``require_equitable=False`` only condition (b) is enforced; the
    result is then well defined but no longer guaranteed cospectral.
    """
    report = gm_validate(G, part) if report is None else report
    if not (report.valid or (report.switchable and not require_equitable)):
        raise InvalidPartition(f"{len(report.violations)} violations, first: {report.violations[0]}")
    sizes = part.sizes
    toggles = []
    for r, x in enumerate(part.D):
        for j in np.nonzero((report.d_counts[r] * 2 == sizes) & (sizes > 0))[0]:
            toggles.append(np.stack([np.full(sizes[j], x), part.cells[j]], axis=1))
    if not toggles:
        return DenseGraph(G.n, G.indptr.copy(), G.indices.copy(), G.labels, check=False)
    t = np.concatenate(toggles)
    t = np.concatenate([t, t[:, ::-1]])
    order = np.lexsort((t[:, 1], t[:, 0]))
    t = t[order]
    rows, starts = np.unique(t[:, 0], return_index=True)
    ends = np.append(starts[1:], len(t))
    new_rows = {}
    for v, s, e in zip(rows, starts, ends):
        new_rows[int(v)] = np.setxor1d(G.neighbors(int(v)), t[s:e, 1]).astype(np.int32)
    parts = []
    lens = np.diff(G.indptr).copy()
    for v in range(G.n):
        if v in new_rows:
            parts.append(new_rows[v])
            lens[v] = len(new_rows[v])
        else:
            parts.append(G.neighbors(v))
    indptr = np.zeros(G.n + 1, dtype=np.int64)
    np.cumsum(lens, out=indptr[1:])
    return DenseGraph(G.n, indptr, np.concatenate(parts), G.labels, check=False)


def planted_instance(rng: np.random.Generator, cells: int = 3, size: int = 4, d: int = 5) -> tuple[DenseGraph, SwitchingPartition]:
    """Random graph with a valid Godsil-McKay partition planted in it.

    Every cell has ``size`` (even) vertices.  Blocks inside and between cells
    are circulants under a random labelling, so the cells are equitable; each
    vertex of ``D`` sees none, all, or a random half of each cell.
    """
    if size % 2:
        raise ValueError("cell size must be even")
    n = d + cells * size
    perm = rng.permutation(n)
    D = perm[:d]
    C = [perm[d + i * size : d + (i + 1) * size] for i in range(cells)]
    edges = []
    half = size // 2
    for i in range(cells):
        # symmetric connection set inside the cell
        S = {s for s in range(1, half + 1) if rng.random() < 0.5}
        edges += [(C[i][a], C[i][(a + s) % size]) for a in range(size) for s in S]
        for j in range(i + 1, cells):
            T = [s for s in range(size) if rng.random() < 0.5]
            edges += [(C[i][a], C[j][(a + s) % size]) for a in range(size) for s in T]
    for x in D:
        for c in C:
            kind = rng.integers(3)
            if kind == 1:
                edges += [(x, v) for v in c]
            elif kind == 2:
                edges += [(x, v) for v in rng.choice(c, size=half, replace=False)]
    for a in range(d):
        for b in range(a + 1, d):
            if rng.random() < 0.5:
                edges.append((D[a], D[b]))
    return DenseGraph.from_edges(n, edges), SwitchingPartition(C, D, n)
