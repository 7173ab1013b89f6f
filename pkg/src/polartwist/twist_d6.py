"""D6,6(q) and its Godsil-McKay switch along a fixed Latin.

``Γ`` has the Greeks of O+(12, q) as vertices, adjacent when they meet in a
solid.  A Latin ``L`` is fixed; every Greek meets ``L`` in a hyperplane, a
plane or a point of ``L``.  The Greeks meeting ``L`` in a hyperplane form the
switching set ``D``; the others are grouped by their meet ``S`` with ``L``,
planes being paired with their image under a symplectic polarity of ``L``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graphcore import (
    DenseGraph,
    IntersectionArray,
    SwitchingPartition,
    ValidationReport,
    check_drg,
    distance2_degree,
    gm_switch,
    gm_validate,
    spectrum_certificate,
)
from .graphcore.spectral import drg_eigenvalues
from .linalg import PointIndex, gaussian
from .quadspace import (
    MaximalFamilies,
    QuadraticSpace,
    SizeBudgetExceeded,
    cached_maximals,
    meet_graph_rows,
    point_incidence,
    polarity,
)

MAX_Q = 2


class CoverageGap(AssertionError):
    pass


class ValidationFailed(AssertionError):
    def __init__(self, report: ValidationReport):
        super().__init__(f"switching partition invalid: {report.summary()}")
        self.report = report


class NotFound(LookupError):
    pass


def _npoints(q: int, d: int) -> int:
    return (q**d - 1) // (q - 1)


@dataclass
class D6Context:
    q: int
    space: QuadraticSpace
    fams: MaximalFamilies
    latin_id: int
    kind: str
    l_points: np.ndarray  # (p, 12) points of L
    meet: np.ndarray  # (|Greeks|, p) bool: point of L lies in the Greek
    sigma_perp: np.ndarray  # (p, p) bool: points orthogonal under the polarity
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def L(self):
        return self.fams.latin(self.latin_id)

    @property
    def meet_dims(self) -> np.ndarray:
        counts = self.meet.sum(axis=1)
        lut = {_npoints(self.q, d): d for d in range(7)}
        return np.array([lut.get(int(c), -1) for c in counts], dtype=np.int64)

    def sigma_mask(self, mask: np.ndarray) -> np.ndarray:
        """Image of a subspace of ``L`` (as a point mask) under the polarity."""
        return self.sigma_perp[mask].all(axis=0)


def d6_context(q: int = 2, cache_dir=None, families: MaximalFamilies | None = None, latin_id: int = 0, kind: str = "symplectic") -> D6Context:
    if q > MAX_Q:
        raise SizeBudgetExceeded(f"D6,6({q}) is beyond the supported size (q <= {MAX_Q})")
    space = QuadraticSpace(q, 6)
    fams = families if families is not None else cached_maximals(space, cache_dir)
    L = fams.latin(latin_id)
    pts = PointIndex(space.field, L.dim).vectors
    l_points = space.field.matmul(pts, L.basis)
    meet = point_incidence(space, fams.greeks, l_points)
    sig = polarity(L, kind)
    c = sig.coords(L)  # identity on L's own pivot coordinates
    coords = space.field.matmul(pts, c)
    F = space.field
    perp = ~F.matmul(F.matmul(coords, sig.gram), coords.T).astype(bool)
    return D6Context(q, space, fams, latin_id, kind, l_points, meet, perp)


def build_gamma6(ctx: D6Context) -> DenseGraph:
    """Greeks of O+(12, q), adjacent when they meet in a solid."""
    return DenseGraph.from_row_blocks(meet_graph_rows(ctx.fams, chunk=512), len(ctx.fams.greeks))


@dataclass
class D6Partition:
    partition: SwitchingPartition
    point_cells: int
    plane_cells: int
    self_paired: int
    plane_masks: list  # per plane cell: (mask of π, mask of π^σ)


def build_partition(ctx: D6Context) -> D6Partition:
    """``D`` plus point cells ``X_P`` and plane cells ``X_π ∪ X_{π^σ}``."""
    q = ctx.q
    dims = ctx.meet_dims
    bad = np.nonzero(~np.isin(dims, (1, 3, 5)))[0]
    if len(bad):
        raise CoverageGap(f"Greek {int(bad[0])} meets L in dimension {int(dims[bad[0]])}")
    D = np.nonzero(dims == 5)[0]
    if len(D) != gaussian(6, 5, q):
        raise CoverageGap(f"|D| = {len(D)}, expected {gaussian(6, 5, q)}")
    pt = np.nonzero(dims == 1)[0]
    pt_of = ctx.meet[pt].argmax(axis=1)
    cells: dict = {}
    for g, p in zip(pt.tolist(), pt_of.tolist()):
        cells.setdefault((0, p), []).append(g)
    pl = np.nonzero(dims == 3)[0]
    packed = np.packbits(ctx.meet[pl], axis=1)
    keys = {}
    masks = []
    for g, row in zip(pl.tolist(), packed):
        kb = row.tobytes()
        key = keys.get(kb)
        if key is None:
            m = np.unpackbits(row)[: ctx.meet.shape[1]].astype(bool)
            ms = ctx.sigma_mask(m)
            if ms.sum() != _npoints(q, 3):
                raise AssertionError("polarity does not map planes to planes")
            kbs = np.packbits(ms).tobytes()
            key = (1, min(kb, kbs))
            keys[kb] = key
            keys[kbs] = key
            masks.append((key, m, ms))
        cells.setdefault(key, []).append(g)
    order = sorted(cells)
    part = SwitchingPartition([cells[k] for k in order], D, len(ctx.fams.greeks), order)
    by_key = {k: (m, ms) for k, m, ms in masks}
    plane_masks = [by_key[k] for k in order if k[0] == 1]
    n_point = sum(1 for k in order if k[0] == 0)
    self_paired = sum(1 for m, ms in plane_masks if np.array_equal(m, ms))
    return D6Partition(part, n_point, len(order) - n_point, self_paired, plane_masks)


def validate_and_switch(
    ctx: D6Context, G: DenseGraph, part: D6Partition, strict: bool = True
) -> tuple[DenseGraph, ValidationReport]:
    """Validate both Godsil-McKay conditions and switch.

    With ``strict=False`` the switch goes ahead whenever every vertex of ``D``
    sees none, half or all of each cell, even if the cells are not equitable;
    cospectrality must then be certified separately
    (:func:`cospectrality_certificate`).
    """
    report = gm_validate(G, part.partition)
    if not (report.valid or (report.switchable and not strict)):
        raise ValidationFailed(report)
    return gm_switch(G, part.partition, report, require_equitable=strict), report


@dataclass
class EquitabilityObstruction:
    """``X_π`` and ``X_{π^σ}`` see different numbers of vertices of ``C_P``."""

    plane_cell: int
    point_cell: int
    point: int  # index into ``ctx.l_points``
    from_pi: tuple[int, int]  # (vertex of X_π, its neighbours in C_P)
    from_pi_sigma: tuple[int, int]

    @property
    def valid(self) -> bool:
        return self.from_pi[1] != self.from_pi_sigma[1]


def equitability_obstruction(ctx: D6Context, G: DenseGraph, part: D6Partition) -> EquitabilityObstruction:
    """Explicit pair of vertices in one plane cell with different counts
    into a point cell: a point ``P`` of ``π`` not on ``π^σ``."""
    P = part.partition
    names = P.names
    point_cell = {k[1]: i for i, k in enumerate(names) if k[0] == 0}
    for j, (m, ms) in enumerate(part.plane_masks):
        only = np.nonzero(m & ~ms)[0]
        if not len(only):
            continue
        c = part.point_cells + j
        p = int(only[0])
        cell = P.cells[c]
        rows = ctx.meet[cell]
        a = int(cell[(rows == m).all(axis=1)][0])
        b = int(cell[(rows == ms).all(axis=1)][0])
        target = P.cells[point_cell[p]]
        count = lambda v: int(np.isin(G.neighbors(v), target, assume_unique=True).sum())
        return EquitabilityObstruction(c, point_cell[p], p, (a, count(a)), (b, count(b)))
    raise NotFound("every plane cell is self-paired")


def cospectrality_certificate(G: DenseGraph, Gp: DenseGraph, sample: int = 5, seed: int = 0, trials: int = 4):
    """Spectrum certificates for ``G`` and ``Gp`` against the eigenvalues of
    ``G`` read from its (sampled) intersection array."""
    ia = check_drg(G, sample=sample, seed=seed)
    if not isinstance(ia, IntersectionArray):
        raise ValueError(f"base graph is not distance-regular: {ia}")
    theta = drg_eigenvalues(ia)
    a = spectrum_certificate(G, theta, trials, seed)
    b = spectrum_certificate(Gp, theta, trials, seed)
    return ia, a, b


@dataclass
class HalfWitnessReport:
    checked: int
    holds: int
    other_ok: bool

    @property
    def ok(self) -> bool:
        return self.checked > 0 and self.holds == self.checked and self.other_ok


def half_neighbor_check(ctx: D6Context, part: D6Partition, report: ValidationReport) -> HalfWitnessReport:
    """For ``G`` in ``D`` and a plane cell with ``π ⊆ G`` and ``π^σ ⊄ G``,
    ``G`` sees exactly half of ``C_π``; in every other case none or all."""
    P = part.partition
    sizes = P.sizes
    first_plane = part.point_cells
    checked = holds = 0
    other_ok = True
    for r, g in enumerate(P.D):
        W = ctx.meet[g]
        for j, (m, ms) in enumerate(part.plane_masks):
            c = first_plane + j
            inside = (not (m & ~W).any(), not (ms & ~W).any())
            cnt = report.d_counts[r, c]
            if inside[0] != inside[1]:
                checked += 1
                holds += int(2 * cnt == sizes[c])
            else:
                other_ok &= bool(cnt in (0, sizes[c]))
        for c in range(first_plane):
            other_ok &= bool(report.d_counts[r, c] in (0, sizes[c]))
    return HalfWitnessReport(checked, holds, other_ok)


@dataclass
class NonDrgCertificate:
    u: int
    v: int
    d2_u: int
    d2_v: int
    gamma_d2: tuple[int, int]
    gamma_sample: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        same_in_gamma = self.gamma_d2[0] == self.gamma_d2[1] and len(set(self.gamma_sample.values()) | {self.gamma_d2[0]}) == 1
        return self.d2_u != self.d2_v and same_in_gamma


def non_drg_certificate(Gp: DenseGraph, G: DenseGraph | None = None, order=None, sample: int = 20, seed: int = 0) -> NonDrgCertificate:
    """Two vertices of ``Gp`` with different distance-2 degrees.

    ``order`` lists candidate vertices to try first (for instance ``D``, then
    switched cells).  Distance-2 degrees of the same vertices in ``G`` and of
    ``sample`` random vertices of ``G`` are recorded for comparison.
    """
    cand = list(order) if order is not None else []
    seen = set(cand)
    cand += [v for v in range(Gp.n) if v not in seen]
    base = None
    for v in cand:
        d = distance2_degree(Gp, int(v))
        if base is None:
            base = (int(v), d)
        elif d != base[1]:
            gd = (0, 0)
            samp: dict = {}
            if G is not None:
                gd = (distance2_degree(G, base[0]), distance2_degree(G, int(v)))
                rng = np.random.default_rng(seed)
                for x in rng.choice(G.n, size=min(sample, G.n), replace=False).tolist():
                    samp[int(x)] = distance2_degree(G, int(x))
            return NonDrgCertificate(base[0], int(v), base[1], d, gd, samp)
    raise NotFound("distance-2 graph is regular")


def sampled_intersection_array(G: DenseGraph, sample: int = 100, seed: int = 0):
    return check_drg(G, sample=sample, seed=seed)


def edges_preserved(G: DenseGraph, Gp: DenseGraph, part: SwitchingPartition) -> bool:
    """Edges inside ``D`` and inside the cells' union agree in both graphs."""
    inD = part.owner < 0
    e1, e2 = G.edges(), Gp.edges()

    def keep(e):
        a, b = inD[e[:, 0]], inD[e[:, 1]]
        return e[a == b]

    k1, k2 = keep(e1), keep(e2)
    return k1.shape == k2.shape and bool((k1 == k2).all())
