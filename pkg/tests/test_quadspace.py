import numpy as np
import pytest

from polartwist.gf import field_new
from polartwist.linalg import enumerate_subspaces, gaussian, intersect, span, whole_space
from polartwist.quadspace import (
    NotSingular,
    PolarIndex,
    QuadraticSpace,
    Residue,
    cached_maximals,
    enumerate_maximals,
    enumerate_singular_points,
    family_size,
    hyperbolic_basis,
    load_families,
    maximal_family,
    meet_graph_rows,
    point_incidence,
    polar_point_count,
    polarity,
    save_families,
    ts_lines_through,
)


@pytest.fixture(scope="module")
def o8():
    sp = QuadraticSpace(2, 4)
    return sp, enumerate_maximals(sp)


def brute_maximals(sp):
    return [U for U in enumerate_subspaces(whole_space(sp.field, sp.dim), sp.n) if sp.is_totally_singular(U)]


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (2, 3), (3, 3), (4, 2)])
def test_maximals_match_brute_force(q, n):
    sp = QuadraticSpace(q, n)
    fams = enumerate_maximals(sp)
    brute = brute_maximals(sp)
    found = [fams.greek(i) for i in range(len(fams.greeks))] + [fams.latin(i) for i in range(len(fams.latins))]
    assert set(found) == set(brute)
    assert len(fams.greeks) == len(fams.latins) == family_size(n, q)


def test_family_parity(o8):
    sp, fams = o8
    G = [fams.greek(i) for i in range(0, 135, 9)]
    L = [fams.latin(i) for i in range(0, 135, 9)]
    for A in G:
        assert all(intersect(A, B).dim % 2 == 0 for B in G)
        assert all(intersect(A, B).dim % 2 == 1 for B in L)
        assert maximal_family(sp, A) == "greek"
    assert fams.greek(0) == sp.reference_greek() or fams.locate(sp.reference_greek())[0] == "greek"


def test_singular_point_counts():
    for q, n in [(2, 2), (3, 2), (2, 3), (2, 5)]:
        sp = QuadraticSpace(q, n)
        assert len(sp.singular_point_ids) == polar_point_count(n, q)
    assert polar_point_count(5, 2) == 527


def test_form_and_perp():
    sp = QuadraticSpace(3, 2)
    e = np.eye(4, dtype=np.uint8)
    assert sp.Q(e[0] + e[1]) == 1
    assert sp.B(e[0], e[1]) == 1 and sp.B(e[0], e[2]) == 0
    P = sp.point(e[0])
    assert sp.perp(P).dim == 3 and P <= sp.perp(P)


def test_hyperbolic_basis_of_standard_form():
    sp = QuadraticSpace(5, 3)
    assert (hyperbolic_basis(sp, np.eye(6, dtype=np.uint8)[0]) == np.eye(6, dtype=np.uint8)).all()
    H = hyperbolic_basis(sp, np.array([1, 1, 1, 4, 0, 0], dtype=np.uint8))
    assert (sp.Q(H) == 0).all()
    gram = sp.B(H[:, None, :], H[None, :, :])
    assert (gram == np.kron(np.eye(3, dtype=int), [[0, 1], [1, 0]])).all()


def test_residue_round_trip():
    sp = QuadraticSpace(2, 4)
    P = sp.point(np.array([1, 1, 1, 1, 0, 0, 0, 0], dtype=np.uint8))
    res = Residue(sp, P)
    assert res.space.dim == 6
    lines = ts_lines_through(sp, P)
    assert len(lines) == polar_point_count(3, 2)
    for L in lines[:10]:
        assert P <= L and sp.is_totally_singular(L)
        assert res.lift_subspace(res.project_subspace(L)) == L
    with pytest.raises(NotSingular):
        Residue(sp, sp.point(np.array([1, 1, 0, 0, 0, 0, 0, 0], dtype=np.uint8)))


def test_cache_round_trip(tmp_path, o8):
    sp, fams = o8
    digest = save_families(fams, tmp_path / "f.npz")
    again = load_families(sp, tmp_path / "f.npz")
    assert again.content_hash() == digest
    other = QuadraticSpace(2, 3)
    with pytest.raises(ValueError):
        load_families(other, tmp_path / "f.npz")
    via = cached_maximals(sp, tmp_path / "cache")
    assert cached_maximals(sp, tmp_path / "cache").content_hash() == via.content_hash()


def test_locate(o8):
    sp, fams = o8
    assert fams.locate(fams.latin(17)) == ("latin", 17)
    assert fams.locate(span(sp.field, np.eye(8, dtype=np.uint8)[:2], 8)) is None


def test_point_incidence(o8):
    sp, fams = o8
    pts = enumerate_singular_points(sp)
    V = np.vstack([P.basis for P in pts])
    inc = point_incidence(sp, fams.greeks[:20], V)
    for i in range(20):
        G = fams.greek(i)
        assert inc[i].tolist() == [P <= G for P in pts]
    assert (inc.sum(axis=1) == 15).all()


def test_meet_graph_rows(o8):
    sp, fams = o8
    nbrs = np.concatenate([b for _, b in meet_graph_rows(fams)])
    # Greeks of O+(8,2) meeting in a line: the triality image of collinearity
    assert nbrs.shape == (135, 70)
    for g in range(0, 135, 11):
        G = fams.greek(g)
        want = [h for h in range(135) if h != g and intersect(G, fams.greek(h)).dim == 2]
        assert sorted(nbrs[g].tolist()) == want


def test_polarity():
    F = field_new(3)
    L = span(F, np.eye(6, dtype=np.uint8)[:4], 6)
    for kind in ("symplectic", "orthogonal"):
        s = polarity(L, kind)
        for U in list(enumerate_subspaces(L, 1))[:8]:
            assert s(U).dim == 3 and s(s(U)) == U
    with pytest.raises(ValueError):
        polarity(span(F, np.eye(6, dtype=np.uint8)[:3], 6), "symplectic")


def test_polar_index():
    sp = QuadraticSpace(2, 3)
    idx = PolarIndex(sp)
    assert len(idx.points) == 35 and len(idx.greeks) == 15
    assert len(idx.lines_through(idx.points[0])) == polar_point_count(2, 2)


def test_budget_guard():
    from polartwist.quadspace import SizeBudgetExceeded

    with pytest.raises(SizeBudgetExceeded):
        enumerate_maximals(QuadraticSpace(7, 5))
