import numpy as np
import pytest

from polartwist import twist_d5 as d5
from polartwist.graphcore import SrgParams, check_srg, is_maximal_clique
from polartwist.linalg import contains, intersect
from polartwist.quadspace import SizeBudgetExceeded

Q2_PARAMS = (2295, 310, 85, 35)


def test_srg_parameter_formula():
    assert d5.srg_parameters(2) == Q2_PARAMS
    assert d5.srg_parameters(3) == (91840, 3630, 470, 130)
    for q in (2, 3, 4, 5):
        v, k, lam, mu = d5.srg_parameters(q)
        SrgParams(v, k, lam, mu)  # feasibility identity


def test_context_layout(ctx2):
    assert ctx2.nc == 135
    assert len(ctx2.D) == 2160 and len(ctx2.C) == 135
    assert ctx2.n_vertices == 2295
    P = ctx2.P
    for i in (0, 50, 134):
        L = ctx2.line(i)
        assert L.dim == 2 and P <= L and ctx2.space.is_totally_singular(L)
    for v in (135, 1000, 2294):
        kind, G = ctx2.vertex(v)
        assert kind == "greek" and not contains(G, P.basis[0])
        assert ctx2.d_vertex(int(ctx2.D[v - 135])) == v


def test_gamma_srg(gamma2, gamma_prime2):
    assert check_srg(gamma2).as_tuple() == Q2_PARAMS
    assert check_srg(gamma_prime2).as_tuple() == Q2_PARAMS


def test_degree_decomposition(ctx2, gamma_prime2):
    dec = d5.degree_decomposition(ctx2, gamma_prime2)
    assert dec["line"] == dec["line_expected"] == (70, 240)
    assert dec["greek"] == dec["greek_expected"] == (15, 295)


def test_twisted_adjacency_rules(ctx2, gamma_prime2):
    G, nc = gamma_prime2, ctx2.nc
    sp = ctx2.space
    rng = np.random.default_rng(0)
    for _ in range(30):
        a, b = (int(x) for x in rng.integers(0, nc, 2))
        if a != b:
            plane = intersect(sp.perp(ctx2.line(a)), ctx2.line(b)).dim == 2
            assert G.has_edge(a, b) == plane
        x = int(rng.integers(nc, G.n))
        line = int(rng.integers(nc))
        assert G.has_edge(line, x) == (intersect(ctx2.line(line), ctx2.vertex(x)[1]).dim == 1)
        y = int(rng.integers(nc, G.n))
        if x != y:
            assert G.has_edge(x, y) == (intersect(ctx2.vertex(x)[1], ctx2.vertex(y)[1]).dim == 3)


def test_fact_one_counts(ctx2, gamma_prime2):
    seen = {}
    for case in range(1, 7):
        for x, y in d5.sample_case_pairs(ctx2, gamma_prime2, case, 40, seed=case):
            t = d5.classify_common_neighborhood(ctx2, gamma_prime2, x, y)
            assert t.matches
            seen.setdefault((case, t.variant), set()).add(tuple(sorted(t.counts.items())))
    proof = d5.proof_counts(2)
    for key, counts in proof.items():
        if key in seen:
            assert seen[key] == {tuple(sorted(counts.items()))}
    # Fact 1c at q=2: the line variant has 81 Greeks
    assert proof[(1, "line")]["1c"] == 81
    assert seen[(6, "")] == {(("6", 35),)}


def test_fact_one_pair_cases(ctx2, gamma_prime2):
    assert d5.pair_case(ctx2, gamma_prime2, 0, 200) in (2, 5)
    with pytest.raises(ValueError):
        d5.pair_case(ctx2, gamma_prime2, 3, 3)


def test_residue_lemma(ctx2):
    rep = d5.residue_lemma_check(ctx2)
    assert rep.ok
    assert set(rep.dd_dims) == {0, 2, 4} and set(rep.dc_dims) == {1, 3}
    samp = d5.residue_lemma_check(ctx2, sample=5000, seed=1)
    assert samp.ok and samp.mode == "sampled"
    with pytest.raises(ValueError):
        d5.residue_lemma_check(ctx2, sample=10)


@pytest.mark.parametrize("kind", ["i", "ii", "iii", "iv", "v", "vi"])
def test_clique_types_are_maximal(ctx2, gamma_prime2, kind):
    checks = d5.clique_family(ctx2, gamma_prime2, kind)
    assert checks and all(c.ok for c in checks)
    a, b = d5.clique_type_formula(2, kind)
    assert {len(c.vertices) for c in checks} == {a + b}


def test_clique_type_vii_is_not_maximal(ctx2, gamma_prime2):
    checks = d5.clique_family(ctx2, gamma_prime2, "vii")
    for c in checks:
        assert c.is_clique and c.split == c.expected == (7, 16)
        assert c.extenders == 8 and not c.maximal


def test_unlisted_clique_type(ctx2, gamma_prime2):
    # a Latin not through P and a point of it in P^perp
    e0 = ctx2.P.basis[0]
    lat = next(i for i in range(len(ctx2.fams.latins)) if not contains(ctx2.fams.latin(i), e0))
    L = ctx2.fams.latin(lat)
    R = next(v for v in L.vectors()[1:] if v[1] == 0)
    vs = d5.latin_point_clique(ctx2, lat, R)
    assert len(vs) == 15 and int((vs < ctx2.nc).sum()) == 1
    assert is_maximal_clique(gamma_prime2, vs.tolist())
    assert (15, 1, 14) not in d5.census_types(2)


def test_clique_intersections(ctx2, gamma2):
    rep = d5.clique_intersection_check(ctx2, gamma2, pairs=500)
    assert rep.ok
    assert rep.sizes == {"line": 15, "solid": 31}
    assert rep.line_in_solid == 7 and rep.coplanar_lines == 3


def test_census_bookkeeping():
    types = d5.census_types(2)
    assert types[(30, 0, 30)] == ["iv", "v"]
    assert types[(23, 7, 16)] == ["vii"]
    cert = d5.non_isomorphism_certificate(2, {15: 23715, 31: 2295}, {15: 38835, 16: 17280, 30: 2160, 31: 135})
    assert cert.valid and cert.size == 16
    assert not d5.non_isomorphism_certificate(2, {16: 1}, {16: 1}).valid
    assert d5.unlisted_types(2, {(15, 1, 14): 5, (16, 1, 15): 2}) == {(15, 1, 14): 5}


def test_budget():
    from polartwist.graphcore import complete_graph

    with pytest.raises(SizeBudgetExceeded):
        d5.d5_context(7)
    big = complete_graph(3)
    big.n = 10**6
    with pytest.raises(SizeBudgetExceeded):
        d5.maximal_clique_census(big)
