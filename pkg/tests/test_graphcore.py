import itertools

import networkx as nx
import numpy as np
import pytest

from polartwist.graphcore import (
    CounterexampleReport,
    DenseGraph,
    Disconnected,
    FormatOverflow,
    GraphError,
    IntersectionArray,
    NotAnEdge,
    NotSRG,
    SrgParams,
    bfs_distances,
    charpoly_fingerprint,
    charpoly_mod,
    check_drg,
    check_srg,
    clique_census,
    common_neighbors,
    complete_graph,
    cospectral,
    cycle_graph,
    distance2_degree,
    export,
    four_vertex_condition,
    fvc_counts,
    fvc_neighbor_counts,
    from_edgelist,
    from_graph6,
    is_maximal_clique,
    json_report,
    maximal_cliques,
    maximal_cliques_through_edge,
    path_graph,
    petersen_graph,
    random_primes,
    rook_graph,
    star_graph,
    to_edgelist,
    to_graph6,
)
from polartwist.graphcore.charpoly import is_prime


def shrikhande():
    edges = []
    for a, b in itertools.product(range(4), repeat=2):
        for da, db in ((0, 1), (1, 0), (1, 1)):
            edges.append((4 * a + b, 4 * ((a + da) % 4) + (b + db) % 4))
    return DenseGraph.from_edges(16, edges)


# -- container ---------------------------------------------------------------


def test_construction_routes_agree():
    P = petersen_graph()
    assert P.n == 10 and P.num_edges == 15 and set(P.degrees.tolist()) == {3}
    A = P.adjacency()
    assert DenseGraph.from_adjacency(A) == P
    assert DenseGraph.from_neighbor_lists([P.neighbors(v) for v in range(10)]) == P
    assert DenseGraph.from_networkx(P.to_networkx()) == P
    blocks = [(np.arange(0, 4), [P.neighbors(v) for v in range(4)]), (np.arange(4, 10), [P.neighbors(v) for v in range(4, 10)])]
    assert DenseGraph.from_row_blocks(blocks, 10) == P


def test_rejects_loops_and_asymmetry():
    with pytest.raises(GraphError):
        DenseGraph.from_edges(3, [(1, 1)])
    A = np.zeros((3, 3), dtype=np.uint8)
    A[0, 1] = 1
    with pytest.raises(GraphError):
        DenseGraph.from_adjacency(A)


def test_complement_induced_relabel():
    C5 = cycle_graph(5)
    assert C5.complement() == C5.relabel([0, 2, 4, 1, 3])
    assert path_graph(4).induced([1, 2, 3]).num_edges == 2
    assert star_graph(4).degrees.tolist() == [4, 1, 1, 1, 1]


def test_bfs_and_distance2():
    P = petersen_graph()
    d = bfs_distances(P, 0)
    assert np.bincount(d).tolist() == [1, 3, 6]
    assert distance2_degree(P, 0) == 6
    assert (bfs_distances(DenseGraph.from_edges(3, [(0, 1)]), 0) == [0, 1, -1]).all()


# -- SRG / DRG / 4VC ---------------------------------------------------------


@pytest.mark.parametrize(
    "G,params",
    [
        (petersen_graph(), (10, 3, 0, 1)),
        (cycle_graph(5), (5, 2, 0, 1)),
        (rook_graph(3), (9, 4, 1, 2)),
        (rook_graph(4), (16, 6, 2, 2)),
        (shrikhande(), (16, 6, 2, 2)),
    ],
)
def test_check_srg_known(G, params):
    res = check_srg(G)
    assert isinstance(res, SrgParams) and res.as_tuple() == params
    res = check_srg(G, sample=4, seed=1)
    assert res.as_tuple() == params and res.mode == "sampled"


def test_check_srg_counterexamples():
    res = check_srg(cycle_graph(6))
    assert isinstance(res, CounterexampleReport) and not res
    res = check_srg(path_graph(4))
    assert isinstance(res, CounterexampleReport)
    with pytest.raises(ValueError):
        check_srg(petersen_graph(), sample=3)


def test_srg_params_feasibility_and_complement():
    with pytest.raises(ValueError):
        SrgParams(10, 3, 1, 1)
    assert SrgParams(10, 3, 0, 1).complement().as_tuple() == (10, 6, 3, 4)


def test_check_drg():
    ia = check_drg(petersen_graph())
    assert isinstance(ia, IntersectionArray) and str(ia) == "{3,2;1,1}"
    assert check_drg(cycle_graph(7)).as_lists() == ([2, 1, 1], [1, 1, 1])
    hyper = DenseGraph.from_edges(8, [(a, a ^ (1 << i)) for a in range(8) for i in range(3)])
    assert str(check_drg(hyper, sample=3, seed=0)) == "{3,2,1;1,2,3}"
    assert isinstance(check_drg(path_graph(4)), CounterexampleReport)
    with pytest.raises(Disconnected):
        check_drg(DenseGraph.from_edges(4, [(0, 1), (2, 3)]))


def test_drg_agrees_with_networkx():
    g = nx.generators.small.heawood_graph()
    ia = check_drg(DenseGraph.from_networkx(g))
    b, c = nx.intersection_array(g)
    assert list(ia.b) == b and list(ia.c) == c


def test_four_vertex_condition():
    # rook graphs satisfy it; Shrikhande is an SRG that does not
    res = four_vertex_condition(rook_graph(4))
    assert (res.alpha, res.beta) == (1, 0)
    assert isinstance(four_vertex_condition(shrikhande()), CounterexampleReport)
    with pytest.raises(NotSRG):
        four_vertex_condition(cycle_graph(6))
    res = four_vertex_condition(rook_graph(4), sample=10, seed=3)
    assert (res.alpha, res.beta, res.mode) == (1, 0, "sampled")


def test_fvc_neighbor_counts_match_dense():
    for G in (shrikhande(), rook_graph(4), petersen_graph()):
        for x in (0, 5):
            assert fvc_neighbor_counts(G, x).tolist() == fvc_counts(G, x)[G.neighbors(x)].tolist()
    # Shrikhande: the neighbourhood of a vertex is a hexagon, so no triangles
    assert set(fvc_neighbor_counts(shrikhande(), 0).tolist()) == {0}


def test_common_neighbors():
    assert common_neighbors(rook_graph(3), 0, 1).tolist() == [2]
    with pytest.raises(ValueError):
        common_neighbors(rook_graph(3), 0, 0)


# -- cliques -----------------------------------------------------------------


def test_cliques_match_networkx():
    rng = np.random.default_rng(0)
    for _ in range(15):
        g = nx.gnp_random_graph(25, 0.4, seed=int(rng.integers(1 << 30)))
        G = DenseGraph.from_networkx(g)
        ours = set(maximal_cliques(G))
        theirs = {frozenset(c) for c in nx.find_cliques(g)}
        assert ours == theirs
        assert clique_census(ours) == clique_census(theirs)


def test_cliques_through_edge():
    assert maximal_cliques_through_edge(complete_graph(4), 0, 1) == [frozenset(range(4))]
    P = petersen_graph()
    y = int(P.neighbors(0)[0])
    assert maximal_cliques_through_edge(P, 0, y) == [frozenset({0, y})]
    assert len(maximal_cliques_through_edge(rook_graph(3), 0, 1)) == 1
    with pytest.raises(NotAnEdge):
        maximal_cliques_through_edge(P, 0, int(np.setdiff1d(np.arange(1, 10), P.neighbors(0))[0]))
    assert is_maximal_clique(rook_graph(3), [0, 1, 2])
    assert not is_maximal_clique(complete_graph(4), [0, 1])


# -- characteristic polynomials ----------------------------------------------


def test_charpoly_matches_integer_charpoly():
    P = petersen_graph()
    # (x-3)(x-1)^5(x+2)^4
    poly = np.poly1d([1, -3]) * np.poly1d([1, -1]) ** 5 * np.poly1d([1, 2]) ** 4
    p = 1000003
    want = tuple(int(c) % p for c in poly.coeffs)
    assert charpoly_mod(P.adjacency(), p) == want


def test_cospectral_pair():
    # K_{1,4} and C4 + K1 share the spectrum {2, 0^3, -2}
    c4k1 = DenseGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert cospectral(star_graph(4), c4k1)
    assert not cospectral(star_graph(4), path_graph(5))
    assert cospectral(rook_graph(4), shrikhande())
    fp = charpoly_fingerprint(shrikhande())
    assert fp.collision_bound() < 1e-15 and len(fp.primes) == 3


def test_primes():
    ps = random_primes(4, seed=9)
    assert len(set(ps)) == 4 and all(is_prime(p) and p < 1 << 31 for p in ps)
    assert random_primes(4, seed=9) == ps
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


# -- export ------------------------------------------------------------------


@pytest.mark.parametrize("n", [0, 1, 5, 62, 63, 100])
def test_graph6_header_lengths(n):
    G = DenseGraph.from_edges(n, [(0, 1)] if n > 1 else [])
    data = to_graph6(G)
    assert from_graph6(data).n == n


def test_graph6_against_networkx():
    rng = np.random.default_rng(4)
    for n in (5, 20, 70):
        g = nx.gnp_random_graph(n, 0.3, seed=int(rng.integers(1 << 30)))
        G = DenseGraph.from_networkx(g)
        ref = nx.to_graph6_bytes(g, header=False).strip()
        assert to_graph6(G) == ref
        assert from_graph6(ref) == G
    assert to_graph6(petersen_graph(), header=True).startswith(b">>graph6<<")


def test_edgelist_round_trip():
    P = petersen_graph()
    assert from_edgelist(to_edgelist(P), 10) == P


def test_json_report_is_stable():
    a = json_report("demo", 2, {"v": 10}, [{"name": "srg", "pass": True, "details": SrgParams(10, 3, 0, 1)}], {})
    b = json_report("demo", 2, {"v": 10}, [{"name": "srg", "pass": True, "details": SrgParams(10, 3, 0, 1)}], {})
    assert a == b and b'"schema": 1' in a
    assert export(petersen_graph(), "graph6") == to_graph6(petersen_graph())


def test_graph6_size_field():
    from polartwist.graphcore.export import _n_bytes

    assert _n_bytes(62) == bytes([125])
    assert _n_bytes(63) == bytes([126, 63 + 0, 63 + 0, 63 + 63])
    assert len(_n_bytes(258047)) == 4 and len(_n_bytes(258048)) == 8
    with pytest.raises(FormatOverflow):
        _n_bytes(1 << 36)
