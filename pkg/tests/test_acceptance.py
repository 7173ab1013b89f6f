"""Acceptance checks, one or more tests per criterion.

Every test reports through the ``acceptance`` fixture, which prints a
``criterion N: PASS|FAIL ...`` line and feeds the summary printed at the end
of the session.  Parts that cannot be met are marked ``xfail(strict=True)``:
they print FAIL, and the suite turns red if they ever start passing.

The q = 3 graphs need about 3 GB each, so those tests build, check and drop
them one at a time before the D6,6 fixtures come into play.
"""
import gc
import resource
import time

import numpy as np
import pytest

from conftest import TIMINGS, Timer
from polartwist import twist_d5 as d5
from polartwist import twist_d6 as d6
from polartwist.gf import field_new
from polartwist.graphcore import (
    CounterexampleReport,
    IntersectionArray,
    SrgParams,
    charpoly_fingerprint,
    check_drg,
    check_srg,
    four_vertex_condition,
    fvc_neighbor_counts,
    gm_switch,
    gm_validate,
)
from polartwist.graphcore.switching import planted_instance
from polartwist.grassmann import (
    grassmann_graph,
    munemasa_partition,
    twisted_grassmann_switch,
    twisted_grassmann_vertexswap,
)
from polartwist.linalg import enumerate_subspaces, gaussian, whole_space
from polartwist.quadspace import QuadraticSpace, enumerate_maximals, family_size


def peak_rss_gb() -> float:
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 2**20


# --------------------------------------------------------------------------
# 1. fields and subspaces


def test_c1_fields_and_subspace_counts(acceptance):
    t = time.perf_counter()
    bad = {q: field_new(q).axiom_violations() for q in (2, 3, 4, 5)}
    axioms = not any(bad.values())
    mismatches = []
    for q in (2, 3):
        F = field_new(q)
        for n in range(1, 7):
            V = whole_space(F, n)
            for k in range(n + 1):
                got = sum(1 for _ in enumerate_subspaces(V, k))
                if got != gaussian(n, k, q):
                    mismatches.append((q, n, k, got))
    dt = time.perf_counter() - t
    ok = axioms and not mismatches and dt < 60
    acceptance(1, ok, f"axioms q=2,3,4,5 {'hold' if axioms else bad}; subspace counts n<=6 q=2,3 mismatches={mismatches}; {dt:.1f}s")
    assert ok


# --------------------------------------------------------------------------
# 2. maximal totally singular subspaces


def test_c2_greek_counts(acceptance, fams10, fams12):
    with Timer("O+(10,2) rerun") as t10:
        again = enumerate_maximals(QuadraticSpace(2, 5))
    t12 = TIMINGS.get("enumerate O+(12,2)")
    if t12 is None:  # the fixture already existed when this test ran
        with Timer("O+(12,2) rerun") as tm:
            enumerate_maximals(QuadraticSpace(2, 6))
        t12 = tm.elapsed
    n10, n12 = len(fams10.greeks), len(fams12.greeks)
    ok10 = n10 == len(again.greeks) == family_size(5, 2) == 2295 and t10.elapsed < 10
    ok12 = n12 == family_size(6, 2) == 75735 and t12 < 600
    acceptance(2, ok10, f"O+(10,2): {n10} Greeks in {t10.elapsed:.2f}s")
    acceptance(2, ok12, f"O+(12,2): {n12} Greeks in {t12:.1f}s")
    assert ok10 and ok12


# --------------------------------------------------------------------------
# q = 3 work first, while memory is still free


def _ctx3(cache_dir):
    return d5.d5_context(3, cache_dir)


def test_c3_srg_q3_sampled(acceptance, cache_dir):
    want = d5.srg_parameters(3)
    ctx = _ctx3(cache_dir)
    results = {}
    for name, build in (("Γ", d5.build_gamma), ("Γ'", d5.build_gamma_prime)):
        t = time.perf_counter()
        G = build(ctx)
        res = check_srg(G, sample=100, seed=7)
        results[name] = res
        ok = isinstance(res, SrgParams) and res.as_tuple() == want
        acceptance(3, ok, f"q=3 {name}: sampled scan (100 bases, seed 7) -> {getattr(res, 'as_tuple', lambda: res)()} in {time.perf_counter() - t:.0f}s")
        del G
        gc.collect()
    assert all(isinstance(r, SrgParams) and r.as_tuple() == want for r in results.values())
    assert want == (91840, 3630, 470, 130)


@pytest.mark.xfail(strict=True, reason="Γ' at q=3 shows no 4-vertex violation; see the decisions ledger")
def test_c7_four_vertex_q3_sampled(acceptance, cache_dir):
    ctx = _ctx3(cache_dir)
    Gp = d5.build_gamma_prime(ctx)
    t = time.perf_counter()
    res = four_vertex_condition(Gp, sample=1000, seed=7, srg=SrgParams(*d5.srg_parameters(3)))
    # every adjacent partner of a few line and Greek vertices
    bases = [0, ctx.nc // 2, ctx.nc - 1, ctx.nc, Gp.n // 2, Gp.n - 1]
    seen = {int(v) for x in bases for v in np.unique(fvc_neighbor_counts(Gp, x))}
    violated = isinstance(res, CounterexampleReport) or len(seen) > 1
    detail = (
        f"q=3 Γ': {res.pairs} sampled pairs give constant (alpha, beta) = ({res.alpha}, {res.beta}); "
        f"all adjacent partners of {len(bases)} bases give {sorted(seen)}; no violating pair"
        if not violated
        else f"q=3 Γ': violation {res}"
    )
    acceptance(7, violated and time.perf_counter() - t < 600, detail)
    del Gp
    gc.collect()
    assert violated


# --------------------------------------------------------------------------
# 3-7 at q = 2


def test_c3_srg_q2_full(acceptance, gamma2, gamma_prime2):
    for name, G in (("Γ", gamma2), ("Γ'", gamma_prime2)):
        t = time.perf_counter()
        res = check_srg(G)
        dt = time.perf_counter() - t
        ok = isinstance(res, SrgParams) and res.as_tuple() == (2295, 310, 85, 35) and dt < 300
        acceptance(3, ok, f"q=2 {name}: full scan -> {getattr(res, 'as_tuple', lambda: res)()} in {dt:.1f}s")
        assert ok


def test_c4_fact_one(acceptance, ctx2, gamma_prime2):
    t = time.perf_counter()
    total_bad = 0
    for case in range(1, 7):
        pairs = d5.sample_case_pairs(ctx2, gamma_prime2, case, 1000, seed=100 + case)
        bad = sum(not d5.classify_common_neighborhood(ctx2, gamma_prime2, x, y, strict=False).matches for x, y in pairs)
        total_bad += bad
        acceptance(4, bad == 0 and len(pairs) >= 1000, f"case {case}: {len(pairs)} pairs, {bad} set mismatches")
    dt = time.perf_counter() - t
    acceptance(4, dt < 600, f"classification runtime {dt:.0f}s")
    assert total_bad == 0 and dt < 600


def test_c5_residue_full(acceptance, ctx2):
    t = time.perf_counter()
    rep = d5.residue_lemma_check(ctx2)
    dt = time.perf_counter() - t
    ok = rep.ok and set(rep.dd_dims) <= {0, 2, 4} and set(rep.dc_dims) <= {1, 3} and dt < 300
    acceptance(5, ok, f"D x D dims {rep.dd_dims}, D x C dims {rep.dc_dims}, {len(rep.violations)} violations, {dt:.1f}s")
    assert ok


@pytest.fixture(scope="module")
def censuses(gamma2, gamma_prime2):
    t = time.perf_counter()
    cg, _ = d5.maximal_clique_census(gamma2)
    cgp, cliques = d5.maximal_clique_census(gamma_prime2)
    return {"gamma": cg, "gamma_prime": cgp, "cliques": cliques, "seconds": time.perf_counter() - t}


@pytest.mark.parametrize("kind", ["i", "ii", "iii", "iv", "v", "vi"])
def test_c6_listed_types_are_maximal(acceptance, ctx2, gamma_prime2, kind):
    checks = d5.clique_family(ctx2, gamma_prime2, kind)
    size = sum(d5.clique_type_formula(2, kind))
    ok = all(c.ok for c in checks) and {len(c.vertices) for c in checks} == {size}
    acceptance(6, ok, f"type ({kind}): {len(checks)} maximal cliques of size {size}")
    assert ok


def test_c6_gamma_census_and_non_isomorphism(acceptance, censuses):
    cg, cgp = censuses["gamma"], censuses["gamma_prime"]
    ok_g = set(cg) == {15, 31}
    cert = d5.non_isomorphism_certificate(2, cg, cgp)
    acceptance(6, ok_g, f"Γ census {cg}")
    acceptance(6, cert.valid, f"Γ' has {cgp.get(16, 0)} maximal 16-cliques and Γ has none: not isomorphic")
    acceptance(6, censuses["seconds"] < 7200, f"census runtime {censuses['seconds']:.0f}s")
    assert ok_g and cert.valid


@pytest.mark.xfail(strict=True, reason="type (vii) is not maximal; see the decisions ledger")
def test_c6_type_vii_maximal(acceptance, ctx2, gamma_prime2):
    checks = d5.clique_family(ctx2, gamma_prime2, "vii")
    ok = all(c.ok for c in checks)
    acceptance(6, ok, f"type (vii): split {checks[0].split}, {checks[0].extenders} common extenders, maximal={checks[0].maximal}")
    assert ok


@pytest.mark.xfail(strict=True, reason="the census has a (15, 1, 14) type outside the list; see the decisions ledger")
def test_c6_census_has_only_listed_types(acceptance, ctx2, censuses):
    by_type = d5.classify_census(ctx2, censuses["cliques"])
    unlisted = d5.unlisted_types(2, by_type)
    acceptance(6, not unlisted, f"Γ' census {censuses['gamma_prime']}; unlisted (size, a, b): {unlisted}")
    assert not unlisted


def test_c7_four_vertex_q2_full(acceptance, gamma_prime2):
    t = time.perf_counter()
    res = four_vertex_condition(gamma_prime2, srg=SrgParams(2295, 310, 85, 35))
    dt = time.perf_counter() - t
    ok = not isinstance(res, CounterexampleReport) and (res.alpha, res.beta) == (1554, 315) and dt < 1800
    acceptance(7, ok, f"q=2 Γ' full scan -> {getattr(res, 'alpha', res)}, {getattr(res, 'beta', '')} in {dt:.1f}s")
    assert ok


# --------------------------------------------------------------------------
# 8. twisted Grassmann baseline


def test_c8_twisted_grassmann(acceptance):
    t = time.perf_counter()
    J = grassmann_graph(2, 5, 3)
    base, part = munemasa_partition(2, 2)
    rep = gm_validate(base, part)
    S, _ = twisted_grassmann_switch(2, 2)
    V = twisted_grassmann_vertexswap(2, 2)
    acceptance(8, rep.valid, f"partition: {len(part.cells)} cells, |D| = {len(part.D)}, {len(rep.violations)} violations")
    fps = [charpoly_fingerprint(G) for G in (J, S, V)]
    same = fps[0] == fps[1] == fps[2] and len(fps[0].primes) >= 3
    acceptance(8, same, f"J, switched and vertex-swap fingerprints agree on {len(fps[0].primes)} primes")
    arrays = [check_drg(G) for G in (J, S, V)]
    drg = all(isinstance(a, IntersectionArray) for a in arrays) and len({str(a) for a in arrays}) == 1
    dt = time.perf_counter() - t
    acceptance(8, drg and dt < 60, f"all three distance-regular with {arrays[0]}; {dt:.1f}s")
    assert rep.valid and same and drg and J.n == S.n == V.n == 155


# --------------------------------------------------------------------------
# 9. D6,6 switching


def test_c9_d66_switching(acceptance, ctx6, d6_run):
    t = time.perf_counter()
    G, Gp, part, rep = d6_run["G"], d6_run["Gp"], d6_run["part"], d6_run["report"]
    P = part.partition
    covered = int(P.sizes.sum()) + len(P.D) == G.n == 75735
    acceptance(9, covered, f"partition covers all {G.n} Greeks: {part.point_cells} point cells, {part.plane_cells} plane cells, |D| = {len(P.D)}")
    acceptance(9, rep.switchable, "every D-vertex sees none, half or all of every cell")
    hw = d6.half_neighbor_check(ctx6, part, rep)
    acceptance(9, hw.ok, f"half-neighbour property holds for {hw.holds}/{hw.checked} pairs (G, π)")
    cert = d6.non_drg_certificate(Gp, G, order=P.D, sample=20)
    acceptance(
        9,
        cert.valid,
        f"Γ' distance-2 degrees {cert.d2_u} vs {cert.d2_v}; Γ distance-2 degrees {sorted(set(cert.gamma_sample.values()) | set(cert.gamma_d2))}",
    )
    ia, ca, cb = d6.cospectrality_certificate(G, Gp, sample=2, seed=0)
    spec = ca.valid and cb.valid and ca.multiplicities == cb.multiplicities
    acceptance(9, spec, f"spectrum certificate: Γ and Γ' both have {dict(zip(ca.eigenvalues, ca.multiplicities or ()))}")
    elapsed = TIMINGS.get("D6 build+switch", 0.0) + time.perf_counter() - t
    mem = peak_rss_gb()
    acceptance(9, mem <= 8 and elapsed <= 3600, f"peak memory {mem:.2f} GB, runtime {elapsed:.0f}s")
    assert covered and rep.switchable and hw.ok and cert.valid and spec and mem <= 8


@pytest.mark.xfail(strict=True, reason="the plane cells are not equitable; see the decisions ledger")
def test_c9_gm_validate_full_pass(acceptance, ctx6, d6_run):
    rep = d6_run["report"]
    s = {k: v for k, v in rep.summary().items() if k in ("valid", "equitable", "switchable", "cells", "switching_set")}
    ob = d6.equitability_obstruction(ctx6, d6_run["G"], d6_run["part"])
    acceptance(
        9,
        rep.valid,
        f"gm_validate: {s}; a vertex of X_π sees {ob.from_pi[1]} of C_P but one of X_π^σ sees {ob.from_pi_sigma[1]}",
    )
    assert rep.valid


# --------------------------------------------------------------------------
# 10. switching engine on planted partitions


def test_c10_planted_partitions(acceptance):
    rng = np.random.default_rng(2024)
    n_ok = n_inv = sizes = 0
    trials = 120
    for _ in range(trials):
        G, P = planted_instance(rng, cells=int(rng.integers(1, 9)), size=int(rng.choice([2, 4, 6, 8, 12, 16])), d=int(rng.integers(1, 41)))
        assert G.n <= 500
        sizes = max(sizes, G.n)
        rep = gm_validate(G, P)
        assert rep.valid
        H = gm_switch(G, P, rep)
        n_ok += charpoly_fingerprint(H) == charpoly_fingerprint(G)
        n_inv += gm_switch(H, P) == G
    ok = n_ok == n_inv == trials
    acceptance(10, ok, f"{trials} planted instances (n <= {sizes}): {n_ok} cospectral, {n_inv} involutive")
    assert ok
