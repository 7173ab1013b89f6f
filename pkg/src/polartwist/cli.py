"""Command line: ``polartwist build <construction> --q Q --verify srg,4vc ...``.

Exit codes: 0 when every selected check confirms its claim, 2 when a check
fails, 3 for budget or configuration errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .gf import NotAPrimePower, Unsupported
from .graphcore import (
    CounterexampleReport,
    IntersectionArray,
    SrgParams,
    charpoly_fingerprint,
    check_drg,
    check_srg,
    four_vertex_condition,
    gm_validate,
    json_report,
    to_edgelist,
    to_graph6,
)
from .graphcore.export import FormatOverflow, jsonable
from .quadspace import SizeBudgetExceeded

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 2, 3
CACHE_ENV = "POLARTWIST_CACHE"

CONSTRUCTIONS = ("d55", "d55-twist", "d66", "d66-twist", "grassmann", "grassmann-twist-swap", "grassmann-twist-switch")
CHECKS = ("srg", "drg", "gm", "fact1", "residue", "cliques", "noniso", "4vc", "cospectral", "d2cert")
ALLOWED = {
    "d55": {"srg", "drg", "residue", "cliques", "4vc"},
    "d55-twist": {"srg", "drg", "fact1", "residue", "cliques", "noniso", "4vc"},
    "d66": {"drg", "d2cert"},
    "d66-twist": {"gm", "cospectral", "d2cert", "drg"},
    "grassmann": {"srg", "drg"},
    "grassmann-twist-swap": {"srg", "drg", "cospectral"},
    "grassmann-twist-switch": {"srg", "drg", "gm", "cospectral"},
}
DENSE_CHECK_LIMIT = 5000


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    construction: str
    q: int
    n: int | None = None
    k: int | None = None
    verify: tuple[str, ...] = ()
    mode: str = "full"
    seed: int | None = None
    samples: int = 100
    workers: int = 1
    report: Path | None = None
    g6: Path | None = None
    edges: Path | None = None
    cache_dir: Path | None = None
    timings: bool = False

    def __post_init__(self):
        if self.construction not in CONSTRUCTIONS:
            raise ConfigError(f"unknown construction {self.construction!r}")
        unknown = [c for c in self.verify if c not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown checks {unknown}")
        bad = [c for c in self.verify if c not in ALLOWED[self.construction]]
        if bad:
            raise ConfigError(f"checks {bad} do not apply to {self.construction}")
        if self.mode not in ("full", "sampled"):
            raise ConfigError("mode must be full or sampled")
        if self.mode == "sampled" and self.seed is None:
            raise ConfigError("sampled mode needs --seed")
        if self.construction.startswith("grassmann"):
            if self.k is None:
                raise ConfigError("grassmann constructions need --k")
            if self.construction == "grassmann" and self.n is None:
                raise ConfigError("grassmann needs --n")


@dataclass
class Built:
    graph: object
    parameters: dict
    extra: dict = field(default_factory=dict)


def _check(name: str, mode: str, ok: bool, details) -> dict:
    return {"name": name, "mode": mode, "pass": bool(ok), "details": jsonable(details)}


def _sample_args(cfg: RunConfig):
    return (cfg.samples, cfg.seed) if cfg.mode == "sampled" else (None, None)


# ----------------------------------------------------------------------------
# builders


def _build(cfg: RunConfig) -> Built:
    c, q = cfg.construction, cfg.q
    if c in ("d55", "d55-twist"):
        from . import twist_d5 as d5

        ctx = d5.d5_context(q, cfg.cache_dir)
        G = d5.build_gamma(ctx) if c == "d55" else d5.build_gamma_prime(ctx)
        return Built(G, {"v": G.n, "P": "e0", "lines_through_P": ctx.nc, "greeks_off_P": len(ctx.D)}, {"ctx": ctx})
    if c in ("d66", "d66-twist"):
        from . import twist_d6 as d6

        ctx = d6.d6_context(q, cfg.cache_dir)
        G = d6.build_gamma6(ctx)
        params = {"v": G.n, "latin": ctx.latin_id, "polarity": ctx.kind}
        if c == "d66":
            return Built(G, params, {"ctx": ctx})
        part = d6.build_partition(ctx)
        try:
            Gp, report = d6.validate_and_switch(ctx, G, part, strict=False)
        except d6.ValidationFailed as e:
            return Built(G, params, {"ctx": ctx, "part": part, "report": e.report, "base": G})
        params.update(point_cells=part.point_cells, plane_cells=part.plane_cells, switching_set=len(part.partition.D))
        return Built(Gp, params, {"ctx": ctx, "part": part, "report": report, "base": G})
    from . import grassmann as gr

    k = cfg.k
    if c == "grassmann":
        return Built(gr.grassmann_graph(q, cfg.n, k), {"n": cfg.n, "k": k})
    if c == "grassmann-twist-swap":
        return Built(gr.twisted_grassmann_vertexswap(q, k), {"n": 2 * k + 1, "k": k})
    base, part = gr.munemasa_partition(q, k)
    report = gm_validate(base, part)
    G = base
    if report.valid:
        from .graphcore import gm_switch

        G = gm_switch(base, part, report)
    return Built(G, {"n": 2 * k + 1, "k": k, "cells": len(part.cells)}, {"base": base, "part": part, "report": report})


# ----------------------------------------------------------------------------
# checks


def _run_check(name: str, cfg: RunConfig, b: Built) -> dict:
    G = b.graph
    sample, seed = _sample_args(cfg)
    c, q = cfg.construction, cfg.q
    mode = cfg.mode
    if name == "srg":
        res = check_srg(G, sample=sample, seed=seed)
        ok = isinstance(res, SrgParams)
        if ok and c.startswith("d55"):
            from .twist_d5 import srg_parameters

            ok = res.as_tuple() == srg_parameters(q)
        return _check("srg", mode, ok, res)
    if name == "drg":
        res = check_drg(G, sample=sample, seed=seed)
        ok = isinstance(res, IntersectionArray)
        if c == "d66-twist":
            # the twisted graph is expected not to be distance-regular
            ok = not ok
        return _check("drg", mode, ok, {"result": str(res) if ok and isinstance(res, IntersectionArray) else res})
    if name == "4vc":
        res = four_vertex_condition(G, sample=sample, seed=seed)
        violated = isinstance(res, CounterexampleReport)
        if c == "d55-twist":
            ok = (res.alpha, res.beta) == (1554, 315) if (q == 2 and not violated) else (violated if q >= 3 else False)
        else:
            ok = not violated
        return _check("4vc", mode, ok, res)
    if name == "fact1":
        from . import twist_d5 as d5

        ctx = b.extra["ctx"]
        per = cfg.samples if mode == "sampled" else 1000
        s = 0 if seed is None else seed
        out, ok = {}, True
        for case in range(1, 7):
            pairs = d5.sample_case_pairs(ctx, G, case, per, s + case)
            bad = 0
            counts: dict = {}
            for x, y in pairs:
                t = d5.classify_common_neighborhood(ctx, G, x, y, strict=False)
                bad += not t.matches
                key = f"{t.variant or '-'}:" + ",".join(f"{k}={v}" for k, v in t.counts.items())
                counts[key] = counts.get(key, 0) + 1
            out[f"case{case}"] = {"pairs": len(pairs), "mismatches": bad, "subcase_counts": counts}
            ok &= bad == 0
        return _check("fact1", "sampled", ok, {"seed": s, **out})
    if name == "residue":
        from . import twist_d5 as d5

        res = d5.residue_lemma_check(b.extra["ctx"], sample=sample, seed=seed)
        return _check("residue", res.mode, res.ok, res)
    if name in ("cliques", "noniso"):
        return _clique_checks(name, cfg, b)
    if name == "gm":
        report = b.extra["report"]
        details = report.summary()
        ok = report.valid
        if c == "d66-twist":
            from . import twist_d6 as d6

            if report.switchable:
                hw = d6.half_neighbor_check(b.extra["ctx"], b.extra["part"], report)
                details["half_neighbor"] = hw
                ok = ok and hw.ok
            if not report.equitable:
                details["obstruction"] = d6.equitability_obstruction(b.extra["ctx"], b.extra["base"], b.extra["part"])
        return _check("gm", "full", ok, details)
    if name == "cospectral":
        return _cospectral(cfg, b)
    if name == "d2cert":
        from . import twist_d6 as d6

        if c == "d66":
            rng = np.random.default_rng(0 if seed is None else seed)
            from .graphcore import distance2_degree

            vals = {int(x): distance2_degree(G, int(x)) for x in rng.choice(G.n, size=min(cfg.samples, G.n), replace=False)}
            return _check("d2cert", "sampled", len(set(vals.values())) == 1, {"distance2_degrees": sorted(set(vals.values()))})
        if "part" not in b.extra or not b.extra["report"].switchable:
            return _check("d2cert", "full", False, "switching partition invalid")
        cert = d6.non_drg_certificate(G, b.extra["base"], order=b.extra["part"].partition.D)
        return _check("d2cert", "full", cert.valid, cert)
    raise ConfigError(name)


def _clique_checks(name: str, cfg: RunConfig, b: Built) -> dict:
    from . import twist_d5 as d5

    ctx = b.extra["ctx"]
    if cfg.q != 2:
        raise SizeBudgetExceeded("clique census runs at q = 2 only")
    census, cliques = d5.maximal_clique_census(b.graph)
    if name == "noniso":
        from .twist_d5 import build_gamma

        other, _ = d5.maximal_clique_census(build_gamma(ctx))
        cert = d5.non_isomorphism_certificate(cfg.q, other, census)
        return _check("noniso", "full", cert.valid, cert)
    if cfg.construction == "d55":
        ok = set(census) <= {15, 31}
        return _check("cliques", "full", ok, {"census": census})
    by_type = d5.classify_census(ctx, cliques)
    unlisted = d5.unlisted_types(cfg.q, by_type)
    fam = {k: [c.ok for c in d5.clique_family(ctx, b.graph, k)] for k in d5.CLIQUE_TYPES}
    ok = not unlisted and all(all(v) for v in fam.values())
    return _check(
        "cliques",
        "full",
        ok,
        {
            "census": census,
            "by_type": {f"{s}:{a}+{bb}": v for (s, a, bb), v in by_type.items()},
            "unlisted": {f"{s}:{a}+{bb}": v for (s, a, bb), v in unlisted.items()},
            "families_maximal": fam,
        },
    )


def _cospectral(cfg: RunConfig, b: Built) -> dict:
    G = b.graph
    if cfg.construction == "d66-twist":
        from . import twist_d6 as d6

        if G is b.extra["base"]:
            return _check("cospectral", "certificate", False, "switching partition not switchable")
        s = 0 if cfg.seed is None else cfg.seed
        ia, cert_base, cert = d6.cospectrality_certificate(b.extra["base"], G, sample=5, seed=s)
        ok = cert_base.valid and cert.valid and cert_base.multiplicities == cert.multiplicities
        return _check("cospectral", "certificate", ok, {"base_array": str(ia), "base": cert_base, "switched": cert})
    if G.n > DENSE_CHECK_LIMIT:
        report = b.extra.get("report")
        ok = report is not None and report.valid
        return _check(
            "cospectral",
            "theorem",
            ok,
            "n too large for characteristic polynomials; cospectral by the validated Godsil-McKay conditions",
        )
    from . import grassmann as gr

    k = cfg.k
    ref = b.extra.get("base")
    if ref is None:
        ref = gr.grassmann_graph(cfg.q, 2 * k + 1, k + 1)
    fa, fb = charpoly_fingerprint(G), charpoly_fingerprint(ref)
    return _check("cospectral", "full", fa == fb, {"primes": list(fa.primes), "collision_bound": fa.collision_bound()})


# ----------------------------------------------------------------------------


def run(cfg: RunConfig) -> int:
    timings = {}
    t0 = time.perf_counter()
    b = _build(cfg)
    timings["build"] = round(time.perf_counter() - t0, 3)
    checks = []
    for name in cfg.verify:
        t = time.perf_counter()
        checks.append(_run_check(name, cfg, b))
        timings[name] = round(time.perf_counter() - t, 3)
    params = dict(b.parameters)
    params.update(mode=cfg.mode, seed=cfg.seed, samples=cfg.samples if cfg.mode == "sampled" else None, version=__version__)
    doc = json_report(cfg.construction, cfg.q, params, checks, timings if cfg.timings else {})
    if cfg.report:
        Path(cfg.report).write_bytes(doc)
    else:
        sys.stdout.write(doc.decode())
    if cfg.g6:
        Path(cfg.g6).write_bytes(to_graph6(b.graph) + b"\n")
    if cfg.edges:
        Path(cfg.edges).write_bytes(to_edgelist(b.graph))
    return EXIT_OK if all(c["pass"] for c in checks) else EXIT_FAIL


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polartwist", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    b = sub.add_parser("build", help="build a graph and run checks")
    b.add_argument("construction", choices=CONSTRUCTIONS)
    b.add_argument("--q", type=int, required=True)
    b.add_argument("--n", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--verify", default="", help="comma separated: " + ",".join(CHECKS))
    b.add_argument("--mode", choices=("full", "sampled"), default="full")
    b.add_argument("--seed", type=int)
    b.add_argument("--samples", type=int, default=100)
    b.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    b.add_argument("--report", type=Path)
    b.add_argument("--g6", type=Path)
    b.add_argument("--edges", type=Path)
    b.add_argument("--cache-dir", type=Path, default=os.environ.get(CACHE_ENV) or None)
    b.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    return p


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    try:
        cfg = RunConfig(
            construction=args.construction,
            q=args.q,
            n=args.n,
            k=args.k,
            verify=tuple(c for c in args.verify.split(",") if c),
            mode=args.mode,
            seed=args.seed,
            samples=args.samples,
            workers=args.workers,
            report=args.report,
            g6=args.g6,
            edges=args.edges,
            cache_dir=args.cache_dir,
            timings=args.timings,
        )
        return run(cfg)
    except (ConfigError, SizeBudgetExceeded, NotAPrimePower, Unsupported, FormatOverflow, ValueError) as e:
        sys.stderr.write(json.dumps({"error": type(e).__name__, "message": str(e)}) + "\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
