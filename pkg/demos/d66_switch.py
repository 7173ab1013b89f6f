"""Switching the half dual polar graph D6,6(2) on the partition built from a Latin.

The cells fail equitability, yet the switch is well defined and the switched
graph keeps the spectrum.  Needs about 3 GB and a few minutes.

    python3 demos/d66_switch.py
"""
import time

from polartwist import twist_d6 as d6

t = time.perf_counter()
ctx = d6.d6_context(2)
G = d6.build_gamma6(ctx)
part = d6.build_partition(ctx)
print(f"{G.n} Greeks, {part.point_cells} point cells, {part.plane_cells} plane cells, |D| = {len(part.partition.D)}")

Gp, report = d6.validate_and_switch(ctx, G, part, strict=False)
print("validation:", {k: v for k, v in report.summary().items() if k != "first_violations"})
print("obstruction:", d6.equitability_obstruction(ctx, G, part))
print("half-neighbour property:", d6.half_neighbor_check(ctx, part, report))

ia, before, after = d6.cospectrality_certificate(G, Gp, sample=2)
print("Γ array:", ia)
print("spectrum of Γ :", dict(zip(before.eigenvalues, before.multiplicities)))
print("spectrum of Γ':", dict(zip(after.eigenvalues, after.multiplicities)), "certified =", after.valid)
cert = d6.non_drg_certificate(Gp, G, order=part.partition.D, sample=5)
print(f"distance-2 degrees in Γ': {cert.d2_u} and {cert.d2_v}; in Γ: {cert.gamma_d2}")
print(f"{time.perf_counter() - t:.0f}s")
