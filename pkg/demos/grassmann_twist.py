"""Twisted Grassmann graph for q = 2, k = 2 built two ways and compared with J_2(5, 3).

    python3 demos/grassmann_twist.py
"""
from polartwist.graphcore import charpoly_fingerprint, check_drg, clique_census, gm_validate, maximal_cliques
from polartwist.grassmann import grassmann_graph, munemasa_partition, twisted_grassmann_switch, twisted_grassmann_vertexswap

J = grassmann_graph(2, 5, 3)
base, part = munemasa_partition(2, 2)
report = gm_validate(base, part)
print(f"switching partition: {len(part.cells)} cells, |D| = {len(part.D)}, valid = {report.valid}")

S, _ = twisted_grassmann_switch(2, 2)
V = twisted_grassmann_vertexswap(2, 2)
for name, G in (("J_2(5,3)", J), ("switched", S), ("vertex swap", V)):
    fp = charpoly_fingerprint(G)
    census = clique_census(maximal_cliques(G))
    print(f"{name:12s} n={G.n} array={check_drg(G)} fingerprint={hash(fp) & 0xFFFF:04x} cliques={census}")
# Same spectrum and intersection array; the clique census tells J apart.
