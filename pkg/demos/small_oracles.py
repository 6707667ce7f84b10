# Brute force at desk scale: every 2-colouring of K_6 has a monochromatic
# path on 5 vertices, the canonical matchings dominate every path of the
# geometric colouring along f, and the best simple forest by matching.
from pathdensity import coloring as col
from pathdensity import oracle as orc
from pathdensity.graphmodel import Color, complete_random_coloring

for n in range(2, 7):
    r = orc.gg_verify(n)
    print(f"K_{n}: {r.colorings} colourings, bound {r.bound}, smallest longest path {r.min_longest}")
print(orc.gg_verify(10, "sampled", samples=2000, seed=1).to_json())

for q in ("3/2", 2):
    C = col.build(q, 60)
    r = orc.faithfulness_check(C, n=15)
    print(f"q={q}: {r.paths_checked} paths checked, {r.violations} violations")

G = complete_random_coloring(16, seed=3)
for c in (Color.RED, Color.BLUE):
    length, path = orc.longest_mono_path(G, c)
    cover, F = orc.optimal_simple_forest(G, c, 16)
    print(f"{c.name}: longest path {length} {path}; best simple forest covers {cover} of [16]")
