# From a totally coloured graph to a dense monochromatic simple forest:
# the blue-degree sequence of the red vertices, its oscillation, the forest
# for one threshold, the cover dichotomy, and the full pipeline.
from fractions import Fraction

from pathdensity import coloring as col
from pathdensity import extract as ex
from pathdensity import sequences as seq
from pathdensity.graphmodel import complete_random_coloring, validate_simple_forest

G = complete_random_coloring(200, seed=7)
d = ex.degree_sequence(G)
a = d.as_sequence()
osc = seq.oscillation(a)
print(f"{len(G.red)} red and {len(G.blue)} blue vertices; oscillation T={osc.T} (i={osc.i}, j={osc.j})")

t = max(1, int(osc.T) // 2)
cert = ex.extract_forest(G, t)
print(f"t={t}: ell={cert.ell}, {cert.branch} branch, horizon {cert.horizon}, density {float(cert.density):.4f}",
      f">= ell/(ell+t) = {cert.ell / (cert.ell + t):.4f}")
print("valid:", bool(validate_simple_forest(G, cert.forest)))
print(ex.format_certificate(cert).splitlines()[-1])

out = ex.oscillation_or_forest(G)
print("\ndichotomy on the random graph:", type(out).__name__, getattr(out, "density", None))

# the geometric colouring has no dense forest on [n], so it oscillates
H = col.to_total_graph(col.build(2, 1000))
w = ex.oscillation_or_forest(H)
print("dichotomy on the q=2 colouring:", w)

gamma = Fraction(1, 10)
k = 8 * (H.n // 64)
res = ex.simple_forest_pipeline(H, k, gamma)
print(f"\npipeline: k={k} N={res.N} t={res.t} branch={res.branch} density={float(res.density):.4f}",
      f"target={float(res.target):.4f}")
for note in res.notes:
    print("  note:", note)
