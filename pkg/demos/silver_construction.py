# The geometric colouring at q = 1 + sqrt2: block sizes, the two canonical
# matchings, the reordering f, and how the matching density along f compares
# with the closed-form bound (q^2 + 2q - 1) / (q^2 + 3q - 2).
from pathdensity import coloring as col
from pathdensity.quadratic import SILVER

C = col.build(SILVER, 30000)
print("blocks:", C.sizes)
print("n =", C.n)

M_r, M_b = col.matchings(C)
print("red matching has", len(M_r), "pairs, blue matching has", len(M_b))

f = col.reordering(C)
print("f(1..20):", [f.f(k) for k in range(1, 21)])
for t in (1, 2, 3, 10, 100):
    print(f"t={t}: ell_r={col.ell_r(f, t)} ell_b={col.ell_b(f, t)} (closed form {col.ell_r_closed(C, t)}, {col.ell_b_closed(C, t)})")

bound = col.density_bound(SILVER)
print("bound =", bound, "~", float(bound))

prof = col.density_profile(C, M_r, f)
print("\nlargest breakpoints of the red matching density:")
for bp in sorted(prof.breakpoints, key=lambda b: -b.value)[:5]:
    print(f"  k={bp.k:6d} t={bp.t:5d} density={float(bp.value):.7f} envelope={float(bp.envelope):.7f}")
print("late breakpoints settle just under the bound:")
for bp in prof.breakpoints[-4:]:
    print(f"  k={bp.k:6d} density={float(bp.value):.7f}")

# other growth rates for comparison
for row in col.sweep_q(["3/2", 2, "silver", 3], 20000):
    print(f"q={row.q:>6}  bound={row.bound:.6f}  measured max={row.empirical:.6f}")
