# The sequence side: the recurrence b_{i+1} = (rho-1) b_i - rho b_{i-1}, the
# size N it forces, the near-tight extremal sequence, and the threshold
# search on gap sequences and oscillating sequences.
from fractions import Fraction

from pathdensity import sequences as seq
from pathdensity.quadratic import QuadraticValue

SQRT8 = QuadraticValue(0, 2)

for rho in (Fraction(4), Fraction(5), Fraction(29, 5)):
    tr = seq.recurrence_trace(rho, 200)
    print(f"rho={rho}: first negative term at index {tr.first_negative}; first terms",
          [round(x, 3) for x in tr.floats()[:6]])

for gamma in (Fraction(1), Fraction(1, 2), Fraction(1, 10)):
    print(f"gamma={gamma}: N = {seq.choose_N(gamma)}")

rho = Fraction(29, 5)
g = seq.extremal_sequence(rho, 8)
print("\nextremal sequence for rho=29/5:", [str(x) for x in g])

gamma = Fraction(1, 2)
g = seq.extremal_sequence(rho, seq.first_negative(rho) - 1)
r = seq.find_good_t(g, 1, gamma)
print(f"find_good_t: t={r.t} u_o={float(r.u_odd):.1f} u_e={float(r.u_even):.1f}",
      f"ratio {float(r.achieved()):.4f} >= {float(3 + SQRT8 - gamma):.4f}")

a = [300] * 500 + [1200] * 1500
th = seq.find_oscillation_t(a, Fraction(1, 6000), gamma)
print(f"find_oscillation_t: t={th.t} ell+={th.lplus} ell-={th.lminus}",
      f"ratio {float(th.ell / th.t):.3f} >= {float(th.ratio):.3f}")
print("intervals:", th.partition.intervals, "gaps:", tuple(th.partition.gaps))
