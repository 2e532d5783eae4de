"""Moment energies E_k and dyadic pigeonholing.

Shows exact integer energies, the fractional-exponent variant, the
Cauchy-Schwarz lower bound |A|^4 <= E(A)|A+A|, and how a dyadic slice
captures a constant fraction of the energy at a single multiplicity level.
"""

from sumprod import (ElemSet, GroundField, cauchy_schwarz_check,
                     dyadic_extract, energy, energy_rep)

c0 = GroundField.char0()
A = ElemSet(c0, range(32))
print("A = {0..31} (an AP: maximal additive energy)")
for k in (2, 4, 4 / 3):
    m = energy(A, A, k, "add")
    tag = "exact" if m.exact else f"~1 ulp x {m.rel_error_bound:.1e}"
    print(f"  E_{k:g}(A) = {m.value}  ({tag})")

rep = cauchy_schwarz_check(A, "add")
print(f"\nCauchy-Schwarz: |A|^4 = {rep.lhs:.0f} <= E(A)|A+A| = "
      f"{rep.rhs_shape:.0f}  ->  {'ok' if rep.passed else 'VIOLATED'}")

print("\nDyadic slices of r_{A-A} for several exponents:")
r = energy_rep(A, A, "add")
for k in (4 / 3, 2, 4):
    sl = dyadic_extract(r, k)
    frac = sl.num_buckets * sl.score / float(sl.energy_value)
    print(f"  k={k:g}: level t={sl.t:3d}, |D|={len(sl.support):3d}, "
          f"({sl.num_buckets} buckets) x |D| x t^k = {frac:.2f} x E_k "
          f"(need >= 1)  ->  {'ok' if sl.certificate_ok else 'FAIL'}")

import random
R = ElemSet(GroundField.prime(2**31 - 1),
            random.Random(0).sample(range(2**31 - 1), 32))
sl = dyadic_extract(energy_rep(R, R, "add"), 4)
print(f"\nRandom 32-set: E_4 is all diagonal -> t={sl.t}, |D|={len(sl.support)}")
