"""Exact counts behind the incidence-type bounds.

Three table-contraction counters and the verifiers that compare them against
their expected shapes with a fitted constant: collisions of f(x,y,z)=x(y+z),
solutions of c = ab + d, and the tautological quadruple count.
"""

import random

from sumprod import (ElemSet, GroundField, check_kmps, check_sdz,
                     f_collision_count, bilinear_count, tautological_count,
                     popular_sums)
from fractions import Fraction

c0 = GroundField.char0()
T = ElemSet(c0, [1, 2])
print("X=Y=Z={1,2}: f-collisions =", f_collision_count(T, T, T),
      "(8 triples, f-values 2,3,3,4,4,6,6,8 -> 14 ordered pairs agree)")

print("A=B={1,2}, C={1..5}, D={0,1}: #(c=ab+d) =",
      bilinear_count(T, T, ElemSet(c0, range(1, 6)), ElemSet(c0, [0, 1])))

B = ElemSet(c0, range(8))
P = popular_sums(B, Fraction(1, 2))
D = ElemSet(c0, [-1, 0, 1])
print("AP(8), popular P, small D: tautological count =",
      tautological_count(B, D, P))

print("\nFitted constants on random 48-sets:")
rng = random.Random(7)
F = GroundField.prime(2**31 - 1)
X, Y, Z = (ElemSet(F, rng.sample(range(1, F.p), 48)) for _ in range(3))
rep = check_kmps(X, Y, Z)
print(f"  kmps at p=2^31-1: count={rep.lhs:.0f}  "
      f"shape={rep.rhs_shape:.3g}  fitted={rep.fitted_constant:.4f}")
# a smaller field so c = ab + d actually has solutions
F = GroundField.prime(1009)
rng = random.Random(7)
A, Bq, C, Dq = (ElemSet(F, rng.sample(range(F.p), 48)) for _ in range(4))
rep = check_sdz(A, Bq, C, Dq)
print(f"  sdz  at p=1009:   count={rep.lhs:.0f}  "
      f"shape={rep.rhs_shape:.3g}  fitted={rep.fitted_constant:.4f}")
