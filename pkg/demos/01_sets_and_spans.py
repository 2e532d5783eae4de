"""Ground sets, sumsets, and iterated spans.

Walks through the basic objects: exact sets over F_p or the rationals,
the four pointwise operations, spans kA - lA, and the Pluennecke-Ruzsa
bound that controls them.
"""

from sumprod import (ElemSet, GroundField, SpanSpec, check_pluennecke,
                     combine, iterated_span)

c0 = GroundField.char0()
F7 = GroundField.prime(7)

A = ElemSet(c0, [1, 2, 4])
print("A =", sorted(A))
for op in ("add", "sub", "mul", "div"):
    print(f"  A {op} A =", sorted(combine(A, A, op)))

# the cubic subgroup of F_7* is closed under ratios
H = ElemSet(F7, [1, 2, 4])
print("\nH = {1,2,4} in F_7;  H/H =", sorted(combine(H, H, "div")))

B = ElemSet(c0, range(10))
print("\nB = {0..9}")
for k, l in ((1, 1), (2, 1), (2, 2)):
    span = iterated_span(B, SpanSpec(k, l))
    rep = check_pluennecke(B, k, l)
    print(f"  |{k}B - {l}B| = {len(span):4d}   "
          f"Pluennecke bound {rep.rhs_shape:10.1f}   "
          f"fitted constant {rep.fitted_constant:.4f}")

print("\nAn AP has tiny spans; a GP does not:")
G = ElemSet(c0, [3 ** i for i in range(10)])
print("  AP: |2A - 2A| =", len(iterated_span(B, SpanSpec(2, 2))))
print("  GP: |2G - 2G| =", len(iterated_span(G, SpanSpec(2, 2))))
