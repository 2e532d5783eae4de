"""The three refinement procedures.

popular_sums picks the popular part of A+A, the popularity rule R_eps keeps
elements with many popular sums, regu_iterate drives R_eps to an
energy-stable subset, and xue_regularize produces the nested decomposition
C subset of B subset of A with a single dominating level set of B - B.
"""

from fractions import Fraction

from sumprod import (ElemSet, GroundField, check_regular, default_slack,
                     popular_sums, popularity_rule, regu_iterate,
                     xue_regularize)

c0 = GroundField.char0()
A = ElemSet(c0, [0, 1, 2, 3])
print("A = {0,1,2,3}")
print("  popular sums (eps=1/2):", sorted(popular_sums(A, Fraction(1, 2))))
print("  R_eps(A):              ", sorted(popularity_rule(A, Fraction(1, 2))))

AP = ElemSet(c0, range(64))
B, cert = regu_iterate(AP, 4 / 3)
print(f"\nregu_iterate on AP(64): |B| = {len(B)}  "
      f"(guaranteed >= {(1 - cert.c1) * 64:.0f}),  measured c2 = {cert.c2:.3f}, "
      f"rounds = {cert.rounds}")

for label, S, op in (("AP(64), additive", AP, "add"),
                     ("GP(64) mod p, multiplicative",
                      ElemSet(GroundField.prime(2**31 - 1),
                              [pow(3, i, 2**31 - 1) for i in range(64)]),
                      "mul")):
    d = xue_regularize(S, 4, op)
    K = default_slack(len(S))
    rep = check_regular(d, S, 4, K)
    print(f"\nxue_regularize, {label}:")
    print(f"  |B|={len(d.B)}  |C|={len(d.C)}  |S_tau|={len(d.S_tau)}  "
          f"tau={d.tau}")
    print(f"  E_4(B)/(|S|tau^4) = {d.energy_ratio:.3f}   "
          f"r-ratio range [{d.r_ratio_min:.3f}, {d.r_ratio_max:.3f}]")
    print(f"  check_regular (K={K:.0f}): "
          f"{'pass' if rep.passed else 'FAIL'}")
