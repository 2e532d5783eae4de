"""Naive enumeration oracles: slow, obviously-correct counts used to pin the
table-contraction counters."""

from sumprod import ElemSet


def naive_f_collision(X: ElemSet, Y: ElemSet, Z: ElemSet) -> int:
    f = X.field
    vals = [f.mul(x, f.add(y, z)) for x in X for y in Y for z in Z]
    return sum(1 for a in vals for b in vals if a == b)


def naive_bilinear(A: ElemSet, B: ElemSet, C: ElemSet, D: ElemSet) -> int:
    f = A.field
    return sum(1 for a in A for b in B for c in C for d in D
               if c == f.add(f.mul(a, b), d))


def naive_tautological(B: ElemSet, D: ElemSet, P: ElemSet) -> int:
    f = B.field
    total = 0
    for a in B:
        for b in B:
            if f.sub(a, b) not in D:
                continue
            for c in B:
                if f.add(a, c) not in P or f.add(b, c) not in P:
                    continue
                for d in B:
                    if f.add(a, d) in P and f.add(b, d) in P:
                        total += 1
    return total


def naive_energy(A: ElemSet, k: int, op: str) -> int:
    f = A.field
    if op == "add":
        vals = [f.sub(a, b) for a in A for b in A]
    else:
        vals = [f.div(a, b) for a in A for b in A if b != 0]
    from collections import Counter
    return sum(c**k for c in Counter(vals).values())
