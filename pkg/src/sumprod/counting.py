"""Exact solution counts for the equations behind the incidence-type lemmas.

All three counters contract multiplicity tables (sums of squares / inner
products) rather than enumerating tuples; counts are exact Python ints.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .field import ElemSet, FieldMismatch
from .repfn import (BudgetExceeded, rep_function, table_budget)
from .setalgebra import combine


@dataclass
class CountReport:
    """Exact count of one equation's solutions plus the input sizes."""

    equation: str
    sizes: dict
    count: int
    elapsed_ms: float


def _square_sum(counts) -> int:
    return sum(int(c) * int(c) for c in
               (counts.tolist() if isinstance(counts, np.ndarray) else counts))


def f_collision_count(X: ElemSet, Y: ElemSet, Z: ElemSet,
                      budget: Optional[int] = None) -> int:
    """|{(x1,x2,y1,y2,z1,z2): x1(y1+z1) = x2(y2+z2)}| over X^2 x Y^2 x Z^2.

    Computed as sum of m(v)^2 where m is the multiplicity table of
    f(x,y,z) = x(y+z) on X x Y x Z. Requires 0 not in X, Y, Z.
    """
    for name, S in (("X", X), ("Y", Y), ("Z", Z)):
        if 0 in S:
            raise ValueError(f"0 in {name}: the collision lemma needs subsets of F*")
    if X.field != Y.field or Y.field != Z.field:
        raise FieldMismatch("X, Y, Z must share a field")
    budget = budget if budget is not None else table_budget()
    if len(X) * len(Y) * len(Z) > budget:
        raise BudgetExceeded(
            f"{len(X)}x{len(Y)}x{len(Z)} triples exceed budget {budget}")
    if len(X) == 0 or len(Y) == 0 or len(Z) == 0:
        return 0

    # m(v) = sum over s in Y+Z of r_{Y+Z}(s) * [x*s = v]; contract via the
    # multiset X x multiset(Y+Z)
    sums = rep_function(Y, Z, "add", budget=budget)
    field = X.field
    if X.ints is not None and isinstance(sums.values, np.ndarray) and \
            (field.is_prime_mode and field.p < (1 << 31)
             or not field.is_prime_mode
             and int(np.abs(X.ints).max()) < (1 << 31)
             and int(np.abs(sums.values).max(initial=0)) < (1 << 31)):
        prods = X.ints[:, None] * sums.values[None, :]
        if field.is_prime_mode:
            prods %= field.p
        weights = np.broadcast_to(sums.counts, prods.shape)
        _, inv = np.unique(prods.ravel(), return_inverse=True)
        m = np.bincount(inv, weights=weights.ravel())  # exact while < 2^53
        mi = m.astype(np.int64)
        if float(m.sum()) * float(m.max()) < 2**53:
            return int(round(float(np.dot(mi, mi.astype(np.float64)))))
        return int(np.dot(mi.astype(object), mi.astype(object)))
    from collections import Counter
    table = Counter()
    for x in X:
        for s, c in sums.items():
            table[field.mul(x, s)] += c
    return _square_sum(table.values())


def bilinear_count(A: ElemSet, B: ElemSet, C: ElemSet, D: ElemSet,
                   budget: Optional[int] = None) -> int:
    """|{(a,b,c,d): c = ab + d}| = sum_v m_{AB}(v) * r_{C-D}(v)."""
    for S in (B, C, D):
        if S.field != A.field:
            raise FieldMismatch("all four sets must share a field")
    if min(len(A), len(B), len(C), len(D)) == 0:
        return 0
    prod = rep_function(A, B, "mul", budget=budget)
    diff = rep_function(C, D, "sub", budget=budget)
    if isinstance(prod.values, np.ndarray) and isinstance(diff.values, np.ndarray):
        idx = np.searchsorted(diff.values, prod.values)
        idx_c = np.clip(idx, 0, diff.values.size - 1)
        hit = diff.values[idx_c] == prod.values
        return int(np.dot(prod.counts[hit].astype(object),
                          diff.counts[idx_c[hit]].astype(object)))
    dd = diff.to_dict()
    return sum(c * dd.get(v, 0) for v, c in prod.items())


def tautological_count(B: ElemSet, D: ElemSet, P: ElemSet,
                       budget: Optional[int] = None) -> int:
    """Solutions (a,b,c,d) in B^4 with a-b in D and a+c,b+c,a+d,b+d all in P.

    Contracted as sum over pairs (a,b) with a-b in D of g(a,b)^2 where
    g(a,b) = |{c in B: a+c in P and b+c in P}|.
    """
    if B.field != D.field or B.field != P.field:
        raise FieldMismatch("B, D, P must share a field")
    n = len(B)
    if n == 0 or len(D) == 0 or len(P) == 0:
        return 0
    return _pair_popularity_square_sum(B, B, D, P, budget=budget)


def _pair_popularity_square_sum(pairs_from: ElemSet, B: ElemSet, D: ElemSet,
                                P: ElemSet, op: str = "add",
                                budget: Optional[int] = None) -> int:
    """sum over (a,b) in pairs_from^2 with a∘b^-1 in D of g(a,b)^2.

    op "add": pair condition a-b in D, popularity condition a+c in P.
    op "mul": pair condition a/b in D, popularity condition a*c in P.
    g(a,b) = |{c in B : a∘c in P and b∘c in P}|.
    """
    field = B.field
    F = pairs_from
    nf, nb = len(F), len(B)
    if nf == 0 or nb == 0:
        return 0
    budget = budget if budget is not None else table_budget()
    if nf * nb > budget or nf * nf > budget:
        raise BudgetExceeded("pair table exceeds budget")

    if F.ints is not None and B.ints is not None and P.ints is not None \
            and D.ints is not None and (not field.is_prime_mode
                                        or field.p < (1 << 31)):
        p = field.p
        a = F.ints
        b = B.ints
        if op == "add":
            grid = a[:, None] + b[None, :]
            pair = a[:, None] - a[None, :]
        else:
            grid = a[:, None] * b[None, :]
            inv = np.asarray([pow(int(v), p - 2, p) for v in a], dtype=np.int64)
            pair = a[:, None] * inv[None, :]
        if p is not None:
            grid %= p
            pair %= p

        def member(vals, sorted_set):
            arr = sorted_set.ints
            if arr.size == 0:
                return np.zeros(vals.shape, dtype=bool)
            idx = np.clip(np.searchsorted(arr, vals), 0, arr.size - 1)
            return arr[idx] == vals

        popular = member(grid, P).astype(np.float64)  # nf x nb 0/1
        g = popular @ popular.T                       # g[i,j], exact in float64
        pair_ok = member(pair, D)
        total = float((g[pair_ok] ** 2).sum())
        assert total < 2**53, "square-sum too large for exact float accumulation"
        return int(round(total))

    fop = field.add if op == "add" else field.mul
    finv = field.sub if op == "add" else field.div
    total = 0
    b_list = list(B)
    pop = {a: frozenset(c for c in b_list if fop(a, c) in P) for a in F}
    for a in F:
        for b in F:
            try:
                key = finv(a, b)
            except ZeroDivisionError:
                continue
            if key in D:
                g = len(pop[a] & pop[b])
                total += g * g
    return total


def count_energy_equiv(A: ElemSet, op: str = "add", k: int = 2,
                       oracle_budget: int = 64) -> int:
    """Direct-loop count of 2k-tuples realising equal op-combinations.

    Brute-force oracle for energy(); k=2 walks all quadruples, k=4 enumerates
    the pair list and counts repeats with list.count. No table contraction.
    """
    if k not in (2, 4):
        raise ValueError("oracle supports k in {2, 4}")
    if len(A) > oracle_budget:
        raise BudgetExceeded(f"|A|={len(A)} above oracle budget {oracle_budget}")
    field = A.field
    elems = list(A)
    if op == "mul":
        fop = field.div
        pairs = [(a, b) for a in elems for b in elems if b != 0]
    elif op == "add":
        fop = field.sub
        pairs = [(a, b) for a in elems for b in elems]
    else:
        raise ValueError(f"op must be add or mul, got {op!r}")

    vals = [fop(a, b) for a, b in pairs]
    if k == 2:
        # quadruple loop (a,b,a',b'): outer pass in Python, inner comparison
        # scan via list.count
        return sum(vals.count(v) for v in vals)
    return sum(vals.count(v) ** 4 for v in set(vals))


def count_report(equation: str, count: int, sizes: dict,
                 elapsed_s: float) -> CountReport:
    return CountReport(equation=equation, sizes=sizes, count=count,
                       elapsed_ms=elapsed_s * 1e3)
