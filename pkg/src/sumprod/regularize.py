"""Refinement procedures: the popular-sum rule, its iteration, and the
Rudnev/Xue regular decomposition.

The regular decomposition's published statement gives only the conclusions, so
the iterative construction here is ours; its contract is the testable output
property enforced by check_regular, not the construction itself.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from .field import ElemSet, GroundField
from .energy import dyadic_extract, energy, energy_rep
from .repfn import rep_function
from .report import VerificationReport

# rule name -> (pair op for the popular set, table of popular values)
_RULE_OPS = {
    "popular-sums": "add",
    "popular-differences": "sub",
    "popular-products": "mul",
    "popular-ratios": "div",
}


@dataclass(frozen=True)
class PopularityParams:
    """Parameters of the popularity rule R_eps and its iteration schedule."""

    eps: Optional[float] = None   # None: use c1 / log2|A|
    theta: Fraction = Fraction(2, 3)
    c1: float = 0.5

    def __post_init__(self):
        if self.eps is not None and not 0 < self.eps < 1:
            raise ValueError(f"eps must lie in (0,1), got {self.eps}")
        if not 0 < self.theta < 1:
            raise ValueError(f"theta must lie in (0,1), got {self.theta}")
        if not 0 < self.c1 < 1:
            raise ValueError(f"c1 must lie in (0,1), got {self.c1}")


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def popular_sums(A: ElemSet, eps, op: str = "add") -> ElemSet:
    """P_A = {x in A∘A : r_{A∘A}(x) >= eps * |A|^2 / |A∘A|}, exact threshold."""
    if len(A) == 0:
        raise ValueError("popular set of an empty set")
    r = rep_function(A, A, op)
    if len(r) == 0:
        return ElemSet.empty(A.field)
    thr = Fraction(eps) * len(A) ** 2 / len(r)
    cutoff = _ceil_fraction(thr)
    if isinstance(r.values, np.ndarray):
        mask = r.counts >= cutoff
        return ElemSet._from_sorted_array(A.field,
                                          r.values[mask].astype(np.int64))
    return ElemSet(A.field,
                   [v for v, c in r.items() if c >= cutoff], _canonical=True)


def _membership_counts(targets: ElemSet, B: ElemSet, P: ElemSet,
                       op: str) -> np.ndarray:
    """count[i] = |{b in B : targets[i] ∘ b in P}| for op add/sub/mul/div."""
    field = targets.field
    fast_field = field.p < (1 << 31) if field.is_prime_mode else op != "div"
    if targets.ints is not None and B.ints is not None and P.ints is not None \
            and fast_field:
        t = targets.ints
        b = B.ints
        p = field.p
        if op == "div":
            b = np.asarray([pow(int(v), p - 2, p) for v in B if v != 0],
                           dtype=np.int64)
        if op == "add":
            grid = t[:, None] + b[None, :]
        elif op == "sub":
            grid = t[:, None] - b[None, :]
        else:
            grid = t[:, None] * b[None, :]
        if p is not None:
            grid %= p
        arr = P.ints
        if arr is None or arr.size == 0:
            return np.zeros(len(targets), dtype=np.int64)
        idx = np.clip(np.searchsorted(arr, grid), 0, arr.size - 1)
        return (arr[idx] == grid).sum(axis=1).astype(np.int64)
    fop = getattr(field, op)
    out = []
    for a in targets:
        c = 0
        for bb in B:
            if op == "div" and bb == 0:
                continue
            if fop(a, bb) in P:
                c += 1
        out.append(c)
    return np.asarray(out, dtype=np.int64)


def popularity_rule(A: ElemSet, eps, theta=Fraction(2, 3),
                    rule: str = "popular-sums") -> ElemSet:
    """R_eps(A) = {a in A : |{b in A : a∘b in P_A}| >= theta |A|}."""
    if len(A) == 0:
        raise ValueError("popularity rule on an empty set")
    op = _RULE_OPS[rule]
    P = popular_sums(A, eps, op=op)
    good = _membership_counts(A, A, P, op)
    need = _ceil_fraction(Fraction(theta) * len(A))
    keep = [a for a, c in zip(A, good.tolist()) if c >= need]
    return ElemSet(A.field, keep, _canonical=True)


@dataclass
class ReguCertificate:
    """Measured witness for the energy-stability iteration."""

    eps: float
    s: float
    c1: float
    c2: float                 # E_s(R_eps(B)) / E_s(B), measured
    rounds: int
    refined: ElemSet          # R_eps(B)
    size_guarantee_ok: bool   # |B| >= (1 - c1)|A|


def regu_iterate(A: ElemSet, s: float = 4 / 3,
                 params: Optional[PopularityParams] = None,
                 rule: str = "popular-sums") -> Tuple[ElemSet, ReguCertificate]:
    """Find B ⊆ A with |B| >= (1-c1)|A| whose energy survives one more refinement.

    Iterates X -> R_eps(X) while E_s drops by more than a factor 1/2, keeping
    the best measured ratio; aborts to best-seen after ceil(log2 |A|) rounds or
    as soon as the size guarantee would break.
    """
    if len(A) < 16:
        raise ValueError(f"|A| = {len(A)} too small for the eps schedule")
    if rule not in _RULE_OPS:
        raise ValueError(f"unknown rule {rule!r}")
    params = params or PopularityParams()
    eps = params.eps if params.eps is not None else params.c1 / math.log2(len(A))
    if not 0 < eps < 1:
        raise ValueError(f"eps schedule gives eps={eps}, not in (0,1)")
    energy_op = "mul" if _RULE_OPS[rule] in ("mul", "div") else "add"
    min_size = (1 - params.c1) * len(A)

    X = A
    ex = float(energy(X, X, s, energy_op).value)
    best = None  # (c2, B, refined, round)
    max_rounds = math.ceil(math.log2(len(A)))
    rounds = 0
    for rounds in range(1, max_rounds + 1):
        Y = popularity_rule(X, eps, params.theta, rule)
        if len(Y) == 0:
            break
        ey = float(energy(Y, Y, s, energy_op).value)
        c2 = ey / ex
        if best is None or c2 > best[0]:
            best = (c2, X, Y, rounds)
        if c2 >= 0.5 or len(Y) < min_size:
            break
        X, ex = Y, ey
    if best is None:
        # R_eps emptied immediately; A itself is the only admissible witness
        best = (0.0, A, ElemSet.empty(A.field), rounds)
    c2, B, refined, used = best
    cert = ReguCertificate(
        eps=eps, s=s, c1=params.c1, c2=c2, rounds=used, refined=refined,
        size_guarantee_ok=len(B) >= min_size or B is A)
    return B, cert


@dataclass
class RegularDecomposition:
    """Output of the regular decomposition: C ⊆ B ⊆ A, level set S_tau of B∘B."""

    B: ElemSet
    C: ElemSet
    S_tau: ElemSet
    tau: int
    op: str                   # add | mul
    k: float
    a_size: int
    rounds: int
    energy_ratio: float       # E_k(B) / (|S_tau| tau^k)
    r_ratio_min: float        # min over C of r_{S+B}(c)|A| / (|S|tau)
    r_ratio_max: float
    notes: str = ""


def _shift_op(op: str) -> str:
    # r_{S+B}(c) = #{b : c - b in S} (resp. #{b : c/b in S} in mul mode)
    return "sub" if op == "add" else "div"


def _diff_op(op: str) -> str:
    return "sub" if op == "add" else "div"


def xue_regularize(A: ElemSet, k: float = 4.0, op: str = "add",
                   budget: Optional[int] = None) -> RegularDecomposition:
    """Iteratively extract (B, C, S_tau, tau) with concentrated E_k(B).

    Each round: dyadic-extract the dominant level set of r_{B∘B^-1}, keep the
    candidates popular against S_tau shifted by B, shrink to the popular half
    if too few qualify. Best-scoring round wins; at most ceil(log2 |A|) rounds.
    """
    if op not in ("add", "mul"):
        raise ValueError(f"op must be add or mul, got {op!r}")
    if op == "mul":
        A = A.remove_zero()
    n = len(A)
    if n == 0:
        raise ValueError("cannot regularize the empty set")

    if n < 4:
        r = rep_function(A, A, _diff_op(op), budget=budget)
        sl = dyadic_extract(r, k)
        return _finish_decomposition(A, A, A, sl.support, sl.t, op, k, 0,
                                     budget, notes="degenerate |A| < 4")

    L = math.ceil(math.log2(n))
    cand = A
    best = None  # (score, B, C, S, tau, round)
    for rnd in range(1, L + 1):
        if len(cand) < 2:
            break
        r = rep_function(cand, cand, _diff_op(op), budget=budget)
        sl = dyadic_extract(r, k)
        S, tau = sl.support, sl.t
        rc = _membership_counts(cand, cand, S, _shift_op(op))
        thr = Fraction(len(S) * tau, 2 * n * L)
        cutoff = max(1, _ceil_fraction(thr))
        mask = rc >= cutoff
        n_thr = int(mask.sum())
        lst = list(cand)
        if n_thr > 0:
            C = ElemSet(A.field,
                        [c for c, m in zip(lst, mask.tolist()) if m],
                        _canonical=True)
        else:
            # threshold emptied C: fall back to the popular half
            order = np.argsort(rc, kind="stable")
            top = [lst[i] for i in order[len(order) // 2:] if rc[i] >= 1]
            if not top:
                break
            C = ElemSet(A.field, top)
        score = len(C)
        if best is None or score > best[0]:
            best = (score, cand, C, S, tau, rnd)
        if n_thr >= len(cand) / 2:
            break
        order = np.argsort(rc, kind="stable")
        cand = ElemSet(A.field, [lst[i] for i in order[len(order) // 2:]])

    if best is None:
        r = rep_function(A, A, _diff_op(op), budget=budget)
        sl = dyadic_extract(r, k)
        return _finish_decomposition(A, A, A, sl.support, sl.t, op, k, 1,
                                     budget, notes="no admissible round")
    _, B, C, S, tau, rnd = best
    return _finish_decomposition(A, B, C, S, tau, op, k, rnd, budget)


def _finish_decomposition(A: ElemSet, B: ElemSet, C: ElemSet, S: ElemSet,
                          tau: int, op: str, k: float, rounds: int,
                          budget, notes: str = "") -> RegularDecomposition:
    n = len(A)
    e = energy(B, B, k, op, budget=budget)
    denom = len(S) * tau ** k
    rc = _membership_counts(C, B, S, _shift_op(op))
    scale = n / (len(S) * tau)
    ratios = rc.astype(np.float64) * scale
    return RegularDecomposition(
        B=B, C=C, S_tau=S, tau=tau, op=op, k=k, a_size=n, rounds=rounds,
        energy_ratio=float(e.value) / denom,
        r_ratio_min=float(ratios.min(initial=np.inf)),
        r_ratio_max=float(ratios.max(initial=0.0)),
        notes=notes)


def default_slack(n: int, c: float = 64.0) -> float:
    """K = c * log2(n)^3, the polylog allowance used by the checkers."""
    return c * max(1.0, math.log2(max(n, 2))) ** 3


def check_regular(d: RegularDecomposition, A: ElemSet, k: float,
                  K: Optional[float] = None,
                  budget: Optional[int] = None) -> VerificationReport:
    """Verify the decomposition's conclusions within slack K.

    (a) |C|, |B| >= |A|/K; (b) E_k(B)/(|S|tau^k) in [1, K] (lower bound exact);
    (c) r_{S+B}(c)|A|/(|S|tau) in [1/K, K] for every c in C.
    """
    t0 = time.perf_counter()
    if d.op == "mul":
        A = A.remove_zero()
    if not (d.C.issubset(d.B) and d.B.issubset(A)):
        raise ValueError("decomposition does not refine the given set")
    n = len(A)
    if K is None:
        K = default_slack(n)

    e = energy(d.B, d.B, k, d.op, budget=budget)
    if float(k).is_integer():
        denom = len(d.S_tau) * d.tau ** int(k)
        lower_exact = int(e.value) >= denom  # exact sub-sum bound
        ratio_b = int(e.value) / denom
    else:
        denom = len(d.S_tau) * d.tau ** k
        lower_exact = float(e.value) >= denom
        ratio_b = float(e.value) / denom

    ok_a = len(d.C) * K >= n and len(d.B) * K >= n and len(d.C) > 0
    ok_b = lower_exact and ratio_b <= K

    rc = _membership_counts(d.C, d.B, d.S_tau, _shift_op(d.op))
    scale = n / (len(d.S_tau) * d.tau)
    ratios = rc.astype(np.float64) * scale
    ok_c = bool(len(ratios) and (ratios >= 1 / K).all() and (ratios <= K).all())

    passed = bool(ok_a and ok_b and ok_c)
    return VerificationReport(
        lemma=f"regular-decomposition-{d.op}",
        inputs={"n": n, "k": k, "|B|": len(d.B), "|C|": len(d.C),
                "|S|": len(d.S_tau), "tau": d.tau,
                "field": A.field.describe()},
        lhs=ratio_b, rhs_shape=float(K), fitted_constant=ratio_b,
        slack=float(K), passed=passed,
        notes=(f"clauses a={ok_a} b={ok_b} c={ok_c}; "
               f"r-ratio range [{float(ratios.min(initial=np.inf)):.4g}, "
               f"{float(ratios.max(initial=0)):.4g}]"),
        elapsed_ms=(time.perf_counter() - t0) * 1e3)
