"""Representation functions r_{A∘B} with exact multiplicities.

The hot path (prime mode / int-valued sets) streams A x B in row chunks into
one flat array, radix-sorts it and run-length encodes; this is what makes
fourth-moment energies of 10^4-element sets feasible on one core. Rational or
oversized values fall back to an exact Counter.
"""

from __future__ import annotations

import os
from collections import Counter
from typing import Iterator, Optional, Tuple

import numpy as np

from .field import ElemSet, FieldMismatch, GroundField

OPS = ("add", "sub", "mul", "div")

DEFAULT_BUDGET = 100_000_000  # pair insertions
_CHUNK = 1 << 22


class BudgetExceeded(RuntimeError):
    """A counting table would exceed the configured insertion budget."""


def table_budget() -> int:
    env = os.environ.get("SUMPROD_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class RepFn:
    """Counting table x -> |{(a,b): a ∘ b = x}|, stored as sorted parallel arrays.

    `values` is either a sorted int64 numpy array or a sorted tuple of exact
    elements; `counts` aligns with it. `excluded_pairs` records zero-denominator
    pairs dropped in div mode.
    """

    __slots__ = ("field", "op", "values", "counts", "excluded_pairs",
                 "lhs_size", "rhs_size")

    def __init__(self, field: GroundField, op: str, values, counts,
                 excluded_pairs: int, lhs_size: int, rhs_size: int):
        self.field = field
        self.op = op
        self.values = values
        self.counts = counts
        self.excluded_pairs = excluded_pairs
        self.lhs_size = lhs_size
        self.rhs_size = rhs_size

    def __len__(self) -> int:
        return len(self.values)

    def total_mass(self) -> int:
        if isinstance(self.counts, np.ndarray):
            return int(self.counts.sum())
        return sum(self.counts)

    def max_count(self) -> int:
        if len(self.values) == 0:
            return 0
        if isinstance(self.counts, np.ndarray):
            return int(self.counts.max())
        return max(self.counts)

    def items(self) -> Iterator[Tuple[object, int]]:
        if isinstance(self.values, np.ndarray):
            for v, c in zip(self.values.tolist(), self.counts.tolist()):
                yield v, c
        else:
            yield from zip(self.values, self.counts)

    def count_of(self, x) -> int:
        x = self.field.canonical(x)
        if isinstance(self.values, np.ndarray):
            if not isinstance(x, int):
                return 0
            i = int(np.searchsorted(self.values, x))
            if i < self.values.size and int(self.values[i]) == x:
                return int(self.counts[i])
            return 0
        try:
            i = self.values.index(x)
        except ValueError:
            return 0
        return self.counts[i]

    def support(self) -> ElemSet:
        if isinstance(self.values, np.ndarray):
            return ElemSet._from_sorted_array(
                self.field, self.values.astype(np.int64))
        return ElemSet(self.field, self.values, _canonical=True)

    def to_dict(self) -> dict:
        return dict(self.items())

    def count_histogram(self) -> np.ndarray:
        """hist[m] = number of values with multiplicity exactly m."""
        if len(self.values) == 0:
            return np.zeros(1, dtype=np.int64)
        counts = np.asarray(self.counts, dtype=np.int64)
        return np.bincount(counts)


def _check_ops(A: ElemSet, B: ElemSet, op: str) -> None:
    if op not in OPS:
        raise ValueError(f"unknown operator {op!r}")
    if A.field != B.field:
        raise FieldMismatch(f"field mismatch: {A.field} vs {B.field}")


def _int_fast_ok(A: ElemSet, B: ElemSet, op: str) -> bool:
    if A.ints is None or B.ints is None:
        return False
    field = A.field
    if field.is_prime_mode:
        return field.p < (1 << 31)  # products must fit int64
    if op == "div":
        return False  # char-zero ratios are exact rationals
    bound = 1 << 31 if op == "mul" else 1 << 61
    amax = int(np.abs(A.ints).max(initial=0))
    bmax = int(np.abs(B.ints).max(initial=0))
    return amax < bound and bmax < bound


def _flat_sorted_int(A: ElemSet, B: ElemSet, op: str) -> np.ndarray:
    """Sorted flat array of all |A||B| op-values (int fast path only).

    Prime mode stays in int32 where p allows: add/sub use a shifted
    subtraction plus one conditional correction instead of a modulo.
    """
    field = A.field
    a = A.ints
    b = B.ints
    p = field.p
    if op == "div":
        b = np.asarray([pow(int(v), p - 2, p) for v in b], dtype=np.int64)
        op = "mul"
    n, m = a.size, b.size
    small = p is not None and p <= (1 << 31) - 1
    dtype = np.int32 if small else np.int64
    out = np.empty(n * m, dtype=dtype)
    rows = max(1, _CHUNK // max(m, 1))

    if small and op in ("add", "sub"):
        a32 = a.astype(np.int32)
        # a+b mod p == a-(p-b) mod p; both cases become subtraction in (-p, p)
        b32 = (p - b).astype(np.int32) if op == "add" else b.astype(np.int32)
        p32 = np.int32(p)
        for i0 in range(0, n, rows):
            blk = a32[i0:i0 + rows, None] - b32[None, :]
            blk[blk < 0] += p32
            out[i0 * m:i0 * m + blk.size] = blk.ravel()
    else:
        for i0 in range(0, n, rows):
            blk_a = a[i0:i0 + rows, None]
            if op == "add":
                blk = blk_a + b[None, :]
            elif op == "sub":
                blk = blk_a - b[None, :]
            else:
                blk = blk_a * b[None, :]
            if p is not None:
                blk %= p
            out[i0 * m:i0 * m + blk.size] = blk.ravel()

    out.sort()  # SIMD introsort; much faster than radix here
    return out


def _rle(flat: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    if flat.size == 0:
        return flat.astype(np.int64), np.zeros(0, dtype=np.int64)
    edges = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    starts = np.concatenate(([0], edges))
    bounds = np.concatenate((starts, [flat.size]))
    return flat[starts].astype(np.int64), np.diff(bounds)


def _object_table(A: ElemSet, B: ElemSet, op: str) -> Counter:
    fop = getattr(A.field, op)
    table = Counter()
    for x in A:
        for y in B:
            table[fop(x, y)] += 1
    return table


def _prepare(A: ElemSet, B: ElemSet, op: str, budget: Optional[int]):
    _check_ops(A, B, op)
    budget = budget if budget is not None else table_budget()
    excluded = 0
    if op == "div" and 0 in B:
        excluded = len(A)
        B = B.remove_zero()
    if len(A) * len(B) > budget:
        raise BudgetExceeded(f"{len(A)}x{len(B)} pairs exceed budget {budget}")
    return B, excluded


def rep_function(A: ElemSet, B: ElemSet, op: str,
                 budget: Optional[int] = None) -> RepFn:
    """Exact representation function r_{A∘B}.

    Div mode excludes zero-denominator pairs and records how many were dropped.
    """
    field = A.field
    B2, excluded = _prepare(A, B, op, budget)
    rhs = len(B2) + (1 if excluded else 0)

    if len(A) == 0 or len(B2) == 0:
        return RepFn(field, op, np.zeros(0, dtype=np.int64),
                     np.zeros(0, dtype=np.int64), excluded, len(A), rhs)

    if _int_fast_ok(A, B2, op):
        vals, counts = _rle(_flat_sorted_int(A, B2, op))
        return RepFn(field, op, vals, counts, excluded, len(A), rhs)

    table = _object_table(A, B2, op)
    vals = sorted(table)
    return RepFn(field, op, tuple(vals), [table[v] for v in vals],
                 excluded, len(A), rhs)


def count_spectrum(A: ElemSet, B: ElemSet, op: str,
                   budget: Optional[int] = None) -> np.ndarray:
    """Multiplicity histogram of r_{A∘B}: hist[m] = #values hit exactly m times.

    Avoids materialising the value keys, so energies of 10^4-element sets fit
    comfortably in memory.
    """
    B2, _ = _prepare(A, B, op, budget)
    if len(A) == 0 or len(B2) == 0:
        return np.zeros(1, dtype=np.int64)
    if _int_fast_ok(A, B2, op):
        flat = _flat_sorted_int(A, B2, op)
        total = flat.size
        eq = flat[1:] == flat[:-1]
        del flat
        # positions of equal adjacent pairs; sparse for generic sets, so the
        # run-length histogram is built from this small index set
        eq_idx = np.flatnonzero(eq)
        del eq
        if eq_idx.size == 0:
            return np.asarray([0, total], dtype=np.int64)
        brk = np.flatnonzero(np.diff(eq_idx) != 1)
        run_len = np.diff(np.concatenate(
            (np.asarray([-1], dtype=np.int64), brk,
             np.asarray([eq_idx.size - 1], dtype=np.int64))))
        mult = run_len + 1  # a run of r equal-adjacencies means r+1 copies
        distinct = total - int(eq_idx.size)
        hist = np.bincount(mult)
        hist[1] = distinct - int(mult.size)
        return hist
    table = _object_table(A, B2, op)
    return np.bincount(np.asarray(list(table.values()), dtype=np.int64))
