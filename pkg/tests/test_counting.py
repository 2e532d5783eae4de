import pytest
from hypothesis import given, settings, strategies as st

from sumprod import (ElemSet, GroundField, bilinear_count, count_energy_equiv,
                     energy, f_collision_count, tautological_count)

from oracles import (naive_bilinear, naive_f_collision, naive_tautological)

tiny = st.lists(st.integers(1, 25), min_size=1, max_size=6)
tiny0 = st.lists(st.integers(-12, 12), min_size=1, max_size=6)


def test_f_collision_frozen(c0):
    one = ElemSet(c0, [1])
    two = ElemSet(c0, [1, 2])
    assert f_collision_count(one, one, one) == 1
    assert f_collision_count(two, two, two) == 14
    assert f_collision_count(one, one, two) == 2


def test_f_collision_rejects_zero(c0):
    with pytest.raises(ValueError):
        f_collision_count(ElemSet(c0, [0, 1]), ElemSet(c0, [1]),
                          ElemSet(c0, [1]))


def test_bilinear_frozen(c0):
    one = ElemSet(c0, [1])
    assert bilinear_count(one, one, one, ElemSet(c0, [0])) == 1
    F5 = GroundField.prime(5)
    o5 = ElemSet(F5, [1])
    assert bilinear_count(o5, o5, o5, o5) == 0
    assert bilinear_count(ElemSet(c0, [1, 2]), ElemSet(c0, [1, 2]),
                          ElemSet(c0, [1, 2, 3, 4, 5]),
                          ElemSet(c0, [0, 1])) == 8


def test_tautological_frozen(c0):
    assert tautological_count(ElemSet(c0, [0, 1]), ElemSet(c0, [1]),
                              ElemSet(c0, [0, 1, 2])) == 4
    B = ElemSet(c0, [0, 1, 2])
    assert tautological_count(B, ElemSet.empty(c0), B) == 0
    assert tautological_count(B, B, ElemSet.empty(c0)) == 0


def test_energy_equiv_frozen(c0):
    A = ElemSet(c0, [0, 1, 2])
    assert count_energy_equiv(A, "add", 2) == 19
    assert count_energy_equiv(ElemSet(c0, [5]), "add", 4) == 1
    assert count_energy_equiv(ElemSet(c0, [1, 2, 4]), "mul", 2) == 19


@settings(max_examples=40, deadline=None)
@given(tiny, tiny, tiny, st.booleans())
def test_f_collision_vs_naive(xs, ys, zs, prime):
    field = GroundField.prime(31) if prime else GroundField.char0()
    X, Y, Z = (ElemSet(field, v).remove_zero() for v in (xs, ys, zs))
    if min(len(X), len(Y), len(Z)) == 0:
        return
    assert f_collision_count(X, Y, Z) == naive_f_collision(X, Y, Z)


@settings(max_examples=40, deadline=None)
@given(tiny0, tiny0, tiny0, tiny0, st.booleans())
def test_bilinear_vs_naive(a, b, c, d, prime):
    field = GroundField.prime(31) if prime else GroundField.char0()
    A, B, C, D = (ElemSet(field, v) for v in (a, b, c, d))
    assert bilinear_count(A, B, C, D) == naive_bilinear(A, B, C, D)


@settings(max_examples=30, deadline=None)
@given(tiny0, tiny0, tiny0, st.booleans())
def test_tautological_vs_naive(b, d, p, prime):
    field = GroundField.prime(31) if prime else GroundField.char0()
    B, D, P = (ElemSet(field, v) for v in (b, d, p))
    assert tautological_count(B, D, P) == naive_tautological(B, D, P)


@settings(max_examples=25, deadline=None)
@given(tiny0, tiny0, tiny0, st.integers(-10, 10))
def test_tautological_translation_invariance(b, d, p, s):
    c0 = GroundField.char0()
    B, D, P = (ElemSet(c0, v) for v in (b, d, p))
    # a, b, c, d all shift by s, so sums a+c etc. shift by 2s; D is unchanged
    Bs = ElemSet(c0, [x + s for x in B])
    Ps = ElemSet(c0, [x + 2 * s for x in P])
    assert tautological_count(B, D, P) == tautological_count(Bs, D, Ps)


@settings(max_examples=30, deadline=None)
@given(tiny, tiny, tiny)
def test_f_collision_diagonal_floor(xs, ys, zs):
    c0 = GroundField.char0()
    X, Y, Z = (ElemSet(c0, v) for v in (xs, ys, zs))
    assert f_collision_count(X, Y, Z) >= len(X) * len(Y) * len(Z)


def test_energy_equiv_budget(c0):
    from sumprod import BudgetExceeded
    with pytest.raises(BudgetExceeded):
        count_energy_equiv(ElemSet(c0, range(65)), "add", 2)
    with pytest.raises(ValueError):
        count_energy_equiv(ElemSet(c0, [1, 2]), "add", 3)
