import dataclasses
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sumprod import (ElemSet, GroundField, check_regular, default_slack,
                     popular_sums, popularity_rule, regu_iterate,
                     xue_regularize)

from conftest import random_set


def test_popular_sums_frozen(c0):
    A = ElemSet(c0, [0, 1, 2, 3])
    # threshold 8/7; counts of A+A are 1,2,3,4,3,2,1
    assert sorted(popular_sums(A, Fraction(1, 2))) == [1, 2, 3, 4, 5]
    assert sorted(popular_sums(ElemSet(c0, [0, 1]), 1)) == [1]


def test_popular_sums_tiny_eps_keeps_all(c0):
    A = ElemSet(c0, [0, 1, 7])
    from sumprod import combine
    assert popular_sums(A, Fraction(1, 1000)) == combine(A, A, "add")


def test_popularity_rule_frozen(c0):
    A = ElemSet(c0, [0, 1, 2, 3])
    assert popularity_rule(A, Fraction(1, 2)) == A  # good-b counts 3,4,4,3
    assert len(popularity_rule(ElemSet(c0, [0, 1]), 1)) == 0


def test_popularity_rule_full_when_p_is_everything(c0):
    A = ElemSet(c0, [2, 9, 20])
    assert popularity_rule(A, Fraction(1, 10**6)) == A


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 60), min_size=1, max_size=12),
       st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100)))
def test_rule_outputs_are_subsets(xs, eps):
    c0 = GroundField.char0()
    A = ElemSet(c0, xs)
    from sumprod import combine
    assert popular_sums(A, eps).issubset(combine(A, A, "add"))
    assert popularity_rule(A, eps).issubset(A)


def test_regu_iterate_size_guarantee(fp):
    for seed in range(4):
        A = random_set(fp, 64, seed=seed)
        B, cert = regu_iterate(A, 4 / 3)
        assert len(B) >= (1 - cert.c1) * len(A)
        assert cert.size_guarantee_ok
        assert B.issubset(A)
        assert cert.c2 > 0


def test_regu_iterate_fixed_point_ap(c0):
    A = ElemSet(c0, range(64))
    B, cert = regu_iterate(A, 4 / 3)
    assert len(B) >= 32
    assert cert.c2 > 0


def test_regu_iterate_rejects_small(c0):
    with pytest.raises(ValueError):
        regu_iterate(ElemSet(c0, range(8)), 4 / 3)


def test_xue_degenerate_singleton(c0):
    d = xue_regularize(ElemSet(c0, [0]), 4, "add")
    assert sorted(d.B) == [0] and sorted(d.C) == [0]
    assert sorted(d.S_tau) == [0] and d.tau == 1
    dm = xue_regularize(ElemSet(GroundField.prime(7), [1]), 4, "mul")
    assert sorted(dm.S_tau) == [1] and dm.tau == 1
    rep = check_regular(d, ElemSet(c0, [0]), 4, K=2)
    assert rep.passed


def test_xue_level_property_exact(fp):
    from sumprod import rep_function
    for kind, A in (("ap", ElemSet(fp, range(1, 65))),
                    ("random", random_set(fp, 64, seed=9))):
        d = xue_regularize(A, 4, "add")
        counts = rep_function(d.B, d.B, "sub").to_dict()
        assert d.C.issubset(d.B) and d.B.issubset(A)
        for s in d.S_tau:
            assert d.tau <= counts[s] < 2 * d.tau, kind


def test_check_regular_passes_structured(fp, c0):
    A = ElemSet(c0, range(64))
    d = xue_regularize(A, 4, "add")
    assert check_regular(d, A, 4, default_slack(64)).passed
    G = ElemSet(fp, [pow(3, i, fp.p) for i in range(64)])
    dg = xue_regularize(G, 4, "mul")
    assert check_regular(dg, G, 4, default_slack(64)).passed


def test_check_regular_detects_corruption(c0):
    A = ElemSet(c0, range(64))
    d = xue_regularize(A, 4, "add")
    bad = dataclasses.replace(d, tau=2 * d.tau)
    rep = check_regular(bad, A, 4, default_slack(64))
    assert not rep.passed
    assert "b=False" in rep.notes  # clause (b): sub-sum lower bound breaks


def test_check_regular_rejects_foreign_set(c0):
    A = ElemSet(c0, range(64))
    d = xue_regularize(A, 4, "add")
    with pytest.raises(ValueError):
        check_regular(d, ElemSet(c0, range(5)), 4, 100.0)


def test_determinism(fp):
    A = random_set(fp, 128, seed=3)
    d1 = xue_regularize(A, 4, "add")
    d2 = xue_regularize(A, 4, "add")
    assert d1.B == d2.B and d1.C == d2.C and d1.S_tau == d2.S_tau \
        and d1.tau == d2.tau
