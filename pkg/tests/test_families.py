import pytest

from sumprod import (ElemSet, FamilySpec, GroundField, gen_family,
                     local_search_min_ratio, prime_with_subgroup,
                     primitive_root, subgroup_of_order, sum_product_ratio)

from conftest import P31


def test_gen_ap(c0):
    spec = FamilySpec(kind="ap", n=5, field=c0, start=0, step=1)
    assert sorted(gen_family(spec)) == [0, 1, 2, 3, 4]


def test_gen_gp(c0):
    spec = FamilySpec(kind="gp", n=4, field=c0, base=1, ratio=2)
    assert sorted(gen_family(spec)) == [1, 2, 4, 8]


def test_gen_subgroup_mod7():
    F7 = GroundField.prime(7)
    spec = FamilySpec(kind="subgroup", n=3, field=F7)
    assert sorted(gen_family(spec)) == [1, 2, 4]  # cubes mod 7
    assert sorted(subgroup_of_order(7, 3)) == [1, 2, 4]


def test_gen_random_deterministic(fp):
    spec = FamilySpec(kind="random", n=20, field=fp, seed=5)
    assert gen_family(spec) == gen_family(spec)
    assert len(gen_family(spec)) == 20


def test_gen_validation(c0, fp):
    with pytest.raises(ValueError):
        FamilySpec(kind="gp", n=4, field=c0, ratio=1)
    with pytest.raises(ValueError):
        FamilySpec(kind="cantor", n=4, field=c0)
    with pytest.raises(ValueError):
        gen_family(FamilySpec(kind="subgroup", n=5, field=GroundField.prime(7)))


def test_primitive_root():
    assert primitive_root(7) == 3
    assert pow(primitive_root(P31), (P31 - 1) // 2, P31) != 1


def test_prime_with_subgroup():
    p = prime_with_subgroup(16)
    assert p <= 2**31 and (p - 1) % 16 == 0  # int32-friendly
    assert len(subgroup_of_order(p, 16)) == 16


def test_ratio_spot_values(c0):
    A = ElemSet(c0, range(1, 9))
    assert abs(sum_product_ratio(A) - 30 / 8 ** 1.25) < 1e-12
    assert abs(sum_product_ratio(ElemSet(c0, [1, 2])) - 3 / 2 ** 1.25) < 1e-12
    gp = ElemSet(c0, [2 ** i for i in range(8)])
    assert abs(sum_product_ratio(gp) - 36 / 8 ** 1.25) < 1e-12


def test_ratio_validation(c0):
    with pytest.raises(ValueError):
        sum_product_ratio(ElemSet(c0, [1]))
    with pytest.raises(ValueError):
        sum_product_ratio(ElemSet(c0, [1, 2]), addop="mul")


def test_search_zero_steps():
    F = GroundField.prime(1009)
    seed = ElemSet(F, range(1, 17))
    st = local_search_min_ratio(seed, 0, rng_seed=1)
    assert st.best == seed
    assert st.best_ratio == sum_product_ratio(seed)


def test_search_never_worsens():
    F = GroundField.prime(1009)
    seed = ElemSet(F, range(1, 17))
    st = local_search_min_ratio(seed, 200, rng_seed=2)
    assert st.best_ratio <= sum_product_ratio(seed)
    assert st.best_ratio <= st.current_ratio or st.best_ratio <= sum_product_ratio(seed)
    assert len(st.best) == 16


def test_search_deterministic():
    F = GroundField.prime(1009)
    seed = ElemSet(F, range(1, 17))
    a = local_search_min_ratio(seed, 100, rng_seed=7)
    b = local_search_min_ratio(seed, 100, rng_seed=7)
    assert a.best == b.best and a.best_ratio == b.best_ratio


def test_search_validation(c0):
    with pytest.raises(ValueError):
        local_search_min_ratio(ElemSet(GroundField.prime(101), [1, 2, 3, 4]),
                               -1)
    with pytest.raises(ValueError):
        local_search_min_ratio(ElemSet(c0, [1, 2, 3, 4]), 10)
