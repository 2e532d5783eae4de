import random
import re

import pytest

from sumprod import ElemSet, GroundField

P31 = 2**31 - 1

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    # one human-readable verdict line per acceptance criterion, emitted
    # outside per-test capture so it always reaches the terminal
    if report.when != "call":
        return
    m = _CRITERION.search(report.nodeid)
    if m:
        num, name = m.group(1), m.group(2)
        verdict = "PASS" if report.outcome == "passed" else "FAIL"
        print(f"\ncriterion {num} ({name}): {verdict}", flush=True)


@pytest.fixture
def c0():
    return GroundField.char0()


@pytest.fixture
def fp():
    return GroundField.prime(P31)


def random_set(field: GroundField, n: int, seed: int, lo: int = 0,
               hi: int = None) -> ElemSet:
    rng = random.Random(seed)
    if field.is_prime_mode:
        hi = hi if hi is not None else field.p
        return ElemSet(field, rng.sample(range(lo, hi), n))
    hi = hi if hi is not None else max(1000, 100 * n * n)
    return ElemSet(field, rng.sample(range(lo, hi), n))
