import random

import pytest

from ecledger.arith import primes_up_to
from ecledger.counting import (
    count_points,
    count_points_naive,
    frobenius_record,
    hasse_contradiction_symbolic,
    hasse_interval,
    trace_ap,
    verify_ordinary_criterion,
)
from ecledger.curve import E1, E2, SingularCurveError, WeierstrassCurve

rng = random.Random(2718)


def test_count_matches_naive_oracle():
    for p in primes_up_to(50):
        if E1.discriminant() % p == 0:
            continue
        assert count_points(E1, p) == count_points_naive(E1, p)
    for _ in range(20):
        p = rng.choice([q for q in primes_up_to(50) if q > 2])
        try:
            C = WeierstrassCurve(*(rng.randrange(-9, 10) for _ in range(5)))
        except SingularCurveError:
            continue
        if C.discriminant() % p == 0:
            continue
        assert count_points(C, p) == count_points_naive(C, p)


def test_traces_of_E1():
    expected = {2: -1, 7: 0, 11: -4, 13: -2, 17: 2, 19: 4, 23: 0, 29: -2}
    for p, ap in expected.items():
        assert trace_ap(E1, p) == ap


def test_isogenous_curves_share_traces():
    for p in primes_up_to(100):
        if p in (3, 5):
            continue
        assert trace_ap(E1, p) == trace_ap(E2, p)


def test_hasse_bound_on_all_small_primes():
    for p in primes_up_to(500):
        if E1.discriminant() % p == 0:
            continue
        rec = frobenius_record(E1, p)  # __post_init__ hard-asserts Hasse
        lo, hi = hasse_interval(p)
        assert lo <= rec.count <= hi


def test_ordinary_flag():
    assert frobenius_record(E1, 7).ordinary is False  # a_7 = 0
    assert frobenius_record(E1, 2).ordinary is True  # a_2 = -1


def test_ordinary_criterion_sweep():
    failures, symbolic = verify_ordinary_criterion(E1, 8, 1000)
    assert failures == [] and symbolic is True


def test_torsion_injects_divisibility():
    for p in primes_up_to(200):
        if p == 2 or E1.discriminant() % p == 0:
            continue
        assert count_points(E1, p) % 8 == 0


def test_symbolic_hasse_contradiction():
    # 8p > p + 1 + 2*sqrt(p) for all p >= 2 ... worst case is p = 2
    assert hasse_contradiction_symbolic(8) is True
    # torsion order 1 gives p > p + 1 + 2 sqrt p, never true
    assert hasse_contradiction_symbolic(1) is False
