from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ecledger.arith import DomainError, rational_valuation
from ecledger.curve import E1, E2, WeierstrassCurve
from ecledger.padic import (
    PadicNumber,
    evaluate_j_at,
    iwasawa_log,
    j_q_expansion,
    l_invariant,
    tate_parameter,
)

nonzero_rational = st.fractions(
    min_value=Fraction(-10_000), max_value=Fraction(10_000), max_denominator=10_000
).filter(lambda x: x != 0)


def test_string_roundtrip():
    x = PadicNumber.from_fraction(Fraction(7, 10), 3, 12)
    assert PadicNumber.parse(str(x)).agrees_with(x)
    z = PadicNumber.zero(5, 8)
    assert PadicNumber.parse(str(z)).is_zero


@given(nonzero_rational, nonzero_rational)
@settings(max_examples=100)
def test_ultrametric_laws_at_5(a, b):
    p = 5
    x = PadicNumber.from_fraction(a, p, 15)
    y = PadicNumber.from_fraction(b, p, 15)
    va, vb = rational_valuation(a, p), rational_valuation(b, p)
    assert x.valuation() == va and y.valuation() == vb
    assert (x * y).valuation() == va + vb
    s = x + y
    if a + b != 0:
        assert s.valuation() >= min(va, vb)
        if va != vb:
            assert s.valuation() == min(va, vb)
    else:
        assert s.is_zero


@given(nonzero_rational, nonzero_rational)
@settings(max_examples=60)
def test_field_ops_match_exact_rationals(a, b):
    p = 7
    prec = 12
    x = PadicNumber.from_fraction(a, p, prec)
    y = PadicNumber.from_fraction(b, p, prec)
    for op, exact in (
        (x * y, a * b),
        (x - y, a - b),
        (x / y, a / b),
    ):
        if exact == 0:
            assert op.is_zero
        else:
            assert op.agrees_with(PadicNumber.from_fraction(exact, p, op.prec))


def test_addition_tracks_cancellation():
    # 1 - (1 + 5^10) loses ten digits of absolute precision
    one = PadicNumber.from_fraction(1, 5, 12)
    close = PadicNumber.from_fraction(1 + 5**10, 5, 12)
    d = close - one
    assert d.valuation() == 10


def test_j_expansion_initial_coefficients():
    exp = j_q_expansion(3)
    assert exp.c(-1) == 1
    assert exp.c(0) == 744
    assert exp.c(1) == 196884
    assert exp.c(2) == 21493760


def test_tate_parameter_of_E1_at_5():
    q = tate_parameter(E1, 5, prec=20)
    assert q.valuation() == 4 == -rational_valuation(E1.j_invariant(), 5)
    jq = evaluate_j_at(q)
    assert jq.agrees_with(PadicNumber.from_fraction(E1.j_invariant(), 5, q.prec))


def test_tate_parameter_requires_split_multiplicative():
    with pytest.raises(DomainError):
        tate_parameter(E1, 3)  # nonsplit
    with pytest.raises(DomainError):
        tate_parameter(E1, 7)  # good


def test_iwasawa_log_is_homomorphic():
    p = 5
    u = PadicNumber.from_fraction(Fraction(7, 3), p, 14)
    v = PadicNumber.from_fraction(Fraction(11, 2), p, 14)
    lhs = iwasawa_log(u * v)
    rhs = iwasawa_log(u) + iwasawa_log(v)
    assert lhs.agrees_with(PadicNumber(p, rhs.val, rhs.unit % p**lhs.prec, lhs.prec)) or (
        lhs.is_zero and rhs.is_zero
    )


def test_iwasawa_branch_kills_powers_of_p():
    # log(p^k * u) = log(u) under the log(p) = 0 branch
    p = 5
    u = PadicNumber.from_fraction(Fraction(7, 3), p, 14)
    shifted = u * PadicNumber.from_fraction(p**3, p, 14)
    assert iwasawa_log(shifted).agrees_with(iwasawa_log(u))


def test_l_invariant_valuation_one():
    res = l_invariant(E1, 5, prec=20)
    assert res.value.valuation() == 1
    assert res.unit_times_p is True
    # stable under doubling the working precision
    res2 = l_invariant(E1, 5, prec=40)
    assert res.value.agrees_with(
        PadicNumber(5, res2.value.val, res2.value.unit % 5**res.value.prec, res.value.prec)
    )


def test_l_invariant_is_isogeny_invariant():
    a = l_invariant(E1, 5, prec=20).value
    b = l_invariant(E2, 5, prec=20).value
    k = min(a.prec, b.prec)
    assert a.val == b.val
    assert (a.unit - b.unit) % 5**k == 0
