"""Point counts over F_p, Frobenius traces and the ordinary-prime sweep.

Counting is O(p) per prime: for odd p the affine count is
p + sum_x chi(f(x)) where f is the completed square
f(x) = 4x^3 + b2 x^2 + 2 b4 x + b6 and chi the quadratic character,
evaluated with a numpy residue table.  p = 2 is brute force.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import DomainError, primes_up_to
from .curve import BadReductionError, WeierstrassCurve


@dataclass(frozen=True)
class FrobeniusRecord:
    p: int
    count: int
    trace: int
    ordinary: bool

    def __post_init__(self):
        if self.trace * self.trace > 4 * self.p:
            raise AssertionError(f"Hasse bound violated at {self.p}: a_p = {self.trace}")


def count_points_naive(C: WeierstrassCurve, p: int) -> int:
    """Full enumeration oracle, O(p^2).  Kept independent of the fast path."""
    Cp = C.reduce_mod_p(p)
    return len(Cp.points_over_fp())


def count_points(C: WeierstrassCurve, p: int) -> int:
    """#E(F_p) including the point at infinity; p must be a good prime."""
    if C.discriminant() % p == 0:
        raise BadReductionError(f"bad reduction at {p}")
    if not C.is_integral():
        raise DomainError("counting requires an integral model")
    if p == 2:
        return count_points_naive(C, 2)
    b2, b4, b6, _ = (v % p for v in C.b_invariants())
    x = np.arange(p, dtype=np.int64)
    f = (((4 * x + b2) * x + 2 * b4) * x + b6) % p
    is_square = np.zeros(p, dtype=bool)
    is_square[(x * x) % p] = True
    chi = np.where(f == 0, 0, np.where(is_square[f], 1, -1))
    return int(p + 1 + chi.sum())


def trace_ap(C: WeierstrassCurve, p: int) -> int:
    return p + 1 - count_points(C, p)


def classify_ordinary(C: WeierstrassCurve, p: int) -> str:
    """'supersingular' iff a_p = 0 mod p, else 'ordinary' (good p)."""
    return "supersingular" if trace_ap(C, p) % p == 0 else "ordinary"


def frobenius_record(C: WeierstrassCurve, p: int) -> FrobeniusRecord:
    count = count_points(C, p)
    trace = p + 1 - count
    return FrobeniusRecord(p, count, trace, ordinary=trace % p != 0)


def hasse_contradiction_symbolic(torsion_order: int) -> bool:
    """torsion_order * p > p + 1 + 2*sqrt(p) for every prime p >= 2.

    For t >= 2 the inequality t*p > p + 1 + 2*sqrt(p) reduces to
    (t-1)*p - 1 > 2*sqrt(p); squaring at the worst case p = 2 settles all p
    since the left side grows linearly and the right as sqrt.
    """
    if torsion_order < 2:
        return False
    # (t-1)p - 1 > 2 sqrt(p)  <=>  ((t-1)p - 1)^2 > 4p  (both sides positive).
    # The gap ((t-1)p - 1)^2 - 4p is increasing in p for p >= 2, so p = 2
    # decides the claim.
    t = torsion_order
    return ((t - 1) * 2 - 1) ** 2 > 8


@dataclass(frozen=True)
class OrdinaryCriterionRow:
    p: int
    count: int
    trace: int
    torsion_divides: bool
    trace_not_one_mod_p: bool

    @property
    def passed(self) -> bool:
        return self.torsion_divides and self.trace_not_one_mod_p


def verify_ordinary_criterion(
    C: WeierstrassCurve, torsion_order: int, bound: int
) -> tuple[list[OrdinaryCriterionRow], bool]:
    """For every good odd p <= bound: torsion injects and a_p != 1 mod p.

    Returns (failing rows, symbolic Hasse inequality verdict).  An empty
    failure list plus a true verdict is the full criterion.
    """
    disc = C.discriminant()
    failures = []
    for p in primes_up_to(bound):
        if p == 2 or disc % p == 0:
            continue
        count = count_points(C, p)
        trace = p + 1 - count
        row = OrdinaryCriterionRow(
            p, count, trace, count % torsion_order == 0, trace % p != 1
        )
        if not row.passed:
            failures.append(row)
    return failures, hasse_contradiction_symbolic(torsion_order)


def hasse_interval(p: int) -> tuple[int, int]:
    """Closed integer interval containing #E(F_p): |a_p| <= floor(2 sqrt p)."""
    m = math.isqrt(4 * p)
    return (p + 1 - m, p + 1 + m)
