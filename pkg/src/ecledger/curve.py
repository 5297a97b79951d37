"""Long Weierstrass models, invariants, group law, reduction and 2-isogenies.

Curves live either over the rationals (``p is None``, integer coefficients,
point coordinates are ``Fraction``) or over a prime field (``p`` set, all
values reduced mod p).  Points are ``None`` for the point at infinity or an
``(x, y)`` pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import DomainError, divisors, iroot_exact, is_prime, isqrt_exact, valuation

Point = tuple  # (x, y); the point at infinity is None


class SingularCurveError(DomainError):
    """The given coefficients define a singular cubic."""


class BadReductionError(DomainError):
    """Reduction mod p was requested at a prime dividing the discriminant."""


@dataclass(frozen=True)
class Invariants:
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    disc: int
    j: Fraction


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6.

    Over Q the coefficients may be rational (Velu codomains of non-integral
    kernel points are); integral models keep plain ints.
    """

    a1: int | Fraction
    a2: int | Fraction
    a3: int | Fraction
    a4: int | Fraction
    a6: int | Fraction
    p: int | None = None  # None = over Q, otherwise the prime field F_p

    def __post_init__(self):
        if self.p is not None:
            if not is_prime(self.p):
                raise DomainError(f"{self.p} is not prime")
            for name in ("a1", "a2", "a3", "a4", "a6"):
                object.__setattr__(self, name, int(getattr(self, name)) % self.p)
        else:
            for name in ("a1", "a2", "a3", "a4", "a6"):
                v = Fraction(getattr(self, name))
                object.__setattr__(self, name, int(v) if v.denominator == 1 else v)
        if self.discriminant() == 0:
            raise SingularCurveError(f"singular model {self.coefficients()}")

    def is_integral(self) -> bool:
        return self.p is not None or all(isinstance(a, int) for a in self.coefficients())

    # -- invariants ---------------------------------------------------------

    def coefficients(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.coefficients()
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        if self.p is not None:
            return (b2 % self.p, b4 % self.p, b6 % self.p, b8 % self.p)
        return (b2, b4, b6, b8)

    def c_invariants(self) -> tuple[int, int]:
        b2, b4, b6, _ = self.b_invariants()
        c4 = b2 * b2 - 24 * b4
        c6 = -b2**3 + 36 * b2 * b4 - 216 * b6
        if self.p is not None:
            return (c4 % self.p, c6 % self.p)
        return (c4, c6)

    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants()
        d = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        return d % self.p if self.p is not None else d

    def invariants(self) -> Invariants:
        b2, b4, b6, b8 = self.b_invariants()
        c4, c6 = self.c_invariants()
        disc = self.discriminant()
        if self.p is None:
            j = Fraction(c4**3, disc)
        else:
            j = Fraction(c4**3 * pow(disc, -1, self.p) % self.p)
        return Invariants(b2, b4, b6, b8, c4, c6, disc, j)

    def j_invariant(self) -> Fraction:
        return self.invariants().j

    # -- field helpers ------------------------------------------------------

    def _elem(self, x):
        if self.p is not None:
            return x % self.p if isinstance(x, int) else int(x) % self.p
        return Fraction(x)

    def _div(self, num, den):
        if self.p is not None:
            return num * pow(den % self.p, -1, self.p) % self.p
        return Fraction(num, 1) / den

    # -- points -------------------------------------------------------------

    def is_on_curve(self, pt: Point | None) -> bool:
        if pt is None:
            return True
        x, y = self._elem(pt[0]), self._elem(pt[1])
        lhs = y * y + self.a1 * x * y + self.a3 * y
        rhs = x**3 + self.a2 * x * x + self.a4 * x + self.a6
        if self.p is not None:
            return (lhs - rhs) % self.p == 0
        return lhs == rhs

    def _require_on_curve(self, pt):
        if not self.is_on_curve(pt):
            raise DomainError(f"point {pt} is not on {self.coefficients()}")

    def negate(self, pt: Point | None) -> Point | None:
        self._require_on_curve(pt)
        if pt is None:
            return None
        x, y = self._elem(pt[0]), self._elem(pt[1])
        return (x, self._elem(-y - self.a1 * x - self.a3))

    def add(self, P: Point | None, Q: Point | None) -> Point | None:
        self._require_on_curve(P)
        self._require_on_curve(Q)
        if P is None:
            return Q
        if Q is None:
            return P
        a1, a2, a3, a4, a6 = self.coefficients()
        x1, y1 = self._elem(P[0]), self._elem(P[1])
        x2, y2 = self._elem(Q[0]), self._elem(Q[1])
        same_x = (x1 - x2) % self.p == 0 if self.p is not None else x1 == x2
        if same_x:
            same_y = (y2 - y1) % self.p == 0 if self.p is not None else y1 == y2
            if not same_y:
                return None  # Q = -P
            den = self._elem(2 * y1 + a1 * x1 + a3)
            if den == 0:
                return None  # 2-torsion doubles to infinity
            lam = self._div(3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1, den)
            nu = self._div(-(x1**3) + a4 * x1 + 2 * a6 - a3 * y1, den)
        else:
            lam = self._div(y2 - y1, x2 - x1)
            nu = y1 - lam * x1
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return (self._elem(x3), self._elem(y3))

    def multiply(self, pt: Point | None, n: int) -> Point | None:
        self._require_on_curve(pt)
        if n < 0:
            return self.multiply(self.negate(pt), -n)
        result, addend = None, pt
        while n:
            if n & 1:
                result = self.add(result, addend)
            addend = self.add(addend, addend)
            n >>= 1
        return result

    def points_over_fp(self) -> list:
        """All points including infinity; only for curves over a prime field."""
        if self.p is None:
            raise DomainError("point enumeration requires a finite base field")
        pts = [None]
        for x in range(self.p):
            for y in range(self.p):
                if self.is_on_curve((x, y)):
                    pts.append((x, y))
        return pts

    # -- reduction ----------------------------------------------------------

    def reduce_mod_p(self, p: int) -> "WeierstrassCurve":
        if self.p is not None:
            raise DomainError("curve is already over a finite field")
        if not self.is_integral():
            raise DomainError("reduction requires an integral model")
        if self.discriminant() % p == 0:
            raise BadReductionError(f"bad reduction at {p}")
        return WeierstrassCurve(*(a % p for a in self.coefficients()), p=p)

    def reduce_point(self, pt: Point | None, p: int) -> Point | None:
        """Reduce a rational point mod p; non p-integral points go to infinity."""
        if pt is None:
            return None
        x, y = Fraction(pt[0]), Fraction(pt[1])
        if x.denominator % p == 0 or y.denominator % p == 0:
            return None
        xr = x.numerator * pow(x.denominator, -1, p) % p
        yr = y.numerator * pow(y.denominator, -1, p) % p
        return (xr, yr)

    def is_minimal_at(self, p: int) -> bool:
        """Sufficient minimality certificate: v_p(disc) < 12 or v_p(c4) < 4."""
        if not self.is_integral():
            raise DomainError("minimality certificate requires an integral model")
        disc = self.discriminant()
        if disc % p != 0:
            return True
        c4, _ = self.c_invariants()
        if valuation(disc, p) < 12:
            return True
        return c4 != 0 and valuation(c4, p) < 4

    def two_torsion_points(self) -> list:
        """The affine rational points of order 2 (roots of the completed square).

        On the completed-square model Y^2 = 4x^3 + b2 x^2 + 2 b4 x + b6 the
        2-torsion is Y = 0; rational roots are found exactly.
        """
        if self.p is not None:
            raise DomainError("rational 2-torsion requested over a finite field")
        b2, b4, b6, _ = self.b_invariants()
        pts = []
        for x in _rational_cubic_roots(4, b2, 2 * b4, b6):
            y = Fraction(-(self.a1 * x + self.a3), 2)
            pts.append((int(x) if x.denominator == 1 else x, int(y) if y.denominator == 1 else y))
        pts.sort(key=lambda q: Fraction(q[0]))
        return pts


def _rational_cubic_roots(a, b, c, d) -> list[Fraction]:
    """Exact rational roots of a*x^3 + b*x^2 + c*x + d (a != 0)."""
    coeffs = [Fraction(v) for v in (a, b, c, d)]
    lcm = 1
    for v in coeffs:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    A, B, C, D = (int(v * lcm) for v in coeffs)
    roots = []
    if D == 0:
        roots.append(Fraction(0))
        # remaining quadratic A x^2 + B x + C
        disc = B * B - 4 * A * C
        s = isqrt_exact(disc) if disc >= 0 else None
        if s is not None:
            for sgn in (1, -1):
                r = Fraction(-B + sgn * s, 2 * A)
                if r != 0:
                    roots.append(r)
        return sorted(set(roots))
    for num in divisors(D):
        for den in divisors(A):
            for sgn in (1, -1):
                r = Fraction(sgn * num, den)
                if ((A * r + B) * r + C) * r + D == 0:
                    roots.append(r)
    return sorted(set(roots))


@dataclass(frozen=True)
class CurveIsomorphism:
    """Change of variables x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""

    u: Fraction
    r: Fraction
    s: Fraction
    t: Fraction

    def apply(self, C: WeierstrassCurve) -> tuple[Fraction, ...]:
        """Coefficients of the transformed curve (over Q, as Fractions)."""
        u, r, s, t = self.u, self.r, self.s, self.t
        a1, a2, a3, a4, a6 = (Fraction(a) for a in C.coefficients())
        A1 = (a1 + 2 * s) / u
        A2 = (a2 - s * a1 + 3 * r - s * s) / u**2
        A3 = (a3 + r * a1 + 2 * t) / u**3
        A4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4
        A6 = (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6
        return (A1, A2, A3, A4, A6)

    def map_point(self, pt: Point | None) -> Point | None:
        if pt is None:
            return None
        x, y = Fraction(pt[0]), Fraction(pt[1])
        u, r, s, t = self.u, self.r, self.s, self.t
        xp = (x - r) / u**2
        yp = (y - s * u * u * xp - t) / u**3
        return (xp, yp)


def isomorphism_over_Q(C1: WeierstrassCurve, C2: WeierstrassCurve) -> CurveIsomorphism | None:
    """An exact isomorphism (u, r, s, t) taking C1 to C2, or None.

    u is pinned by u^12 = disc(C1)/disc(C2); r, s, t then solve linearly.
    """
    if C1.p is not None or C2.p is not None:
        raise DomainError("isomorphism search is implemented over Q only")
    if C1.j_invariant() != C2.j_invariant():
        return None
    ratio = Fraction(C1.discriminant()) / Fraction(C2.discriminant())
    if ratio < 0:
        return None
    un = iroot_exact(ratio.numerator, 12)
    ud = iroot_exact(ratio.denominator, 12)
    if un is None or ud is None:
        return None
    a1, a2, a3, a4, a6 = C1.coefficients()
    b1, b2_, b3, b4_, b6_ = C2.coefficients()
    for u in (Fraction(un, ud), Fraction(-un, ud)):
        s = (u * b1 - a1) / 2
        r = (u * u * b2_ - a2 + s * a1 + s * s) / 3
        t = (u**3 * b3 - a3 - r * a1) / 2
        iso = CurveIsomorphism(u, r, s, t)
        if iso.apply(C1) == tuple(Fraction(b) for b in C2.coefficients()):
            return iso
    return None


@dataclass(frozen=True)
class TwoIsogeny:
    """A degree-2 isogeny given by its kernel point and Velu codomain."""

    domain: WeierstrassCurve
    kernel: tuple
    codomain: WeierstrassCurve
    # Velu data for the map itself: x' = x + t/(x - x0), y' = y - ...
    t: Fraction
    w: Fraction

    def map_point(self, pt: Point | None) -> Point | None:
        if pt is None:
            return None
        x, y = Fraction(pt[0]), Fraction(pt[1])
        x0, y0 = Fraction(self.kernel[0]), Fraction(self.kernel[1])
        if x == x0:
            return None  # kernel maps to infinity
        a1 = self.domain.a1
        t = Fraction(self.t)
        # u_Q = (g^y_Q)^2 = 0 for a 2-torsion kernel point, so only the
        # t_Q terms of Velu's rational maps survive.
        xm = x + t / (x - x0)
        ym = y - t * (a1 * (x - x0) + y - y0) / (x - x0) ** 2
        return (xm, ym)


def velu_2_isogeny(C: WeierstrassCurve, K: tuple) -> TwoIsogeny:
    """Quotient of C by the order-2 subgroup generated by K (Velu's formulas)."""
    if K is None or not C.is_on_curve(K):
        raise DomainError(f"kernel point {K} is not an affine point of the curve")
    if C.multiply(K, 2) is not None:
        raise DomainError(f"kernel point {K} does not have order 2")
    if C.p is not None:
        raise DomainError("the 2-isogeny is computed over Q; reduce afterwards")
    a1, a2, a3, a4, a6 = C.coefficients()
    x0, y0 = Fraction(K[0]), Fraction(K[1])
    # 2-torsion: g^y = 2*y0 + a1*x0 + a3 = 0, so u_Q = 0 and t_Q = g^x.
    t = 3 * x0 * x0 + 2 * a2 * x0 + a4 - a1 * y0
    w = t * x0  # u_Q + t_Q * x0 with u_Q = 0
    b2 = a1 * a1 + 4 * a2
    codomain = WeierstrassCurve(a1, a2, a3, a4 - 5 * t, a6 - b2 * t - 7 * w)
    return TwoIsogeny(C, (K[0], K[1]), codomain, t, w)


def two_isogeny_onto(C: WeierstrassCurve, target: WeierstrassCurve):
    """The 2-isogeny from C whose Velu codomain is isomorphic over Q to target.

    Tries every rational 2-torsion point of C and matches by j-invariant,
    then by an exact isomorphism.  Returns (isogeny, isomorphism) or None.
    """
    for K in C.two_torsion_points():
        phi = velu_2_isogeny(C, K)
        if phi.codomain.j_invariant() != target.j_invariant():
            continue
        iso = isomorphism_over_Q(phi.codomain, target)
        if iso is not None:
            return phi, iso
    return None


def curve_from_string(text: str) -> WeierstrassCurve:
    """Parse the toolkit-wide curve format "a1,a2,a3,a4,a6"."""
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != 5:
        raise DomainError(f"expected five comma-separated integers, got {text!r}")
    return WeierstrassCurve(*(int(s) for s in parts))


E1 = WeierstrassCurve(1, 1, 1, -10, -10)  # conductor 15, Cremona 15a1
E2 = WeierstrassCurve(1, 1, 1, -5, 2)  # conductor 15, Cremona 15a3
