"""Exact integer, rational and modular arithmetic primitives.

Everything here is pure and desk-scale: plain ints, ``fractions.Fraction``
for rationals (always normalized, positive denominator), and small helper
functions for modular arithmetic.  No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction


class DomainError(ValueError):
    """An argument violates a mathematical precondition."""


def is_prime(n: int) -> bool:
    """Deterministic primality by trial division (desk-scale inputs)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def primes_up_to(bound: int) -> list[int]:
    """All primes <= bound, ascending (Eratosthenes)."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(bound**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i in range(2, bound + 1) if sieve[i]]


def valuation(n: int, p: int) -> int:
    """Largest e with p**e dividing n.  n must be nonzero."""
    if n == 0:
        raise DomainError("valuation of 0 is undefined")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    e = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        e += 1
    return e


def rational_valuation(x: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    if x == 0:
        raise DomainError("valuation of 0 is undefined")
    return valuation(x.numerator, p) - valuation(x.denominator, p)


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p: 0, 1 or -1."""
    if p == 2 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a modulo the odd prime p, or None if a is a non-residue.

    Tonelli-Shanks; exhaustive fallback would also do at these sizes.
    """
    if p == 2 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    a %= p
    if a == 0:
        return 0
    if legendre_symbol(a, p) == -1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks for p = 1 mod 4.
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre_symbol(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        r = r * b % p
    return r


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n), the fully extended Jacobi symbol."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= n
    # Jacobi symbol by quadratic reciprocity
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def gcd_list(values: list[int]) -> int:
    import math

    g = 0
    for v in values:
        g = math.gcd(g, v)
    return g


def isqrt_exact(n: int) -> int | None:
    """Integer square root if n is a perfect square, else None."""
    if n < 0:
        return None
    import math

    r = math.isqrt(n)
    return r if r * r == n else None


def iroot_exact(n: int, k: int) -> int | None:
    """Integer k-th root of n >= 0 if exact, else None."""
    if n < 0:
        return None
    if n in (0, 1):
        return n
    r = round(n ** (1.0 / k))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**k == n:
            return c
    return None


def divisors(n: int) -> list[int]:
    """Positive divisors of |n|, ascending, by trial division."""
    n = abs(n)
    if n == 0:
        raise DomainError("divisors of 0")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def divisors_from_factorization(fac: dict[int, int]) -> list[int]:
    """Sorted positive divisors given a prime factorization."""
    out = [1]
    for p, e in fac.items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def square_divisors(n: int) -> list[int]:
    """All d >= 1 with d*d dividing |n|, via the factorization of n."""
    fac = factorize(n)
    return divisors_from_factorization({p: e // 2 for p, e in fac.items() if e >= 2})


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division."""
    n = abs(n)
    if n == 0:
        raise DomainError("factorization of 0")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for q in (d, d + 2):
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out
