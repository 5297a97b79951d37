"""Fixed-precision p-adic arithmetic, the j-function q-expansion, Tate
parameters of split multiplicative curves, and the log q / ord q invariant.

A ``PadicNumber`` stores a valuation and a unit part known modulo
p**prec (prec significant base-p digits).  Additions track the precision
lost to cancellation; everything else is exact unit arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import DomainError, is_prime, valuation
from .curve import WeierstrassCurve
from .local_data import ReductionKind, reduction_type

DEFAULT_DIGITS = 20


@dataclass(frozen=True)
class PadicNumber:
    """p^valuation * unit, unit a p-adic unit known mod p^prec (prec digits)."""

    p: int
    val: int
    unit: int  # 0 means the number is zero to working precision
    prec: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")
        if self.prec < 1:
            raise DomainError("precision must be at least one digit")
        u = self.unit % self.p**self.prec
        object.__setattr__(self, "unit", u)
        if u and u % self.p == 0:
            raise AssertionError("unit part must be a unit (normalize on construction)")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, p: int, prec: int = DEFAULT_DIGITS) -> "PadicNumber":
        return cls(p, 0, 0, prec)

    @classmethod
    def from_fraction(cls, x, p: int, prec: int = DEFAULT_DIGITS) -> "PadicNumber":
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, prec)
        v = valuation(x.numerator, p) - valuation(x.denominator, p)
        num = x.numerator // p ** max(v, 0) if v > 0 else x.numerator
        den = x.denominator // p ** max(-v, 0) if v < 0 else x.denominator
        m = p**prec
        unit = num * pow(den % m, -1, m) % m
        return cls(p, v, unit, prec)

    @classmethod
    def parse(cls, text: str) -> "PadicNumber":
        """Inverse of str(): "<unit>*<p>^<val> + O(<p>^<k>)" (or "O(<p>^<k>)")."""
        text = text.replace(" ", "")
        if text.startswith("O("):
            inner = text[2:-1]
            p, k = inner.split("^")
            return cls(int(p), 0, 0, int(k))
        head, tail = text.split("+O(")
        unit_s, pv = head.split("*")
        p_s, v_s = pv.split("^")
        p, v = int(p_s), int(v_s)
        k = int(tail[:-1].split("^")[1])
        return cls(p, v, int(unit_s), k - v)

    def __str__(self) -> str:
        if self.unit == 0:
            return f"O({self.p}^{self.prec})"
        return f"{self.unit}*{self.p}^{self.val} + O({self.p}^{self.val + self.prec})"

    def digits(self) -> tuple[int, ...]:
        """Base-p digits of the unit part, least significant first."""
        out, u = [], self.unit
        for _ in range(self.prec):
            out.append(u % self.p)
            u //= self.p
        return tuple(out)

    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    def valuation(self) -> int:
        if self.is_zero:
            raise DomainError("valuation of (p-adic) zero")
        return self.val

    # -- arithmetic -----------------------------------------------------------

    def _binary_prec(self, other: "PadicNumber"):
        if self.p != other.p:
            raise DomainError("mixed primes")
        return min(self.prec, other.prec)

    def __mul__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        k = self._binary_prec(other)
        if self.is_zero or other.is_zero:
            return PadicNumber.zero(self.p, k)
        return PadicNumber(self.p, self.val + other.val, self.unit * other.unit % self.p**k, k)

    def __truediv__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        k = self._binary_prec(other)
        if other.is_zero:
            raise DomainError("division by p-adic zero")
        if self.is_zero:
            return PadicNumber.zero(self.p, k)
        m = self.p**k
        return PadicNumber(self.p, self.val - other.val, self.unit * pow(other.unit, -1, m) % m, k)

    def __add__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        v = min(self.val, other.val)
        abs_prec = min(self.val + self.prec, other.val + other.prec)
        k = abs_prec - v
        if k < 1:
            raise DomainError("no significant digits left after cancellation")
        m = self.p**k
        s = (self.unit * self.p ** (self.val - v) + other.unit * self.p ** (other.val - v)) % m
        if s == 0:
            return PadicNumber.zero(self.p, k)
        dv = valuation(s, self.p)
        if dv >= k:
            return PadicNumber.zero(self.p, k)
        return PadicNumber(self.p, v + dv, s // self.p**dv, k - dv)

    def __neg__(self) -> "PadicNumber":
        if self.is_zero:
            return self
        return PadicNumber(self.p, self.val, self.p**self.prec - self.unit, self.prec)

    def __sub__(self, other) -> "PadicNumber":
        return self + (-self._coerce(other))

    def __pow__(self, n: int) -> "PadicNumber":
        if n < 0:
            return PadicNumber.from_fraction(1, self.p, self.prec) / self**(-n)
        out = PadicNumber(self.p, 0, 1, self.prec)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            return other
        return PadicNumber.from_fraction(other, self.p, self.prec)

    def agrees_with(self, other: "PadicNumber") -> bool:
        """Equality to the shared working precision."""
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        if self.val != other.val:
            return False
        k = self._binary_prec(other)
        return (self.unit - other.unit) % self.p**k == 0


# -- q-expansion of the modular j-function -----------------------------------


@dataclass(frozen=True)
class QExpansion:
    """Laurent coefficients c_{-1}, c_0, ..., c_T of j(q) (c_{-1} = 1)."""

    coefficients: tuple[int, ...]

    def c(self, n: int) -> int:
        return self.coefficients[n + 1]

    @property
    def top(self) -> int:
        return len(self.coefficients) - 2


def _series_mul(a: list[int], b: list[int], T: int) -> list[int]:
    out = [0] * (T + 1)
    for i, ai in enumerate(a[: T + 1]):
        if ai:
            for j, bj in enumerate(b[: T + 1 - i]):
                out[i + j] += ai * bj
    return out


def _series_inv(a: list[int], T: int) -> list[int]:
    """Inverse of a power series with a(0) = 1, to order T (integer output)."""
    assert a[0] == 1
    inv = [0] * (T + 1)
    inv[0] = 1
    for n in range(1, T + 1):
        s = 0
        for k in range(1, min(n, len(a) - 1) + 1):
            s += a[k] * inv[n - k]
        inv[n] = -s
    return inv


def j_q_expansion(T: int) -> QExpansion:
    """j(q) = E4(q)^3 / Delta(q) as an exact integer Laurent series.

    E4 = 1 + 240 sum sigma3(n) q^n; Delta = q prod (1 - q^n)^24.
    """
    if T < 1:
        raise DomainError("need at least one positive power")
    # sigma3 and E4
    sigma3 = [0] * (T + 2)
    for d in range(1, T + 2):
        for mult in range(d, T + 2, d):
            sigma3[mult] += d**3
    e4 = [1] + [240 * sigma3[n] for n in range(1, T + 2)]
    e4cubed = _series_mul(_series_mul(e4, e4, T + 1), e4, T + 1)
    # Delta / q = prod (1 - q^n)^24
    eta24 = [1] + [0] * (T + 1)
    for n in range(1, T + 2):
        factor = [0] * (T + 2)
        factor[0] = 1
        if n <= T + 1:
            factor[n] = -1
        for _ in range(24):
            eta24 = _series_mul(eta24, factor, T + 1)
    j_shifted = _series_mul(e4cubed, _series_inv(eta24, T + 1), T + 1)
    return QExpansion(tuple(j_shifted[: T + 2]))


# -- Tate parameter and the log/ord invariant ---------------------------------


def _evaluate_correction(exp: QExpansion, q: PadicNumber) -> PadicNumber:
    """sum_{n >= 0} c_n q^n (the non-principal part of j at q)."""
    total = PadicNumber.from_fraction(exp.c(0), q.p, q.prec)
    qn = PadicNumber.from_fraction(1, q.p, q.prec)
    for n in range(1, exp.top + 1):
        qn = qn * q
        c = exp.c(n)
        if c:
            total = total + qn * c
    return total


def tate_parameter(C: WeierstrassCurve, p: int, prec: int = DEFAULT_DIGITS) -> PadicNumber:
    """The q with j(q) = j(C), val(q) = -val_p(j) > 0, for split multiplicative C.

    Fixed-point iteration q <- 1 / (j - sum_{n>=0} c_n q^n), convergent since
    |q|_p < 1; each pass gains at least val(q) digits.
    """
    if reduction_type(C, p) is not ReductionKind.MULT_SPLIT:
        raise DomainError(f"reduction at {p} is not split multiplicative")
    j = C.j_invariant()
    from .arith import rational_valuation

    vj = rational_valuation(j, p)
    if vj >= 0:
        raise DomainError(f"j-invariant is p-integral at {p}; no Tate parameter")
    m = -vj
    work = prec + m + 4
    T = (prec + 3 * m) // m + 10  # series terms: precision / val(q) + guard
    exp = j_q_expansion(T)
    jp = PadicNumber.from_fraction(j, p, work)
    q = PadicNumber.from_fraction(1, p, work) / jp
    for _ in range(2 * (prec // m + 2) + 8):
        q_new = PadicNumber.from_fraction(1, p, work) / (jp - _evaluate_correction(exp, q))
        if q_new.agrees_with(q):
            q = q_new
            break
        q = q_new
    if q.valuation() != m:
        raise AssertionError("Tate parameter valuation mismatch")
    if q.prec < prec:
        raise DomainError(f"series precision exhausted: {q.prec} < {prec} digits")
    return PadicNumber(p, q.val, q.unit % p**prec, prec)


def evaluate_j_at(q: PadicNumber, T: int | None = None) -> PadicNumber:
    """j(q) = 1/q + sum c_n q^n, for checking the defining equation."""
    if T is None:
        T = (q.prec + 3 * q.valuation()) // q.valuation() + 10
    exp = j_q_expansion(T)
    one = PadicNumber.from_fraction(1, q.p, q.prec)
    return one / q + _evaluate_correction(exp, q)


def iwasawa_log(x: PadicNumber) -> PadicNumber:
    """The p-adic logarithm with the branch log(p) = 0.

    Units u are reduced to 1 mod p via u^(p-1); the series log(1+t) then
    converges and log(u) = log(u^(p-1)) / (p-1).
    """
    if x.is_zero:
        raise DomainError("log of p-adic zero")
    p = x.p
    # branch: log(p^v * u) = v*log(p) + log(u) = log(u)
    u = PadicNumber(p, 0, x.unit, x.prec)
    w = u ** (p - 1)  # = 1 mod p
    t = w - 1
    if t.is_zero:
        return PadicNumber.zero(p, x.prec)
    total = PadicNumber.zero(p, x.prec)
    term = PadicNumber.from_fraction(1, p, x.prec + 8)
    tk = t
    k = 1
    # terms have valuation k*val(t) - v_p(k) -> stop once beyond precision
    while k * t.valuation() - (k.bit_length() // max(p.bit_length() - 1, 1) + 2) <= x.prec + 2:
        contrib = tk / k
        contrib = -contrib if k % 2 == 0 else contrib
        total = total + contrib
        tk = tk * t
        k += 1
        if k > 4 * x.prec + 40:
            break
    return total / (p - 1)


@dataclass(frozen=True)
class LInvariantResult:
    p: int
    tate_q: PadicNumber
    value: PadicNumber  # log_p(q) / ord_p(q)
    unit_times_p: bool  # valuation exactly 1, i.e. lies in p Z_p^x


def l_invariant(C: WeierstrassCurve, p: int, prec: int = DEFAULT_DIGITS) -> LInvariantResult:
    """log_p(q_E) / ord_p(q_E) for a split multiplicative prime."""
    q = tate_parameter(C, p, prec)
    log_q = iwasawa_log(q)
    value = log_q / q.valuation()
    return LInvariantResult(p, q, value, not value.is_zero and value.valuation() == 1)
