"""Finite matrix groups over Z/m and mod-l surjectivity certificates.

Two engines:

* generic 2x2 matrix groups over Z/m: worklist closure, the det^2 = 1
  subgroup, fixed submodules -- enough to reproduce the mod-8 image
  computation for conductor-15 curves;
* complete subgroup enumeration of GL2(F_l) up to conjugacy (l <= 7) and
  Frobenius-data elimination yielding a sound "surjective / inconclusive"
  certificate.

Matrices are 4-tuples (a, b, c, d) read row-wise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import DomainError, is_prime, primes_up_to
from .counting import trace_ap
from .curve import WeierstrassCurve

Mat = tuple[int, int, int, int]


def mat_mul(x: Mat, y: Mat, m: int) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % m, (a * f + b * h) % m, (c * e + d * g) % m, (c * f + d * h) % m)


def mat_det(x: Mat, m: int) -> int:
    return (x[0] * x[3] - x[1] * x[2]) % m


def mat_trace(x: Mat, m: int) -> int:
    return (x[0] + x[3]) % m


def mat_identity() -> Mat:
    return (1, 0, 0, 1)


def is_invertible(x: Mat, m: int) -> bool:
    return math.gcd(mat_det(x, m), m) == 1


@dataclass(frozen=True)
class ModMMatrixGroup:
    """A finite subgroup of GL2(Z/m) given by its full element set."""

    modulus: int
    elements: frozenset

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_closed(self) -> bool:
        """Closure/identity/inverse verification (used by the test suite)."""
        m = self.modulus
        if mat_identity() not in self.elements:
            return False
        for x in self.elements:
            for y in self.elements:
                if mat_mul(x, y, m) not in self.elements:
                    return False
        # finiteness + closure under multiplication already gives inverses,
        # but check explicitly: some power of x is the identity
        for x in self.elements:
            y, n = x, 1
            while y != mat_identity():
                y = mat_mul(y, x, m)
                n += 1
                if n > len(self.elements):
                    return False
        return True

    def __contains__(self, x: Mat) -> bool:
        return tuple(v % self.modulus for v in x) in self.elements


def group_closure(gens, m: int) -> ModMMatrixGroup:
    """Smallest subgroup of GL2(Z/m) containing the generators."""
    gens = [tuple(v % m for v in g) for g in gens]
    for g in gens:
        if not is_invertible(g, m):
            raise DomainError(f"generator {g} is not invertible mod {m}")
    elems = {mat_identity()}
    frontier = [mat_identity()]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mat_mul(x, g, m)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return ModMMatrixGroup(m, frozenset(elems))


def det_condition_subgroup(G: ModMMatrixGroup) -> ModMMatrixGroup:
    """Subgroup of elements whose determinant is +-1 mod m.

    This is the mod-m shadow of the condition det(g)^2 = 1 on 2-adic
    determinants: an element of Z_2^x squares to 1 iff it is +-1, so its
    image mod m must lie in {1, m-1}.  (Testing det(g)^2 = 1 in Z/m itself
    would be vacuous for m = 8, where every unit squares to 1.)
    """
    m = G.modulus
    return ModMMatrixGroup(
        m, frozenset(x for x in G.elements if mat_det(x, m) in (1 % m, (m - 1) % m))
    )


def fixed_submodule(G: ModMMatrixGroup) -> frozenset:
    """{ v in (Z/m)^2 : g v = v for all g in G }."""
    m = G.modulus
    out = []
    for v0 in range(m):
        for v1 in range(m):
            if all(
                ((g[0] * v0 + g[1] * v1) % m, (g[2] * v0 + g[3] * v1) % m) == (v0, v1)
                for g in G.elements
            ):
                out.append((v0, v1))
    return frozenset(out)


def abelian_group_structure(vectors: frozenset, m: int) -> tuple[int, int]:
    """(d1, d2) with the subgroup of (Z/m)^2 isomorphic to Z/d1 x Z/d2, d1 | d2."""
    n = len(vectors)
    exponent = 1
    for v in vectors:
        ov = 1
        w = v
        while w != (0, 0):
            w = ((w[0] + v[0]) % m, (w[1] + v[1]) % m)
            ov += 1
        exponent = exponent * ov // math.gcd(exponent, ov)
    d2 = exponent
    d1 = n // d2
    return (d1, d2)


# -- built-in dataset: the mod-8 image generators for the conductor-15 class --

RZB_15A1_MOD8 = {
    "name": "rzb-15a1-mod8",
    "modulus": 8,
    # the mod-8 image group G of the 2-adic representation of 15a1,
    # taken as published input data (Rouse--Zureick-Brown database entry)
    "g_generators": (
        (5, 4, 2, 3),
        (1, 0, 0, 5),
        (1, 4, 0, 5),
        (1, 0, 4, 5),
    ),
    # generators of its determinant +-1 subgroup H
    "h_generators": (
        (5, 4, 2, 3),
        (5, 0, 2, 3),
        (1, 0, 4, 1),
    ),
    # coefficients of the unique curve this dataset applies to
    "curve": (1, 1, 1, -10, -10),
}


# -- GL2(F_l): enumeration of subgroups up to conjugacy ----------------------


class _GL2Tables:
    """Dense multiplication / conjugation tables for GL2(F_l), int-encoded."""

    def __init__(self, l: int):
        self.l = l
        mats = []
        for a in range(l):
            for b in range(l):
                for c in range(l):
                    for d in range(l):
                        if (a * d - b * c) % l:
                            mats.append((a, b, c, d))
        self.mats = mats
        self.index = {mat: i for i, mat in enumerate(mats)}
        n = len(mats)
        self.n = n
        A = np.array(mats, dtype=np.int64)
        a, b, c, d = A[:, 0], A[:, 1], A[:, 2], A[:, 3]
        # mul[i, j] = index of mats[i] @ mats[j]
        e = (np.outer(a, a) + np.outer(b, c)) % l
        f = (np.outer(a, b) + np.outer(b, d)) % l
        g = (np.outer(c, a) + np.outer(d, c)) % l
        h = (np.outer(c, b) + np.outer(d, d)) % l
        enc = ((e * l + f) * l + g) * l + h
        code_to_idx = -np.ones(l**4, dtype=np.int32)
        codes = ((a * l + b) * l + c) * l + d
        code_to_idx[codes] = np.arange(n, dtype=np.int32)
        self.mul = code_to_idx[enc]
        det = (a * d - b * c) % l
        det_inv = np.array([pow(int(v), -1, l) for v in det], dtype=np.int64)
        inv_codes = (
            ((d * det_inv % l) * l + (-b * det_inv) % l) * l + ((-c * det_inv) % l)
        ) * l + (a * det_inv % l)
        self.inv = code_to_idx[inv_codes]
        self.identity = self.index[(1, 0, 0, 1)]
        # conj[x, i] = x^-1 * mats[i] * x
        left = self.mul[self.inv]  # left[x, i] = x^-1 * i
        self.conj = self.mul[left, np.arange(n, dtype=np.int32)[:, None]]
        # element orders and, for prime-power elements, the least generator
        # of the cyclic subgroup they generate
        order = np.zeros(n, dtype=np.int32)
        for i in range(n):
            x, k = i, 1
            while x != self.identity:
                x = self.mul[x, i]
                k += 1
            order[i] = k
        self.order = order
        self.cyc_rep = np.full(n, -1, dtype=np.int32)
        for i in range(n):
            if self.cyc_rep[i] >= 0:
                continue
            o = int(order[i])
            if not _is_prime_power(o):
                continue
            gens = []
            x, k = i, 1
            while True:
                if math.gcd(k, o) == 1:
                    gens.append(x)
                if x == self.identity:
                    break
                x = int(self.mul[x, i])
                k += 1
            rep = min(gens)
            for g in gens:
                self.cyc_rep[g] = rep

    def conj_all(self, idxs: np.ndarray) -> np.ndarray:
        """Row x = sorted element indices of x^-1 S x; shape (n, |S|)."""
        out = self.conj[:, idxs].copy()
        out.sort(axis=1)
        return out

    def closure(self, seed) -> np.ndarray:
        """Sorted element indices of the subgroup generated by seed."""
        elems = {self.identity}
        frontier = sorted({int(i) for i in seed} - elems)
        elems.update(frontier)
        while frontier:
            base = np.fromiter(elems, dtype=np.int32, count=len(elems))
            prod = self.mul[np.ix_(np.asarray(frontier, dtype=np.int32), base)]
            new = set(map(int, np.unique(prod))) - elems
            elems.update(new)
            frontier = sorted(new)
        return np.array(sorted(elems), dtype=np.int32)

    def decode(self, subgroup) -> frozenset:
        return frozenset(self.mats[int(i)] for i in subgroup)


def _is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = min(q for q in range(2, n + 1) if n % q == 0)
    while n % p == 0:
        n //= p
    return n == 1


@lru_cache(maxsize=None)
def _tables(l: int) -> _GL2Tables:
    return _GL2Tables(l)


SUBGROUP_ENUM_CAP = 7


@lru_cache(maxsize=None)
def enumerate_subgroups_gl2(l: int) -> tuple[ModMMatrixGroup, ...]:
    """All subgroups of GL2(F_l) up to conjugacy, by closure of joins.

    Bottom-up sweep: any subgroup K arises from a maximal chain, and each
    step of the chain is <H, g> for a prime-power-order g, so adjoining one
    such element at a time reaches every conjugacy class.  Candidates are
    reduced modulo the normalizer of H (conjugating g by n in N(H) gives a
    conjugate join), and results are deduplicated against the stored
    conjugate orbits of every class already found.  Capped at l <= 7.
    """
    if not is_prime(l):
        raise DomainError(f"{l} is not prime")
    if l > SUBGROUP_ENUM_CAP:
        raise DomainError(f"subgroup enumeration is capped at l <= {SUBGROUP_ENUM_CAP}")
    t = _tables(l)
    candidates = np.array(
        sorted({int(r) for r in t.cyc_rep if r >= 0}), dtype=np.int32
    )

    classes: list[np.ndarray] = []
    seen_exact: set[bytes] = set()

    def register(K: np.ndarray) -> tuple[bool, np.ndarray]:
        """Record K's conjugacy class; returns (is_new, normalizer indices)."""
        conjs = t.conj_all(K)
        if K.tobytes() in seen_exact:
            is_new = False
        else:
            is_new = True
            for row in np.unique(conjs, axis=0):
                seen_exact.add(row.tobytes())
            classes.append(K)
        normalizer = np.where((conjs == K[None, :]).all(axis=1))[0].astype(np.int32)
        return is_new, normalizer

    trivial = np.array([t.identity], dtype=np.int32)
    _, norm = register(trivial)
    frontier = [(trivial, norm)]
    while frontier:
        nxt = []
        for H, normalizer in frontier:
            if len(H) == t.n:
                continue
            in_H = np.zeros(t.n, dtype=bool)
            in_H[H] = True
            outside = candidates[~in_H[candidates]]
            if len(outside) == 0:
                continue
            # one candidate per N(H)-orbit: min of cyc_rep over the orbit
            orbit_min = t.cyc_rep[t.conj[np.ix_(normalizer, outside)]].min(axis=0)
            for g in sorted(set(map(int, orbit_min))):
                K = t.closure(np.concatenate([H, [g]]))
                if K.tobytes() in seen_exact:
                    continue
                is_new, normK = register(K)
                if is_new:
                    nxt.append((K, normK))
        frontier = nxt
    classes.sort(key=lambda s: (len(s), tuple(map(int, s))))
    return tuple(ModMMatrixGroup(l, t.decode(s)) for s in classes)


# -- surjectivity certificates ------------------------------------------------


@dataclass(frozen=True)
class FrobeniusConstraint:
    l: int
    pairs: frozenset  # {(a_p mod l, p mod l)} over good primes p != l


@dataclass(frozen=True)
class SurjectivityCertificate:
    l: int
    prime_bound: int
    witness_primes: tuple[int, ...]
    eliminated_subgroups: int
    proper_subgroups: int
    verdict: str  # "surjective" | "inconclusive"


def _fundamental_discriminants(support: frozenset) -> list[int]:
    """Nontrivial fundamental discriminants with prime support in the given set."""
    odd = sorted(p for p in support if p != 2)
    bases = [1]
    for p in odd:
        bases += [b * p for b in bases]
    out = set()
    for b in bases:
        for s in (b, -b):
            cands = [s]
            if 2 in support:
                cands += [4 * s, 8 * s, -8 * s]
            for d in cands:
                if d == 1 or d == 0:
                    continue
                if d % 4 == 1 or (d % 4 == 0 and (d // 4) % 4 in (2, 3)):
                    out.add(d)
    return sorted(out)


def _quadratic_character_refuted(C: WeierstrassCurve, l: int, bound: int) -> bool:
    """Refute every quadratic character compatible with a trace-zero coset.

    If the image lay in a subgroup whose non-zero-trace elements all sit in
    an index-2 subgroup, the quotient would define a quadratic character e
    unramified outside l and the bad primes with a_p = 0 mod l whenever
    e(p) = -1.  Exhibiting, for every such character, a good prime with
    e(p) = -1 and a_p != 0 mod l rules this out unconditionally.
    """
    from .arith import factorize, kronecker_symbol

    disc = C.discriminant()
    support = frozenset({l} | set(factorize(disc)))
    witnesses_needed = _fundamental_discriminants(support)
    for d in witnesses_needed:
        found = False
        for p in primes_up_to(bound):
            if p == l or disc % p == 0:
                continue
            if kronecker_symbol(d, p) == -1 and trace_ap(C, p) % l != 0:
                found = True
                break
        if not found:
            return False
    return True


def frobenius_constraints(C: WeierstrassCurve, l: int, bound: int) -> tuple[FrobeniusConstraint, tuple[int, ...]]:
    disc = C.discriminant()
    pairs = set()
    primes = []
    for p in primes_up_to(bound):
        if p == l or disc % p == 0:
            continue
        pairs.add((trace_ap(C, p) % l, p % l))
        primes.append(p)
    return FrobeniusConstraint(l, frozenset(pairs)), tuple(primes)


def subgroup_realizes_pairs(H: ModMMatrixGroup, pairs) -> bool:
    """Does H contain, for every pair (t, d), an element with that char poly?"""
    seen = {(mat_trace(x, H.modulus), mat_det(x, H.modulus)) for x in H.elements}
    return all(pair in seen for pair in pairs)


def subgroup_det_surjective(H: ModMMatrixGroup) -> bool:
    l = H.modulus
    dets = {mat_det(x, l) for x in H.elements}
    return len(dets) == l - 1


def _trace_zero_coset_possible(H: ModMMatrixGroup) -> bool:
    """True iff the non-zero-trace elements of H generate a proper subgroup.

    In that case an image inside H would determine a quadratic character with
    a_p = 0 mod l on its -1 fibre (the trace-zero coset); see
    _quadratic_character_refuted.  (The normalizers of Cartan subgroups are
    the interesting case: their full char-poly sets can coincide with
    GL2(F_l)'s, e.g. for l = 3.)
    """
    m = H.modulus
    gens = [x for x in H.elements if mat_trace(x, m) != 0]
    if not gens:
        return True
    return group_closure(gens, m).order < H.order


def surjectivity_certificate(C: WeierstrassCurve, l: int, bound: int) -> SurjectivityCertificate:
    """Sound certificate that the mod-l Galois image is all of GL2(F_l).

    Every proper subgroup (up to conjugacy; trace/det data is conjugation
    invariant) must be eliminated by one of three unconditional tests:
    it fails to realize some observed Frobenius char poly, its determinant
    map is not onto (the determinant of the image is the full cyclotomic
    character over Q), or its non-zero-trace elements span an index->=2
    subgroup and every compatible quadratic character has a witness prime
    against it.  A verdict of "surjective" is unconditional; "inconclusive"
    only means the prime bound was too small or the image really is proper.
    """
    constraint, primes = frobenius_constraints(C, l, bound)
    subgroups = enumerate_subgroups_gl2(l)
    full_order = max(H.order for H in subgroups)
    proper = [H for H in subgroups if H.order < full_order]
    quad_refuted: bool | None = None  # computed lazily, shared by all subgroups
    eliminated = 0
    all_eliminated = True
    for H in proper:
        if not subgroup_det_surjective(H) or not subgroup_realizes_pairs(H, constraint.pairs):
            eliminated += 1
            continue
        if _trace_zero_coset_possible(H):
            if quad_refuted is None:
                quad_refuted = _quadratic_character_refuted(C, l, bound)
            if quad_refuted:
                eliminated += 1
                continue
        all_eliminated = False
    return SurjectivityCertificate(
        l=l,
        prime_bound=bound,
        witness_primes=primes,
        eliminated_subgroups=eliminated,
        proper_subgroups=len(proper),
        verdict="surjective" if all_eliminated else "inconclusive",
    )
