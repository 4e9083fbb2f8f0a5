"""Abelian number fields inside Q_n, given by their Galois stabilizers.

A field K is stored as (n, H) with H <= (Z/n)^x and K the fixed field of H in
Q_n; n is always the conductor of K.  Integral bases come from orbit sums of
roots of unity, with coordinates taken in the Zumbroich basis of Q_n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .cyclo import (
    ONE,
    Cyclotomic,
    E,
    euler_phi,
    factorize,
    galois_apply,
    lcm,
    orbit_sum,
    units_mod,
    zumbroich_basis,
)
from .zlat import Lattice, det, hnf_rows

__all__ = [
    "AbelianField",
    "IntegralBasis",
    "field_of_values",
    "leopoldt_basis",
    "compositum",
    "discriminant",
    "classify_2power_subfield",
    "trace",
    "cyclotomic_trace",
]


def _close_subgroup(n: int, gens: Iterable[int]) -> frozenset[int]:
    if n <= 2:
        return frozenset({1 % n if n > 1 else 0})
    H = {1}
    gens = {g % n for g in gens}
    if any(math.gcd(g, n) != 1 for g in gens):
        raise ValueError("stabilizer contains non-units")
    frontier = [1]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                x = h * g % n
                if x not in H:
                    H.add(x)
                    nxt.append(x)
        frontier = nxt
    return frozenset(H)


def _minimize(n: int, H: frozenset[int]) -> tuple[int, frozenset[int]]:
    changed = True
    while changed and n > 1:
        changed = False
        for p, _ in factorize(n):
            d = n // p
            kernel_ok = all(k in H for k in units_mod(n) if k % d == 1 % d) if d > 1 else len(H) == euler_phi(n)
            if kernel_ok:
                H = frozenset(h % d for h in H) if d > 1 else frozenset({0})
                n = d
                changed = True
                break
    if n == 1:
        H = frozenset({0})
    return n, H


@dataclass(frozen=True)
class AbelianField:
    """Fixed field of ``stab`` inside Q_conductor."""

    conductor: int
    stab: tuple[int, ...]

    @classmethod
    def make(cls, n: int, H: Iterable[int]) -> "AbelianField":
        """Field fixed by the subgroup generated by H in (Z/n)^x, with the conductor minimized."""
        Hs = _close_subgroup(n, H)
        n2, H2 = _minimize(n, Hs)
        return cls(n2, tuple(sorted(H2)))

    @classmethod
    def rationals(cls) -> "AbelianField":
        return cls(1, (0,))

    @classmethod
    def cyclotomic(cls, n: int) -> "AbelianField":
        return cls.make(n, [1])

    @property
    def degree(self) -> int:
        return euler_phi(self.conductor) // len(self.stab)

    def contains(self, x: Cyclotomic) -> bool:
        if self.conductor % x.conductor:
            return False
        return all(galois_apply(h, x) == x for h in self.stab) if self.conductor > 1 else True

    def __str__(self):
        if self.conductor == 1:
            return "Q"
        if len(self.stab) == 1:
            return f"Q_{self.conductor}"
        return f"Q_{self.conductor}^<{','.join(map(str, self.stab))}>"


def _stabilizer(N: int, values: Sequence[Cyclotomic]) -> frozenset[int]:
    if N <= 2:
        return frozenset(units_mod(N))
    H = []
    for k in units_mod(N):
        if all(galois_apply(k % v.conductor, v) == v for v in values):
            H.append(k)
    return frozenset(H)


def field_of_values(values: Iterable[Cyclotomic]) -> AbelianField:
    """Smallest abelian field containing all the given values."""
    vals = list({v for v in values})
    if not vals:
        raise ValueError("no values given")
    vals = [v for v in vals if not v.is_rational()]
    if not vals:
        return AbelianField.rationals()
    N = lcm(*(v.conductor for v in vals))
    return AbelianField.make(N, _stabilizer(N, vals))


def compositum(K: AbelianField, L: AbelianField) -> AbelianField:
    N = lcm(K.conductor, L.conductor)
    if N == 1:
        return AbelianField.rationals()
    HK, HL = set(K.stab), set(L.stab)
    H = [k for k in units_mod(N)
         if (K.conductor == 1 or k % K.conductor in HK) and (L.conductor == 1 or k % L.conductor in HL)]
    return AbelianField.make(N, H)


@lru_cache(maxsize=None)
def _ramanujan(n: int, e: int) -> int:
    # trace of E(n)^e from Q_n to Q
    g = math.gcd(e, n)
    m = n // g
    mu = 0 if any(a > 1 for _, a in factorize(m)) else (-1) ** len(factorize(m))
    return mu * euler_phi(n) // euler_phi(m)


def cyclotomic_trace(x: Cyclotomic) -> Fraction:
    """Trace of x from Q_c down to Q, c the conductor of x."""
    n = x.conductor
    return sum((Fraction(c) * _ramanujan(n, e) for e, c in x.terms()), Fraction(0))


def trace(K: AbelianField, x: Cyclotomic) -> Fraction:
    """Tr_{K/Q}(x) for x in K."""
    return cyclotomic_trace(x) * K.degree / euler_phi(x.conductor)


@dataclass
class IntegralBasis:
    """A Z-basis of Z_K with coordinates in the Zumbroich basis of Q_n (n = conductor of K)."""

    field: AbelianField
    elements: list[Cyclotomic]
    coordinates: list[list[int]]
    _pivots: list[int] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if not self._pivots:
            self._pivots = [next(j for j, x in enumerate(r) if x) for r in self.coordinates]

    @property
    def ambient(self) -> int:
        return self.field.conductor

    @property
    def rank(self) -> int:
        return len(self.elements)

    def lattice(self) -> Lattice:
        return Lattice(len(zumbroich_basis(self.ambient)), _intmat(self.coordinates, len(zumbroich_basis(self.ambient))))

    def solve(self, x: Cyclotomic) -> list[Fraction] | None:
        """Rational coordinates of x in this basis, or None if x is not in K."""
        n = self.ambient
        if n % x.conductor:
            return None
        w = [Fraction(c) for c in x.vector(n)]
        out = []
        for r, c in zip(self.coordinates, self._pivots):
            q = w[c] / r[c]
            out.append(q)
            if q:
                for j in range(c, len(w)):
                    if r[j]:
                        w[j] -= q * r[j]
        if any(w):
            return None
        return out

    def integral_coordinates(self, x: Cyclotomic) -> list[int]:
        c = self.solve(x)
        if c is None:
            raise ValueError(f"{x} does not lie in {self.field}")
        if any(q.denominator != 1 for q in c):
            raise ValueError(f"{x} is not an algebraic integer of {self.field}")
        return [int(q) for q in c]

    def element(self, coords: Sequence[int | Fraction]) -> Cyclotomic:
        n = self.ambient
        dim = len(zumbroich_basis(n))
        v = [Fraction(0)] * dim
        for c, r in zip(coords, self.coordinates):
            if c:
                for j, a in enumerate(r):
                    if a:
                        v[j] += c * a
        return Cyclotomic.from_vector(n, v)

    def multiplication_matrix(self, x: Cyclotomic) -> list[list[int]]:
        """Integer matrix M with (b_i * x) = sum_j M[i][j] b_j."""
        return [self.integral_coordinates(b * x) for b in self.elements]

    @cached_property
    def one_coordinates(self) -> list[int]:
        return self.integral_coordinates(ONE)


def _intmat(rows, cols):
    from .zlat import IntMat

    return IntMat.from_rows(rows, cols)


@lru_cache(maxsize=256)
def leopoldt_basis(K: AbelianField) -> IntegralBasis:
    """Z-basis of Z_K extracted from the orbit sums of all roots of unity of Q_n."""
    n = K.conductor
    if n == 1:
        return IntegralBasis(K, [ONE], [[1]])
    H = K.stab
    seen: set[int] = set()
    rows = []
    for j in range(n):
        if j in seen:
            continue
        orb = {(j * h) % n for h in H}
        seen |= orb
        rows.append([int(c) for c in orbit_sum(n, j, H).vector(n)])
    B = hnf_rows(rows, len(zumbroich_basis(n)))
    if len(B) != K.degree:
        raise RuntimeError(f"orbit sums span rank {len(B)}, expected {K.degree}")
    elems = [Cyclotomic.from_vector(n, r) for r in B]
    return IntegralBasis(K, elems, B)


def discriminant(K: AbelianField) -> int:
    """Determinant of the trace form on the Leopoldt basis."""
    B = leopoldt_basis(K).elements
    G = []
    for a in B:
        row = []
        for b in B:
            t = trace(K, a * b)
            if t.denominator != 1:
                raise RuntimeError("non-integral trace on an integral basis")
            row.append(int(t))
        G.append(row)
    return det(G)


def classify_2power_subfield(K: AbelianField) -> tuple[str, list[Cyclotomic]]:
    """Tag a subfield of Q_{2^m} as cyclotomic, plus (real) or minus, with generators.

    For the plus/minus types the generators are 1 and z^k + (+-z^-1)^k for
    1 <= k < 2^(m-2), z = E(2^m).
    """
    n = K.conductor
    if n & (n - 1):
        raise ValueError(f"conductor {n} is not a power of 2")
    if len(K.stab) == 1:
        z = E(n)
        return "cyclotomic", [z**k for k in range(max(1, n // 2))]
    m = n.bit_length() - 1
    z = E(n)
    zb = z ** (n - 1)
    if set(K.stab) == {1, n - 1}:
        sign, tag = 1, "plus"
    elif set(K.stab) == {1, n // 2 - 1}:
        sign, tag = -1, "minus"
    else:
        raise RuntimeError(f"unexpected stabilizer {K.stab} for conductor {n}")
    gens = [ONE] + [z**k + (sign * zb) ** k for k in range(1, 2 ** (m - 2))]
    return tag, gens
