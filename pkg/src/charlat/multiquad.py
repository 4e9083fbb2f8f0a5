"""Multiquadratic fields Q(sqrt(p*) : p in P) with exact arithmetic and maximal orders.

An element is stored as a map from subsets S of the index set (bitmasks) to
rational coefficients, standing for sum_S c_S sqrt(D_S) with D_S the product
of the p* in S.  Here sqrt(D_S) means the product of the principal roots
sqrt(p*) over S (not the principal root of D_S), so that

    sqrt(D_S) sqrt(D_T) = (prod of p* over S & T) sqrt(D_{S ^ T}).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Mapping, Sequence

from .families import PartitionDatum, SquareClassBasis, an_field_basis, an_partition_data, prime_star
from .orders import closure_from_coordinates
from .zlat import Lattice, hnf_rows, quotient_invariants

__all__ = [
    "MultiQuad",
    "AmbientMismatchError",
    "DiscriminantCheckError",
    "mq_add",
    "mq_mul",
    "MaximalOrder",
    "mq_maximal_order",
    "subfield_maximal_order",
    "an_order_generators",
    "an_quotient",
    "reference_an_table",
]


class AmbientMismatchError(ValueError):
    pass


class DiscriminantCheckError(ArithmeticError):
    """The candidate basis failed the conductor-discriminant certificate."""


def _bits(S: int):
    i = 0
    while S:
        if S & 1:
            yield i
        S >>= 1
        i += 1


@lru_cache(maxsize=None)
def _radicand(stars: tuple[int, ...], S: int) -> int:
    return math.prod(stars[i] for i in _bits(S))


@dataclass(frozen=True)
class MultiQuad:
    prime_stars: tuple[int, ...]
    coeffs: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        r = len(self.prime_stars)
        clean = {}
        for S, c in self.coeffs.items():
            if not 0 <= S < (1 << r):
                raise ValueError(f"subset {S:b} outside index range")
            c = Fraction(c)
            if c:
                clean[S] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def rational(cls, stars: Sequence[int], q) -> "MultiQuad":
        return cls(tuple(stars), {0: Fraction(q)})

    @classmethod
    def sqrt(cls, stars: Sequence[int], S: int | Sequence[int], scale=1) -> "MultiQuad":
        """scale * sqrt(D_S); S is a bitmask or a list of indices."""
        if not isinstance(S, int):
            S = sum(1 << i for i in S)
        return cls(tuple(stars), {S: Fraction(scale)})

    def __add__(self, other):
        return mq_add(self, other)

    def __sub__(self, other):
        return mq_add(self, other.scale(-1))

    def __mul__(self, other):
        if isinstance(other, MultiQuad):
            return mq_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, q) -> "MultiQuad":
        return MultiQuad(self.prime_stars, {S: c * q for S, c in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, MultiQuad) and self.prime_stars == other.prime_stars and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.prime_stars, tuple(sorted(self.coeffs.items()))))

    def is_rational(self) -> bool:
        return all(S == 0 for S in self.coeffs)

    def trace(self) -> Fraction:
        """Trace down to Q of the ambient field Q(sqrt(p*) : p*)."""
        return self.coeffs.get(0, Fraction(0)) * (1 << len(self.prime_stars))

    def complex_value(self) -> complex:
        roots = [complex(0, math.sqrt(-p)) if p < 0 else complex(math.sqrt(p)) for p in self.prime_stars]
        out = 0j
        for S, c in self.coeffs.items():
            out += float(c) * math.prod((roots[i] for i in _bits(S)), start=1 + 0j)
        return out

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for S in sorted(self.coeffs):
            c = self.coeffs[S]
            if S == 0:
                parts.append(str(c))
            else:
                parts.append(f"{c}*Sqrt({_radicand(self.prime_stars, S)})")
        return " + ".join(parts)


def _check(x: MultiQuad, y: MultiQuad):
    if x.prime_stars != y.prime_stars:
        raise AmbientMismatchError(f"{x.prime_stars} vs {y.prime_stars}")


def mq_add(x: MultiQuad, y: MultiQuad) -> MultiQuad:
    _check(x, y)
    out = dict(x.coeffs)
    for S, c in y.coeffs.items():
        out[S] = out.get(S, 0) + c
    return MultiQuad(x.prime_stars, out)


def mq_mul(x: MultiQuad, y: MultiQuad) -> MultiQuad:
    _check(x, y)
    st = x.prime_stars
    out: dict[int, Fraction] = {}
    for S, a in x.coeffs.items():
        for T, b in y.coeffs.items():
            U = S ^ T
            out[U] = out.get(U, 0) + a * b * _radicand(st, S & T)
    return MultiQuad(st, out)


# --- maximal orders ---------------------------------------------------------------------

@dataclass
class MaximalOrder:
    """Z_K for K = Q(sqrt(D_S) : S in V) inside the ambient Q(sqrt(p*) : p*).

    ``classes`` lists the 2^dim V subsets of V (bitmasks over ``prime_stars``)
    in the order used for coordinates; ``rows`` are the basis vectors scaled by
    ``scale`` so that they are integral, in HNF.
    """

    prime_stars: tuple[int, ...]
    classes: list[int]
    rows: list[list[int]]
    scale: int
    discriminant: int

    @property
    def rank(self) -> int:
        return len(self.classes)

    def basis(self) -> list[MultiQuad]:
        return [MultiQuad(self.prime_stars, {S: Fraction(c, self.scale) for S, c in zip(self.classes, r) if c})
                for r in self.rows]

    def lattice(self) -> Lattice:
        return Lattice.from_hnf(self.rows, self.rank)

    def _scaled(self, x: MultiQuad) -> list[int]:
        if x.prime_stars != self.prime_stars:
            raise AmbientMismatchError("element lives in another ambient field")
        pos = {S: i for i, S in enumerate(self.classes)}
        v = [0] * self.rank
        for S, c in x.coeffs.items():
            if S not in pos:
                raise ValueError(f"{x} does not lie in the field")
            c = c * self.scale
            if c.denominator != 1:
                raise ValueError(f"{x} is not integral")
            v[pos[S]] = int(c)
        return v

    def coordinates(self, x: MultiQuad) -> list[int]:
        c = self.lattice().coordinates(self._scaled(x))
        if c is None:
            raise ValueError(f"{x} is not an algebraic integer of the field")
        return c

    def multiplication_matrix(self, x: MultiQuad) -> list[list[int]]:
        return [self.coordinates(mq_mul(b, x)) for b in self.basis()]


def _conductor_discriminant(stars: tuple[int, ...], classes: Sequence[int]) -> int:
    # each quadratic character sqrt(D_S) has conductor |D_S| and D_S = 1 mod 4
    return math.prod(_radicand(stars, S) for S in classes)


def _trace_form_det(stars, classes, rows, scale) -> Fraction:
    # in the sqrt(D_S) coordinates the trace form is diagonal: Tr(sqrt(D_S)^2) = [K:Q] D_S
    deg = len(classes)
    d = Fraction(1)
    for i in range(deg):
        d *= Fraction(rows[i][i], scale)
    d *= d
    for S in classes:
        d *= deg * _radicand(stars, S)
    return d


def subfield_maximal_order(prime_stars: Sequence[int], V: Sequence[int]) -> MaximalOrder:
    """Z_K for the subfield cut out by the F_2-span of the bitmasks V.

    Z_K is the trace image of the ambient order, which is spanned by products of
    (1 + sqrt(p*))/2 (pairwise coprime discriminants); the trace is onto since all
    ramification is odd, hence tame.  Maximality is certified by comparing the
    trace-form determinant with the conductor-discriminant product.
    """
    stars = tuple(prime_stars)
    if len(set(stars)) != len(stars) or any(p % 4 != 1 for p in stars):
        raise ValueError("prime stars must be distinct and 1 mod 4")
    r = len(stars)
    basis = []
    for v in V:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    classes = [0]
    for b in basis:
        classes += [S ^ b for S in classes]
    dim = len(basis)
    # Tr_{L/K}(prod_{i in T} (1+sqrt p_i*)/2) = [L:K] 2^-|T| sum_{S <= T, S in V} sqrt(D_S);
    # scale by 2^r / [L:K] = 2^dim
    gens = []
    for T in range(1 << r):
        w = 1 << (r - bin(T).count("1"))
        gens.append([w if S & ~T == 0 else 0 for S in classes])
    scale = 1 << dim
    rows = hnf_rows(gens, len(classes))
    disc = _trace_form_det(stars, classes, rows, scale)
    expected = _conductor_discriminant(stars, classes)
    if disc != expected:
        raise DiscriminantCheckError(f"trace-form determinant {disc} differs from {expected}")
    return MaximalOrder(stars, classes, rows, scale, expected)


def mq_maximal_order(prime_stars: Sequence[int]) -> MaximalOrder:
    """Z_K of Q(sqrt(p*) : p* in prime_stars), certified by the discriminant."""
    r = len(prime_stars)
    return subfield_maximal_order(prime_stars, [1 << i for i in range(r)])


# --- alternating groups ------------------------------------------------------------------------

def _mask(stars: tuple[int, ...], primes) -> int:
    idx = {abs(p): i for i, p in enumerate(stars)}
    return sum(1 << idx[p] for p in primes)


def _an_setup(n: int) -> tuple[tuple[int, ...], list[int], SquareClassBasis]:
    B = an_field_basis(n)
    primes = sorted({p for S in B.vectors for p in S})
    stars = tuple(prime_star(p) for p in primes)
    V = [_mask(stars, S) for S in B.vectors]
    return stars, V, B


def an_order_generators(n: int) -> tuple[MaximalOrder, list[MultiQuad], list[PartitionDatum]]:
    """Z_{Q(A_n)} and the values (1 + e sqrt(d'))/2 generating Z[A_n] over Z."""
    from .cyclo import factorize

    stars, V, _ = _an_setup(n)
    O = subfield_maximal_order(stars, V)
    gens, data = [], []
    for datum in an_partition_data(n):
        if datum.rational:
            continue
        S = _mask(stars, [p for p, _ in factorize(abs(datum.d_prime))])
        if _radicand(stars, S) != datum.d_prime:
            raise ArithmeticError(f"square class of {datum.d_prime} is not a product of p*")
        gens.append(MultiQuad(stars, {0: Fraction(1, 2), S: Fraction(datum.e, 2)}))
        data.append(datum)
    return O, gens, data


def an_quotient(n: int, return_rounds: bool = False):
    """Nontrivial elementary divisors of Z_{Q(A_n)} / Z[A_n]."""
    if n < 2:
        raise ValueError("n must be at least 2")
    O, gens, _ = an_order_generators(n)
    one = O.coordinates(MultiQuad.rational(O.prime_stars, 1))
    coords = [O.coordinates(g) for g in gens]
    mats = [O.multiplication_matrix(g) for g in gens]
    L, rounds = closure_from_coordinates(one, coords, mats, O.rank)
    divs = quotient_invariants(L, Lattice.standard(O.rank))
    return (divs, rounds) if return_rounds else divs


@lru_cache(maxsize=1)
def _reference_rows() -> dict[int, list[int]]:
    doc = json.loads(resources.files("charlat").joinpath("data/an_table.json").read_text())
    out = {}
    for n, row in doc["rows"].items():
        divs = []
        for d, m in row.items():
            divs += [int(d)] * m
        out[int(n)] = sorted(divs)
    return out


def reference_an_table(n: int) -> list[int]:
    """Reference elementary divisors for 2 <= n <= 31 from the embedded fixture."""
    rows = _reference_rows()
    if n not in rows:
        raise KeyError(f"no reference row for n = {n}")
    return list(rows[n])
