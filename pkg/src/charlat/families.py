"""Closed-form character tables and explicit permutation groups for the named families."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .cyclo import E, ONE, ZERO, Cyclotomic, factorize, lcm
from .fields import AbelianField
from .groups import CharacterTable, Perm, PermGroup, build_table

__all__ = [
    "abelian_table",
    "direct_product_table",
    "dihedral_table",
    "dihedral_group",
    "cyclic_group",
    "quaternion_group",
    "symmetric_group",
    "alternating_group",
    "direct_product_group",
    "extraspecial_central_order",
    "extraspecial_central_group",
    "heisenberg_group",
    "c4c4_c3_group",
    "c15_d16_group",
    "C15_D16_VARIANTS",
    "psl2_group",
    "psl33_group",
    "GF",
    "PartitionDatum",
    "SquareClassBasis",
    "an_partition_data",
    "an_field_basis",
    "prime_star",
    "suzuki_exponent",
]


# --- closed-form tables -------------------------------------------------------------

def abelian_table(invariant_factors: Sequence[int]) -> CharacterTable:
    """Table of C_{n_1} x ... x C_{n_k} through the dual-group pairing."""
    ns = [int(n) for n in invariant_factors if n != 1]
    if any(n < 1 for n in invariant_factors):
        raise ValueError("invariant factors must be positive")
    els = list(product(*(range(n) for n in ns))) if ns else [()]
    index = {g: i for i, g in enumerate(els)}
    exp = lcm(*ns) if ns else 1

    def order(g):
        return lcm(*(n // math.gcd(a, n) for a, n in zip(g, ns))) if ns else 1

    orders = [order(g) for g in els]
    power = [[index[tuple(a * s % n for a, n in zip(g, ns))] for s in range(orders[i])] for i, g in enumerate(els)]
    z = E(exp)
    values = []
    for chi in els:
        row = []
        for g in els:
            k = sum(a * b * (exp // n) for a, b, n in zip(chi, g, ns)) % exp
            row.append(z**k)
        values.append(row)
    name = "x".join(f"C{n}" for n in ns) or "C1"
    return build_table([1] * len(els), orders, power, values, labels=els, name=name)


def direct_product_table(T1: CharacterTable, T2: CharacterTable) -> CharacterTable:
    """Kronecker product of two tables; Irr(G x H) = Irr(G) x Irr(H)."""
    c1, c2 = T1.classes, T2.classes
    pairs = [(i, j) for i in range(c1.count) for j in range(c2.count)]
    index = {p: k for k, p in enumerate(pairs)}
    sizes = [c1.sizes[i] * c2.sizes[j] for i, j in pairs]
    orders = [lcm(c1.element_orders[i], c2.element_orders[j]) for i, j in pairs]
    power = [[index[(c1.power(i, s), c2.power(j, s))] for s in range(orders[k])] for k, (i, j) in enumerate(pairs)]
    values = [[a[i] * b[j] for i, j in pairs] for a in T1.values for b in T2.values]
    name = f"{T1.name}x{T2.name}" if T1.name and T2.name else ""
    return build_table(sizes, orders, power, values, labels=pairs, name=name)


def dihedral_table(m: int) -> CharacterTable:
    """Table of the dihedral group of order 2m (m >= 3)."""
    if m < 3:
        raise ValueError("dihedral tables need m >= 3")
    z = E(m)
    # classes: ("r", j) for r^{+-j}, ("s", parity) for reflections
    classes: list[tuple] = [("r", j) for j in range(m // 2 + 1)]
    if m % 2:
        classes.append(("s", 0))
    else:
        classes += [("s", 0), ("s", 1)]
    index = {c: k for k, c in enumerate(classes)}

    def rclass(j):
        j %= m
        return index[("r", min(j, m - j))]

    sizes, orders, power = [], [], []
    for kind, j in classes:
        if kind == "r":
            sizes.append(1 if j == 0 or 2 * j == m else 2)
            o = m // math.gcd(j, m)
            orders.append(o)
            power.append([rclass(j * s) for s in range(o)])
        else:
            sizes.append(m if m % 2 else m // 2)
            orders.append(2)
            power.append([index[("r", 0)], index[("s", j)]])
    values = []

    def linear(rv, sv):
        row = []
        for kind, j in classes:
            if kind == "r":
                row.append(Cyclotomic.rational(rv**j))
            else:
                row.append(Cyclotomic.rational(sv * rv**j))
        return row

    values.append(linear(1, 1))
    values.append(linear(1, -1))
    if m % 2 == 0:
        values.append(linear(-1, 1))
        values.append(linear(-1, -1))
    for h in range(1, (m - 1) // 2 + 1):
        row = []
        for kind, j in classes:
            row.append(z ** (h * j) + z ** (-h * j) if kind == "r" else ZERO)
        values.append(row)
    return build_table(sizes, orders, power, values, labels=classes, name=f"D{2 * m}")


# --- permutation groups ----------------------------------------------------------------

def cyclic_group(n: int) -> PermGroup:
    return PermGroup([Perm(tuple((i + 1) % n for i in range(n)))], n, name=f"C{n}")


def dihedral_group(m: int) -> PermGroup:
    """Dihedral group of order 2m on the vertices of an m-gon."""
    if m < 3:
        raise ValueError("dihedral groups need m >= 3")
    r = Perm(tuple((i + 1) % m for i in range(m)))
    s = Perm(tuple((-i) % m for i in range(m)))
    return PermGroup([r, s], m, name=f"D{2 * m}")


def quaternion_group() -> PermGroup:
    i = Perm.from_cycles([(0, 1, 2, 3), (4, 5, 6, 7)], 8)
    j = Perm.from_cycles([(0, 4, 2, 6), (1, 7, 3, 5)], 8)
    return PermGroup([i, j], 8, name="Q8")


def symmetric_group(n: int) -> PermGroup:
    if n < 2:
        return PermGroup([], max(n, 1), name=f"S{n}")
    c = Perm(tuple((i + 1) % n for i in range(n)))
    t = Perm.from_cycles([(0, 1)], n)
    return PermGroup([c, t], n, name=f"S{n}")


def alternating_group(n: int) -> PermGroup:
    if n < 3:
        return PermGroup([], max(n, 1), name=f"A{n}")
    gens = [Perm.from_cycles([(0, 1, k)], n) for k in range(2, n)]
    return PermGroup(gens, n, name=f"A{n}")


def direct_product_group(G: PermGroup, H: PermGroup) -> PermGroup:
    """G x H acting on the disjoint union of the two point sets."""
    n, m = G.degree, H.degree
    gens = [Perm(g.images + tuple(range(n, n + m))) for g in G.generators]
    gens += [Perm(tuple(range(n)) + tuple(n + x for x in h.images)) for h in H.generators]
    return PermGroup(gens, n + m, name=f"{G.name}x{H.name}" if G.name and H.name else "")


def _affine_group(points: list, maps: list) -> PermGroup:
    ix = {p: i for i, p in enumerate(points)}
    return PermGroup([Perm(tuple(ix[f(p)] for p in points)) for f in maps], len(points))


def c4c4_c3_group() -> PermGroup:
    """C_4^2 x| C_3, regular on C_4^2; C_3 acts by [[0,-1],[1,-1]] mod 4."""
    pts = [(a, b) for a in range(4) for b in range(4)]
    G = _affine_group(pts, [
        lambda v: ((v[0] + 1) % 4, v[1]),
        lambda v: (v[0], (v[1] + 1) % 4),
        lambda v: ((-v[1]) % 4, (v[0] - v[1]) % 4),
    ])
    G.name = "C4^2:C3"
    return G


# images of the rotation and of the reflection of D_16 in (Z/15)^x
C15_D16_VARIANTS = {"default": (14, 11), "rot4": (4, 11), "rot11": (11, 4)}


def c15_d16_group(variant: str = "default") -> PermGroup:
    """C_15 x| D_16 on 15 + 8 points; D_16 acts on C_15 through its Klein quotient."""
    a, b = C15_D16_VARIANTS[variant]
    n = 23

    def perm(f15, f8):
        return Perm(tuple(f15(i) for i in range(15)) + tuple(15 + f8(i) for i in range(8)))

    t = perm(lambda i: (i + 1) % 15, lambda i: i)
    r = perm(lambda i: a * i % 15, lambda i: (i + 1) % 8)
    s = perm(lambda i: b * i % 15, lambda i: (-i) % 8)
    return PermGroup([t, r, s], n, name="C15:D16" if variant == "default" else f"C15:D16[{variant}]")


def heisenberg_group(p: int, n: int = 1, center: int = 1) -> PermGroup:
    """Regular representation of the extraspecial group p^(1+2n) of exponent p, or
    (center=2) of its central product with C_{p^2}.

    Elements are (a, b, t) with a, b in F_p^n and t mod p^center; the product is
    (a,b,t)(a',b',t') = (a+a', b+b', t+t'+p^(center-1) * b.a').
    """
    if p == 2:
        raise ValueError("odd primes only")
    c = p**center
    scale = p ** (center - 1)
    els = [(a, b, t) for a in product(range(p), repeat=n) for b in product(range(p), repeat=n) for t in range(c)]
    ix = {g: i for i, g in enumerate(els)}

    def mul(g, h):
        a, b, t = g
        a2, b2, t2 = h
        dot = sum(x * y for x, y in zip(b, a2))
        return (tuple((x + y) % p for x, y in zip(a, a2)), tuple((x + y) % p for x, y in zip(b, b2)),
                (t + t2 + scale * dot) % c)

    zero = tuple([0] * n)
    gens = []
    for i in range(n):
        e = tuple(int(k == i) for k in range(n))
        gens.append((e, zero, 0))
        gens.append((zero, e, 0))
    gens.append((zero, zero, 1))
    perms = [Perm(tuple(ix[mul(g, h)] for g in els)) for h in gens]
    name = f"{p}^(1+{2 * n})" + (f"oC{c}" if center > 1 else "")
    return PermGroup(perms, len(els), name=name)


def extraspecial_central_group(p: int, n: int) -> PermGroup:
    """E o C_{p^2} for E extraspecial of order p^(1+2n) and exponent p (regular, order p^(2n+2))."""
    return heisenberg_group(p, n, center=2)


def extraspecial_central_order(p: int, n: int) -> tuple[AbelianField, list[Cyclotomic]]:
    """Field Q_{p^2} and ring generators zeta^p, p^n zeta^i (p not dividing i) of Z[E o C_{p^2}]."""
    if p == 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)) or p < 2:
        raise ValueError("p must be an odd prime")
    if n < 1:
        raise ValueError("n must be positive")
    z = E(p * p)
    gens = [z**p] + [p**n * z**i for i in range(1, p * p) if i % p]
    return AbelianField.cyclotomic(p * p), gens


# --- PSL groups -------------------------------------------------------------------------

class GF:
    """The field with q = p^k elements (k <= 3 here), elements encoded as integers 0..q-1.

    The integer's base-p digits are the coefficients in the polynomial basis.
    """

    _MODULI = {4: (2, [1, 1, 1]), 8: (2, [1, 1, 0, 1]), 9: (3, [1, 0, 1])}

    def __init__(self, q: int):
        fac = factorize(q)
        if len(fac) != 1:
            raise ValueError(f"{q} is not a prime power")
        p, k = fac[0]
        self.q, self.p, self.k = q, p, k
        if k > 1 and q not in self._MODULI:
            raise ValueError(f"GF({q}) is not tabulated")
        self.modulus = self._MODULI[q][1] if k > 1 else [0, 1]
        self.add_table = [[self._add(a, b) for b in range(q)] for a in range(q)]
        self.mul_table = [[self._mul(a, b) for b in range(q)] for a in range(q)]
        self.neg = [next(b for b in range(q) if self.add_table[a][b] == 0) for a in range(q)]
        self.inv = [None] + [next(b for b in range(q) if self.mul_table[a][b] == 1) for a in range(1, q)]

    def _digits(self, a):
        return [(a // self.p**i) % self.p for i in range(self.k)]

    def _num(self, ds):
        return sum(d * self.p**i for i, d in enumerate(ds))

    def _add(self, a, b):
        return self._num([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _mul(self, a, b):
        if self.k == 1:
            return a * b % self.p
        x, y = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, u in enumerate(x):
            for j, v in enumerate(y):
                prod[i + j] = (prod[i + j] + u * v) % self.p
        m = self.modulus
        for d in range(len(prod) - 1, self.k - 1, -1):
            c = prod[d]
            if c:
                for i in range(self.k + 1):
                    prod[d - self.k + i] = (prod[d - self.k + i] - c * m[i]) % self.p
        return self._num(prod[:self.k])

    def primitive_element(self) -> int:
        for g in range(2, self.q) if self.q > 2 else [1]:
            x, seen = 1, set()
            for _ in range(self.q - 1):
                x = self.mul_table[x][g]
                seen.add(x)
            if len(seen) == self.q - 1:
                return g
        return 1


def psl2_group(q: int) -> PermGroup:
    """PSL(2, q) on the q + 1 points of the projective line (infinity = q)."""
    if q not in (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27):
        raise ValueError(f"unsupported q = {q}")
    F = GF(q)
    inf = q
    A, M = F.add_table, F.mul_table

    def mobius(a, b, c, d):
        # x -> (a x + b) / (c x + d)
        def f(x):
            if x == inf:
                return inf if c == 0 else M[a][F.inv[c]]
            num = A[M[a][x]][b]
            den = A[M[c][x]][d]
            if den == 0:
                return inf
            return M[num][F.inv[den]]
        return f

    maps = [mobius(1, F.p**i, 0, 1) for i in range(F.k)]
    mu = F.primitive_element()
    mu2 = M[mu][mu]
    maps.append(mobius(mu2, 0, 0, 1))
    maps.append(mobius(0, F.neg[1], 1, 0))
    pts = list(range(q + 1))
    G = PermGroup([Perm(tuple(f(x) for x in pts)) for f in maps], q + 1, name=f"PSL(2,{q})")
    return G


def psl33_group() -> PermGroup:
    """PSL(3, 3) = SL(3, 3) on the 13 points of the projective plane over F_3."""
    pts = []
    for v in product(range(3), repeat=3):
        if any(v):
            lead = next(x for x in v if x)
            w = tuple(x * lead % 3 for x in v)  # lead^-1 = lead in F_3
            if w not in pts:
                pts.append(w)
    ix = {v: i for i, v in enumerate(pts)}

    def norm(v):
        lead = next(x for x in v if x)
        return tuple(x * lead % 3 for x in v)

    gens = []
    for i in range(3):
        for j in range(3):
            if i != j:
                def f(v, i=i, j=j):
                    w = list(v)
                    w[i] = (w[i] + w[j]) % 3
                    return norm(tuple(w))
                gens.append(Perm(tuple(ix[f(v)] for v in pts)))
    return PermGroup(gens, 13, name="PSL(3,3)")


# --- alternating groups: partitions and square classes ------------------------------------

def prime_star(p: int) -> int:
    return p if p % 4 == 1 else -p


def _squarefree_kernel(d: int) -> tuple[int, int]:
    """(e, d') with d = e^2 d', d' squarefree (sign kept in d')."""
    sign = -1 if d < 0 else 1
    e, dp = 1, 1
    for p, a in factorize(abs(d)):
        e *= p ** (a // 2)
        if a % 2:
            dp *= p
    return e, sign * dp


@dataclass(frozen=True)
class PartitionDatum:
    parts: tuple[int, ...]
    k: int
    d: int
    d_prime: int
    e: int

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def rational(self) -> bool:
        return self.d_prime == 1


def _distinct_odd_partitions(n: int, max_part: int | None = None):
    if max_part is None:
        max_part = n if n % 2 else n - 1
    if n == 0:
        yield ()
        return
    top = min(max_part, n)
    if top % 2 == 0:
        top -= 1
    for part in range(top, 0, -2):
        for rest in _distinct_odd_partitions(n - part, part - 2):
            yield (part,) + rest


def an_partition_data(n: int) -> list[PartitionDatum]:
    """Partitions of n into distinct odd parts, with d = (-1)^((n-k)/2) * prod(parts) = e^2 d'."""
    if n < 2:
        raise ValueError("n must be at least 2")
    out = []
    for parts in _distinct_odd_partitions(n):
        k = len(parts)
        d = (-1) ** ((n - k) // 2) * math.prod(parts)
        e, dp = _squarefree_kernel(d)
        out.append(PartitionDatum(parts, k, d, dp, e))
    return out


@dataclass(frozen=True)
class SquareClassBasis:
    """F_2-basis of a space of square classes of products of p* = (-1)^((p-1)/2) p.

    ``vectors`` are sets of primes S, standing for D_S = prod_{p in S} p*, in
    reduced echelon form (pivot = smallest prime of each set).
    """

    primes: tuple[int, ...]
    vectors: tuple[frozenset[int], ...]

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def values(self) -> list[int]:
        return [math.prod(prime_star(p) for p in sorted(S)) for S in self.vectors]

    def span(self) -> list[frozenset[int]]:
        out = [frozenset()]
        for v in self.vectors:
            out += [s ^ v for s in out]
        return out


def _f2_basis(primes: Sequence[int], sets: Sequence[frozenset[int]]) -> SquareClassBasis:
    order = {p: i for i, p in enumerate(primes)}
    basis: dict[int, frozenset[int]] = {}
    for S in sets:
        v = frozenset(S)
        while v:
            piv = min(v, key=order.__getitem__)
            if piv in basis:
                v = v ^ basis[piv]
            else:
                basis[piv] = v
                break
    # reduce to echelon form with unique pivots
    pivs = sorted(basis, key=order.__getitem__)
    for p in reversed(pivs):
        for q in pivs:
            if q != p and p in basis[q]:
                basis[q] = basis[q] ^ basis[p]
    return SquareClassBasis(tuple(primes), tuple(basis[p] for p in pivs))


def an_field_basis(n: int) -> SquareClassBasis:
    """Square-class space V of Q(A_n): Q(A_n) = Q(sqrt(D) : D in V)."""
    if n >= 25:
        primes = [p for p in range(3, n + 1) if len(factorize(p)) == 1 and factorize(p)[0][1] == 1 and p != n - 2]
        return _f2_basis(primes, [frozenset({p}) for p in primes])
    sets = []
    primes = set()
    for datum in an_partition_data(n):
        if datum.rational:
            continue
        S = frozenset(p for p, _ in factorize(abs(datum.d_prime)))
        sets.append(S)
        primes |= S
    return _f2_basis(sorted(primes), sets)


def suzuki_exponent(q: int) -> int:
    """a = phi((q^2 + 1)(q - 1)) / 32, the multiplicity of C_2 in the Suzuki quotient."""
    from .cyclo import euler_phi

    return euler_phi((q * q + 1) * (q - 1)) // 32
