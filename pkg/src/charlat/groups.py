"""Permutation groups, conjugacy classes and Dixon-Schneider character tables.

Permutations act on {0, ..., n-1} from the right: ``x * y`` applies x first.
"""
from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .cyclo import E, ONE, ZERO, Cyclotomic, conjugate, is_integral, lcm

__all__ = [
    "Perm",
    "PermGroup",
    "ClassData",
    "CharacterTable",
    "GroupTooLargeError",
    "TableInvariantError",
    "DixonError",
    "parse_cycles",
    "conjugacy_classes",
    "dixon_table",
    "cyclic_normalizer_data",
    "enum_bound",
    "build_table",
    "is_nilpotent",
]

DEFAULT_ENUM_BOUND = 10**5


def enum_bound() -> int:
    return int(os.environ.get("CHARLAT_ENUM_BOUND", DEFAULT_ENUM_BOUND))


class GroupTooLargeError(RuntimeError):
    pass


class TableInvariantError(ValueError):
    pass


class DixonError(RuntimeError):
    pass


# --- permutations ----------------------------------------------------------------

@dataclass(frozen=True)
class Perm:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("images do not form a permutation")

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Perm":
        img = list(range(degree))
        for c in cycles:
            for a, b in zip(c, list(c[1:]) + [c[0]]):
                img[a] = b
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm._raw(tuple(map(other.images.__getitem__, self.images)))

    @classmethod
    def _raw(cls, images: tuple[int, ...]) -> "Perm":
        obj = object.__new__(cls)
        object.__setattr__(obj, "images", images)
        return obj

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm._raw(tuple(inv))

    def __pow__(self, k: int) -> "Perm":
        return Perm._raw(_tpow(self.images, k))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            c, j = [], i
            while j not in seen:
                seen.add(j)
                c.append(j)
                j = self.images[j]
            out.append(tuple(c))
        return out

    def order(self) -> int:
        return lcm(*(len(c) for c in self.cycles())) if not self.is_identity() else 1

    def __str__(self):
        cs = self.cycles()
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cs) if cs else "()"


def _tmul(x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(map(y.__getitem__, x))


def _tinv(x: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(x)
    for i, j in enumerate(x):
        inv[j] = i
    return tuple(inv)


def _tpow(x: tuple[int, ...], k: int) -> tuple[int, ...]:
    n = len(x)
    if k < 0:
        x, k = _tinv(x), -k
    out = tuple(range(n))
    base = x
    while k:
        if k & 1:
            out = _tmul(out, base)
        base = _tmul(base, base)
        k >>= 1
    return out


def _tconj(g: tuple[int, ...], h: tuple[int, ...]) -> tuple[int, ...]:
    """h^-1 g h."""
    c = [0] * len(g)
    for j, gj in enumerate(g):
        c[h[j]] = h[gj]
    return tuple(c)


def _torder(x: tuple[int, ...]) -> int:
    seen = bytearray(len(x))
    out = 1
    for i in range(len(x)):
        if seen[i]:
            continue
        ln, j = 0, i
        while not seen[j]:
            seen[j] = 1
            j = x[j]
            ln += 1
        out = out * ln // math.gcd(out, ln)
    return out


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int | None = None) -> Perm:
    """Parse a cycle string such as ``(0,1)(2,3)``; ``()`` is the identity."""
    s = text.strip()
    cycles = []
    pos = 0
    for m in _CYCLE.finditer(s):
        if s[pos:m.start()].strip():
            raise ValueError(f"malformed cycle string {text!r}")
        pos = m.end()
        body = m.group(1).replace(",", " ").split()
        if body:
            cycles.append([int(t) for t in body])
    if s[pos:].strip():
        raise ValueError(f"malformed cycle string {text!r}")
    pts = [i for c in cycles for i in c]
    if len(pts) != len(set(pts)) or any(i < 0 for i in pts):
        raise ValueError(f"cycles are not disjoint: {text!r}")
    n = degree if degree is not None else (max(pts) + 1 if pts else 1)
    if pts and max(pts) >= n:
        raise ValueError("point outside the degree")
    return Perm.from_cycles(cycles, n)


# --- groups --------------------------------------------------------------------------

class PermGroup:
    """Group generated by permutations of a common degree."""

    def __init__(self, generators: Iterable[Perm], degree: int | None = None, name: str = ""):
        gens = [g if isinstance(g, Perm) else Perm(tuple(g)) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree needed for the trivial group")
            degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise ValueError("generators of different degrees")
        self.degree = degree
        self.generators = gens
        self.name = name
        self._order: int | None = None
        self._elements: list[tuple[int, ...]] | None = None

    def __repr__(self):
        return f"PermGroup({self.name or 'G'}, degree={self.degree}, gens={len(self.generators)})"

    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def order(self) -> int:
        if self._order is None:
            if self._elements is not None:
                self._order = len(self._elements)
            else:
                self._order = _schreier_sims_order([g.images for g in self.generators], self.degree)
        return self._order

    def elements(self, bound: int | None = None) -> list[tuple[int, ...]]:
        """All elements (as image tuples), identity first, by closure under the generators."""
        if self._elements is not None:
            return self._elements
        bound = enum_bound() if bound is None else bound
        if self.order() > bound:
            raise GroupTooLargeError(f"group order {self.order()} exceeds the enumeration bound {bound}")
        ident = tuple(range(self.degree))
        gens = [g.images for g in self.generators if not g.is_identity()]
        seen = {ident}
        out = [ident]
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = _tmul(x, g)
                    if y not in seen:
                        seen.add(y)
                        out.append(y)
                        nxt.append(y)
            frontier = nxt
        self._elements = out
        return out

    def enumerate_elements(self, bound: int | None = None) -> list[Perm]:
        return [Perm._raw(x) for x in self.elements(bound)]

    def is_abelian(self) -> bool:
        gs = [g.images for g in self.generators]
        return all(_tmul(a, b) == _tmul(b, a) for a in gs for b in gs)


def _schreier_sims_order(gens: list[tuple[int, ...]], n: int) -> int:
    ident = tuple(range(n))
    gens = [g for g in gens if g != ident]
    if not gens:
        return 1
    base: list[int] = []
    S: list[list[tuple[int, ...]]] = []
    trans: list[dict[int, tuple[int, ...]]] = []

    def moved(g):
        return next(i for i in range(n) if g[i] != i)

    def orbit(b, gs):
        t = {b: ident}
        frontier = [b]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gs:
                    y = g[x]
                    if y not in t:
                        t[y] = _tmul(t[x], g)
                        nxt.append(y)
            frontier = nxt
        return t

    def sift(g, start):
        for i in range(start, len(base)):
            b = g[base[i]]
            u = trans[i].get(b)
            if u is None:
                return g, i
            g = _tmul(g, _tinv(u))
        return g, len(base)

    for g in gens:
        if all(g[b] == b for b in base):
            base.append(moved(g))
    for i in range(len(base)):
        S.append([g for g in gens if all(g[base[j]] == base[j] for j in range(i))])
        trans.append(orbit(base[i], S[i]))

    i = len(base) - 1
    while i >= 0:
        restart = False
        for beta, u in list(trans[i].items()):
            for s in S[i]:
                v = trans[i][s[beta]]
                sch = _tmul(_tmul(u, s), _tinv(v))
                if sch == ident:
                    continue
                h, j = sift(sch, i + 1)
                if h != ident:
                    if j == len(base):
                        base.append(moved(h))
                        S.append([])
                        trans.append({base[-1]: ident})
                    for l in range(i + 1, j + 1):
                        S[l].append(h)
                        trans[l] = orbit(base[l], S[l])
                    i = j
                    restart = True
                    break
            if restart:
                break
        if not restart:
            i -= 1
    out = 1
    for t in trans:
        out *= len(t)
    return out


# --- classes ------------------------------------------------------------------------

@dataclass
class ClassData:
    """Conjugacy-class data; ``reps`` is empty for tables ingested without a group."""

    sizes: list[int]
    element_orders: list[int]
    power_maps: dict[int, list[int]]
    exponent: int
    reps: list[Perm] = field(default_factory=list)
    power_classes: list[list[int]] = field(default_factory=list, repr=False)
    members: list[list[tuple[int, ...]]] = field(default_factory=list, repr=False)
    class_of: dict[tuple[int, ...], int] = field(default_factory=dict, repr=False)

    @property
    def count(self) -> int:
        return len(self.sizes)

    def power(self, c: int, k: int) -> int:
        """Class of rep_c^k."""
        if self.power_classes:
            return self.power_classes[c][k % self.element_orders[c]]
        k %= self.element_orders[c]
        if k in self.power_maps:
            return self.power_maps[k][c]
        # compose prime power maps
        out, kk = c, k
        p = 2
        while kk > 1:
            while kk % p == 0:
                if p not in self.power_maps:
                    raise KeyError(f"power map {p} unavailable")
                out = self.power_maps[p][out]
                kk //= p
            p += 1
        return out

    def inverse_class(self, c: int) -> int:
        return self.power(c, -1)


def conjugacy_classes(G: PermGroup, bound: int | None = None) -> ClassData:
    els = G.elements(bound)
    gens = [g.images for g in G.generators if not g.is_identity()]
    assigned: dict[tuple[int, ...], int] = {}
    classes: list[list[tuple[int, ...]]] = []
    for x in els:
        if x in assigned:
            continue
        k = len(classes)
        assigned[x] = k
        cls = [x]
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                for h in gens:
                    z = _tconj(y, h)
                    if z not in assigned:
                        assigned[z] = k
                        cls.append(z)
                        nxt.append(z)
            frontier = nxt
        classes.append(cls)
    info = []
    for cls in classes:
        rep = min(cls)
        info.append((_torder(rep), len(cls), rep, cls))
    info.sort(key=lambda t: (t[0], t[1], t[2]))
    class_of: dict[tuple[int, ...], int] = {}
    for k, (_, _, _, cls) in enumerate(info):
        for x in cls:
            class_of[x] = k
    orders = [t[0] for t in info]
    exp = lcm(*orders)
    power_classes = []
    for o, _, rep, _ in info:
        row = [0] * o
        y = tuple(range(G.degree))
        for s in range(o):
            row[s] = class_of[y]
            y = _tmul(y, rep)
        power_classes.append(row)
    pm = {}
    for p in sorted({q for q in range(2, exp + 1) if exp % q == 0 and all(q % r for r in range(2, q))}):
        pm[p] = [power_classes[c][p % orders[c]] for c in range(len(info))]
    return ClassData(
        sizes=[t[1] for t in info],
        element_orders=orders,
        power_maps=pm,
        exponent=exp,
        reps=[Perm._raw(t[2]) for t in info],
        power_classes=power_classes,
        members=[t[3] for t in info],
        class_of=class_of,
    )


def cyclic_normalizer_data(G: PermGroup, g: Perm | Sequence[int], bound: int | None = None) -> tuple[int, int, int]:
    """(|N_G(<g>)|, |C_G(g)|, |<g>|) by brute force over the elements."""
    gi = g.images if isinstance(g, Perm) else tuple(g)
    o = _torder(gi)
    cyc = set()
    y = tuple(range(len(gi)))
    for _ in range(o):
        cyc.add(y)
        y = _tmul(y, gi)
    nN = nC = 0
    for h in G.elements(bound):
        c = _tconj(gi, h)
        if c == gi:
            nC += 1
            nN += 1
        elif c in cyc:
            nN += 1
    return nN, nC, o


def is_nilpotent(G: PermGroup, classes: ClassData | None = None, bound: int | None = None) -> bool:
    """A finite group is nilpotent iff elements of coprime orders commute."""
    cls = classes if classes is not None else conjugacy_classes(G, bound)
    els = G.elements(bound)
    orders = {x: _torder(x) for x in els}
    for rep, o in zip(cls.reps, cls.element_orders):
        x = rep.images
        for y, oy in orders.items():
            if math.gcd(o, oy) == 1 and _tmul(x, y) != _tmul(y, x):
                return False
    return True


# --- character tables -------------------------------------------------------------

@dataclass
class CharacterTable:
    group_order: int
    classes: ClassData
    values: list[list[Cyclotomic]]
    name: str = ""

    @property
    def degrees(self) -> list[int]:
        return [int(row[0].rational_value()) for row in self.values]

    @property
    def class_count(self) -> int:
        return self.classes.count

    def column(self, c: int) -> list[Cyclotomic]:
        return [row[c] for row in self.values]

    def all_values(self) -> set[Cyclotomic]:
        return {v for row in self.values for v in row}

    def validate(self) -> None:
        """Raise TableInvariantError unless all table invariants hold exactly."""
        r = self.classes.count
        sizes = self.classes.sizes
        N = self.group_order
        if sum(sizes) != N or sizes[0] != 1:
            raise TableInvariantError("class sizes do not sum to the group order")
        if len(self.values) != r or any(len(row) != r for row in self.values):
            raise TableInvariantError("table is not square")
        degs = []
        for row in self.values:
            d = row[0]
            if not d.is_rational() or d.rational_value() <= 0 or Fraction(d.rational_value()).denominator != 1:
                raise TableInvariantError("degree is not a positive integer")
            degs.append(int(d.rational_value()))
        if sum(d * d for d in degs) != N:
            raise TableInvariantError("sum of squared degrees differs from the group order")
        exp = self.classes.exponent
        for row in self.values:
            for v in row:
                if not is_integral(v):
                    raise TableInvariantError(f"non-integral value {v}")
                if exp % v.conductor:
                    raise TableInvariantError(f"value {v} has conductor not dividing the exponent")
        conj = [[conjugate(v) for v in row] for row in self.values]
        from .cyclo import dot

        for a in range(r):
            for b in range(a, r):
                s = dot(self.values[a], conj[b], sizes)
                if s != (N if a == b else 0):
                    raise TableInvariantError(f"row orthogonality fails for rows {a}, {b}")
        cols = [self.column(j) for j in range(r)]
        ccols = [[conj[i][j] for i in range(r)] for j in range(r)]
        for j in range(r):
            for k in range(j, r):
                s = dot(cols[j], ccols[k])
                if s != (Fraction(N, sizes[j]) if j == k else 0):
                    raise TableInvariantError(f"column orthogonality fails for classes {j}, {k}")


def _row_key(row: list[Cyclotomic]):
    trivial = all(v == ONE for v in row)
    return (int(row[0].rational_value()), not trivial, tuple(v.sort_key() for v in row))


# --- Dixon-Schneider ------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def dixon_prime(order: int, exponent: int, ceiling: int = 10**9) -> int:
    """Smallest prime p = 1 mod exponent with p > 2*sqrt(order)."""
    p = exponent + 1
    while p * p <= 4 * order or not _is_prime(p):
        p += exponent
        if p > ceiling:
            raise DixonError("no suitable prime below the ceiling")
    return p


def _primitive_root(p: int) -> int:
    fac = []
    m, f = p - 1, 2
    while f * f <= m:
        if m % f == 0:
            fac.append(f)
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        fac.append(m)
    g = 2
    while any(pow(g, (p - 1) // q, p) == 1 for q in fac):
        g += 1
    return g


def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_divmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        k = len(a) - len(b)
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] = (a[k + j] - c * y) % p
        _poly_trim(a)
    return _poly_trim(q), a


def _poly_gcd(a, b, p):
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        _, r = _poly_divmod(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _poly_powmod(base, e, mod, p):
    out = [1]
    base = _poly_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            out = _poly_divmod(_poly_mul(out, base, p), mod, p)[1]
        base = _poly_divmod(_poly_mul(base, base, p), mod, p)[1]
        e >>= 1
    return out


def _roots_mod_p(f: list[int], p: int) -> list[int]:
    """Distinct roots in F_p of f (coefficients low to high)."""
    f = _poly_trim([x % p for x in f])
    if len(f) <= 1:
        return []
    if p < 5000:
        return [x for x in range(p) if _poly_eval(f, x, p) == 0]
    xp = _poly_powmod([0, 1], p, f, p)
    g = _poly_gcd(f, _poly_trim([(c - d) % p for c, d in _zip_pad(xp, [0, 1])]), p)
    roots: list[int] = []
    stack = [g]
    a = 0
    while stack:
        h = stack.pop()
        if len(h) <= 1:
            continue
        if len(h) == 2:
            roots.append((-h[0]) * pow(h[1], -1, p) % p)
            continue
        while True:
            a += 1
            t = _poly_powmod([a % p, 1], (p - 1) // 2, h, p)
            t = _poly_trim([(c - d) % p for c, d in _zip_pad(t, [1])])
            d = _poly_gcd(h, t, p)
            if 1 < len(d) < len(h):
                stack.append(d)
                stack.append(_poly_divmod(h, d, p)[0])
                break
    return sorted(roots)


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


def _poly_eval(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def _charpoly_mod(A: list[list[int]], p: int) -> list[int]:
    """Characteristic polynomial via Hessenberg reduction (low to high coefficients)."""
    n = len(A)
    H = [[x % p for x in r] for r in A]
    for m in range(1, n - 1):
        i = next((i for i in range(m, n) if H[i][m - 1]), None)
        if i is None:
            continue
        if i != m:
            H[i], H[m] = H[m], H[i]
            for r in H:
                r[i], r[m] = r[m], r[i]
        inv = pow(H[m][m - 1], -1, p)
        for i in range(m + 1, n):
            u = H[i][m - 1] * inv % p
            if u:
                Hi, Hm = H[i], H[m]
                for j in range(n):
                    Hi[j] = (Hi[j] - u * Hm[j]) % p
                for r in H:
                    r[m] = (r[m] + u * r[i]) % p
    polys = [[1]]
    for m in range(1, n + 1):
        pm = _poly_mul([(-H[m - 1][m - 1]) % p, 1], polys[m - 1], p)
        t = 1
        for i in range(1, m):
            t = t * H[m - i][m - i - 1] % p
            c = t * H[m - i - 1][m - 1] % p
            if c:
                q = polys[m - i - 1]
                pm = _poly_trim([(a - c * b) % p for a, b in _zip_pad(pm, q)])
        polys.append(pm)
    return polys[n]


def _rref(vectors: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    rows = [[x % p for x in v] for v in vectors]
    piv = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        k = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    return rows[:r], piv


def _nullspace(A: list[list[int]], p: int) -> list[list[int]]:
    """Basis of {x : A x = 0} over F_p."""
    n = len(A[0])
    R, piv = _rref(A, p)
    free = [j for j in range(n) if j not in piv]
    out = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for r, c in zip(R, piv):
            v[c] = (-r[f]) % p
        out.append(v)
    return out


def class_constants(cls: ClassData, j: int) -> list[list[int]]:
    """M[k][l] = #{x in C_j : x^-1 z in C_k} for a fixed z in C_l."""
    r = cls.count
    M = [[0] * r for _ in range(r)]
    reps = [z.images for z in cls.reps]
    class_of = cls.class_of
    for x in cls.members[j]:
        xi = _tinv(x)
        for l, z in enumerate(reps):
            M[class_of[_tmul(xi, z)]][l] += 1
    return M


def _split_spaces(mats: Iterable[list[list[int]]], r: int, p: int) -> list[list[int]]:
    spaces = [[[int(i == j) for j in range(r)] for i in range(r)]]
    for M in mats:
        if all(len(V) == 1 for V in spaces):
            break
        new = []
        for V in spaces:
            if len(V) == 1:
                new.append(V)
                continue
            R, piv = _rref(V, p)
            # action on V: M v = sum_t A[t][i] v_t, read off at pivot columns
            images = [[sum(M[k][l] * v[l] for l in range(r)) % p for k in range(r)] for v in R]
            A = [[img[c] for img in images] for c in piv]  # column i = coords of M R_i
            d = len(R)
            chi = _charpoly_mod(A, p)
            lams = _roots_mod_p(chi, p)
            total = 0
            for lam in lams:
                B = [[(A[a][b] - (lam if a == b else 0)) % p for b in range(d)] for a in range(d)]
                ker = _nullspace(B, p)
                total += len(ker)
                new.append([[sum(c[i] * R[i][k] for i in range(d)) % p for k in range(r)] for c in ker])
            if total != d:
                raise DixonError("class matrix does not split over the chosen prime")
        spaces = new
    if any(len(V) != 1 for V in spaces):
        raise DixonError("common eigenspaces failed to become one-dimensional")
    return [V[0] for V in spaces]


def dixon_table(G: PermGroup, classes: ClassData | None = None, name: str = "") -> CharacterTable:
    """Character table by the Dixon-Schneider method."""
    cls = classes if classes is not None else conjugacy_classes(G)
    r = cls.count
    N = sum(cls.sizes)
    e = cls.exponent
    p = dixon_prime(N, e)
    mats = (class_constants(cls, j) for j in range(1, r))
    vecs = _split_spaces(mats, r, p) if r > 1 else [[1]]
    z = pow(_primitive_root(p), (p - 1) // e, p)
    inv_class = [cls.power(c, -1) for c in range(r)]
    rows = []
    for w in vecs:
        w0inv = pow(w[0], -1, p)
        w = [x * w0inv % p for x in w]
        S = sum(w[k] * w[inv_class[k]] * pow(cls.sizes[k], -1, p) for k in range(r)) % p
        d2 = N * pow(S, -1, p) % p
        deg = next((d for d in range(1, math.isqrt(N) + 1) if d * d % p == d2), None)
        if deg is None:
            raise DixonError("degree recovery failed")
        chi = [w[k] * deg * pow(cls.sizes[k], -1, p) % p for k in range(r)]
        row = []
        for k in range(r):
            o = cls.element_orders[k]
            zo = pow(z, e // o, p)
            inv_o = pow(o, -1, p)
            vals = [chi[cls.power(k, s)] for s in range(o)]
            value = ZERO
            terms: dict[int, int] = {}
            for l in range(o):
                m = sum(vals[s] * pow(zo, (-l * s) % o, p) for s in range(o)) * inv_o % p
                if m > p // 2:
                    raise DixonError("negative multiplicity while lifting a character value")
                if m:
                    terms[l] = m
            if sum(terms.values()) != deg:
                raise DixonError("multiplicities do not add up to the degree")
            value = Cyclotomic(o, terms) if o > 1 else Cyclotomic.rational(terms.get(0, 0))
            row.append(value)
        rows.append(row)
    rows.sort(key=_row_key)
    return CharacterTable(N, cls, rows, name=name or G.name)



def build_table(
    sizes: Sequence[int],
    orders: Sequence[int],
    power_classes: Sequence[Sequence[int]],
    values: Sequence[Sequence[Cyclotomic]],
    labels: Sequence | None = None,
    name: str = "",
) -> CharacterTable:
    """Character table from closed-form data, put into canonical class and row order.

    ``power_classes[c][s]`` is the class of the s-th power of a representative of
    class c (0 <= s < orders[c]); ``labels`` break ties among classes of equal
    order and size.
    """
    r = len(sizes)
    labels = list(labels) if labels is not None else list(range(r))
    perm = sorted(range(r), key=lambda c: (orders[c], sizes[c], labels[c]))
    pos = {c: i for i, c in enumerate(perm)}
    sz = [sizes[c] for c in perm]
    od = [orders[c] for c in perm]
    pc = [[pos[power_classes[c][s]] for s in range(orders[c])] for c in perm]
    exp = lcm(*od)
    pm = {}
    for p in range(2, exp + 1):
        if exp % p == 0 and all(p % q for q in range(2, p)):
            pm[p] = [pc[c][p % od[c]] for c in range(r)]
    cls = ClassData(sizes=sz, element_orders=od, power_maps=pm, exponent=exp, power_classes=pc)
    rows = [[row[c] for c in perm] for row in values]
    rows.sort(key=_row_key)
    return CharacterTable(sum(sz), cls, rows, name=name)
