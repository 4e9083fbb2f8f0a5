"""Exact integer linear algebra: Hermite and Smith normal forms and lattices in Z^r.

Matrices act on row vectors; a lattice is the row span of its basis.  The
canonical HNF is upper echelon with positive pivots and the entries above each
pivot reduced into ``[0, pivot)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import kernels

__all__ = [
    "IntMat",
    "Lattice",
    "SnfResult",
    "ContainmentError",
    "RankMismatchError",
    "hnf",
    "hnf_rows",
    "snf",
    "det",
    "quotient_invariants",
    "index",
    "lattice_join",
    "contains",
    "elementary_divisors",
    "invariants_mod",
]


class ContainmentError(ValueError):
    """A vector of the supposed sublattice is missing from the superlattice."""

    def __init__(self, message: str, witness: Sequence[int]):
        super().__init__(message)
        self.witness = tuple(witness)


class RankMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class IntMat:
    """Dense integer matrix, row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0 or len(self.entries) != self.rows * self.cols:
            raise ValueError("dimensions do not match entry count")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> "IntMat":
        rl = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            if not rl:
                raise ValueError("column count needed for an empty matrix")
            cols = len(rl[0])
        if any(len(r) != cols for r in rl):
            raise ValueError("ragged rows")
        return cls(len(rl), cols, tuple(x for r in rl for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMat":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, d: Sequence[int]) -> "IntMat":
        n = len(d)
        return cls(n, n, tuple(d[i] if i == j else 0 for i in range(n) for j in range(n)))

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def transpose(self) -> "IntMat":
        return IntMat(self.cols, self.rows,
                      tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "IntMat") -> "IntMat":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        oc = [other.entries[j::other.cols] for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.extend(sum(a * b for a, b in zip(r, c)) for c in oc)
        return IntMat(self.rows, other.cols, tuple(out))

    def is_diagonal(self) -> bool:
        return all(x == 0 for k, x in enumerate(self.entries) if k // self.cols != k % self.cols)

    def __repr__(self):
        return f"IntMat({self.tolist()!r})"


def _as_rows(A) -> tuple[list[list[int]], int]:
    if isinstance(A, IntMat):
        return A.tolist(), A.cols
    rows = [[int(x) for x in r] for r in A]
    return rows, (len(rows[0]) if rows else 0)


# --- primes and determinants -------------------------------------------------

def _is_prime_small(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 7, 61):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _big_primes():
    p = (1 << 31) - 1
    while True:
        if _is_prime_small(p):
            yield p
        p -= 2


_WORK_PRIME = (1 << 31) - 1


def det(A) -> int:
    """Determinant of a square integer matrix (multi-modular with a Hadamard bound)."""
    rows, n = _as_rows(A)
    if len(rows) != n:
        raise ValueError("matrix is not square")
    if n == 0:
        return 1
    bound = 1
    for r in rows:
        bound *= math.isqrt(sum(x * x for x in r)) + 1
    if bound == 0:
        return 0
    res, mod = 0, 1
    for p in _big_primes():
        d = kernels.det_mod_p(rows, p)
        # CRT step
        t = (d - res) * pow(mod, -1, p) % p
        res += mod * t
        mod *= p
        if mod > 2 * bound:
            break
    if res > mod // 2:
        res -= mod
    return res


# --- Hermite normal form -----------------------------------------------------

def _canonical_reduce(H: list[list[int]], pivots: list[int], ncols: int) -> None:
    for i, c in enumerate(pivots):
        p = H[i][c]
        hi = H[i]
        for k in range(i):
            hk = H[k]
            q = hk[c] // p
            if q:
                for j in range(c, ncols):
                    hk[j] -= q * hi[j]


def _hnf_exact(rows: list[list[int]], ncols: int) -> list[list[int]]:
    basis: dict[int, list[int]] = {}
    for r in rows:
        v = list(r)
        c = 0
        while True:
            while c < ncols and v[c] == 0:
                c += 1
            if c == ncols:
                break
            b = basis.get(c)
            if b is None:
                if v[c] < 0:
                    v = [-x for x in v]
                basis[c] = v
                break
            a, x = b[c], v[c]
            if x % a == 0:
                q = x // a
                v = [vi - q * bi for vi, bi in zip(v, b)]
            else:
                g, s, t = kernels.xgcd(a, x)
                ag, xg = a // g, x // g
                nb = [s * bi + t * vi for bi, vi in zip(b, v)]
                v = [ag * vi - xg * bi for bi, vi in zip(b, v)]
                basis[c] = nb
                # keep the replaced pivot row small against later pivots
                for c2 in sorted(k for k in basis if k > c):
                    p2 = basis[c2]
                    q = nb[c2] // p2[c2]
                    if q:
                        for j in range(c2, ncols):
                            nb[j] -= q * p2[j]
    pivots = sorted(basis)
    H = [basis[c] for c in pivots]
    _canonical_reduce(H, pivots, ncols)
    return H


def hnf_rows(rows: Sequence[Sequence[int]], ncols: int, modulus: int | None = None) -> list[list[int]]:
    """Canonical HNF rows (zero rows dropped).

    ``modulus``, if given, must be a positive multiple of the determinant of the
    (then necessarily full-rank) lattice; the computation is done modulo it.
    """
    rows = [list(r) for r in rows]
    if ncols == 0:
        return []
    if modulus is not None:
        return kernels.hnf_mod(rows, ncols, abs(modulus))
    nz = [r for r in rows if any(r)]
    if not nz:
        return []
    if len(nz) < ncols or ncols <= 24:
        return _hnf_exact(nz, ncols)
    chosen = kernels.rank_profile_mod_p(nz, ncols, _WORK_PRIME)
    if len(chosen) < ncols:
        return _hnf_exact(nz, ncols)
    D = abs(det([nz[i] for i in chosen]))
    return kernels.hnf_mod(nz, ncols, D)


def hnf(A) -> IntMat:
    """Canonical row-style Hermite normal form with the same row span."""
    rows, n = _as_rows(A)
    return IntMat.from_rows(hnf_rows(rows, n), n)


def _pivots(H: Sequence[Sequence[int]]) -> list[int]:
    out = []
    for r in H:
        for j, x in enumerate(r):
            if x:
                out.append(j)
                break
    return out


# --- Smith normal form ---------------------------------------------------------

@dataclass(frozen=True)
class SnfResult:
    D: IntMat
    U: IntMat
    V: IntMat
    divisors: tuple[int, ...]


def snf(A) -> SnfResult:
    """Smith normal form with unimodular transforms, U*A*V = D."""
    rows, n = _as_rows(A)
    m = len(rows)
    M = [r[:] for r in rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_combine(i, k, x, y, u, w):
        # row_i <- x*row_i + y*row_k ; row_k <- u*row_i + w*row_k
        for T in (M, U):
            ri, rk = T[i], T[k]
            T[i] = [x * a + y * b for a, b in zip(ri, rk)]
            T[k] = [u * a + w * b for a, b in zip(ri, rk)]

    def col_combine(j, k, x, y, u, w):
        for T in (M, V):
            for r in T:
                a, b = r[j], r[k]
                r[j] = x * a + y * b
                r[k] = u * a + w * b

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if M[i][j] and (best is None or abs(M[i][j]) < abs(M[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            M[t], M[i] = M[i], M[t]
            U[t], U[i] = U[i], U[t]
        if j != t:
            for T in (M, V):
                for r in T:
                    r[t], r[j] = r[j], r[t]
        while True:
            for i in range(t + 1, m):
                b = M[i][t]
                if b == 0:
                    continue
                a = M[t][t]
                if b % a == 0:
                    q = b // a
                    row_combine(t, i, 1, 0, -q, 1)
                else:
                    g, x, y = kernels.xgcd(a, b)
                    row_combine(t, i, x, y, -b // g, a // g)
            for j in range(t + 1, n):
                b = M[t][j]
                if b == 0:
                    continue
                a = M[t][t]
                if b % a == 0:
                    q = b // a
                    col_combine(t, j, 1, 0, -q, 1)
                else:
                    g, x, y = kernels.xgcd(a, b)
                    col_combine(t, j, x, y, -b // g, a // g)
            if any(M[i][t] for i in range(t + 1, m)):
                continue
            a = M[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if M[i][j] % a:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_combine(t, bad, 1, 1, 0, 1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    divs = tuple(M[i][i] for i in range(min(m, n)))
    return SnfResult(IntMat.from_rows(M, n), IntMat.from_rows(U, m), IntMat.from_rows(V, n), divs)


def _chain(ds: list[int]) -> list[int]:
    """Normalize a list of cyclic orders into a divisibility chain (0 = infinite)."""
    ds = list(ds)
    k = len(ds)
    for i in range(k):
        for j in range(i + 1, k):
            a, b = ds[i], ds[j]
            g = math.gcd(a, b)
            lcm = 0 if (a == 0 or b == 0) else a // g * b
            ds[i], ds[j] = g, lcm
    return ds


def invariants_mod(rows: Sequence[Sequence[int]], ncols: int, D: int) -> list[int]:
    """Invariants of Z^ncols / (span(rows) + D Z^ncols), as a divisibility chain of length ncols."""
    M = [[x % D for x in r] for r in rows]
    M = [r for r in M if any(r)]
    m = len(M)
    diag = []
    for t in range(ncols):
        found = None
        for i in range(t, m):
            for j in range(t, ncols):
                if M[i][j]:
                    found = (i, j)
                    break
            if found:
                break
        if found is None:
            diag.extend([D] * (ncols - t))
            break
        i, j = found
        M[t], M[i] = M[i], M[t]
        for r in M:
            r[t], r[j] = r[j], r[t]
        while True:
            for i in range(t + 1, m):
                b = M[i][t]
                if not b:
                    continue
                a = M[t][t]
                if b % a == 0:
                    q = b // a
                    M[i] = [(x - q * y) % D for x, y in zip(M[i], M[t])]
                else:
                    g, x, y = kernels.xgcd(a, b)
                    ri, rt = M[i], M[t]
                    M[t] = [(x * u + y * v) % D for u, v in zip(rt, ri)]
                    M[i] = [((a // g) * v - (b // g) * u) % D for u, v in zip(rt, ri)]
            for j in range(t + 1, ncols):
                b = M[t][j]
                if not b:
                    continue
                a = M[t][t]
                if b % a == 0:
                    q = b // a
                    for r in M:
                        r[j] = (r[j] - q * r[t]) % D
                else:
                    g, x, y = kernels.xgcd(a, b)
                    for r in M:
                        u, v = r[t], r[j]
                        r[t] = (x * u + y * v) % D
                        r[j] = ((a // g) * v - (b // g) * u) % D
            if not any(M[i][t] for i in range(t + 1, m)):
                break
        diag.append(math.gcd(M[t][t], D))
    while len(diag) < ncols:
        diag.append(D)
    return sorted(_chain(diag), key=lambda d: (d == 0, d))


# --- lattices ----------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """Finite-rank subgroup of Z^r, stored by its canonical HNF basis."""

    ambient_rank: int
    basis: IntMat

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], ambient_rank: int | None = None,
                        modulus: int | None = None) -> "Lattice":
        rows = [list(g) for g in gens]
        r = ambient_rank if ambient_rank is not None else (len(rows[0]) if rows else 0)
        H = hnf_rows(rows, r, modulus)
        return cls(r, IntMat.from_rows(H, r))

    @classmethod
    def from_hnf(cls, H: Sequence[Sequence[int]], ambient_rank: int) -> "Lattice":
        """Wrap rows already known to be in canonical HNF (not re-checked)."""
        return cls(ambient_rank, IntMat.from_rows(H, ambient_rank))

    @classmethod
    def standard(cls, r: int) -> "Lattice":
        return cls(r, IntMat.identity(r))

    @property
    def rank(self) -> int:
        return self.basis.rows

    @property
    def rows(self) -> list[list[int]]:
        return self.basis.tolist()

    @property
    def pivots(self) -> list[int]:
        return _pivots(self.rows)

    def is_full_rank(self) -> bool:
        return self.rank == self.ambient_rank

    def is_standard(self) -> bool:
        return self.is_full_rank() and self.basis == IntMat.identity(self.ambient_rank)

    def determinant(self) -> int:
        """Index in Z^r (full rank only)."""
        if not self.is_full_rank():
            raise RankMismatchError("lattice is not of full rank")
        out = 1
        for i in range(self.rank):
            out *= self.basis[i, i]
        return out

    def coordinates(self, v: Sequence[int]) -> list[int] | None:
        """Integer coordinates of v in the basis, or None if v is not in the lattice."""
        if len(v) != self.ambient_rank:
            raise ValueError("vector length differs from ambient rank")
        w = list(v)
        coords = []
        for r, c in zip(self.rows, self.pivots):
            q, rem = divmod(w[c], r[c])
            if rem:
                return None
            coords.append(q)
            if q:
                for j in range(c, self.ambient_rank):
                    w[j] -= q * r[j]
        if any(w):
            return None
        return coords

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def issubset(self, other: "Lattice") -> bool:
        return all(r in other for r in self.rows)

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.ambient_rank == other.ambient_rank and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_rank, self.basis))


def contains(L: Lattice, v: Sequence[int]) -> bool:
    return v in L


def lattice_join(*lattices: Lattice) -> Lattice:
    if not lattices:
        raise ValueError("nothing to join")
    r = lattices[0].ambient_rank
    if any(L.ambient_rank != r for L in lattices):
        raise RankMismatchError("ambient ranks differ")
    D = None
    if all(L.is_full_rank() for L in lattices):
        D = 0
        for L in lattices:
            D = math.gcd(D, L.determinant())
    rows = [row for L in lattices for row in L.rows]
    return Lattice.from_generators(rows, r, D)


def _trial_factor(n: int, bound: int = 1 << 20) -> tuple[dict[int, int], int]:
    """Partial factorization: (small prime powers, unfactored cofactor)."""
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n and d < bound:
        for q in (d, d + 2):
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        d += 6
    if n > 1 and d * d > n:
        out[n] = out.get(n, 0) + 1
        n = 1
    return out, n


def elementary_divisors(rows: Sequence[Sequence[int]], ncols: int) -> list[int]:
    """Invariants d_1 | ... | d_n of Z^n / span(rows) for a full-rank row span.

    Works one prime at a time through the local kernel; the precision is doubled
    until no invariant is saturated.  If the index does not factor by trial
    division, a single diagonalization modulo the index is used instead.
    """
    H = hnf_rows(rows, ncols)
    if len(H) < ncols:
        raise RankMismatchError("row span is not of full rank")
    return _local_divisors(H, ncols)


def _local_divisors(C: list[list[int]], n: int) -> list[int]:
    # C must be square upper triangular with nonzero diagonal
    idx = 1
    fac: dict[int, int] = {}
    rest = 1
    for i in range(n):
        idx *= C[i][i]
        f, c = _trial_factor(abs(C[i][i]))
        for p, e in f.items():
            fac[p] = fac.get(p, 0) + e
        rest *= c
    idx = abs(idx)
    if idx == 1:
        return [1] * n
    if rest != 1:
        return invariants_mod(C, n, idx)
    out = [1] * n
    for p, a in sorted(fac.items()):
        k = 1
        while True:
            vals = kernels.local_valuations(C, n, p, k)
            if k > a or max(vals) < k:
                break
            k = min(2 * k, a + 1)
        for i, v in enumerate(sorted(vals)):
            out[i] *= p**v
    return out


def _coordinate_rows(sub: Lattice, sup: Lattice) -> list[list[int]]:
    if sup.is_standard():
        return sub.rows
    out = []
    for r in sub.rows:
        c = sup.coordinates(r)
        if c is None:
            raise ContainmentError("sublattice vector outside the superlattice", r)
        out.append(c)
    return out


def quotient_invariants(sub: Lattice, sup: Lattice) -> list[int]:
    """Nontrivial invariants of sup/sub as a divisibility chain; 0 marks a free factor."""
    if sub.ambient_rank != sup.ambient_rank:
        raise RankMismatchError("ambient ranks differ")
    C = _coordinate_rows(sub, sup)
    n = sup.rank
    if not C:
        return [0] * n
    if sub.rank == n:
        if all(C[i][i] and not any(C[i][:i]) for i in range(n)):
            divs = _local_divisors(C, n)
        else:
            divs = elementary_divisors(C, n)
    else:
        divs = sorted((abs(d) for d in snf(C).divisors), key=lambda d: (d == 0, d))
        divs += [0] * (n - sub.rank)
    return [d for d in divs if d != 1]


def index(sub: Lattice, sup: Lattice) -> int:
    """[sup : sub] for lattices of equal rank with sub inside sup."""
    if sub.ambient_rank != sup.ambient_rank or sub.rank != sup.rank:
        raise RankMismatchError("index needs lattices of equal rank")
    C = _coordinate_rows(sub, sup)
    if sub.pivots == sup.pivots:
        out = 1
        for i, c in enumerate(sub.pivots):
            out *= sub.rows[i][c]
        d = 1
        for i, c in enumerate(sup.pivots):
            d *= sup.rows[i][c]
        return out // d
    return abs(det(C))
