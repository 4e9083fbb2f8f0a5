"""Pure-Python integer kernels (reference implementation and fallback)."""
from __future__ import annotations


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def hnf_mod(rows: list[list[int]], ncols: int, D: int) -> list[list[int]]:
    """Row-style HNF of the lattice spanned by ``rows``, which must contain D*Z^ncols.

    Returns ncols rows, upper triangular with positive pivots and the entries
    above each pivot reduced into [0, pivot).
    """
    if D <= 0:
        raise ValueError("modulus must be positive")
    R = D
    work = []
    for r in rows:
        v = [x % R for x in r]
        if any(v):
            work.append(v)
    H: list[list[int]] = []
    for col in range(ncols):
        piv = None
        rest = []
        for v in work:
            b = v[col]
            if b == 0:
                rest.append(v)
                continue
            if piv is None:
                piv = v
                continue
            a = piv[col]
            if b % a == 0:
                q = b // a
                for j in range(col, ncols):
                    v[j] = (v[j] - q * piv[j]) % R
                rest.append(v)
            elif a % b == 0:
                q = a // b
                for j in range(col, ncols):
                    piv[j] = (piv[j] - q * v[j]) % R
                piv, v = v, piv
                rest.append(v)
            else:
                g, x, y = xgcd(a, b)
                ag, bg = a // g, b // g
                for j in range(col, ncols):
                    pa, vb = piv[j], v[j]
                    piv[j] = (x * pa + y * vb) % R
                    v[j] = (ag * vb - bg * pa) % R
                rest.append(v)
        h = [0] * ncols
        if piv is None:
            g = R
        else:
            g, u, _ = xgcd(piv[col], R)
            for j in range(col + 1, ncols):
                h[j] = (u * piv[j]) % R
        h[col] = g
        H.append(h)
        R //= g
        work = []
        if R > 1:
            for v in rest:
                nz = False
                for j in range(col + 1, ncols):
                    x = v[j] % R
                    v[j] = x
                    if x:
                        nz = True
                if nz:
                    work.append(v)
    _reduce_above(H, ncols)
    return H


def _reduce_above(H: list[list[int]], ncols: int) -> None:
    for i in range(len(H)):
        p = H[i][i]
        hi = H[i]
        for k in range(i):
            hk = H[k]
            q = hk[i] // p
            if q:
                for j in range(i, ncols):
                    hk[j] -= q * hi[j]


def _val(x: int, p: int, k: int) -> int:
    if x == 0:
        return k
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def local_valuations(rows: list[list[int]], ncols: int, p: int, k: int) -> list[int]:
    """p-adic valuations of the Smith invariants of Z^ncols / (span(rows) + p^k Z^ncols).

    A value of k means the invariant is (at least) p^k, i.e. saturated.
    """
    M = p**k
    A = [[x % M for x in r] for r in rows]
    A = [r for r in A if any(r)]
    cols = list(range(ncols))
    out: list[int] = []
    t = 0
    while t < ncols:
        best = None
        bv = k
        for i in range(t, len(A)):
            row = A[i]
            for jj in range(t, ncols):
                x = row[cols[jj]]
                if x:
                    v = _val(x, p, k)
                    if v < bv:
                        bv, best = v, (i, jj)
                        if v == 0:
                            break
            if bv == 0:
                break
        if best is None:
            out.extend([k] * (ncols - t))
            break
        i, jj = best
        A[t], A[i] = A[i], A[t]
        cols[t], cols[jj] = cols[jj], cols[t]
        pv = p**bv
        piv = A[t]
        c0 = cols[t]
        inv = pow(piv[c0] // pv, -1, M)
        for i in range(t + 1, len(A)):
            row = A[i]
            x = row[c0]
            if x:
                f = (x // pv) * inv % M
                for jj in range(t, ncols):
                    c = cols[jj]
                    row[c] = (row[c] - f * piv[c]) % M
        out.append(bv)
        t += 1
    return out


def det_mod_p(rows: list[list[int]], p: int) -> int:
    """Determinant of a square integer matrix modulo a prime p."""
    n = len(rows)
    A = [[x % p for x in r] for r in rows]
    det = 1
    for c in range(n):
        piv = None
        for i in range(c, n):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        pc = A[c]
        det = det * pc[c] % p
        inv = pow(pc[c], -1, p)
        for i in range(c + 1, n):
            row = A[i]
            f = row[c] * inv % p
            if f:
                for j in range(c, n):
                    row[j] = (row[j] - f * pc[j]) % p
    return det % p


def rank_profile_mod_p(rows: list[list[int]], ncols: int, p: int) -> list[int]:
    """Indices of a maximal set of rows that are independent modulo p (greedy)."""
    basis: dict[int, list[int]] = {}
    chosen = []
    for idx, r in enumerate(rows):
        v = [x % p for x in r]
        for c in range(ncols):
            x = v[c]
            if not x:
                continue
            b = basis.get(c)
            if b is None:
                inv = pow(x, -1, p)
                basis[c] = [y * inv % p for y in v]
                chosen.append(idx)
                break
            for j in range(c, ncols):
                v[j] = (v[j] - x * b[j]) % p
        if len(chosen) == ncols:
            break
    return chosen


def matmul_mod(A: list[list[int]], B: list[list[int]], m: int) -> list[list[int]]:
    """A @ B reduced modulo m."""
    cols = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) % m for col in cols] for row in A]
