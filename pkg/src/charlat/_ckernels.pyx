# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer kernels.

Same API as ``_pykernels``.  Moduli below 2**30 run on int64 buffers; larger
moduli use the generic object-integer loops.
"""
from libc.stdlib cimport malloc, calloc, free

from charlat import _pykernels as _py

ctypedef long long i64

cdef i64 SMALL = 1 << 30

xgcd = _py.xgcd


cdef inline i64 _md(i64 a, i64 m) nogil:
    cdef i64 r = a % m
    if r < 0:
        r += m
    return r


cdef i64 _cxgcd(i64 a, i64 b, i64* x, i64* y) nogil:
    cdef i64 x0 = 1, x1 = 0, y0 = 0, y1 = 1, q, t
    while b != 0:
        q = a // b
        t = a - q * b
        a = b
        b = t
        t = x0 - q * x1
        x0 = x1
        x1 = t
        t = y0 - q * y1
        y0 = y1
        y1 = t
    x[0] = x0
    y[0] = y0
    return a


cdef i64* _load(list rows, Py_ssize_t n, i64 m) except NULL:
    cdef Py_ssize_t nr = len(rows), i, j
    cdef i64* A = <i64*> malloc((nr * n + 1) * sizeof(i64))
    if A == NULL:
        raise MemoryError()
    for i in range(nr):
        r = rows[i]
        for j in range(n):
            A[i * n + j] = <i64> (r[j] % m)
    return A


def hnf_mod(rows, Py_ssize_t ncols, D):
    if D <= 0:
        raise ValueError("modulus must be positive")
    if D < SMALL:
        return _hnf_mod_small(list(rows), ncols, D)
    return _hnf_mod_obj(list(rows), ncols, D)


cdef list _hnf_mod_small(list rows, Py_ssize_t n, i64 D):
    cdef Py_ssize_t m = len(rows), i, j, t, col, nw = 0, nr, pi, k
    cdef i64 R = D, a, b, q, g, x, y, ag, bg, pa, vb, u, p
    cdef i64* A = _load(rows, n, D)
    cdef i64* H = <i64*> calloc(n * n + 1, sizeof(i64))
    cdef Py_ssize_t* work = <Py_ssize_t*> malloc((m + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* rest = <Py_ssize_t*> malloc((m + 1) * sizeof(Py_ssize_t))
    cdef bint nz
    if H == NULL or work == NULL or rest == NULL:
        free(A); free(H); free(work); free(rest)
        raise MemoryError()
    try:
        with nogil:
            for i in range(m):
                nz = False
                for j in range(n):
                    if A[i * n + j] != 0:
                        nz = True
                        break
                if nz:
                    work[nw] = i
                    nw += 1
            for col in range(n):
                pi = -1
                nr = 0
                for t in range(nw):
                    i = work[t]
                    b = A[i * n + col]
                    if b == 0:
                        rest[nr] = i
                        nr += 1
                        continue
                    if pi < 0:
                        pi = i
                        continue
                    a = A[pi * n + col]
                    if b % a == 0:
                        q = b // a
                        for j in range(col, n):
                            A[i * n + j] = _md(A[i * n + j] - q * A[pi * n + j], R)
                    elif a % b == 0:
                        q = a // b
                        for j in range(col, n):
                            A[pi * n + j] = _md(A[pi * n + j] - q * A[i * n + j], R)
                        k = pi
                        pi = i
                        i = k
                    else:
                        g = _cxgcd(a, b, &x, &y)
                        ag = a // g
                        bg = b // g
                        x = _md(x, R)
                        y = _md(y, R)
                        for j in range(col, n):
                            pa = A[pi * n + j]
                            vb = A[i * n + j]
                            A[pi * n + j] = (x * pa % R + y * vb % R) % R
                            A[i * n + j] = _md(ag * vb % R - bg * pa % R, R)
                    rest[nr] = i
                    nr += 1
                if pi < 0:
                    g = R
                else:
                    g = _cxgcd(A[pi * n + col], R, &u, &y)
                    u = _md(u, R)
                    for j in range(col + 1, n):
                        H[col * n + j] = u * A[pi * n + j] % R
                H[col * n + col] = g
                R = R // g
                nw = 0
                if R > 1:
                    for t in range(nr):
                        i = rest[t]
                        nz = False
                        for j in range(col + 1, n):
                            a = A[i * n + j] % R
                            A[i * n + j] = a
                            if a != 0:
                                nz = True
                        if nz:
                            work[nw] = i
                            nw += 1
            # entries above pivots; reducing modulo D keeps the lattice since D*Z^n lies inside
            for i in range(n):
                p = H[i * n + i]
                for k in range(i):
                    q = H[k * n + i] // p
                    if q:
                        for j in range(i, n):
                            H[k * n + j] = _md(H[k * n + j] - q * H[i * n + j], D)
        out = [[H[i * n + j] for j in range(n)] for i in range(n)]
    finally:
        free(A); free(H); free(work); free(rest)
    return out


cdef list _hnf_mod_obj(list rows, Py_ssize_t ncols, object D):
    cdef Py_ssize_t col, j
    cdef list work = [], rest, H = [], v, piv, h
    cdef bint nz
    R = D
    for r in rows:
        v = [x % R for x in r]
        if any(v):
            work.append(v)
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
                g, x, y = _py.xgcd(a, b)
                ag = a // g
                bg = b // g
                for j in range(col, ncols):
                    pa = piv[j]
                    vb = v[j]
                    piv[j] = (x * pa + y * vb) % R
                    v[j] = (ag * vb - bg * pa) % R
                rest.append(v)
        h = [0] * ncols
        if piv is None:
            g = R
        else:
            g, u, _ = _py.xgcd(piv[col], R)
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
    _reduce_above_obj(H, ncols, D)
    return H


cdef _reduce_above_obj(list H, Py_ssize_t n, object D):
    cdef Py_ssize_t i, k, j
    cdef list hi, hk
    for i in range(len(H)):
        hi = H[i]
        p = hi[i]
        for k in range(i):
            hk = H[k]
            q = hk[i] // p
            if q:
                for j in range(i, n):
                    hk[j] = (hk[j] - q * hi[j]) % D


def local_valuations(rows, Py_ssize_t ncols, p, Py_ssize_t k):
    M = p ** k
    if M < SMALL:
        return _local_small(list(rows), ncols, p, k)
    return _py.local_valuations(rows, ncols, p, k)


cdef list _local_small(list rows, Py_ssize_t n, i64 p, Py_ssize_t k):
    cdef i64 M = 1, pv, x, f, inv, y
    cdef Py_ssize_t e, m = len(rows), i, j, t, bi = -1, bj = -1, bv, v, c0, tmp
    for e in range(k):
        M *= p
    cdef i64* A = _load(rows, n, M)
    cdef Py_ssize_t* cols = <Py_ssize_t*> malloc((n + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* rix = <Py_ssize_t*> malloc((m + 1) * sizeof(Py_ssize_t))
    cdef list out = []
    if cols == NULL or rix == NULL:
        free(A); free(cols); free(rix)
        raise MemoryError()
    try:
        for j in range(n):
            cols[j] = j
        for i in range(m):
            rix[i] = i
        t = 0
        while t < n:
            bv = k
            bi = -1
            with nogil:
                for i in range(t, m):
                    for j in range(t, n):
                        x = A[rix[i] * n + cols[j]]
                        if x != 0:
                            v = 0
                            while x % p == 0:
                                x = x // p
                                v += 1
                            if v < bv:
                                bv = v
                                bi = i
                                bj = j
                                if v == 0:
                                    break
                    if bv == 0:
                        break
            if bi < 0:
                out.extend([k] * (n - t))
                break
            tmp = rix[t]; rix[t] = rix[bi]; rix[bi] = tmp
            tmp = cols[t]; cols[t] = cols[bj]; cols[bj] = tmp
            pv = 1
            for e in range(bv):
                pv *= p
            c0 = cols[t]
            inv = pow(int(A[rix[t] * n + c0] // pv), -1, int(M))
            with nogil:
                for i in range(t + 1, m):
                    x = A[rix[i] * n + c0]
                    if x != 0:
                        f = (x // pv) % M * inv % M
                        for j in range(t, n):
                            e = cols[j]
                            y = A[rix[t] * n + e]
                            if y != 0:
                                A[rix[i] * n + e] = _md(A[rix[i] * n + e] - f * y % M, M)
            out.append(bv)
            t += 1
    finally:
        free(A); free(cols); free(rix)
    return out


def det_mod_p(rows, p):
    if p >= (1 << 31):
        return _py.det_mod_p(rows, p)
    return _det_small(list(rows), p)


cdef i64 _inv_mod(i64 a, i64 p) nogil:
    cdef i64 x, y
    _cxgcd(a, p, &x, &y)
    return _md(x, p)


cdef i64 _det_small(list rows, i64 p) except -1:
    cdef Py_ssize_t n = len(rows), c, i, j, piv
    cdef i64 det = 1, inv, f, tmp
    if n == 0:
        return 1 % p
    cdef i64* A = _load(rows, n, p)
    try:
        with nogil:
            for c in range(n):
                piv = -1
                for i in range(c, n):
                    if A[i * n + c] != 0:
                        piv = i
                        break
                if piv < 0:
                    det = 0
                    break
                if piv != c:
                    for j in range(n):
                        tmp = A[c * n + j]
                        A[c * n + j] = A[piv * n + j]
                        A[piv * n + j] = tmp
                    det = p - det
                det = det * A[c * n + c] % p
                inv = _inv_mod(A[c * n + c], p)
                for i in range(c + 1, n):
                    f = A[i * n + c] * inv % p
                    if f != 0:
                        for j in range(c, n):
                            A[i * n + j] = _md(A[i * n + j] - f * A[c * n + j], p)
    finally:
        free(A)
    return det % p


def rank_profile_mod_p(rows, Py_ssize_t ncols, p):
    return _py.rank_profile_mod_p(rows, ncols, p)


def matmul_mod(A, B, m):
    if m >= (1 << 31) or not A or not B:
        return _py.matmul_mod(A, B, m)
    return _matmul_small(list(A), list(B), m)


cdef list _matmul_small(list A, list B, i64 m):
    cdef Py_ssize_t r = len(A), s = len(B), c = len(B[0]), i, j, l
    cdef i64 a, acc
    cdef i64* X = _load(A, s, m)
    cdef i64* Y = _load(B, c, m)
    cdef i64* Z = <i64*> calloc(r * c + 1, sizeof(i64))
    if Z == NULL:
        free(X); free(Y)
        raise MemoryError()
    try:
        with nogil:
            for i in range(r):
                for l in range(s):
                    a = X[i * s + l]
                    if a != 0:
                        for j in range(c):
                            Z[i * c + j] = (Z[i * c + j] + a * Y[l * c + j]) % m
        out = [[Z[i * c + j] for j in range(c)] for i in range(r)]
    finally:
        free(X); free(Y); free(Z)
    return out
