"""Exact arithmetic in cyclotomic fields.

Elements are stored in the Zumbroich basis of Q_n at their minimal
conductor n, so two values are equal iff their stored data are equal.
The basis exponents are built prime by prime: for an odd prime power p^k the
relative layers use balanced digits in [-(p-1)/2, (p-1)/2] and the bottom
layer excludes the digit 0; for 2^k the layers use digits {0, 1} and the
bottom layer is trivial.  This reproduces the GAP convention (e.g. the basis
of Q_9 is E(9)^2, ..., E(9)^7).
"""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]

__all__ = [
    "Cyclotomic",
    "GaloisElement",
    "CycloSyntaxError",
    "E",
    "sqrt",
    "parse_cyclo",
    "galois_apply",
    "conjugate",
    "is_integral",
    "orbit_sum",
    "complex_approx",
    "zumbroich_basis",
    "factorize",
    "euler_phi",
    "units_mod",
    "lcm",
]


# ---------------------------------------------------------------------------
# small number theory helpers


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of a positive integer by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def euler_phi(n: int) -> int:
    r = n
    for p, _ in factorize(n):
        r = r // p * (p - 1)
    return r


@lru_cache(maxsize=1024)
def units_mod(n: int) -> tuple[int, ...]:
    if n == 1:
        return (0,)
    return tuple(k for k in range(n) if math.gcd(k, n) == 1)


def lcm(*args: int) -> int:
    r = 1
    for a in args:
        r = r * a // math.gcd(r, a)
    return r


def _norm_rat(c: Rational) -> Rational:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


# ---------------------------------------------------------------------------
# Zumbroich basis data


@dataclass(frozen=True)
class _PrimeRule:
    p: int
    q: int  # p-part of n
    m_inv: int  # (n/q)^-1 mod q
    shift: int  # n/p
    low: int  # q/p


@lru_cache(maxsize=2048)
def _rules(n: int) -> tuple[_PrimeRule, ...]:
    rules = []
    for p, e in factorize(n) if n > 1 else ():
        q = p**e
        m = n // q
        rules.append(_PrimeRule(p, q, pow(m, -1, q) if q > 1 else 0, n // p, q // p))
    return tuple(rules)


def _top_digit(rule: _PrimeRule, e: int) -> int:
    """Digit of the p-component of ``e`` at position q/p (balanced low part)."""
    eq = (e * rule.m_inv) % rule.q
    low = rule.low
    if rule.p == 2:
        return eq // low
    r = eq % low
    if r > (low - 1) // 2:
        r -= low
    return ((eq - r) // low) % rule.p


def _excluded(rule: _PrimeRule, e: int) -> bool:
    a = _top_digit(rule, e)
    return a == 1 if rule.p == 2 else a == 0


@lru_cache(maxsize=1024)
def zumbroich_basis(n: int) -> tuple[int, ...]:
    """Sorted exponents i such that E(n)^i runs over the Zumbroich basis of Q_n."""
    rules = _rules(n)
    return tuple(e for e in range(n) if not any(_excluded(r, e) for r in rules))


@lru_cache(maxsize=1024)
def _basis_index(n: int) -> dict[int, int]:
    return {e: i for i, e in enumerate(zumbroich_basis(n))}


def _reduce(n: int, terms: dict[int, Rational]) -> dict[int, Rational]:
    """Rewrite a sum of powers of E(n) in the Zumbroich basis of Q_n (in place)."""
    for rule in _rules(n):
        p, shift = rule.p, rule.shift
        for e in [e for e in terms if _excluded(rule, e)]:
            c = terms.pop(e)
            if not c:
                continue
            if p == 2:
                t = (e + shift) % n
                terms[t] = terms.get(t, 0) - c
            else:
                for j in range(1, p):
                    t = (e + j * shift) % n
                    terms[t] = terms.get(t, 0) - c
    return {e: _norm_rat(c) for e, c in terms.items() if c}


def _shrink(n: int, terms: dict[int, Rational]) -> tuple[int, dict[int, Rational]]:
    """Lower the conductor of a canonical element as far as possible."""
    changed = True
    while changed and n > 1:
        changed = False
        if n % 4 == 2:
            terms = {e // 2: c for e, c in terms.items()}
            n //= 2
            changed = True
            continue
        for rule in _rules(n):
            p = rule.p
            if rule.q % (p * p) == 0:
                if all(e % p == 0 for e in terms):
                    terms = {e // p: c for e, c in terms.items()}
                    n //= p
                    changed = True
                    break
            elif p != 2:
                shift = rule.shift
                new: dict[int, Rational] = {}
                ok = True
                seen = set()
                for e, c in terms.items():
                    if e in seen:
                        continue
                    a = _top_digit(rule, e)
                    base = (e - a * shift) % n
                    for j in range(1, p):
                        t = (base + j * shift) % n
                        seen.add(t)
                        if terms.get(t, 0) != c:
                            ok = False
                            break
                    if not ok:
                        break
                    new[(base // p)] = -c
                if ok:
                    n //= p
                    terms = {e % n: c for e, c in new.items()}
                    changed = True
                    break
    if n == 1:
        terms = {0: terms.get(0, 0)} if terms.get(0, 0) else {}
    return n, terms


# ---------------------------------------------------------------------------
# the element type


class Cyclotomic:
    """An element of some cyclotomic field, immutable and hashable."""

    __slots__ = ("_n", "_terms", "_hash")

    def __init__(self, conductor: int, terms: Mapping[int, Rational] | None = None, *, _canonical: bool = False):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        terms = {e % conductor: c for e, c in (terms or {}).items() if c}
        if not _canonical:
            terms = _reduce(conductor, dict(terms))
            conductor, terms = _shrink(conductor, terms)
        self._n = conductor
        self._terms = tuple(sorted(terms.items()))
        self._hash = None

    @classmethod
    def _from_raw(cls, n: int, terms: dict[int, Rational]) -> Cyclotomic:
        obj = cls.__new__(cls)
        obj._n = n
        obj._terms = tuple(sorted(terms.items()))
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, q: Rational) -> Cyclotomic:
        q = _norm_rat(Fraction(q))
        return cls._from_raw(1, {0: q} if q else {})

    @classmethod
    def root_of_unity(cls, n: int, k: int = 1) -> Cyclotomic:
        return cls(n, {k % n: 1})

    # -- accessors
    @property
    def conductor(self) -> int:
        return self._n

    @property
    def coeffs(self) -> dict[int, Rational]:
        return dict(self._terms)

    def terms(self) -> tuple[tuple[int, Rational], ...]:
        return self._terms

    def is_rational(self) -> bool:
        return self._n == 1

    def rational_value(self) -> Rational:
        if self._n != 1:
            raise ValueError(f"{self} is not rational")
        return self._terms[0][1] if self._terms else 0

    def is_zero(self) -> bool:
        return not self._terms

    def lift(self, n: int) -> dict[int, Rational]:
        """Zumbroich coefficients of this element viewed in Q_n (n a multiple of the conductor)."""
        if n % self._n:
            raise ValueError(f"conductor {self._n} does not divide {n}")
        f = n // self._n
        return _reduce(n, {e * f: c for e, c in self._terms})

    def vector(self, n: int) -> list[Rational]:
        """Coordinate row with respect to the Zumbroich basis of Q_n."""
        idx = _basis_index(n)
        row: list[Rational] = [0] * len(idx)
        for e, c in self.lift(n).items():
            row[idx[e]] = c
        return row

    @classmethod
    def from_vector(cls, n: int, row: Iterable[Rational]) -> Cyclotomic:
        basis = zumbroich_basis(n)
        terms = {basis[i]: c for i, c in enumerate(row) if c}
        n2, t2 = _shrink(n, terms)
        return cls._from_raw(n2, t2)

    def sort_key(self) -> tuple:
        return (self._n, tuple((e, Fraction(c)) for e, c in self._terms))

    # -- arithmetic
    @staticmethod
    def _coerce(other) -> Cyclotomic | None:
        if isinstance(other, Cyclotomic):
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.rational(other)
        return None

    def __add__(self, other) -> Cyclotomic:
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        n = lcm(self._n, y._n)
        fa, fb = n // self._n, n // y._n
        terms: dict[int, Rational] = {}
        for e, c in self._terms:
            terms[e * fa] = c
        for e, c in y._terms:
            k = e * fb
            terms[k] = terms.get(k, 0) + c
        return _make(n, terms, canonical_inputs=(fa == 1 and fb == 1))

    __radd__ = __add__

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic._from_raw(self._n, {e: -c for e, c in self._terms})

    def __sub__(self, other) -> Cyclotomic:
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        return self + (-y)

    def __rsub__(self, other) -> Cyclotomic:
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        return y + (-self)

    def __mul__(self, other) -> Cyclotomic:
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return Cyclotomic._from_raw(self._n, {e: _norm_rat(c * other) for e, c in self._terms})
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if other._n == 1:
            return self * other.rational_value()
        if self._n == 1:
            return other * self.rational_value()
        n = lcm(self._n, other._n)
        fa, fb = n // self._n, n // other._n
        terms: dict[int, Rational] = {}
        for e1, c1 in self._terms:
            e1 *= fa
            for e2, c2 in other._terms:
                k = (e1 + e2 * fb) % n
                terms[k] = terms.get(k, 0) + c1 * c2
        return _make(n, terms)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Cyclotomic:
        if isinstance(other, Cyclotomic):
            if not other.is_rational():
                raise ZeroDivisionError("division by a non-rational cyclotomic is not supported")
            other = other.rational_value()
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / other)
        return NotImplemented

    def __pow__(self, k: int) -> Cyclotomic:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if self.is_rational():
                v = self.rational_value()
                if not v:
                    raise ZeroDivisionError("0 to a negative power")
                return Cyclotomic.rational(Fraction(1) / v) ** (-k)
            order = self.root_order()
            if order is None:
                raise ValueError("negative powers are only defined for rationals and roots of unity")
            k %= order
        return self._pow_pos(k)

    def root_order(self) -> int | None:
        """Multiplicative order if this is a root of unity, else None."""
        m = 2 * self._n
        if self.is_zero() or self._pow_pos(m) != ONE:
            return None
        for d in range(1, m + 1):
            if m % d == 0 and self._pow_pos(d) == ONE:
                return d
        return None

    def _pow_pos(self, k: int) -> Cyclotomic:
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison / hashing
    def __eq__(self, other) -> bool:
        if isinstance(other, Cyclotomic):
            return self._n == other._n and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._n == 1 and self.rational_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self._n == 1:
                self._hash = hash(self.rational_value())
            else:
                self._hash = hash((self._n, self._terms))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"Cyclotomic({self})"

    def __str__(self) -> str:
        return format_cyclo(self)

    def __complex__(self) -> complex:
        n = self._n
        return sum((complex(float(c)) * cmath.exp(2j * math.pi * e / n) for e, c in self._terms), 0j)


def _make(n: int, terms: dict[int, Rational], canonical_inputs: bool = False) -> Cyclotomic:
    terms = _reduce(n, terms)
    n, terms = _shrink(n, terms)
    return Cyclotomic._from_raw(n, terms)


ZERO = Cyclotomic._from_raw(1, {})
ONE = Cyclotomic._from_raw(1, {0: 1})


def E(n: int) -> Cyclotomic:
    """The primitive n-th root of unity exp(2*pi*i/n)."""
    if n < 1:
        raise ValueError(f"E({n}) is undefined")
    return Cyclotomic(n, {1: 1})


def _squarefree_split(d: int) -> tuple[int, int]:
    """Return (f, s) with d = f^2 * s and s squarefree (sign kept in s)."""
    sign = -1 if d < 0 else 1
    f, s = 1, 1
    for p, e in factorize(abs(d)):
        f *= p ** (e // 2)
        if e % 2:
            s *= p
    return f, sign * s


@lru_cache(maxsize=256)
def _gauss_sum(p: int) -> Cyclotomic:
    """sum over a of (a/p) E(p)^a; equals sqrt(p) or i*sqrt(p) for odd primes p."""
    terms = {}
    for a in range(1, p):
        terms[a] = 1 if pow(a, (p - 1) // 2, p) == 1 else -1
    return Cyclotomic(p, terms)


@lru_cache(maxsize=512)
def sqrt(d: int) -> Cyclotomic:
    """Principal square root of an integer as a cyclotomic number."""
    if d == 0:
        return ZERO
    f, s = _squarefree_split(d)
    r = ONE
    t = 0
    for p, _ in factorize(abs(s)) if abs(s) > 1 else ():
        if p == 2:
            r = r * (E(8) + E(8) ** 7)
        else:
            r = r * _gauss_sum(p)
            if p % 4 == 3:
                t += 1
    # product of Gauss sums is i^t * sqrt(|s|)
    r = r * (E(4) ** (-t % 4))
    if s < 0:
        r = r * E(4)
    return r * f


# ---------------------------------------------------------------------------
# Galois action and friends


@dataclass(frozen=True)
class GaloisElement:
    """The automorphism E(n) -> E(n)^k of Q_n."""

    conductor: int
    residue: int

    def __post_init__(self):
        n = self.conductor
        k = self.residue % n if n > 1 else 0
        if n > 1 and math.gcd(k, n) != 1:
            raise ValueError(f"residue {self.residue} is not a unit mod {n}")
        object.__setattr__(self, "residue", k)

    def __mul__(self, other: GaloisElement) -> GaloisElement:
        if self.conductor != other.conductor:
            raise ValueError("Galois elements over different conductors")
        return GaloisElement(self.conductor, self.residue * other.residue)

    def __call__(self, x: Cyclotomic) -> Cyclotomic:
        return galois_apply(self, x)


def galois_apply(g: GaloisElement | int, x: Cyclotomic) -> Cyclotomic:
    if isinstance(g, int):
        k = g
        if x.conductor > 1 and math.gcd(k, x.conductor) != 1:
            raise ValueError(f"{k} is not coprime to the conductor {x.conductor}")
    else:
        if g.conductor % x.conductor:
            raise ValueError(f"conductor {x.conductor} does not divide {g.conductor}")
        k = g.residue
    n = x.conductor
    if n == 1:
        return x
    k %= n
    if k == 1:
        return x
    terms: dict[int, Rational] = {}
    for e, c in x.terms():
        terms[(e * k) % n] = c
    terms = _reduce(n, terms)
    return Cyclotomic._from_raw(n, terms)


def conjugate(x: Cyclotomic) -> Cyclotomic:
    return galois_apply(-1, x)


def is_integral(x: Cyclotomic) -> bool:
    return all(isinstance(c, int) for _, c in x.terms())


def orbit_sum(n: int, j: int, H: Iterable[int]) -> Cyclotomic:
    """Sum of the distinct roots E(n)^(j*h), h in H."""
    H = {h % n for h in H} if n > 1 else {0}
    if n > 1:
        if any(math.gcd(h, n) != 1 for h in H):
            raise ValueError("H contains non-units")
        for a in H:
            for b in H:
                if (a * b) % n not in H:
                    raise ValueError("H is not multiplicatively closed")
    roots = {(j * h) % n for h in H} if n > 1 else {0}
    return Cyclotomic(n, {e: 1 for e in roots})


def complex_approx(x: Cyclotomic, digits: int = 15):
    """Numerical value of x, accurate to 10^-digits."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    if digits <= 12:
        return complex(x)
    import mpmath

    with mpmath.workdps(digits + 10):
        n = x.conductor
        s = mpmath.mpc(0)
        for e, c in x.terms():
            s += mpmath.mpf(Fraction(c).numerator) / Fraction(c).denominator * mpmath.expjpi(mpmath.mpf(2 * e) / n)
        return s


# ---------------------------------------------------------------------------
# printing and parsing


def _fmt_rat(c: Rational) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_cyclo(x: Cyclotomic) -> str:
    if x.is_zero():
        return "0"
    n = x.conductor
    if n == 1:
        return _fmt_rat(x.rational_value())
    parts = []
    for e, c in x.terms():
        if e == 0:
            body = _fmt_rat(abs(c))
        else:
            root = f"E({n})" if e == 1 else f"E({n})^{e}"
            body = root if abs(c) == 1 else f"{_fmt_rat(abs(c))}*{root}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


class CycloSyntaxError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at position {pos}: {text!r}")
        self.pos = pos
        self.text = text


_TOKEN = re.compile(r"\s*(?:(\d+)|(E|Sqrt)\b|([-+*/^(),]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise CycloSyntaxError("unexpected character", text, pos)
        start = m.start(0) + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group(1):
            toks.append(("int", m.group(1), start))
        elif m.group(2):
            toks.append(("name", m.group(2), start))
        else:
            toks.append(("op", m.group(3), start))
        pos = m.end(0)
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            raise CycloSyntaxError(f"expected {want!r}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self) -> Cyclotomic:
        x = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise CycloSyntaxError("unexpected token", self.text, tok[2])
        return x

    def expr(self) -> Cyclotomic:
        x = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            y = self.term()
            x = x + y if op == "+" else x - y
        return x

    def term(self) -> Cyclotomic:
        x = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            y = self.unary()
            if op == "*":
                x = x * y
            else:
                if not y.is_rational():
                    raise CycloSyntaxError("division by a non-rational value", self.text, pos)
                if y.rational_value() == 0:
                    raise CycloSyntaxError("division by zero", self.text, pos)
                x = x / y.rational_value()
        return x

    def unary(self) -> Cyclotomic:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("-", "+"):
            self.take()
            x = self.unary()
            return -x if tok[1] == "-" else x
        return self.power()

    def power(self) -> Cyclotomic:
        x = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            _, _, pos = self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] in ("-", "+"):
                sign = -1 if self.take()[1] == "-" else 1
            k = sign * int(self.take("int")[1])
            try:
                x = x**k
            except (ValueError, ZeroDivisionError) as exc:
                raise CycloSyntaxError(str(exc), self.text, pos) from None
        return x

    def atom(self) -> Cyclotomic:
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            return Cyclotomic.rational(int(tok[1]))
        if tok[0] == "name":
            self.take()
            self.take("op", "(")
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] in ("-", "+"):
                sign = -1 if self.take()[1] == "-" else 1
            arg_tok = self.take("int")
            self.take("op", ")")
            arg = sign * int(arg_tok[1])
            if tok[1] == "E":
                if arg <= 0:
                    raise CycloSyntaxError(f"E({arg}) is undefined", self.text, arg_tok[2])
                return E(arg)
            return sqrt(arg)
        if tok[0] == "op" and tok[1] == "(":
            self.take()
            x = self.expr()
            self.take("op", ")")
            return x
        raise CycloSyntaxError("unexpected token", self.text, tok[2])


def parse_cyclo(text: str) -> Cyclotomic:
    """Parse a GAP-style expression such as ``-1/2+3*E(8)^3-Sqrt(5)``."""
    return _Parser(text).parse()


def dot(xs: Iterable[Cyclotomic], ys: Iterable[Cyclotomic], weights: Iterable[Rational] | None = None) -> Cyclotomic:
    """sum_i w_i * x_i * y_i with a single canonicalisation at the end."""
    xs = list(xs)
    ys = list(ys)
    ws = list(weights) if weights is not None else [1] * len(xs)
    n = lcm(*(x.conductor for x in xs), *(y.conductor for y in ys)) if xs else 1
    acc: dict[int, Rational] = {}
    for x, y, w in zip(xs, ys, ws):
        if not w or x.is_zero() or y.is_zero():
            continue
        fa, fb = n // x.conductor, n // y.conductor
        for e1, c1 in x.terms():
            e1 *= fa
            c1 *= w
            for e2, c2 in y.terms():
                k = (e1 + e2 * fb) % n
                acc[k] = acc.get(k, 0) + c1 * c2
    return _make(n, acc)


def add(x: Cyclotomic, y: Cyclotomic) -> Cyclotomic:
    return x + y


def mul(x: Cyclotomic, y: Cyclotomic) -> Cyclotomic:
    return x * y


def neg(x: Cyclotomic) -> Cyclotomic:
    return -x
