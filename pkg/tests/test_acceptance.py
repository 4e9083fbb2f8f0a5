"""Acceptance gate: one test per criterion, each logging a PASS/FAIL line."""
import math
import os
import random
import time
from fractions import Fraction

import pytest

from acceptance_log import criterion
from charlat.cli import BUILTIN_CORPUS, scan_entry, scan_violations
from charlat.cyclo import E, ONE, euler_phi, factorize, sqrt
from charlat.families import (
    abelian_table,
    c4c4_c3_group,
    c15_d16_group,
    dihedral_table,
    direct_product_table,
    extraspecial_central_order,
    psl2_group,
    psl33_group,
)
from charlat.fields import AbelianField, discriminant, field_of_values, leopoldt_basis, trace
from charlat.groups import dixon_table
from charlat.multiquad import an_quotient, reference_an_table
from charlat.orders import element_order_quotient, format_divisors, group_order_report, ring_closure
from charlat.zlat import Lattice, det, hnf, quotient_invariants, snf
from oracles import CosetOracle, frac_det

STRETCH = os.environ.get("CHARLAT_STRETCH") == "1"


def quotient(L):
    return quotient_invariants(L, Lattice.standard(L.ambient_rank))


def test_criterion_01_c4c4_c3():
    with criterion("1", "C4^2:C3 gives K = Q_12, Z[G] = Z[2i, w3], divisors [2,2], < 10 s"):
        t0 = time.perf_counter()
        r = group_order_report(dixon_table(c4c4_c3_group()))
        elapsed = time.perf_counter() - t0
        K = AbelianField.cyclotomic(12)
        assert r.field == K, f"field {r.field}"
        assert r.lattice == ring_closure([2 * E(4), E(3)], K), "Z[G] differs from Z[2i, w3]"
        assert r.divisors == [2, 2], f"divisors {r.divisors}"
        assert elapsed < 10, f"took {elapsed:.1f}s"


def test_criterion_02_c15_d16():
    with criterion("2", "C15:D16 gives C_120^2 x C_60^2 x C_12^4 x C_4^4 x C_2^14, < 120 s"):
        t0 = time.perf_counter()
        r = group_order_report(dixon_table(c15_d16_group()))
        elapsed = time.perf_counter() - t0
        expected = [2] * 14 + [4] * 4 + [12] * 4 + [60] * 2 + [120] * 2
        assert r.divisors == expected, f"divisors {format_divisors(r.divisors)}"
        assert elapsed < 120, f"took {elapsed:.1f}s"


def test_criterion_03_extraspecial_closed_form():
    with criterion("3", "extraspecial central products give C_{p^n}^{(p-1)^2}, < 30 s total"):
        t0 = time.perf_counter()
        for p, n in ((3, 1), (3, 2), (5, 1), (7, 1)):
            K, gens = extraspecial_central_order(p, n)
            got = quotient(ring_closure(gens, K))
            assert got == [p**n] * (p - 1) ** 2, f"(p,n)=({p},{n}) gives {format_divisors(got)}"
        elapsed = time.perf_counter() - t0
        assert elapsed < 30, f"took {elapsed:.1f}s"


# Reference row n=24 is not reproducible (see decisions ledger); the assertion stays literal.
@pytest.mark.xfail(strict=True, reason="n=24 computes C_105^32 x C_3^32, not the trivial reference row")
def test_criterion_04_alternating_rows():
    with criterion("4", "A_n quotients equal reference rows for 2 <= n <= 24, < 600 s"):
        t0 = time.perf_counter()
        bad = []
        for n in range(2, 25):
            got = an_quotient(n)
            if got != reference_an_table(n):
                bad.append(f"n={n}: computed {format_divisors(got)}, reference {format_divisors(reference_an_table(n))}")
        elapsed = time.perf_counter() - t0
        assert not bad, "; ".join(bad)
        assert elapsed < 600, f"took {elapsed:.1f}s"


def test_criterion_04_rows_below_24():
    # guard for the rows that do agree, so the expected failure above cannot mask a regression
    for n in range(2, 24):
        assert an_quotient(n) == reference_an_table(n), n


@pytest.mark.parametrize("n", range(25, 32))
def test_criterion_04_stretch(n):
    with criterion(f"4-stretch-{n}", f"A_{n} quotient equals reference row (non-blocking)"):
        if not STRETCH:
            pytest.skip("set CHARLAT_STRETCH=1")
        got = an_quotient(n)
        assert got == reference_an_table(n), f"computed {format_divisors(got)}"


def test_criterion_05_psl2():
    with criterion("5", "PSL(2,q), q in {4,5,7,8,9}: Z_K = Z[G], < 300 s"):
        t0 = time.perf_counter()
        for q in (4, 5, 7, 8, 9):
            r = group_order_report(dixon_table(psl2_group(q)))
            assert r.divisors == [], f"q={q}: {format_divisors(r.divisors)}"
        elapsed = time.perf_counter() - t0
        assert elapsed < 300, f"took {elapsed:.1f}s"


def test_criterion_05_psl33():
    with criterion("5-psl33", "PSL(3,3): Z_K = Z[G], < 1800 s (non-blocking)"):
        t0 = time.perf_counter()
        r = group_order_report(dixon_table(psl33_group()))
        assert r.divisors == [], format_divisors(r.divisors)
        assert time.perf_counter() - t0 < 1800


@pytest.mark.xfail(strict=True, reason="phi(31775)/32 = 750, so the stated 198 cannot hold")
def test_criterion_06_suzuki_exponent():
    with criterion("6", "phi((q^2+1)(q-1))/32 is 9 for q=8 and 198 for q=32"):
        values = {q: euler_phi((q * q + 1) * (q - 1)) // 32 for q in (8, 32)}
        assert values[8] == 9, f"q=8 gives {values[8]}"
        assert values[32] == 198, f"q=32 gives {values[32]}"


def test_criterion_07_d26_c3_column_value():
    with criterion("7", "D26 x C3 has a value w with Z_{Q(w)}/Z[w] cyclic of order 2146975, < 30 s"):
        t0 = time.perf_counter()
        T = direct_product_table(dihedral_table(13), abelian_table([3]))
        hit = None
        for w in sorted(T.all_values(), key=lambda v: v.sort_key()):
            if element_order_quotient(w) == [5**2 * 157 * 547]:
                hit = w
                break
        elapsed = time.perf_counter() - t0
        assert hit is not None, "no value with that quotient"
        # second route: disc of the power basis of w over disc(K) is the squared index
        K = field_of_values([hit])
        pw = [hit**i for i in range(K.degree)]
        gram = [[int(trace(K, a * b)) for b in pw] for a in pw]
        assert Fraction(det(gram), discriminant(K)) == 2146975**2
        assert elapsed < 30, f"took {elapsed:.1f}s"


@pytest.fixture(scope="module")
def corpus_scan():
    return [scan_entry(spec) for spec in BUILTIN_CORPUS]


def test_criterion_08_prime_divisors(corpus_scan):
    with criterion("8", "primes dividing |Z_K/Z[G]| divide |G| on the built-in corpus"):
        errors = [e for e in corpus_scan if "error" in e]
        assert not errors, f"entries failed to evaluate: {[e['source'] for e in errors]}"
        bad = [e["source"] for e in corpus_scan if e.get("theorem_A") is not True]
        assert not bad, f"violations: {bad}"


def test_criterion_09_nilpotent_exponent(corpus_scan):
    with criterion("9", "exponent of Z_K/Z[G] is a proper divisor of |G| for nilpotent corpus groups"):
        nil = [e for e in corpus_scan if e.get("nilpotent")]
        assert len(nil) >= 20, f"only {len(nil)} nilpotent entries"
        bad = [e["source"] for e in nil if "B" in scan_violations(e) or e.get("conjecture_C") is not True]
        assert not bad, f"violations: {bad}"


def test_criterion_10_class_checks(corpus_scan):
    with criterion("10", "normalizer bound and Galois-degree identity on every class of every enumerable group"):
        checked = 0
        bad = []
        for e in corpus_scan:
            for name in ("qg", "navarro"):
                if name in e:
                    checked += e[name]["classes"]
                    if e[name]["failed"]:
                        bad.append((e["source"], name, e[name]["failed"]))
        assert checked > 0
        assert not bad, f"violations: {bad}"


def _random_square(rng, n):
    while True:
        B = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        d = abs(frac_det(B))
        if 0 < d <= 200:
            return B


def _fundamental_discriminants(bound):
    out = []
    for D in range(-bound, bound + 1):
        if D in (0, 1):
            continue
        if D % 4 == 1:
            m = D
        elif D % 4 == 0 and (D // 4) % 4 in (2, 3):
            m = D // 4
        else:
            continue
        if all(m % (p * p) for p in range(2, math.isqrt(abs(m)) + 1)):
            out.append((D, m))
    return out


def _cyclotomic_disc(n):
    # classical closed form for disc(Q_n)
    f = euler_phi(n)
    den = 1
    for p, _ in factorize(n) if n > 1 else ():
        den *= p ** (f // (p - 1))
    return (-1) ** (f // 2) * n**f // den


def _unimodular(B, elems):
    rows = [B.integral_coordinates(x) for x in elems]
    return abs(det(rows)) == 1


def test_criterion_11_kernels_and_bases():
    with criterion("11", "10^4 SNF/HNF instances vs coset enumeration; 100 fields vs classical bases; discriminant divisibility"):
        rng = random.Random(20261016)
        for _ in range(10_000):
            n = rng.randint(1, 4)
            B = _random_square(rng, n)
            oracle = CosetOracle(B)
            inv = oracle.invariants()
            assert quotient_invariants(Lattice.from_generators(B, n), Lattice.standard(n)) == inv, B
            assert [x for x in snf(B).divisors if x != 1] == inv, B
            H = hnf(B).tolist()
            assert all(oracle.contains(r) for r in H), B
            assert math.prod(H[i][i] for i in range(n)) == oracle.D, B

        quads = rng.sample(_fundamental_discriminants(200), 50)
        cyclos = rng.sample([m for m in range(3, 201) if m % 4 != 2], 50)
        sample = []
        for D, m in quads:
            w = (ONE + sqrt(m)) / 2 if m % 4 == 1 else sqrt(m)
            K = field_of_values([sqrt(m)])
            assert K.conductor == abs(D) and K.degree == 2, (D, str(K))
            assert _unimodular(leopoldt_basis(K), [ONE, w]), D
            dK = discriminant(K)
            assert dK == D, (D, dK)
            sample.append((K, dK))
        for m in cyclos:
            K = AbelianField.cyclotomic(m)
            assert _unimodular(leopoldt_basis(K), [E(m) ** i for i in range(euler_phi(m))]), m
            dK = discriminant(K)
            assert dK == _cyclotomic_disc(m), m
            sample.append((K, dK))
        assert len(sample) == 100
        for K, dK in sample:
            n = K.conductor
            assert n ** euler_phi(n) % dK == 0, str(K)
            assert _cyclotomic_disc(n) % dK ** (euler_phi(n) // K.degree) == 0, str(K)


def test_criterion_12_abelian_exact():
    with criterion("12", "random abelian groups give Z[G] = Z_K"):
        rng = random.Random(12)
        for _ in range(50):
            while True:
                fs = [rng.randint(2, 9)]
                for _ in range(rng.randint(0, 2)):
                    fs.append(fs[-1] * rng.randint(1, 3))
                if math.prod(fs) <= 150:
                    break
            r = group_order_report(abelian_table(fs))
            assert r.divisors == [], (fs, r.divisors)
