import math
import random
from itertools import product

from hypothesis import given, settings, strategies as st

from charlat.cyclo import E, ONE, Cyclotomic, euler_phi, galois_apply, sqrt, units_mod
from charlat.fields import (
    AbelianField,
    classify_2power_subfield,
    compositum,
    discriminant,
    field_of_values,
    leopoldt_basis,
)
from charlat.zlat import Lattice
from oracles import conductor_discriminant

import pytest


def span(elements, n):
    dim = len(Cyclotomic(n, {}).vector(n)) if n > 1 else 1
    rows = []
    for x in elements:
        v = x.vector(n)
        assert all(c == int(c) for c in v)
        rows.append([int(c) for c in v])
    return Lattice.from_generators(rows, len(rows[0]))


def basis_lattice(K):
    return span(leopoldt_basis(K).elements, K.conductor)


def test_field_of_values_examples():
    K = field_of_values([E(12)])
    assert (K.conductor, K.stab) == (12, (1,))
    K = field_of_values([E(8) + E(8) ** 7])
    assert (K.conductor, K.stab) == (8, (1, 7))
    for k in (3, 5):
        assert abs(complex(galois_apply(k, E(8) + E(8) ** 7)) - 2**0.5) > 1
    K = field_of_values([ONE, -ONE, Cyclotomic.rational(5)])
    assert K.conductor == 1 and K.degree == 1


def test_leopoldt_examples():
    K = AbelianField.make(5, [4])
    golden = (1 + sqrt(5)) / 2
    assert basis_lattice(K) == span([ONE, golden], 5)
    assert basis_lattice(K) == span([ONE, (sqrt(5) - 1) / 2], 5)
    for n in (3, 4, 7, 8, 9, 12, 15):
        K = AbelianField.cyclotomic(n)
        assert basis_lattice(K) == span([E(n) ** k for k in range(euler_phi(n))], n)
    assert leopoldt_basis(AbelianField.rationals()).elements == [ONE]


def test_compositum_examples():
    K = compositum(field_of_values([sqrt(2)]), field_of_values([sqrt(-1)]))
    assert (K.conductor, K.stab, K.degree) == (8, (1,), 4)
    Q5 = field_of_values([sqrt(5)])
    assert compositum(Q5, AbelianField.rationals()) == Q5
    L = compositum(field_of_values([sqrt(-3)]), Q5)
    assert (L.degree, L.conductor) == (4, 15)


def test_discriminant_examples():
    assert discriminant(field_of_values([sqrt(5)])) == 5
    assert discriminant(field_of_values([sqrt(-1)])) == -4
    assert discriminant(AbelianField.cyclotomic(5)) == 125
    # cyclotomic discriminant: (-1)^(phi/2) n^phi / prod p^(phi/(p-1))
    n, f = 120, 32
    assert discriminant(AbelianField.cyclotomic(n)) == n**f // (2**32 * 3**16 * 5**8)


def test_classify_examples():
    tag, gens = classify_2power_subfield(field_of_values([sqrt(2)]))
    assert tag == "plus"
    assert gens == [ONE, E(8) + E(8) ** 7]
    assert classify_2power_subfield(field_of_values([sqrt(-2)]))[0] == "minus"
    assert classify_2power_subfield(AbelianField.cyclotomic(4))[0] == "cyclotomic"
    with pytest.raises(ValueError):
        classify_2power_subfield(AbelianField.cyclotomic(12))


def random_field(rng, max_n=200):
    n = rng.randint(1, max_n)
    units = units_mod(n)
    gens = rng.sample(units, min(len(units), rng.randint(0, 2)))
    return AbelianField.make(n, gens + [1]), n


def test_discriminant_matches_conductor_discriminant_formula():
    rng = random.Random(17)
    for _ in range(120):
        K, _ = random_field(rng)
        if K.degree > 40:
            continue
        assert discriminant(K) == conductor_discriminant(K.conductor, K.stab), K


def test_disc_divides_n_phi():
    rng = random.Random(4)
    for _ in range(100):
        K, n = random_field(rng)
        if K.degree > 40:
            continue
        m = K.conductor
        assert (m ** euler_phi(m)) % discriminant(K) == 0


@pytest.mark.parametrize("d", [d for d in range(-60, 61) if d not in (0, 1) and all(d % (p * p) for p in (2, 3, 5, 7))])
def test_quadratic_integral_basis(d):
    K = field_of_values([sqrt(d)])
    w = (1 + sqrt(d)) / 2 if d % 4 == 1 else sqrt(d)
    assert K.degree == 2
    assert basis_lattice(K) == span([ONE, w], K.conductor)
    assert discriminant(K) == (d if d % 4 == 1 else 4 * d)


def test_coprime_compositum_basis_is_product():
    rng = random.Random(8)
    checked = 0
    while checked < 25:
        K, _ = random_field(rng, 40)
        L, _ = random_field(rng, 40)
        if K.degree * L.degree > 24 or math.gcd(discriminant(K), discriminant(L)) != 1:
            continue
        M = compositum(K, L)
        assert M.degree == K.degree * L.degree
        prods = [a * b for a, b in product(leopoldt_basis(K).elements, leopoldt_basis(L).elements)]
        assert span(prods, M.conductor) == basis_lattice(M)
        checked += 1


@pytest.mark.parametrize("m", [3, 4, 5, 6, 7])
def test_two_power_generators_span_ring_of_integers(m):
    n = 2**m
    for H in ([1, n - 1], [1, n // 2 - 1]):
        K = AbelianField.make(n, H)
        tag, gens = classify_2power_subfield(K)
        assert tag == ("plus" if H[1] == n - 1 else "minus")
        assert span(gens, n) == basis_lattice(K)


@given(st.integers(1, 150), st.data())
@settings(max_examples=60, deadline=None)
def test_stabilizer_fixes_basis(n, data):
    units = units_mod(n)
    g = data.draw(st.sampled_from(units))
    K = AbelianField.make(n, [g])
    for b in leopoldt_basis(K).elements:
        for h in K.stab:
            assert galois_apply(h, b) == b
        assert K.contains(b)


def test_multiplication_matrix():
    K = field_of_values([sqrt(-7)])
    B = leopoldt_basis(K)
    w = (1 + sqrt(-7)) / 2
    M = B.multiplication_matrix(w)
    for i, b in enumerate(B.elements):
        assert B.element(M[i]) == b * w
