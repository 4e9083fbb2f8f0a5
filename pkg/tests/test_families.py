import math
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from charlat.cyclo import E, ONE, Cyclotomic, complex_approx, euler_phi, sqrt
from charlat.families import (
    C15_D16_VARIANTS,
    GF,
    abelian_table,
    alternating_group,
    an_field_basis,
    an_partition_data,
    c4c4_c3_group,
    c15_d16_group,
    dihedral_group,
    dihedral_table,
    direct_product_table,
    extraspecial_central_group,
    extraspecial_central_order,
    heisenberg_group,
    prime_star,
    psl2_group,
    psl33_group,
    suzuki_exponent,
    symmetric_group,
)
from charlat.groups import conjugacy_classes, dixon_table


def test_abelian_examples():
    assert [[int(v.rational_value()) for v in r] for r in abelian_table([2]).values] == [[1, 1], [1, -1]]
    assert abelian_table([3]).all_values() == {ONE, E(3), E(3) ** 2}
    T = abelian_table([2, 4])
    assert T.class_count == 8 and T.classes.exponent == 4
    T.validate()


def test_direct_product_examples():
    K = direct_product_table(abelian_table([2]), abelian_table([2]))
    assert K.values == abelian_table([2, 2]).values
    T = direct_product_table(dixon_table(symmetric_group(3)), abelian_table([3]))
    T.validate()
    assert T.class_count == 9 and T.classes.exponent == 6
    D = direct_product_table(dihedral_table(13), abelian_table([3]))
    D.validate()
    assert D.group_order == 78


def test_dihedral_examples():
    T = dihedral_table(13)
    T.validate()
    assert T.degrees.count(2) == 6 and len(T.degrees) == 8
    T = dihedral_table(4)
    assert T.degrees == [1, 1, 1, 1, 2]
    assert all(v.is_rational() for v in T.all_values())
    vals = dihedral_table(8).all_values()
    assert E(8) + E(8) ** -1 in vals or -(E(8) + E(8) ** -1) in vals
    assert abs(complex_approx(E(8) + E(8) ** -1) - math.sqrt(2)) < 1e-12
    with pytest.raises(ValueError):
        dihedral_table(2)


@pytest.mark.parametrize("m", range(3, 11))
def test_dixon_reproduces_dihedral_table(m):
    T = dixon_table(dihedral_group(m))
    C = dihedral_table(m)
    assert T.values == C.values
    assert T.classes.sizes == C.classes.sizes
    assert T.classes.element_orders == C.classes.element_orders


@given(st.integers(3, 24))
@settings(max_examples=22, deadline=None)
def test_dihedral_tables_valid(m):
    dihedral_table(m).validate()


@given(st.lists(st.integers(1, 4), min_size=1, max_size=3))
@settings(max_examples=30, deadline=None)
def test_abelian_tables_valid(ns):
    T = abelian_table(ns)
    T.validate()
    assert T.group_order == math.prod(ns)


def test_extraspecial_generators():
    K, gens = extraspecial_central_order(3, 1)
    assert K.conductor == 9 and K.degree == 6
    z = E(9)
    assert gens[0] == z**3 and len(gens) == 1 + 6
    assert all(g == 3 * z**i for g, i in zip(gens[1:], [1, 2, 4, 5, 7, 8]))
    with pytest.raises(ValueError):
        extraspecial_central_order(2, 1)
    with pytest.raises(ValueError):
        extraspecial_central_order(9, 1)


def test_extraspecial_group_shape():
    G = heisenberg_group(3)
    cls = conjugacy_classes(G)
    # center of order p, p^2 + p - 1 classes
    assert G.order() == 27 and cls.sizes.count(1) == 3 and cls.count == 11
    assert max(cls.element_orders) == 3
    H = extraspecial_central_group(3, 1)
    cls = conjugacy_classes(H)
    assert H.order() == 81 and cls.sizes.count(1) == 9 and max(cls.element_orders) == 9


def test_group_orders():
    assert c4c4_c3_group().order() == 48
    for v in C15_D16_VARIANTS:
        assert c15_d16_group(v).order() == 240
    for q in (4, 5, 7, 8, 9, 11, 13):
        assert psl2_group(q).order() == q * (q * q - 1) // math.gcd(2, q - 1)
    assert psl33_group().order() == 5616
    with pytest.raises(ValueError):
        psl2_group(6)


@pytest.mark.parametrize("variant", sorted(C15_D16_VARIANTS))
def test_c15_d16_action_is_klein(variant):
    G = c15_d16_group(variant)
    t = G.generators[0]
    mults = set()
    for g in G.generators[1:]:
        c = g.inverse() * t * g
        k = next(k for k in range(1, 15) if (t**k).images == c.images)
        mults.add(k)
    closure = {1}
    while True:
        new = {a * b % 15 for a in closure | mults for b in closure | mults} | closure
        if new == closure:
            break
        closure = new
    assert closure == {1, 4, 11, 14}


@pytest.mark.parametrize("q", [4, 8, 9])
def test_finite_field_axioms(q):
    F = GF(q)
    A, M = F.add_table, F.mul_table
    for a in range(q):
        assert A[a][0] == a and M[a][1] == a
        if a:
            assert M[a][F.inv[a]] == 1
        for b in range(q):
            for c in range(q):
                assert M[a][A[b][c]] == A[M[a][b]][M[a][c]]
                assert M[a][M[b][c]] == M[M[a][b]][c]
    g, x, seen = F.primitive_element(), 1, set()
    for _ in range(q - 1):
        x = M[x][g]
        seen.add(x)
    assert len(seen) == q - 1


def brute_partitions(n):
    odd = list(range(1, n + 1, 2))
    out = []
    for k in range(1, len(odd) + 1):
        for c in combinations(odd, k):
            if sum(c) == n:
                out.append(tuple(sorted(c, reverse=True)))
    return sorted(out)


def test_partition_examples():
    data = an_partition_data(12)
    assert sorted(d.parts for d in data) == [(7, 5), (9, 3), (11, 1)]
    assert sorted(d.d for d in data) == [-35, -27, -11]
    assert [(d.parts, d.d) for d in an_partition_data(4)] == [((3, 1), -3)]
    assert [(d.parts, d.d) for d in an_partition_data(3)] == [((3,), -3)]


@pytest.mark.parametrize("n", range(2, 32))
def test_partition_invariants(n):
    data = an_partition_data(n)
    assert sorted(d.parts for d in data) == brute_partitions(n)
    for d in data:
        assert d.d % 4 == 1
        assert d.e**2 * d.d_prime == d.d
        assert math.factorial(n) % (d.e**2) == 0
        assert all(d.d_prime % (p * p) for p in range(2, math.isqrt(abs(d.d_prime)) + 1))


def test_field_basis_examples():
    B = an_field_basis(12)
    assert B.dim == 3
    span = {math.prod(prime_star(p) for p in S) for S in B.span()}
    assert {-11, -3, -35} <= span
    for n in (2, 3, 4):
        assert an_field_basis(n).values() in ([-3], []) and an_field_basis(3).values() == [-3]
    assert an_field_basis(4).values() == [-3]
    B = an_field_basis(25)
    assert sorted(abs(v) for v in B.values()) == [3, 5, 7, 11, 13, 17, 19]


@pytest.mark.parametrize("n", range(5, 25))
def test_field_basis_spans_all_radicands(n):
    B = an_field_basis(n)
    span = {math.prod(prime_star(p) for p in S) for S in B.span()}
    for d in an_partition_data(n):
        assert d.d_prime in span
    assert len(span) == 2**B.dim


def test_suzuki_exponent():
    assert suzuki_exponent(8) == 9
    for q in (8, 32):
        # (q^2+1) and (q-1) are coprime, so phi splits
        assert suzuki_exponent(q) == euler_phi(q * q + 1) * euler_phi(q - 1) // 32
    assert suzuki_exponent(32) == 750
