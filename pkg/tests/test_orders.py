import math
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from charlat.cyclo import E, ONE, Cyclotomic, sqrt
from charlat.families import (
    abelian_table,
    c4c4_c3_group,
    c15_d16_group,
    dihedral_group,
    dihedral_table,
    direct_product_table,
    extraspecial_central_group,
    extraspecial_central_order,
    heisenberg_group,
    quaternion_group,
    symmetric_group,
)
from charlat.fields import AbelianField, discriminant, field_of_values, leopoldt_basis, trace
from charlat.groups import dixon_table
from charlat.multiquad import an_quotient
from charlat.orders import (
    OrderReport,
    check_conjecture_C,
    check_cor_exponent,
    check_navarro,
    check_qg_bound,
    check_theorem_A,
    column_order,
    element_order_quotient,
    format_divisors,
    group_order_report,
    merge_divisors,
    ring_closure,
    row_order,
    tensor_quotient,
)
from charlat.zlat import Lattice, det, quotient_invariants


def quotient(L):
    return quotient_invariants(L, Lattice.standard(L.ambient_rank))


def monomial_span(gens, K):
    """Additive span of all monomials g_1^a_1 ... g_k^a_k with a_i < [K:Q]."""
    B = leopoldt_basis(K)
    d = K.degree
    powers = []
    for g in gens:
        ps, x = [], ONE
        for _ in range(d):
            ps.append(x)
            x = x * g
        powers.append(ps)
    rows = []
    for combo in product(*powers):
        x = ONE
        for y in combo:
            x = x * y
        rows.append(B.integral_coordinates(x))
    rows.append(B.one_coordinates)
    return Lattice.from_generators(rows, B.rank)


def test_ring_closure_examples():
    K = AbelianField.cyclotomic(5)
    assert ring_closure([E(5)], K).is_standard()
    K = AbelianField.cyclotomic(12)
    assert quotient(ring_closure([2 * E(4), E(3)], K)) == [2, 2]
    K, gens = extraspecial_central_order(3, 1)
    assert quotient(ring_closure(gens, K)) == [3] * 4


def test_ring_closure_errors():
    K = AbelianField.cyclotomic(5)
    with pytest.raises(ValueError):
        ring_closure([E(3)], K)
    with pytest.raises(ValueError):
        ring_closure([E(5) / 2], K)


small_fields = st.sampled_from([5, 7, 8, 9, 12, 15, 16, 20])


@st.composite
def field_elements(draw, k=2):
    n = draw(small_fields)
    z = E(n)
    gens = []
    for _ in range(draw(st.integers(1, k))):
        x = Cyclotomic.rational(0)
        for e in range(draw(st.integers(1, 3))):
            x = x + z ** draw(st.integers(0, n - 1)) * draw(st.integers(-3, 3))
        gens.append(x)
    return n, gens


@given(field_elements())
@settings(max_examples=60, deadline=None)
def test_ring_closure_matches_monomial_span(data):
    n, gens = data
    K = field_of_values(gens)
    L = ring_closure(gens, K)
    assert L == monomial_span(gens, K)
    # multiplicatively closed on basis pairs
    B = leopoldt_basis(K)
    elems = [B.element(r) for r in L.rows]
    for a in elems:
        for b in elems:
            assert B.integral_coordinates(a * b) in L


@given(field_elements(k=1))
@settings(max_examples=60, deadline=None)
def test_single_element_index_from_discriminants(data):
    _, (x,) = data
    K = field_of_values([x])
    divs = element_order_quotient(x)
    d = K.degree
    pw = [x**i for i in range(d)]
    gram = [[int(trace(K, a * b)) for b in pw] for a in pw]
    ratio = Fraction(det(gram), discriminant(K))
    idx = math.prod(divs)
    assert ratio == idx * idx


def test_element_examples():
    assert element_order_quotient((1 + sqrt(5)) / 2) == []
    assert element_order_quotient(sqrt(5)) == [2]
    assert element_order_quotient(2 * E(4)) == [2]
    with pytest.raises(ValueError):
        element_order_quotient(E(4) / 2)


def test_column_and_row_orders():
    T = dihedral_table(13)
    K, L = column_order(T, 0)
    assert K.degree == 1 and L.is_standard()
    j = T.classes.element_orders.index(13)
    K, L = column_order(T, j)
    m = 2  # |N(<g>)| / |<g>| = 26 / 13
    assert all([m * int(i == k) for k in range(L.ambient_rank)] in L for i in range(L.ambient_rank))
    K, L = row_order(T, 0)
    assert L.is_standard() and K.degree == 1
    T16 = dihedral_table(8)
    i = next(i for i, row in enumerate(T16.values) if any(not v.is_rational() for v in row))
    K, L = row_order(T16, i)
    assert K.degree == 2 and sqrt(2) in set(T16.values[i]) | {-v for v in T16.values[i]}
    assert L.is_standard()


def test_group_reports():
    assert group_order_report(abelian_table([2, 4])).divisors == []
    r = group_order_report(dixon_table(c4c4_c3_group()))
    assert r.divisors == [2, 2] and r.exponent == 2 and r.order_index == 4
    r = group_order_report(dixon_table(c15_d16_group()))
    assert format_divisors(r.divisors) == "C_120^2 x C_60^2 x C_12^4 x C_4^4 x C_2^14"
    assert r.field.conductor == 120 and r.field.degree == 32


def test_closed_form_matches_group_route():
    K, gens = extraspecial_central_order(3, 1)
    L = ring_closure(gens, K)
    r = group_order_report(dixon_table(extraspecial_central_group(3, 1)))
    assert r.field == K
    assert r.lattice == L


def test_theorem_checks():
    syn = OrderReport(AbelianField.rationals(), 1, 7, [7], 7, 1)
    assert check_theorem_A(syn, 240) == (False, 7)
    r = group_order_report(dixon_table(c4c4_c3_group()))
    assert check_theorem_A(r, 48) == (True, None)
    assert check_conjecture_C(r, 48)
    assert check_cor_exponent(r, 48) == 1
    r = group_order_report(dixon_table(c15_d16_group()))
    assert check_theorem_A(r, 240)[0] and check_conjecture_C(r, 240) and r.exponent == 120
    K, gens = extraspecial_central_order(3, 1)
    L = ring_closure(gens, K)
    ex = OrderReport(K, 6, 81, [3] * 4, 3, 1, L)
    assert check_conjecture_C(ex, 81)
    ab = group_order_report(abelian_table([6]))
    assert check_cor_exponent(ab, 6) == 0 and check_theorem_A(ab, 6)[0]
    divs = an_quotient(15)
    an = OrderReport(AbelianField.rationals(), 0, math.prod(divs), divs, divs[-1], 1)
    assert divs[-1] == 45 and check_cor_exponent(an, math.factorial(15) // 2) == 1
    with pytest.raises(ValueError):
        check_cor_exponent(syn, 240)


def test_conjecture_C_rejects_full_exponent():
    r = OrderReport(AbelianField.rationals(), 1, 4, [4], 4, 1)
    assert not check_conjecture_C(r, 4)
    assert check_conjecture_C(r, 8)


@pytest.mark.parametrize("G", [symmetric_group(3), c4c4_c3_group(), dihedral_group(13), quaternion_group(),
                               heisenberg_group(3)], ids=["S3", "C4^2:C3", "D26", "Q8", "3^(1+2)"])
def test_qg_and_navarro_every_class(G):
    T = dixon_table(G)
    for j in range(T.class_count):
        assert check_qg_bound(G, T, j)
        assert check_navarro(G, T, j)


def test_qg_example_s3():
    G = symmetric_group(3)
    T = dixon_table(G)
    j = T.classes.element_orders.index(3)
    assert check_qg_bound(G, T, j)


def test_merge_rule_example():
    # divisors 1,2,4 and 1,3 give C_2 x C_6 x C_12^2
    assert merge_divisors([2, 4], 3, [3], 2) == [2, 6, 12, 12]
    A = Lattice.from_generators([[1, 0, 0], [0, 2, 0], [0, 0, 4]])
    B = Lattice.from_generators([[1, 0], [0, 3]])
    assert tensor_quotient(A, B) == [2, 6, 12, 12]


@given(st.lists(st.integers(1, 12), min_size=1, max_size=3), st.lists(st.integers(1, 12), min_size=1, max_size=3))
@settings(max_examples=100, deadline=None)
def test_merge_rule_matches_tensor_lattice(a, b):
    A = Lattice.from_generators([[x if i == j else 0 for j in range(len(a))] for i, x in enumerate(a)])
    B = Lattice.from_generators([[x if i == j else 0 for j in range(len(b))] for i, x in enumerate(b)])
    da, db = quotient(A), quotient(B)
    assert merge_divisors(da, len(a), db, len(b)) == tensor_quotient(A, B)


@pytest.mark.parametrize("t1,t2", [
    (lambda: dixon_table(c4c4_c3_group()), lambda: abelian_table([5])),
    (lambda: dihedral_table(13), lambda: abelian_table([3])),
    (lambda: dixon_table(heisenberg_group(3)), lambda: dihedral_table(4)),
    (lambda: dixon_table(c4c4_c3_group()), lambda: dixon_table(heisenberg_group(5))),
], ids=["C4^2:C3 x C5", "D26 x C3", "3^(1+2) x D8", "C4^2:C3 x 5^(1+2)"])
def test_direct_product_lemma(t1, t2):
    T1, T2 = t1(), t2()
    assert math.gcd(T1.group_order, T2.group_order) == 1
    r1, r2 = group_order_report(T1), group_order_report(T2)
    r = group_order_report(direct_product_table(T1, T2))
    assert r.divisors == merge_divisors(r1.divisors, r1.zk_rank, r2.divisors, r2.zk_rank)
    assert r.divisors == tensor_quotient(r1.lattice, r2.lattice)
