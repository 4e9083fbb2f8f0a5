"""Orders generated by character values, and the quotients Z_K / Z[G].

Every lattice over a field K lives in the coordinate system of
``leopoldt_basis(K)``, so Z_K itself is the standard lattice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import kernels
from .cyclo import Cyclotomic, euler_phi, factorize
from .fields import AbelianField, IntegralBasis, field_of_values, leopoldt_basis
from .groups import CharacterTable, PermGroup, cyclic_normalizer_data
from .zlat import Lattice, hnf_rows, quotient_invariants

__all__ = [
    "OrderReport",
    "ring_closure",
    "closure_from_coordinates",
    "column_order",
    "row_order",
    "group_order_report",
    "element_order_quotient",
    "check_theorem_A",
    "check_conjecture_C",
    "check_qg_bound",
    "check_navarro",
    "check_cor_exponent",
    "merge_divisors",
    "tensor_quotient",
    "format_divisors",
]


@dataclass
class OrderReport:
    field: AbelianField
    zk_rank: int
    order_index: int
    divisors: list[int]
    exponent: int
    closure_rounds: int
    lattice: Lattice | None = field(default=None, repr=False)
    closure_added: bool = False

    def to_dict(self) -> dict:
        return {
            "field": str(self.field),
            "conductor": self.field.conductor,
            "degree": self.field.degree,
            "zk_rank": self.zk_rank,
            "order_index": self.order_index,
            "divisors": list(self.divisors),
            "exponent": self.exponent,
            "closure_rounds": self.closure_rounds,
            "closure_added": self.closure_added,
            "structure": format_divisors(self.divisors),
        }


def format_divisors(divisors: Sequence[int]) -> str:
    """'C_120^2 x C_60^2 x ...' with the largest factors first; 'trivial' for none."""
    if not divisors:
        return "trivial"
    counts: dict[int, int] = {}
    for d in divisors:
        counts[d] = counts.get(d, 0) + 1
    parts = []
    for d in sorted(counts, reverse=True):
        parts.append(f"C_{d}" + (f"^{counts[d]}" if counts[d] > 1 else ""))
    return " x ".join(parts)


def _matmul(rows, M, D):
    if D:
        return kernels.matmul_mod(rows, [[x % D for x in r] for r in M], D)
    n = len(M[0]) if M else 0
    out = []
    for r in rows:
        acc = [0] * n
        for a, Mr in zip(r, M):
            if a:
                for j, b in enumerate(Mr):
                    if b:
                        acc[j] += a * b
        out.append(acc)
    return out


def closure_from_coordinates(
    one: Sequence[int],
    generators: Sequence[Sequence[int]],
    mult_matrices: Sequence[Sequence[Sequence[int]]],
    rank: int,
) -> tuple[Lattice, int]:
    """Smallest lattice holding ``one`` and ``generators`` and stable under each matrix.

    Row vectors are multiplied on the right: v -> v M.  Returns the lattice and
    the number of rounds until the HNF stopped changing.
    """
    H = hnf_rows([list(one)] + [list(g) for g in generators], rank)
    rounds = 0
    while True:
        rounds += 1
        D = None
        if len(H) == rank:
            D = math.prod(H[i][i] for i in range(rank))
        new = list(H)
        for M in mult_matrices:
            new.extend(_matmul(H, M, D))
        H2 = hnf_rows(new, rank, D)
        if H2 == H:
            return Lattice.from_hnf(H, rank), rounds
        H = H2


def _coords(B: IntegralBasis, values: Iterable[Cyclotomic]) -> list[list[int]]:
    return [B.integral_coordinates(v) for v in values]


def ring_closure(generators: Sequence[Cyclotomic], K: AbelianField) -> Lattice:
    """Z[generators] inside Z_K, in Leopoldt coordinates."""
    return _ring_closure(list(generators), K)[0]


def _ring_closure(generators: list[Cyclotomic], K: AbelianField) -> tuple[Lattice, int, Lattice]:
    B = leopoldt_basis(K)
    for g in generators:
        if not K.contains(g):
            raise ValueError(f"{g} does not lie in {K}")
    rows = _coords(B, generators)
    span = Lattice.from_generators([B.one_coordinates] + rows, B.rank)
    # a Z-basis of the additive span generates the same ring as all the values
    gens = [B.element(r) for r in span.rows]
    mats = [B.multiplication_matrix(g) for g in gens if not g.is_rational()]
    L, rounds = closure_from_coordinates(B.one_coordinates, span.rows, mats, B.rank)
    return L, rounds, span


def _report(K: AbelianField, L: Lattice, rounds: int, span: Lattice | None) -> OrderReport:
    divs = quotient_invariants(L, Lattice.standard(L.ambient_rank))
    idx = math.prod(divs)
    return OrderReport(
        field=K,
        zk_rank=L.ambient_rank,
        order_index=idx,
        divisors=divs,
        exponent=divs[-1] if divs else 1,
        closure_rounds=rounds,
        lattice=L,
        closure_added=span is not None and span != L,
    )


def column_order(T: CharacterTable, j: int) -> tuple[AbelianField, Lattice]:
    """Q(g) and Z[g] for g in class j; the additive span of the column is already a ring."""
    col = T.column(j)
    K = field_of_values(col)
    B = leopoldt_basis(K)
    return K, Lattice.from_generators(_coords(B, col), B.rank)


def row_order(T: CharacterTable, i: int) -> tuple[AbelianField, Lattice]:
    row = T.values[i]
    K = field_of_values(row)
    return K, ring_closure(row, K)


def group_order_report(T: CharacterTable) -> OrderReport:
    vals = sorted(T.all_values(), key=lambda v: v.sort_key())
    K = field_of_values(vals)
    L, rounds, span = _ring_closure(vals, K)
    return _report(K, L, rounds, span)


def element_order_quotient(x: Cyclotomic) -> list[int]:
    """Nontrivial elementary divisors of Z_{Q(x)} / Z[x]."""
    K = field_of_values([x])
    B = leopoldt_basis(K)
    c = B.solve(x)
    if c is None or any(q.denominator != 1 for q in c):
        raise ValueError(f"{x} is not an algebraic integer")
    L = ring_closure([x], K)
    return quotient_invariants(L, Lattice.standard(B.rank))


# --- theorem checks --------------------------------------------------------------------

def check_theorem_A(r: OrderReport, group_order: int) -> tuple[bool, int | None]:
    """Every prime dividing |Z_K/Z[G]| divides |G|; on failure the offending prime."""
    for p, _ in factorize(r.order_index):
        if group_order % p:
            return False, p
    return True, None


def check_conjecture_C(r: OrderReport, group_order: int) -> bool:
    """The exponent of Z_K/Z[G] is a proper divisor of |G|."""
    if group_order <= 1:
        raise ValueError("group order must exceed 1")
    return group_order % r.exponent == 0 and r.exponent != group_order


def check_cor_exponent(r: OrderReport, group_order: int) -> int:
    """Smallest e >= 0 with |G|^e Z_K inside Z[G], i.e. exponent dividing |G|^e."""
    ok, p = check_theorem_A(r, group_order)
    if not ok:
        raise ValueError(f"prime {p} of the index does not divide |G|")
    e = 0
    while (group_order**e) % r.exponent:
        e += 1
    return e


def _class_rep(T: CharacterTable, j: int):
    if not T.classes.reps:
        raise ValueError("table carries no class representatives")
    return T.classes.reps[j]


def check_qg_bound(G: PermGroup, T: CharacterTable, j: int) -> bool:
    """|N_G(<g>)/<g>| Z_{Q(g)} lies in Z[g] for g in class j."""
    nN, _, o = cyclic_normalizer_data(G, _class_rep(T, j))
    m = nN // o
    K, L = column_order(T, j)
    return all(L.coordinates([m * int(i == k) for k in range(L.ambient_rank)]) is not None
               for i in range(L.ambient_rank))


def check_navarro(G: PermGroup, T: CharacterTable, j: int) -> bool:
    """|N_G(<g>)/C_G(g)| = [Q_{o(g)} : Q(g)] for g in class j."""
    nN, nC, o = cyclic_normalizer_data(G, _class_rep(T, j))
    K = field_of_values(T.column(j))
    return nN // nC == euler_phi(o) // K.degree


# --- direct products -----------------------------------------------------------------------

def merge_divisors(d1: Sequence[int], rank1: int, d2: Sequence[int], rank2: int) -> list[int]:
    """Invariants of (A (x) B) for A = Z^rank1 / sub1, B = Z^rank2 / sub2.

    With diagonal forms diag(a_i) and diag(b_j) the tensor quotient is
    diag(a_i b_j); the products are split into prime powers and regrouped into
    a divisibility chain.
    """
    a = [1] * (rank1 - len(d1)) + list(d1)
    b = [1] * (rank2 - len(d2)) + list(d2)
    powers: dict[int, list[int]] = {}
    for x in a:
        for y in b:
            for p, e in factorize(x * y):
                powers.setdefault(p, []).append(e)
    n = rank1 * rank2
    out = [1] * n
    for p, es in powers.items():
        es.sort()
        for i, e in enumerate(es):
            out[n - len(es) + i] *= p**e
    return [x for x in out if x != 1]


def tensor_quotient(L1: Lattice, L2: Lattice) -> list[int]:
    """Invariants of Z^(r1 r2) / (L1 (x) L2), from Kronecker products of basis rows."""
    r1, r2 = L1.ambient_rank, L2.ambient_rank
    rows = [[x * y for x in u for y in v] for u in L1.rows for v in L2.rows]
    D = L1.determinant() ** r2 * L2.determinant() ** r1
    T = Lattice.from_generators(rows, r1 * r2, D)
    return quotient_invariants(T, Lattice.standard(r1 * r2))
