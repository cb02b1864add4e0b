import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from jacobitrees.intlinalg import (
    IntLattice,
    LinalgError,
    SnfResult,
    SparseIntMatrix,
    cache_key,
    cache_load,
    cache_store,
    cokernel,
    normal_form,
    rank_modp,
    rank_modp_rows,
    smith_normal_form,
    snf_from_rows,
    vector_to_row,
)
from jacobitrees.lie import lyndon_basis
from jacobitrees.relations import as_relations, ihx_relations, relation_union
from jacobitrees.trees import TreeVector, parse_tree, tree_list


def fraction_rank(rows, cols):
    """Independent rank oracle by rational Gaussian elimination."""
    mat = [[Fraction(r.get(j, 0)) for j in range(cols)] for r in rows]
    rank = 0
    for col in range(cols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = 1 / mat[rank][col]
        mat[rank] = [x * inv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def test_snf_diag():
    m = SparseIntMatrix(rows=2, cols=2, entries={(0, 0): 2, (1, 1): 4})
    res = smith_normal_form(m)
    assert res.invariant_factors == [2, 4]
    assert res.cokernel_text() == "Z/2 + Z/4"


def test_snf_as2_matrix():
    m = SparseIntMatrix(rows=1, cols=2, entries={(0, 0): 1, (0, 1): 1})
    res = smith_normal_form(m)
    assert res.rank == 1
    assert res.free_rank == 1
    assert not res.torsion  # cokernel Z


def test_snf_zero_matrix():
    m = SparseIntMatrix(rows=3, cols=3, entries={})
    res = smith_normal_form(m)
    assert res.rank == 0
    assert res.free_rank == 3


def test_snf_torsion_mix():
    # rows (2,0),(0,3): factors 1,6 after chain fix?  gcd(2,3)=1, lcm=6
    m = SparseIntMatrix(rows=2, cols=2, entries={(0, 0): 2, (1, 1): 3})
    res = smith_normal_form(m)
    assert res.invariant_factors == [1, 6]


def test_divisibility_chain_property():
    m = SparseIntMatrix(
        rows=3, cols=3, entries={(0, 0): 4, (1, 1): 6, (2, 2): 10}
    )
    res = smith_normal_form(m)
    for a, b in zip(res.invariant_factors, res.invariant_factors[1:]):
        assert b % a == 0
    # determinant invariance: product of factors = |det|
    prod = 1
    for d in res.invariant_factors:
        prod *= d
    assert prod == 4 * 6 * 10


@given(st.integers(0, 10_000))
@settings(max_examples=50, deadline=None)
def test_snf_permutation_invariance(seed):
    rng = random.Random(seed)
    rows = rng.randint(1, 5)
    cols = rng.randint(1, 5)
    entries = {
        (i, j): rng.randint(-4, 4)
        for i in range(rows)
        for j in range(cols)
        if rng.random() < 0.6
    }
    m = SparseIntMatrix(rows=rows, cols=cols, entries=dict(entries))
    res = smith_normal_form(m)
    rp = list(range(rows))
    cp = list(range(cols))
    rng.shuffle(rp)
    rng.shuffle(cp)
    perm = {(rp[i], cp[j]): v for (i, j), v in entries.items()}
    res2 = smith_normal_form(SparseIntMatrix(rows=rows, cols=cols, entries=perm))
    assert res.invariant_factors == res2.invariant_factors


@given(st.integers(0, 10_000))
@settings(max_examples=50, deadline=None)
def test_rank_matches_fraction_oracle(seed):
    rng = random.Random(seed)
    rows = [
        {j: rng.randint(-5, 5) for j in range(4) if rng.random() < 0.7}
        for _ in range(rng.randint(1, 6))
    ]
    rows = [{j: v for j, v in r.items() if v} for r in rows]
    res = snf_from_rows(rows, 4)
    assert res.rank == fraction_rank(rows, 4)


def test_cokernel_as_ihx_degree3():
    basis = tree_list(3)
    res = cokernel(
        relation_union([as_relations(3), ihx_relations(3)]), basis
    )
    assert res.free_rank == 2  # Lie(3) = Z^2
    assert not res.torsion


def test_cokernel_empty_stream():
    basis = tree_list(2)
    res = cokernel(iter(()), basis)
    assert res.free_rank == 2
    assert res.rank == 0


def test_cokernel_unknown_basis_element():
    basis = tree_list(2)
    bad = TreeVector.single(parse_tree("[[1,2],3]"))
    with pytest.raises(LinalgError):
        cokernel(iter([bad]), basis)


def test_rank_modp_as_ihx_degree4():
    # 120 - 3! independent relation rows; spec quotes quotient rank 6
    basis = tree_list(4)
    rels = list(relation_union([as_relations(4), ihx_relations(4)]))
    ranks = rank_modp(iter(rels), basis, primes=(10007, 65537))
    assert ranks == {10007: 114, 65537: 114}
    exact = cokernel(iter(rels), basis)
    assert exact.rank == 114 and exact.free_rank == 6


def test_rank_modp_agrees_with_exact_all_kinds():
    from jacobitrees.relations import stu2_relations

    for n in (3, 4):
        for parity in (None, "odd", "even"):
            sets = [as_relations(n), ihx_relations(n)]
            if parity:
                sets.append(stu2_relations(n, parity))
            rels = list(relation_union(sets))
            basis = tree_list(n)
            exact = cokernel(iter(rels), basis)
            ranks = rank_modp(iter(rels), basis)
            assert set(ranks.values()) == {exact.rank}


def test_rank_modp_zero_stream():
    assert rank_modp_rows(iter(()), 5) == {p: 0 for p in (2147483629, 2147483587)}


def test_rank_modp_prime_validation():
    with pytest.raises(LinalgError):
        rank_modp_rows(iter(()), 3, primes=(7, 7))
    with pytest.raises(LinalgError):
        rank_modp_rows(iter(()), 3, primes=(2, 5))


def test_normal_form_lattice_member():
    basis = tree_list(2)
    rels = list(as_relations(2).vectors())
    v = rels[0]
    nf = normal_form(v, iter(rels), basis)
    assert nf.is_zero


def test_normal_form_degree2_representatives():
    basis = tree_list(2)
    rels = list(as_relations(2).vectors())
    a = TreeVector.single(parse_tree("[1,2]"))
    b = TreeVector.single(parse_tree("[2,1]"))
    nfa = normal_form(a, iter(rels), basis)
    nfb = normal_form(b, iter(rels), basis)
    assert not nfa.is_zero
    assert normal_form(a + b, iter(rels), basis).is_zero
    # b = -a modulo the lattice, so their representatives differ
    assert (nfa + nfb).is_zero or normal_form(nfa + nfb, iter(rels), basis).is_zero


def test_normal_form_idempotent(rng):
    basis = tree_list(3)
    rels = list(relation_union([as_relations(3), ihx_relations(3)]))
    for _ in range(10):
        terms = {
            t: rng.randint(-3, 3) for t in rng.sample(list(basis), 4)
        }
        terms = {t: c for t, c in terms.items() if c}
        if not terms:
            continue
        v = TreeVector.from_dict(terms)
        nf = normal_form(v, iter(rels), basis)
        if nf.is_zero:
            continue
        assert normal_form(nf, iter(rels), basis).as_dict() == nf.as_dict()


def test_normal_form_saturated_double():
    # AS+IHX at n=3 is saturated; twice a Lyndon basis tree stays nonzero
    basis = tree_list(3)
    rels = list(relation_union([as_relations(3), ihx_relations(3)]))
    w, t = lyndon_basis(3)[0]
    v = TreeVector.single(t, 2)
    assert not normal_form(v, iter(rels), basis).is_zero


def test_matrix_dump_roundtrip():
    m = SparseIntMatrix(rows=2, cols=3, entries={(0, 1): -7, (1, 2): 5})
    text = m.dump()
    assert text.splitlines()[0] == "2 3 2"
    m2 = SparseIntMatrix.load(text)
    assert m2.entries == m.entries


def test_snf_result_json_roundtrip():
    res = SnfResult(invariant_factors=[1, 2, 6], rank=3, cols=5)
    res2 = SnfResult.from_json_obj(res.to_json_obj())
    assert res2 == res
    assert res.free_rank == 2
    assert res.torsion == [2, 6]


def test_cache_roundtrip(tmp_path):
    res = SnfResult(invariant_factors=[1, 1], rank=2, cols=4)
    key = cache_key(n=3, kinds=["as"], parity=None, method="snf")
    assert cache_load(str(tmp_path), key) is None
    cache_store(str(tmp_path), key, res)
    assert cache_load(str(tmp_path), key) == res


def test_exact_threshold_guard():
    with pytest.raises(LinalgError, match="exceeds"):
        IntLattice(300_000)
