import random

import pytest
from hypothesis import given, strategies as st

from cyclemono import intmat
from cyclemono.intpoly import IntPoly, factor_into_cyclotomics, product_of_cyclotomics
from cyclemono.latpair import (
    IsomorphismWitness,
    LatticePair,
    char_poly,
    direct_sum,
    find_generating_element,
    matrix_power,
    orbit_sum_poly,
    orbit_sum_snf,
    orlik_block,
    snf_invariants,
    verify_witness,
)
from cyclemono.loblock import lo_block, lo_equivalence


def tm(b):
    return IntPoly.t_pow_minus_one(b)


T1 = IntPoly([-1, 1])


def random_unimodular(n, rng, steps=12):
    U = intmat.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        f = rng.choice([-2, -1, 1, 2])
        for row in U:
            row[j] += f * row[i]
    return U


def conjugate(pair, U):
    Uinv = intmat.inverse_unimodular(U)
    return LatticePair(intmat.matmul(intmat.matmul(U, pair.matrix), Uinv))


def test_orlik_block_examples():
    assert orlik_block(T1).matrix == [[1]]
    C = orlik_block(tm(5))
    assert C.order == 5 and char_poly(C) == tm(5)
    assert all(sum(col) == 1 for col in zip(*C.matrix))
    Q = orlik_block(IntPoly([1, 1, 1]))
    assert Q.matrix == [[0, -1], [1, -1]] and Q.order == 3
    assert intmat.is_identity(matrix_power(Q.matrix, 3))


def test_orlik_block_rejects_repeated_zeros():
    with pytest.raises(ValueError):
        orlik_block(T1 * T1)


def test_direct_sum_examples():
    assert direct_sum([orlik_block(T1), orlik_block(T1)]).matrix == intmat.identity(2)
    assert char_poly(direct_sum([orlik_block(tm(5)), orlik_block(T1)])) == tm(5) * T1
    assert direct_sum([]).rank == 0


def test_char_poly_examples():
    assert char_poly(LatticePair(intmat.identity(3))) == T1 ** 3


def test_snf_examples():
    q = orbit_sum_poly(6)
    assert snf_invariants(lo_block(6, 2), q) == [2]
    assert snf_invariants(lo_block(6, 3), q) == [3]
    assert snf_invariants(orlik_block(T1), T1) == []


def test_verify_witness_examples():
    I5 = IsomorphismWitness(intmat.identity(5))
    C = orlik_block(tm(5))
    assert verify_witness(C, C, I5)
    assert not verify_witness(C, direct_sum([orlik_block(T1)] * 5), I5)
    assert verify_witness(lo_block(6, 2), lo_block(6, 10), lo_equivalence(6, 2, 10))


def test_generating_element_examples():
    res = find_generating_element(orlik_block(tm(5)))
    assert res.vector == [1, 0, 0, 0, 0] and not res.exhausted
    with pytest.raises(ValueError):
        find_generating_element(LatticePair(intmat.identity(2)))


def test_generating_element_after_conjugation():
    rng = random.Random(3)
    for _ in range(5):
        U = random_unimodular(3, rng, steps=4)
        pair = conjugate(orlik_block(tm(3)), U)
        res = find_generating_element(pair, budget=200000)
        assert res.vector is not None
        cols = [res.vector]
        for _ in range(2):
            cols.append(intmat.matvec(pair.matrix, cols[-1]))
        assert abs(intmat.det(intmat.transpose(cols))) == 1


def test_budget_exhaustion_is_not_a_proof():
    # a generating element exists but is not a standard basis vector
    # generators of Z[C_4] are +-h^k a0 only; none of these columns is a standard vector
    pair = conjugate(orlik_block(tm(4)), [[1, 1, 0, 0], [1, 2, 0, 0], [0, 0, 1, 1], [0, 0, 1, 2]])
    res = find_generating_element(pair, budget=2)
    assert res.vector is None and res.exhausted and res.tried == 2
    assert find_generating_element(pair).vector is not None


simple = st.sets(st.integers(1, 12), min_size=1, max_size=3).map(
    lambda ms: product_of_cyclotomics({m: 1 for m in ms}))


@given(st.lists(simple, min_size=1, max_size=3))
def test_char_poly_of_direct_sum_multiplies(ps):
    prod = IntPoly(1)
    for p in ps:
        prod = prod * p
    assert char_poly(direct_sum([orlik_block(p) for p in ps])) == prod


@given(simple)
def test_orlik_order_is_lcm(p):
    from math import lcm
    expected = 1
    for m in factor_into_cyclotomics(p):
        expected = lcm(expected, m)
    pair = orlik_block(p)
    assert pair.order == expected
    assert LatticePair(pair.matrix).order == expected


@given(st.integers(1, 12), st.integers(-12, 12), st.integers(0, 2 ** 32))
def test_snf_invariant_under_conjugation(d, c, seed):
    pair = direct_sum([lo_block(d, c), orlik_block(T1)])
    U = random_unimodular(pair.rank, random.Random(seed))
    q = orbit_sum_poly(d)
    assert snf_invariants(conjugate(pair, U), q) == snf_invariants(pair, q)


@given(st.integers(1, 8), st.integers(-8, 8), st.integers(0, 2 ** 32))
def test_orbit_sum_shortcut_matches_polynomial(d, c, seed):
    pair = direct_sum([lo_block(d, c), orlik_block(tm(3))])
    U = random_unimodular(pair.rank, random.Random(seed))
    conj = conjugate(pair, U)
    N = conj.order
    assert orbit_sum_snf(conj, N) == snf_invariants(conj, orbit_sum_poly(N))
    assert intmat.is_identity(matrix_power(conj.matrix, N))


@given(st.integers(2, 5), st.integers(0, 2 ** 32))
def test_witness_composition(n, seed):
    rng = random.Random(seed)
    A = direct_sum([orlik_block(tm(n)), orlik_block(T1)])
    U = random_unimodular(A.rank, rng)
    V = random_unimodular(A.rank, rng)
    B = conjugate(A, U)
    C = conjugate(B, V)
    WU = IsomorphismWitness(U, intmat.inverse_unimodular(U))
    WV = IsomorphismWitness(V, intmat.inverse_unimodular(V))
    assert verify_witness(A, B, WU) and verify_witness(B, C, WV)
    assert verify_witness(A, C, WV.compose(WU))
