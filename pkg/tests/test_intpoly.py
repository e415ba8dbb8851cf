import pytest
import sympy
from hypothesis import given, strategies as st

from cyclemono.intpoly import (
    IntPoly,
    NotCyclotomicError,
    NotDivisibleError,
    cyclotomic,
    div_exact,
    divisor_chain_decomposition,
    factor_into_cyclotomics,
    has_simple_zeros,
    mul,
    pow_,
    product_of_cyclotomics,
)

T = sympy.Symbol("t")


def P(*coeffs):
    return IntPoly(list(coeffs))


def tm(b):
    return IntPoly.t_pow_minus_one(b)


def test_cyclotomic_small():
    assert cyclotomic(1) == P(-1, 1)
    assert cyclotomic(6) == P(1, -1, 1)


@pytest.mark.parametrize("m", range(1, 61))
def test_cyclotomic_matches_sympy(m):
    ref = sympy.Poly(sympy.cyclotomic_poly(m, T), T).all_coeffs()[::-1]
    assert cyclotomic(m) == IntPoly([int(x) for x in ref])


def test_arithmetic_examples():
    assert div_exact(tm(3), P(-1, 1)) == P(1, 1, 1)
    assert mul(P(-1, 1), P(1, 1)) == P(-1, 0, 1)
    assert pow_(tm(3), 2) == P(1, 0, 0, -2, 0, 0, 1)


def test_div_exact_rejects_remainder():
    with pytest.raises(NotDivisibleError):
        div_exact(P(1, 0, 1), P(-1, 1))


def test_pretty_print():
    assert str(tm(5)) == "t^5 - 1"
    assert str(P(1, 1, 1)) == "t^2 + t + 1"


def test_factor_examples():
    assert factor_into_cyclotomics(tm(5)) == {1: 1, 5: 1}
    assert factor_into_cyclotomics(tm(3) ** 2 * P(1, 1, 1)) == {1: 2, 3: 3}
    with pytest.raises(NotCyclotomicError):
        factor_into_cyclotomics(P(2, 0, 1))


def test_divisor_chain_examples():
    assert divisor_chain_decomposition(tm(5) * P(-1, 1)) == [tm(5), P(-1, 1)]
    p = tm(3) ** 2 * P(1, 1, 1)
    assert divisor_chain_decomposition(p) == [tm(3), tm(3), P(1, 1, 1)]
    assert divisor_chain_decomposition(P(-1, 1)) == [P(-1, 1)]


exps = st.dictionaries(st.integers(1, 40), st.integers(0, 3), max_size=6).filter(
    lambda e: sum(sympy.totient(m) * k for m, k in e.items()) <= 200)


@given(exps)
def test_factor_roundtrip(e):
    p = product_of_cyclotomics(e)
    assert factor_into_cyclotomics(p) == {m: k for m, k in e.items() if k}


@given(exps)
def test_divisor_chain_properties(e):
    p = product_of_cyclotomics(e)
    chain = divisor_chain_decomposition(p)
    prod = IntPoly(1)
    for q in chain:
        prod = prod * q
    assert prod == p
    for big, small in zip(chain, chain[1:]):
        div_exact(big, small)
    if chain:
        assert has_simple_zeros(chain[0])


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6),
       st.lists(st.integers(-5, 5), min_size=1, max_size=6))
def test_mul_matches_sympy(a, b):
    ref = sympy.Poly(sympy.Poly(a[::-1], T) * sympy.Poly(b[::-1], T), T).all_coeffs()[::-1]
    assert mul(IntPoly(a), IntPoly(b)) == IntPoly([int(x) for x in ref])
