"""The lattices Lo(d, c) and constructive isomorphisms between them.

Lo(d, c) has basis (gamma, delta_1, ..., delta_{d-1}); h fixes gamma,
shifts delta_j to delta_{j+1}, and delta_d := c*gamma - sum_{j<d} delta_j.
Coordinates: index 0 is gamma, index j is delta_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from . import intmat
from .intpoly import IntPoly
from .latpair import (
    IsomorphismWitness,
    LatticePair,
    direct_sum,
    matrix_power,
    orbit_sum_poly,
    orlik_block,
    snf_invariants,
    verify_witness,
    witness_from_basis,
)


class NotIsomorphicError(ValueError):
    pass


def lo_matrix(d, c):
    if d == 1:
        return [[1]]
    M = intmat.zeros(d, d)
    M[0][0] = 1
    for j in range(1, d - 1):
        M[j + 1][j] = 1
    M[0][d - 1] = c
    for j in range(1, d):
        M[j][d - 1] = -1
    return M


@lru_cache(maxsize=4096)
def lo_block(d, c):
    if d < 1:
        raise ValueError("d must be positive")
    return LatticePair(lo_matrix(d, c), _order=d)


def delta_vec(d, c, j):
    """Coordinates of delta_j (index taken mod d) in Lo(d, c)."""
    j %= d
    v = [0] * d
    if j:
        v[j] = 1
    else:
        v[0] = c
        for i in range(1, d):
            v[i] = -1
    return v


def _add(u, v, f=1):
    return [x + f * y for x, y in zip(u, v)]


def _check(source, target, U, stage):
    if not verify_witness(source, target, U):
        raise ArithmeticError(f"witness check failed at stage: {stage}")
    return U


@dataclass
class Decomposition:
    source: LatticePair
    target: LatticePair
    witness: IsomorphismWitness
    blocks: list


def power_decompose(d, c, v):
    """Split (Lo(d,c), h^v) into (g-1) Or(t^b - 1) + Lo(b, c), g = gcd(d, v), b = d/g.

    The delta's fall into g cycles of length b under h^v; the class of
    delta_d is the last one.  The first g-1 cycles are kept as they are and
    the last block uses beta_j = sum over all cycles of their j-th member.
    """
    if d < 1 or v < 1:
        raise ValueError("d and v must be positive")
    g = gcd(d, v)
    b = d // g
    base = lo_block(d, c)
    source = LatticePair(_power(base.matrix, v, d))
    cols = []
    for r in range(1, g):
        for k in range(b):
            cols.append(delta_vec(d, c, r + k * v))
    gamma = [0] * d
    gamma[0] = 1
    cols.append(gamma)
    for k in range(b - 1):
        beta = [0] * d
        for r in range(1, g + 1):
            beta = _add(beta, delta_vec(d, c, r + k * v))
        cols.append(beta)
    P = intmat.transpose(cols)
    blocks = [("Or", IntPoly.t_pow_minus_one(b))] * (g - 1) + [("Lo", (b, c))]
    target = direct_sum([orlik_block(IntPoly.t_pow_minus_one(b))] * (g - 1) + [lo_block(b, c)])
    U = witness_from_basis(P)
    _check(source, target, U, "cycle regrouping")
    return Decomposition(source, target, U, blocks)


def _power(M, v, period):
    # h has order `period`, so only v mod period matters
    return matrix_power(M, v % period)


def _prime_factors(n):
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _val(p, n):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def lo_gcd(d, c):
    return gcd(d, c) if c else d


def basis_change_coefficients(d, c, ct):
    """(a, b) with ct = b*d + a*c and gcd(a, d) = 1, for c = gcd(d, c) = gcd(d, ct)."""
    if ct == c:
        return 1, 0
    bt = 1
    for p in _prime_factors(d):
        if ct and _val(p, d) == _val(p, abs(ct)):
            bt *= p
    b = -bt - abs(ct)
    a = ct // c - b * (d // c)
    return a, b


@lru_cache(maxsize=4096)
def lo_basis_change(d, c, ct):
    """Witness Lo(d, c) -> Lo(d, ct) from the basis delta~_j = b*gamma + sum_{i<a} delta_{j+i}."""
    if c != lo_gcd(d, c):
        raise ValueError("c must be the normalised representative gcd(d, c)")
    if lo_gcd(d, ct) != c:
        raise NotIsomorphicError("gcd(d, c) and gcd(d, c~) differ")
    a, b = basis_change_coefficients(d, c, ct)
    if a <= 0 or gcd(a, d) != 1 or b * d + a * c != ct:
        raise ArithmeticError("basis change coefficients violate their contract")
    source = lo_block(d, c)
    target = lo_block(d, ct)
    if d == 1:
        return a, b, IsomorphismWitness([[1]], [[1]])
    full, part = divmod(a, d)
    cols = [[1] + [0] * (d - 1)]
    for j in range(1, d):
        vec = [0] * d
        vec[0] = b + full * c
        for i in range(part):
            vec = _add(vec, delta_vec(d, c, j + i))
        cols.append(vec)
    U = witness_from_basis(intmat.transpose(cols))
    _check(source, target, U, "Lo basis change")
    return a, b, U


def inverse_witness(U):
    if U.inverse is None:
        inv = intmat.inverse_unimodular(U.matrix)
        if inv is None:
            raise ValueError("witness is not unimodular")
        return IsomorphismWitness(inv, U.matrix)
    return IsomorphismWitness(U.inverse, U.matrix)


def lo_equivalence(d, c1, c2):
    """Witness Lo(d, c1) -> Lo(d, c2), composed through the normalised c = gcd(d, c1)."""
    c = lo_gcd(d, c1)
    if lo_gcd(d, c2) != c:
        raise NotIsomorphicError("gcd(d, c) and gcd(d, c~) differ")
    _, _, W1 = lo_basis_change(d, c, c1)
    _, _, W2 = lo_basis_change(d, c, c2)
    U = W2.compose(inverse_witness(W1))
    return _check(lo_block(d, c1), lo_block(d, c2), U, "Lo equivalence")


def lo_unit_to_orlik(d, c):
    """Witness Lo(d, +-1) -> Or(t^d - 1) using the basis delta_1, ..., delta_d."""
    if c not in (1, -1) and d > 1:
        raise ValueError("needs c = +-1")
    if d == 1:
        return IsomorphismWitness([[1]], [[1]])
    P = intmat.transpose([delta_vec(d, c, j) for j in range(1, d + 1)])
    U = witness_from_basis(P)
    return _check(lo_block(d, c), orlik_block(IntPoly.t_pow_minus_one(d)), U, "Lo(d, 1) to Or")


def lo_coprime_to_orlik(d, c):
    """Witness Lo(d, c) + Or(t-1) -> Or(t^d - 1) + Or(t-1) when gcd(d, c) = 1."""
    if lo_gcd(d, c) != 1:
        raise NotIsomorphicError("gcd(d, c) != 1")
    U1 = lo_equivalence(d, c, 1)
    U2 = lo_unit_to_orlik(d, 1)
    U = U2.compose(U1)
    one = IsomorphismWitness([[1]], [[1]])
    W = IsomorphismWitness(intmat.block_diag([U.matrix, one.matrix]),
                           intmat.block_diag([U.inverse, one.inverse]))
    tminus1 = orlik_block(IntPoly([-1, 1]))
    source = direct_sum([lo_block(d, c), tminus1])
    target = direct_sum([orlik_block(IntPoly.t_pow_minus_one(d)), tminus1])
    return _check(source, target, W, "coprime Lo to Or")


def lo_gcd_invariant(d, c):
    """gcd(d, c), cross-checked against the Smith invariant of sum_{i<d} h^i."""
    g = lo_gcd(d, c)
    snf = snf_invariants(lo_block(d, c), orbit_sum_poly(d))
    if snf != [g]:
        raise ArithmeticError(f"Smith invariant {snf} disagrees with gcd {g}")
    return g


def lo_plus_fixed_invariants(d, c):
    """Smith invariants of sum_{i<d} h^i on Lo(d, c) + Or(t-1)."""
    pair = direct_sum([lo_block(d, c), orlik_block(IntPoly([-1, 1]))])
    return snf_invariants(pair, orbit_sum_poly(d))
