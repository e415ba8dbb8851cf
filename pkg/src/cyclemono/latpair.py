"""Lattices with a finite-order automorphism, Orlik blocks and witnesses.

A pair is stored as an integer matrix acting on column coordinates.  A
witness U certifies an isomorphism source -> target when
U * h_source = h_target * U and U is unimodular.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd

from . import intmat
from .intpoly import IntPoly, factor_into_cyclotomics, has_simple_zeros


class NotAutomorphismError(ValueError):
    pass


def _lcm(a, b):
    return a * b // gcd(a, b)


def _sparse_apply(cols, vec):
    # vec and result as {index: value}
    out = {}
    for k, x in vec.items():
        for i, y in cols[k].items():
            s = out.get(i, 0) + x * y
            if s:
                out[i] = s
            else:
                out.pop(i, None)
    return out


@dataclass(eq=False)
class LatticePair:
    matrix: list
    _order: int = field(default=None, repr=False)
    _cols: list = field(default=None, repr=False)

    @property
    def rank(self):
        return len(self.matrix)

    @property
    def cols(self):
        if self._cols is None:
            self._cols = intmat.column_dicts(self.matrix)
        return self._cols

    def apply(self, vec):
        """h applied to a sparse vector {index: value}."""
        return _sparse_apply(self.cols, vec)

    @property
    def order(self):
        if self._order is None:
            self._order = compute_order(self)
        return self._order

    def power(self, k):
        return matrix_power(self.matrix, k)

    def to_json(self):
        return {"rank": self.rank, "matrix": self.matrix}


def _unit_image(col):
    if len(col) == 1:
        (k, x), = col.items()
        if x == 1:
            return k
    return None


def compute_order(pair, limit=None):
    """Smallest k >= 1 with h^k = 1: the lcm of the orbit lengths of the basis vectors."""
    n = pair.rank
    if n == 0:
        return 1
    limit = limit or max(4 * n * n, 64)
    lengths = [None] * n
    order = 1
    for i in range(n):
        if lengths[i] is not None:
            continue
        start = {i: 1}
        v = pair.apply(start)
        k = 1
        while v != start:
            v = pair.apply(v)
            k += 1
            if k > limit:
                return _order_from_charpoly(pair)
        # e_i -> e_j under h puts e_j on the same orbit
        j = i
        while lengths[j] is None:
            lengths[j] = k
            j = _unit_image(pair.cols[j])
            if j is None:
                break
        order = _lcm(order, k)
    return order


def matrix_power(A, k):
    result = intmat.identity(len(A))
    base = A
    while k:
        if k & 1:
            result = intmat.matmul(result, base)
        k >>= 1
        if k:
            base = intmat.matmul(base, base)
    return result


def _order_from_charpoly(pair):
    try:
        exps = factor_into_cyclotomics(char_poly(pair))
    except ValueError:
        raise NotAutomorphismError("automorphism of infinite order") from None
    N = 1
    for m in exps:
        N = _lcm(N, m)
    if not intmat.is_identity(matrix_power(pair.matrix, N)):
        raise NotAutomorphismError("automorphism of infinite order")
    p = 2
    rest = N
    while rest > 1:
        if rest % p == 0:
            while rest % p == 0:
                rest //= p
            while N % p == 0 and intmat.is_identity(matrix_power(pair.matrix, N // p)):
                N //= p
        p += 1
    return N


def companion(p):
    """Companion matrix of a monic polynomial: e_i -> e_{i+1}, e_last -> -sum c_i e_i."""
    deg = p.degree
    C = intmat.zeros(deg, deg)
    for i in range(deg - 1):
        C[i + 1][i] = 1
    for i in range(deg):
        C[i][deg - 1] = -p.coeffs[i]
    return C


def orlik_block(p):
    if not p.is_monic():
        raise ValueError("Orlik block needs a monic polynomial")
    if not has_simple_zeros(p):
        raise ValueError("Orlik block needs a product of distinct cyclotomic polynomials")
    exps = factor_into_cyclotomics(p)
    order = 1
    for m in exps:
        order = _lcm(order, m)
    return LatticePair(companion(p), _order=order)


def direct_sum(pairs):
    pairs = list(pairs)
    order = 1
    for q in pairs:
        order = _lcm(order, q.order)
    return LatticePair(intmat.block_diag([q.matrix for q in pairs]), _order=order)


def char_poly(pair):
    return IntPoly(intmat.charpoly(pair.matrix))


def poly_at(pair, q):
    """The integer matrix q(h), built column by column from sparse orbits."""
    n = pair.rank
    out = intmat.zeros(n, n)
    for i in range(n):
        v = {i: 1}
        acc = {}
        for k, c in enumerate(q.coeffs):
            if k:
                v = pair.apply(v)
            if c:
                for r, x in v.items():
                    acc[r] = acc.get(r, 0) + c * x
        for r, x in acc.items():
            out[r][i] = x
    return out


def snf_invariants(pair, q):
    return intmat.snf_diagonal(poly_at(pair, q))


def orbit_sum_matrix(pair, N):
    """sum_{i<N} h^i for N a multiple of the order of h.

    Then S h = S, so the column of e_j equals the column of h e_j; only one
    column per unit-vector cycle is computed.
    """
    if N % pair.order:
        raise ValueError("N must be a multiple of the order")
    n = pair.rank
    cols = [None] * n
    for i in range(n):
        if cols[i] is not None:
            continue
        chain = [i]
        j = _unit_image(pair.cols[i])
        while j is not None and cols[j] is None and j not in chain:
            chain.append(j)
            j = _unit_image(pair.cols[j])
        if j is not None and cols[j] is not None:
            col = cols[j]
        else:
            v = {i: 1}
            acc = {}
            for _ in range(N):
                for r, x in v.items():
                    acc[r] = acc.get(r, 0) + x
                v = pair.apply(v)
            col = acc
        for k in chain:
            cols[k] = col
    out = intmat.zeros(n, n)
    for i, col in enumerate(cols):
        for r, x in col.items():
            if x:
                out[r][i] = x
    return out


def orbit_sum_snf(pair, N=None):
    """Smith invariants of sum_{i<N} h^i, N defaulting to the order."""
    return intmat.snf_diagonal(orbit_sum_matrix(pair, N or pair.order))


def orbit_sum_poly(k):
    """1 + t + ... + t^(k-1)."""
    return IntPoly([1] * k)


@dataclass
class IsomorphismWitness:
    matrix: list
    inverse: list = None

    def compose(self, first):
        """self after first."""
        inv = None
        if self.inverse is not None and first.inverse is not None:
            inv = intmat.matmul(first.inverse, self.inverse)
        return IsomorphismWitness(intmat.matmul(self.matrix, first.matrix), inv)

    def to_json(self):
        return self.matrix


def witness_from_basis(P, Pinv=None):
    """Witness for a new basis given as the columns of P (old coordinates).

    If h P = P M then U = P^-1 satisfies U h = M U.
    """
    if Pinv is None:
        Pinv = intmat.inverse_unimodular(P)
        if Pinv is None:
            raise ValueError("basis change is not unimodular")
    return IsomorphismWitness(Pinv, P)


def is_unimodular(U):
    """det U = +-1, certified by an integral inverse when one is attached."""
    if U.inverse is not None and intmat.is_identity(intmat.matmul(U.matrix, U.inverse)):
        return True
    return abs(intmat.det(U.matrix)) == 1


def verify_witness(source, target, U):
    if not isinstance(U, IsomorphismWitness):
        U = IsomorphismWitness(U)
    if source.rank != target.rank or len(U.matrix) != source.rank:
        raise ValueError("rank mismatch")
    if any(len(row) != source.rank for row in U.matrix):
        raise ValueError("rank mismatch")
    if intmat.matmul(U.matrix, source.matrix) != intmat.matmul(target.matrix, U.matrix):
        return False
    return is_unimodular(U)


def _krylov_det(pair, a):
    cols = [a]
    v = {i: x for i, x in enumerate(a) if x}
    for _ in range(pair.rank - 1):
        v = pair.apply(v)
        cols.append([v.get(i, 0) for i in range(pair.rank)])
    return intmat.det(intmat.transpose(cols))


@dataclass
class GeneratorSearch:
    vector: list = None
    exhausted: bool = False
    tried: int = 0


def _shell(n, bound):
    """Integer vectors of length n with max |entry| exactly bound."""
    for v in itertools.product(range(-bound, bound + 1), repeat=n):
        if max(map(abs, v)) == bound:
            yield v


def find_generating_element(pair, budget=10000):
    """Search for a0 whose orbit a0, h a0, ... is a Z-basis.

    Candidates: the standard basis, then vectors with max |entry| = 1, 2, ...
    Returns a GeneratorSearch; exhausted=True means the budget ran out,
    which is not a proof that no generating element exists.
    """
    if not has_simple_zeros(char_poly(pair)):
        raise ValueError("characteristic polynomial has repeated zeros")
    n = pair.rank
    tried = 0

    def candidates():
        units = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        yield from units
        units = set(units)
        bound = 1
        while True:
            for v in _shell(n, bound):
                if v not in units:
                    yield v
            bound += 1

    if n == 0:
        return GeneratorSearch([], False, 0)
    for v in candidates():
        if tried >= budget:
            return GeneratorSearch(None, True, tried)
        tried += 1
        if abs(_krylov_det(pair, list(v))) == 1:
            return GeneratorSearch(list(v), False, tried)
        tried += 1
        if abs(_krylov_det(pair, list(v))) == 1:
            return GeneratorSearch(list(v), False, tried)
    return GeneratorSearch(None, True, tried)
