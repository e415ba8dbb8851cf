"""E^1 lattices, the d^1 matrices and the X-class filtration of H_{n-1}(G, G_{n-1}).

Only the pieces of the spectral sequence of the filtration G_s that enter
the rank and basis computation are modelled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd

from . import intmat
from .cubechain import (
    CubeChain,
    _group_data,
    _chain_R,
    boundary1,
    canonical_key,
    torus_cell,
)
from .cyclecomb import (
    Exponents,
    _classify,
    almost_thick_family,
    beta2,
    cell_vectors,
    claim1_sequence,
    sign_face,
    sign_thick,
    thick_family,
    torus_dirs,
    up1,
    up2,
)


def _lcm(a, b):
    return a * b // gcd(a, b)


def s_range(n):
    """s = floor((n+2)/2), ..., n-1."""
    return list(range((n + 2) // 2, n))


def e1_rank(n, s):
    """Rank of E^1_{s,n-1-s}: one generator per thick set of size s."""
    return len(thick_family(n, s))


def _check_s(n, s):
    if s not in s_range(n):
        raise ValueError(f"s = {s} outside {s_range(n)}")


def d1_coefficient(e, B):
    """Factor in front of z_{B^(2)} in the row of B: -a_{beta2} or -(-1)^n a_n."""
    b2 = beta2(B)
    return -e[b2] if b2 != e.n else -((-1) ** e.n) * e[e.n]


def d1_matrix(e, s):
    """Rows: almost thick B with |B| = s-1; columns: thick A with |A| = s."""
    n = e.n
    _check_s(n, s)
    rows = almost_thick_family(n, s)
    cols = thick_family(n, s)
    index = {A.mask: i for i, A in enumerate(cols)}
    M = intmat.zeros(len(rows), len(cols))
    for r, B in enumerate(rows):
        sg = sign_face(B, up1(B))
        M[r][index[up1(B).mask]] += sg
        M[r][index[up2(B).mask]] += sg * d1_coefficient(e, B)
    return M, rows, cols


def torus_factor(e, B, A):
    """k with Delta_B x pr_B(T_A) = k * Delta_B x T_B, decided in the chain calculus."""
    n, D = e.n, e.d
    dirs = tuple(tuple(D * x for x in w) for w in torus_dirs(e, A))
    proj = CubeChain.from_cell(n, D, B.mask, (0,) * n, dirs)
    TB = torus_cell(e, B)
    if not TB.terms:
        raise ArithmeticError("T_B is degenerate")
    (cb, sb), = TB.terms.items()
    if not proj.terms:
        return 0
    (ca, sa), = proj.terms.items()
    ka, va = _group_data(ca, D)
    kb, vb = _group_data(cb, D)
    if ka != kb or (sa * va) % (sb * vb):
        raise ArithmeticError("projected torus is not a multiple of T_B")
    k = (sa * va) // (sb * vb)
    if canonical_key(proj - TB.scaled(k)):
        raise ArithmeticError("projected torus differs from k * T_B")
    return k


def d1_matrix_from_chains(e, s):
    """The same matrix, with entries sign(B, A) * torus_factor(B, A) from the calculus."""
    n = e.n
    _check_s(n, s)
    rows = almost_thick_family(n, s)
    cols = thick_family(n, s)
    M = intmat.zeros(len(rows), len(cols))
    for r, B in enumerate(rows):
        for c, A in enumerate(cols):
            if B.mask & ~A.mask == 0:
                M[r][c] = sign_face(B, A) * torus_factor(e, B, A)
    return M


@dataclass
class InjectivityCertificate:
    full_column_rank: bool
    minor_rows: list
    minor_det: int
    replay_ok: bool
    replay_products: list = field(default_factory=list)
    chain_matrix_agrees: bool = None

    @property
    def ok(self):
        return self.full_column_rank and self.replay_ok and self.chain_matrix_agrees is not False


def _replay(e, M, rows, cols):
    """For every column A follow a gap-shifting cycle of rows ending in A."""
    n = e.n
    abar_last = cell_vectors(e).abar[n + 1]
    rindex = {B.mask: i for i, B in enumerate(rows)}
    cindex = {A.mask: i for i, A in enumerate(cols)}
    products = []
    for A in cols:
        B = next((B for B in rows if up2(B).mask == A.mask), None)
        if B is None:
            return False, products
        seq = claim1_sequence(B)
        prod = 1
        for C in seq:
            row = M[rindex[C.mask]]
            i1, i2 = cindex[up1(C).mask], cindex[up2(C).mask]
            support = [i for i, x in enumerate(row) if x]
            if sorted(support) != sorted([i1, i2]) or row[i1] not in (1, -1):
                return False, products
            # row: sigma * (z_{C1} + f z_{C2}) = 0, so z_{C1} = -f z_{C2}
            prod *= -row[i2] * row[i1]
        products.append(prod)
        # z_A = prod * z_A and prod != 1 force z_A = 0
        if prod != abar_last or prod == 1:
            return False, products
    return True, products


def verify_d1_injective(e, s, with_chains=True):
    M, rows, cols = d1_matrix(e, s)
    r, prow, pcol = intmat.rank_profile(M)
    full = r == len(cols)
    minor = [[M[i][j] for j in range(len(cols))] for i in prow] if full else []
    det = intmat.det(minor) if full else 0
    ok, prods = _replay(e, M, rows, cols)
    agrees = None
    if with_chains:
        agrees = d1_matrix_from_chains(e, s) == M
    return InjectivityCertificate(full and det != 0, prow, det, ok, prods, agrees)


# the X-class filtration

def xclass_vector(d, j, k):
    """[X_j^(k)] in the basis [X_1^(0)], ..., [X_d^(0)]."""
    v = [0] * d
    for l in range(k + 1):
        v[(j - 1 + l) % d] += (-1) ** l * comb(k, l)
    return v


def max_r(n):
    return (n + 3) // 2


@lru_cache(maxsize=1024)
def _xclass_basis(d, r):
    gens = [xclass_vector(d, j, r - 1) for j in range(1, d + 1)]
    return tuple(map(tuple, intmat.hnf_rows(gens)))


def xclass_lattice(e, r):
    """HNF basis (rows) of the lattice spanned by [X_j^(r-1)], j = 1..d."""
    if not 1 <= r <= max_r(e.n):
        raise ValueError("r out of range")
    return [list(row) for row in _xclass_basis(e.d, r)]


def _coords_in(basis, v):
    """Integer coordinates of v in an echelon basis, or None."""
    v = list(v)
    out = []
    for row in basis:
        p = next(i for i, x in enumerate(row) if x)
        if v[p] % row[p]:
            return None
        c = v[p] // row[p]
        out.append(c)
        if c:
            v = [x - c * y for x, y in zip(v, row)]
    return out if not any(v) else None


@dataclass
class XclassStep:
    r: int
    rank: int
    any_d_minus_1_generate: bool
    index_invariants: list

    @property
    def index(self):
        out = 1
        for x in self.index_invariants:
            out *= x
        return out


@lru_cache(maxsize=1024)
def _xclass_steps(d, rmax):
    steps = []
    prev = None
    for r in range(1, rmax + 1):
        basis = _xclass_basis(d, r)
        gens = [xclass_vector(d, j, r - 1) for j in range(1, d + 1)]
        sub = all(intmat.hnf_rows(gens[:i] + gens[i + 1:]) == [list(b) for b in basis]
                  for i in ((0, d - 1) if r > 1 else ()))
        if prev is None:
            inv = []
        else:
            rows = [_coords_in(prev, b) for b in basis]
            if any(x is None for x in rows):
                raise ArithmeticError("filtration step is not a sublattice")
            inv = intmat.snf_diagonal(rows)
            inv = [x for x in inv if x != 1]
        steps.append(XclassStep(r, len(basis), sub if r > 1 else True, inv))
        prev = basis
    return tuple(steps)


def xclass_indices(e):
    """Per r: rank, generation by d-1 elements, and SNF of the inclusion into the previous step."""
    return list(_xclass_steps(e.d, max_r(e.n)))


def xclass_primitive(d):
    """The r = 2 lattice is primitive: all its Smith invariants are 1."""
    return all(x == 1 for x in intmat.snf_diagonal([list(b) for b in _xclass_basis(d, 2)]))


# Claim 2

@dataclass
class Claim2Result:
    r: int
    s: int
    lam: list
    independent_of_j: bool
    support_ok: bool
    coefficient_ok: bool
    order: int

    def ok(self, d):
        return self.independent_of_j and self.support_ok and self.coefficient_ok and self.order == d


def _bpart(e, chain, rows):
    """Coefficients of [Delta_B x T_B] in the part of `chain` over the almost thick B."""
    out = []
    for B in rows:
        part = CubeChain(e.n, e.d)
        for cell, c in chain.terms.items():
            if cell[0] == B.mask:
                part.add_cell(cell, c)
        if not part.terms:
            out.append(0)
            continue
        TB = torus_cell(e, B)
        (cb, sb), = TB.terms.items()
        _, vb = _group_data(cb, e.d)
        mass = 0
        for cell, c in part.terms.items():
            _, v = _group_data(cell, e.d)
            mass += c * v
        if mass % (sb * vb):
            raise ArithmeticError("boundary part is not a multiple of T_B")
        k = mass // (sb * vb)
        if canonical_key(part - TB.scaled(k)):
            raise ArithmeticError("boundary part is not a multiple of T_B")
        out.append(k)
    return out


def claim2_check(e, r, js=None):
    """The almost thick part of d1 R_j^(r-2) and its order modulo the image of d^1."""
    n, d = e.n, e.d
    s = n - r + 2
    M, rows, cols = d1_matrix(e, s)
    js = js or [1, 2]
    lams = [_bpart(e, boundary1(_chain_R(e.a, (j - 1) % d + 1, r - 2)), rows) for j in js]
    lam = lams[0]
    abar = cell_vectors(e).abar
    support = all((x != 0) == (beta2(B) == n) for x, B in zip(lam, rows))
    coef = True
    for x, B in zip(lam, rows):
        if beta2(B) == n:
            p = 1
            for k in B.beginnings:
                p *= abar[k]
            coef = coef and abs(x) == abs(p) and gcd(d, p) == 1
    z = intmat.solve_rational(M, lam)
    if z is None or intmat.matvec(M, z) != lam:
        order = 0
    else:
        order = 1
        for x in z:
            order = _lcm(order, Fraction(x).denominator)
    return Claim2Result(r, s, lam, all(l == lam for l in lams), support, coef, order)


# H_{n-1}(G)

@dataclass
class Hn1Basis:
    rank: int
    labels: list
    relation: str


def assemble_Hn1(e):
    n, d = e.n, e.d
    K = (n + 1) // 2
    labels = [f"X_{j}^({K})" for j in range(1, d)]
    if n % 2 == 0:
        if e1_rank(n, n // 2) != 2:
            raise ArithmeticError("middle E^1 term does not have rank 2")
        labels += ["T_od", "T_ev"]
        rel = f"sum_j X_j^({K}) = c*(T_od + a_1 a_3 ... a_(n-1) T_ev)"
    else:
        rel = f"sum_j X_j^({K}) = 0"
    out = Hn1Basis(len(labels), labels, rel)
    if out.rank != e.mu:
        raise ArithmeticError("rank differs from the Milnor number")
    return out
