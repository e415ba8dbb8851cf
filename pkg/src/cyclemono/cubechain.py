"""Chains of cells Delta_B x e(q + C(w_1, ..., w_m)) on the torus model.

A cell is stored with integer numerators over the common denominator D = d:
(mask, q, W) where mask is the subset B, q the base point numerators
(reduced mod D, zero outside B) and W a tuple of direction numerators.
Cells are normalised by

  R1  sorting the directions (orientation sign tracked),
  R2  dropping cells with linearly dependent directions,
  R4  reducing the base point modulo Z^B,
  R6  reflecting a direction w -> -w with base shift and sign flip, so that
      the first nonzero entry of every direction is positive.

Equality of chains is decided by `canonical_key`, a complete invariant of
the current a chain defines: cells are grouped by the rational subtorus
they lie on (simplex factor, lattice, coset), and each group is described
by its signed volume together with the key of its boundary inside that
subtorus.  A top dimensional current on a connected torus is determined by
these two pieces of data, so the key is exact.  `multiplicity_check` is an
independent test that evaluates multiplicities at sample points by
counting preimages.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import intmat
from .cyclecomb import (
    Exponents,
    _classify,
    _sign_face,
    _sign_thick,
    cell_vectors,
    full_mask,
    members_of,
    thick_family,
    torus_dirs,
)


class ChainCheckError(ArithmeticError):
    pass


# cells

def _project(n, mask, vec):
    return tuple(x if mask >> i & 1 else 0 for i, x in enumerate(vec))


@lru_cache(maxsize=None)
def _independent(W):
    return not W or intmat.rank([list(w) for w in W]) == len(W)


@lru_cache(maxsize=1 << 18)
def normalize_cell(n, D, mask, q, W):
    """Normal form of a cell as (cell, sign), or None for a null cell."""
    W = tuple(_project(n, mask, w) for w in W)
    if not _independent(W):
        return None
    q = list(_project(n, mask, q))
    sign = 1
    dirs = []
    for w in W:
        lead = next(x for x in w if x)
        if lead < 0:
            q = [a + b for a, b in zip(q, w)]
            w = tuple(-x for x in w)
            sign = -sign
        dirs.append(w)
    order = sorted(range(len(dirs)), key=lambda i: dirs[i])
    inv = sum(1 for i in range(len(order)) for j in range(i + 1, len(order)) if order[i] > order[j])
    if inv % 2:
        sign = -sign
    q = tuple(x % D for x in q)
    return (mask, q, tuple(dirs[i] for i in order)), sign


class CubeChain:
    """Formal Z-combination of normalised cells."""

    __slots__ = ("n", "D", "terms")

    def __init__(self, n, D, terms=None):
        self.n = n
        self.D = D
        self.terms = {}
        if terms:
            for cell, c in terms.items():
                self.add_cell(cell, c)

    @classmethod
    def from_cell(cls, n, D, mask, q, W, coef=1):
        ch = cls(n, D)
        ch.add_raw(mask, q, W, coef)
        return ch

    def add_raw(self, mask, q, W, coef=1):
        res = normalize_cell(self.n, self.D, mask, tuple(q), tuple(tuple(w) for w in W))
        if res is not None:
            cell, s = res
            self.add_cell(cell, s * coef)

    def add_cell(self, cell, coef):
        if coef:
            v = self.terms.get(cell, 0) + coef
            if v:
                self.terms[cell] = v
            else:
                del self.terms[cell]

    def iadd(self, other, coef=1):
        if coef:
            for cell, c in other.terms.items():
                self.add_cell(cell, coef * c)
        return self

    def copy(self):
        out = CubeChain(self.n, self.D)
        out.terms = dict(self.terms)
        return out

    def __add__(self, other):
        return self.copy().iadd(other)

    def __sub__(self, other):
        return self.copy().iadd(other, -1)

    def __neg__(self):
        return self.scaled(-1)

    def scaled(self, k):
        out = CubeChain(self.n, self.D)
        if k:
            out.terms = {c: k * v for c, v in self.terms.items()}
        return out

    def __len__(self):
        return len(self.terms)

    def is_formally_zero(self):
        return not self.terms

    def dump(self):
        """Serialisable list of (coefficient, mask, base, directions) with rational entries."""
        D = self.D
        out = []
        for (mask, q, W), c in sorted(self.terms.items()):
            out.append([c, mask, [str(Fraction(x, D)) for x in q],
                        [[str(Fraction(x, D)) for x in w] for w in W]])
        return out


def dimension(cell):
    mask, _, W = cell
    return bin(mask).count("1") - 1 + len(W)


# boundaries

@lru_cache(maxsize=1 << 18)
def _bd1(n, D, cell):
    mask, q, W = cell
    out = []
    if bin(mask).count("1") <= 1:
        return ()
    for k in members_of(mask, n):
        bmask = mask & ~(1 << (k - 1))
        res = normalize_cell(n, D, bmask, q, W)
        if res is not None:
            c, s = res
            out.append((c, s * _sign_face(n, bmask, mask)))
    return tuple(out)


def _cube_boundary(n, D, cell):
    mask, q, W = cell
    out = []
    for i, w in enumerate(W):
        rest = W[:i] + W[i + 1:]
        s = 1 if i % 2 == 0 else -1
        for base, t in ((q, s), (tuple(a + b for a, b in zip(q, w)), -s)):
            res = normalize_cell(n, D, mask, base, rest)
            if res is not None:
                out.append((res[0], res[1] * t))
    return out


@lru_cache(maxsize=1 << 18)
def _bd2(n, D, cell):
    mask = cell[0]
    sign = 1 if bin(mask).count("1") % 2 else -1
    return tuple((c, sign * s) for c, s in _cube_boundary(n, D, cell))


def boundary1(chain):
    out = CubeChain(chain.n, chain.D)
    for cell, c in chain.terms.items():
        for b, s in _bd1(chain.n, chain.D, cell):
            out.add_cell(b, c * s)
    return out


def boundary2(chain):
    out = CubeChain(chain.n, chain.D)
    for cell, c in chain.terms.items():
        for b, s in _bd2(chain.n, chain.D, cell):
            out.add_cell(b, c * s)
    return out


def boundary(chain):
    return boundary1(chain).iadd(boundary2(chain))


def torus_boundary(chain):
    """Boundary of the torus factor only, without the simplex sign."""
    out = CubeChain(chain.n, chain.D)
    for cell, c in chain.terms.items():
        for b, s in _cube_boundary(chain.n, chain.D, cell):
            out.add_cell(b, c * s)
    return out


# the exact invariant

def _nullspace(M, N):
    """Z-basis (rows) of {x in Z^N : M x = 0}."""
    if not M:
        return intmat.identity(N)
    A = intmat.transpose(M)
    T = intmat.identity(N)
    piv = intmat._row_reduce(A, T)
    return [T[i] for i in range(len(piv), N)]


@lru_cache(maxsize=1 << 16)
def _span_info(W):
    """(lattice key, coordinate change C) for the saturated lattice of span(W).

    Lambda = span(W) cap Z^N has the canonical HNF basis L, and C is a
    unimodular matrix with L C = [I 0]; x C are coordinates adapted to Lambda.
    """
    N = len(W[0])
    m = len(W)
    K = _nullspace([list(w) for w in W], N)
    lam = _nullspace(K, N) if K else intmat.identity(N)
    L = intmat.hnf_rows(lam)
    if len(L) != m:
        raise ChainCheckError("lattice of the span has the wrong rank")
    A = intmat.transpose(L)
    T = intmat.identity(N)
    intmat._row_reduce(A, T, full=True)
    target = [[1 if i == j else 0 for j in range(m)] for i in range(N)]
    if A != target:
        raise ChainCheckError("span lattice is not saturated")
    return tuple(map(tuple, L)), intmat.transpose(T)


def _restrict(mask, vec):
    return [x for i, x in enumerate(vec) if mask >> i & 1]


def _vecmat(v, C):
    return [sum(a * C[i][j] for i, a in enumerate(v) if a) for j in range(len(C[0]))]


def _group_data(cell, D):
    mask, q, W = cell
    m = len(W)
    qr = _restrict(mask, q)
    if m == 0:
        return (mask, (), tuple(x % D for x in qr)), 1
    Wr = tuple(tuple(_restrict(mask, w)) for w in W)
    lam, C = _span_info(Wr)
    coset = tuple(x % D for x in _vecmat(qr, C)[m:])
    coords = [_vecmat(list(w), C)[:m] for w in Wr]
    return (mask, lam, coset), intmat.det(coords)


def canonical_key(chain):
    """Complete invariant of the current defined by a homogeneous chain.

    Two chains define the same current iff their keys agree; the empty key
    means the zero current.
    """
    groups = {}
    for cell, c in chain.terms.items():
        gkey, vol = _group_data(cell, chain.D)
        entry = groups.setdefault(gkey, [0, CubeChain(chain.n, chain.D)])
        entry[0] += c * vol
        entry[1].add_cell(cell, c)
    out = []
    for gkey, (mass, part) in groups.items():
        if gkey[1] == ():
            if mass:
                out.append((gkey, mass, ()))
            continue
        sub = canonical_key(torus_boundary(part))
        if mass or sub:
            out.append((gkey, mass, sub))
    return tuple(sorted(out))


def is_zero(chain):
    return not canonical_key(chain)


def chains_equal(x, y):
    return is_zero(x - y)


# the independent multiplicity test

def _adjugate(A):
    m = len(A)
    if m == 1:
        return [[1]]
    return [[(-1) ** (i + j) * intmat.det([r[:i] + r[i + 1:] for k, r in enumerate(A) if k != j])
             for j in range(m)] for i in range(m)]


def _preimage_count(cell, X, S, D, P):
    """Signed number of t in [0,1]^m with q/D + t W/D = X/(D P) mod Z^B.

    Everything is kept integral: t = adj(W_S^T) r / (det P).
    """
    mask, q, W = cell
    m = len(W)
    coords = [i for i in range(len(q)) if mask >> i & 1 and i not in S]
    WS = [[w[i] for i in S] for w in W]
    A = intmat.transpose(WS)
    det = intmat.det(A)
    if det == 0:
        return 0
    adj = _adjugate(A)
    sign = 1 if det > 0 else -1
    bound = abs(det) * P
    DP = D * P
    ranges = []
    for col, i in enumerate(S):
        lo = sum(min(0, w[col]) for w in WS) * P
        hi = sum(max(0, w[col]) for w in WS) * P
        # X_i + DP z_i - q_i P in [lo, hi]
        base = X[i] - q[i] * P
        ranges.append(range(-((base - lo) // DP), (hi - base) // DP + 1))
    count = 0
    for z in product(*ranges):
        rhs = [X[i] + DP * zi - q[i] * P for i, zi in zip(S, z)]
        tn = [sign * sum(a * r for a, r in zip(row, rhs)) for row in adj]
        if any(t < 0 or t > bound for t in tn):
            continue
        # tn / bound are the cube coordinates
        if all((q[i] * bound + sum(t * W[k][i] for k, t in enumerate(tn)) - X[i] * abs(det))
               % (D * bound) == 0 for i in coords):
            count += sign
    return count


def multiplicity_check(chain, samples=2, seed=0, prime=1000003):
    """Evaluate multiplicities at generic points of sampled cells.

    Points have denominator D * prime.  Returns the list of
    (cell, point numerators, multiplicity) with nonzero multiplicity; an
    empty list means no sample saw a nonzero value.
    """
    rng = random.Random(seed)
    cells = sorted(chain.terms)
    if not cells:
        return []
    picks = cells if len(cells) <= samples else rng.sample(cells, samples)
    D, P = chain.D, prime
    found = []
    for seedcell in picks:
        mask, q, W = seedcell
        m = len(W)
        t = [rng.randrange(1, P) for _ in range(m)]
        X = [q[i] * P + sum(t[k] * W[k][i] for k in range(m)) for i in range(len(q))]
        if m:
            _, S, _ = intmat.rank_profile([[w[i] for w in W] for i in range(len(q))])
        else:
            S = []
        total = 0
        for cell, c in chain.terms.items():
            if cell[0] != mask or len(cell[2]) != m:
                continue
            if m and intmat.rank([list(w) for w in W] + [list(w) for w in cell[2]]) != m:
                continue
            if m == 0:
                if all((cell[1][i] * P - X[i]) % (D * P) == 0 for i in range(len(q))):
                    total += c
                continue
            total += c * _preimage_count(cell, X, S, D, P)
        if total:
            found.append((seedcell, X, total))
    return found


# the chains of the torus model

def _ctx(e):
    cv = cell_vectors(e)
    return e.n, cv.d, cv


def cell_CAj(e, A, j):
    n, D, cv = _ctx(e)
    if A.thickness != "thick":
        raise ValueError("A must be thick")
    q = tuple(j * x for x in cv.cvec[1])
    W = tuple(cv.cvec[k] for k in A.beginnings)
    return CubeChain.from_cell(n, D, A.mask, q, W)


def cell_CBAj(e, B, A, j):
    n, D, cv = _ctx(e)
    if A.thickness != "thick":
        raise ValueError("A must be thick")
    if B.mask & ~A.mask or B.size != A.size - 1 or B.size < 1:
        raise ValueError("B must be a face of A")
    q = tuple(j * x for x in cv.cvec[1])
    W = tuple(cv.cvec[k] for k in A.beginnings)
    return CubeChain.from_cell(n, D, B.mask, q, W)


def torus_cell(e, A):
    """Delta_A x T_A, the torus oriented by d_1^A, ..., d_b^A."""
    n, D, _ = _ctx(e)
    W = tuple(tuple(D * x for x in w) for w in torus_dirs(e, A))
    return CubeChain.from_cell(n, D, A.mask, (0,) * n, W)


def max_k(e):
    return (e.n + 1) // 2


@lru_cache(maxsize=4096)
def _chain_R(a, j, k):
    e = Exponents(a)
    n, D, cv = _ctx(e)
    if not 0 <= k <= max_k(e):
        raise ValueError("k out of range")
    if k == 0:
        return CubeChain.from_cell(n, D, full_mask(n), tuple(j * x for x in cv.cvec[1]), ())
    out = CubeChain(n, D)
    if n % 2 and k == (n + 1) // 2:
        return out
    for A in thick_family(n, n - k):
        out.iadd(cell_CAj(e, A, j), _sign_thick(n, A.mask))
    return out


def chain_R(e, j, k):
    return _chain_R(e.a, (j - 1) % e.d + 1, k).copy()


@lru_cache(maxsize=4096)
def _chain_X(a, j, k):
    e = Exponents(a)
    if k == 0:
        return _chain_R(a, j, 0)
    d = e.d
    nxt = j % d + 1
    out = _chain_X(a, j, k - 1).copy()
    out.iadd(_chain_X(a, nxt, k - 1), -1)
    out.iadd(_chain_R(a, j, k))
    return out


def chain_X(e, j, k):
    if not 0 <= k <= max_k(e):
        raise ValueError("k out of range")
    return _chain_X(e.a, (j - 1) % e.d + 1, k).copy()


def clear_caches():
    for f in (_chain_R, _chain_X, normalize_cell, _bd1, _bd2, _span_info):
        f.cache_clear()


# verification of the boundary identities

@dataclass
class CheckResult:
    name: str
    j: int
    k: int
    exact: bool
    oracle: bool
    residual: list = field(default_factory=list)

    @property
    def diagnostic(self):
        if self.exact and self.oracle:
            return "pass"
        if self.exact != self.oracle:
            return "oracle-disagreement"
        return "fail"


@dataclass
class Thm33Report:
    e: Exponents
    checks: list
    sum_relation: dict

    @property
    def passed(self):
        return all(c.exact and c.oracle for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not (c.exact and c.oracle)]

    def to_json(self):
        return {"passed": self.passed, "checks": len(self.checks),
                "failures": [{"name": c.name, "j": c.j, "k": c.k, "diagnostic": c.diagnostic,
                              "residual": c.residual} for c in self.failures()],
                "sum_relation": self.sum_relation}


def _check(name, j, k, residual, samples, seed, checks, dump):
    exact = is_zero(residual)
    nonzero = multiplicity_check(residual, samples, seed) if samples else []
    res = CheckResult(name, j, k, exact, not nonzero)
    if not (res.exact and res.oracle) and dump:
        res.residual = residual.dump()
    checks.append(res)
    return res


def sphere_sum_target(e, ev_factor):
    """c*(T_od + ev_factor*T_ev) for even n."""
    from .monodromy import sphere_coefficient
    n = e.n
    od = _classify(n, sum(1 << (k - 1) for k in range(1, n, 2)))
    ev = _classify(n, sum(1 << (k - 1) for k in range(2, n + 1, 2)))
    c = sphere_coefficient(e)
    return torus_cell(e, od).scaled(c).iadd(torus_cell(e, ev), c * ev_factor)


def verify_thm33(e, samples=1, seed=0, dump=True):
    """Check the boundary identities of the chains R and X exactly.

    (i)   d1 R_j^k - d1 R_{j+1}^k + d2 R_j^{k+1} = 0
    (ii)  dX_j^k = d1 R_j^k
    (iii) dX_j^K = 0 for K = floor((n+1)/2)
    (iv)  n odd:  sum_j X_j^K = 0
    (v)   n even: sum_j X_j^K = c*(T_od + a_1 a_3 ... a_{n-1} T_ev)
    The relation printed with the factor (-1)^(n/2) a_1 a_3 ... in front of
    T_ev is evaluated as well and recorded in sum_relation.
    """
    if not isinstance(e, Exponents):
        e = Exponents(tuple(e))
    n, d = e.n, e.d
    K = max_k(e)
    checks = []
    bd1R = {}

    def b1R(j, k):
        key = ((j - 1) % d + 1, k)
        if key not in bd1R:
            bd1R[key] = boundary1(_chain_R(e.a, key[0], k))
        return bd1R[key]

    for k in range(K):
        for j in range(1, d + 1):
            res = b1R(j, k) - b1R(j % d + 1, k)
            res.iadd(boundary2(_chain_R(e.a, j, k + 1)))
            _check("R-boundary", j, k, res, samples, seed, checks, dump)
    for k in range(K + 1):
        for j in range(1, d + 1):
            res = boundary(_chain_X(e.a, j, k)) - b1R(j, k)
            _check("X-boundary", j, k, res, samples, seed, checks, dump)
    for j in range(1, d + 1):
        _check("X-cycle", j, K, boundary(_chain_X(e.a, j, K)), samples, seed, checks, dump)
    total = CubeChain(n, d)
    for j in range(1, d + 1):
        total.iadd(_chain_X(e.a, j, K))
    rel = {}
    if n % 2:
        _check("X-sum", 0, K, total, samples, seed, checks, dump)
        rel = {"relation": "sum_j X_j = 0"}
    else:
        from .monodromy import odd_product, sphere_coefficient
        oprod = odd_product(e)
        literal = (-1) ** (n // 2) * oprod
        lit = total - sphere_sum_target(e, literal)
        _check("X-sum", 0, K, total - sphere_sum_target(e, oprod), samples, seed, checks, dump)
        rel = {"relation": "sum_j X_j = c*(T_od + a_odd*T_ev)",
               "c": sphere_coefficient(e), "a_odd": oprod,
               "holds": checks[-1].exact,
               "literal_sign_factor": literal,
               "literal_sign_holds": is_zero(lit)}
        if samples:
            # every cell is sampled so the subtorus carrying a nonzero residual is hit
            rel["literal_sign_oracle_holds"] = not multiplicity_check(lit, len(lit.terms), seed)
    return Thm33Report(e, checks, rel)
