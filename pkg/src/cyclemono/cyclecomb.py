"""Cyclic subset combinatorics and the integer vectors of the torus model.

Subsets of N = {1..n} are bitmasks (bit k-1 stands for k).  Indices are
cyclic: 1 follows n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class InvalidExponentsError(ValueError):
    pass


@dataclass(frozen=True)
class Exponents:
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        if len(self.a) < 2:
            raise InvalidExponentsError("need at least two exponents")
        if any(x < 1 for x in self.a):
            raise InvalidExponentsError("exponents must be positive integers")
        if self.n % 2 == 0:
            # a is 0-indexed here: a[0] = a_1
            if all(self.a[j] == 1 for j in range(1, self.n, 2)):
                raise InvalidExponentsError("all a_j with even j equal 1")
            if all(self.a[j] == 1 for j in range(0, self.n, 2)):
                raise InvalidExponentsError("all a_j with odd j equal 1")

    @property
    def n(self):
        return len(self.a)

    def __getitem__(self, k):
        """a_k with cyclic 1-based indexing."""
        return self.a[(k - 1) % self.n]

    @property
    def mu(self):
        out = 1
        for x in self.a:
            out *= x
        return out

    @property
    def d(self):
        return self.mu - (-1) ** self.n

    @classmethod
    def parse(cls, text):
        try:
            vals = [int(x) for x in str(text).replace(" ", "").split(",") if x != ""]
        except ValueError:
            raise InvalidExponentsError(f"cannot parse exponents {text!r}") from None
        return cls(tuple(vals))

    def __str__(self):
        return ",".join(map(str, self.a))


def cyc(k, n):
    """Representative of k mod n in 1..n."""
    return (k - 1) % n + 1


def mask_of(members):
    m = 0
    for k in members:
        m |= 1 << (k - 1)
    return m


def members_of(mask, n):
    return tuple(k for k in range(1, n + 1) if mask >> (k - 1) & 1)


@dataclass(frozen=True)
class SubsetInfo:
    n: int
    mask: int
    members: tuple
    blocks: tuple
    beginnings: tuple
    b: int
    thickness: str

    @property
    def block_beginnings(self):
        return self.beginnings

    @property
    def size(self):
        return len(self.members)

    def __contains__(self, k):
        return bool(self.mask >> (k - 1) & 1)

    def gaps(self):
        return _runs(self.n, full_mask(self.n) & ~self.mask)


def full_mask(n):
    return (1 << n) - 1


def _runs(n, mask):
    """Maximal cyclic runs of a proper nonempty subset, each starting at a run beginning."""
    inside = lambda k: mask >> (cyc(k, n) - 1) & 1
    starts = [k for k in range(1, n + 1) if inside(k) and not inside(k - 1)]
    runs = []
    for s in starts:
        run = [s]
        k = s + 1
        while inside(k) and cyc(k, n) != s:
            run.append(cyc(k, n))
            k += 1
        runs.append(tuple(run))
    return tuple(runs)


@lru_cache(maxsize=None)
def _classify(n, mask):
    if mask == 0 or mask >> n:
        raise ValueError("subset must be a nonempty subset of {1..n}")
    members = members_of(mask, n)
    if mask == full_mask(n):
        return SubsetInfo(n, mask, members, (members,), (), 0, "full")
    blocks = _runs(n, mask)
    beginnings = tuple(sorted(bl[0] for bl in blocks))
    b = len(blocks)
    rest = n - len(members)
    if b == rest:
        kind = "thick"
    elif b == rest - 1:
        kind = "almost_thick"
    else:
        kind = "neither"
    return SubsetInfo(n, mask, members, blocks, beginnings, b, kind)


def classify_subset(n, A):
    mask = A if isinstance(A, int) else mask_of(A)
    if isinstance(A, int) is False and not list(A):
        raise ValueError("subset must be nonempty")
    return _classify(n, mask)


def _perm_sign(seq):
    seq = list(seq)
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


@lru_cache(maxsize=None)
def _sign_thick(n, mask):
    A = _classify(n, mask)
    if A.thickness != "thick":
        raise ValueError("sign is defined for thick sets only")
    ks = A.beginnings
    alphas = [k for k in range(1, n + 1) if k not in ks]
    return _perm_sign(alphas + list(ks))


def sign_thick(A):
    return _sign_thick(A.n, A.mask)


def listing(n, mask):
    """Elements of A ordered with n first when n is in A, then ascending."""
    mem = members_of(mask, n)
    if mask >> (n - 1) & 1:
        return (n,) + mem[:-1]
    return mem


@lru_cache(maxsize=None)
def _sign_face(n, bmask, amask):
    if bmask & ~amask or bin(amask).count("1") != bin(bmask).count("1") + 1:
        raise ValueError("B must be A minus one element")
    k = (amask & ~bmask).bit_length()
    j = listing(n, amask).index(k) + 1
    return -1 if (j - 1) % 2 else 1


def sign_face(B, A):
    return _sign_face(A.n, B.mask, A.mask)


# vectors a_k, b_k, c_k, d_j^A, p_j

@dataclass(frozen=True)
class CellVectors:
    n: int
    d: int
    mu: int
    abar: tuple   # abar[k] for k = 1..n+1, index 0 unused
    bvec: tuple   # bvec[k] for k = 1..n+1
    cvec: tuple   # cvec[k] for k = 1..n

    def p(self, j):
        return tuple(Fraction(j * x, self.d) for x in self.cvec[1])


@lru_cache(maxsize=None)
def _cell_vectors(a):
    n = len(a)
    mu = 1
    for x in a:
        mu *= x
    d = mu - (-1) ** n
    abar = [0] * (n + 2)
    prod = 1
    for k in range(1, n + 1):
        abar[k] = (-1) ** (k - 1) * prod
        prod *= a[k - 1]
    abar[n + 1] = (-1) ** n * mu
    bvec = [None] * (n + 2)
    for k in range(1, n + 2):
        bvec[k] = tuple(abar[i] if i < k else 0 for i in range(1, n + 1))
    cvec = [None] * (n + 1)
    for k in range(1, n + 1):
        cvec[k] = tuple(abar[n + 1] * abar[i] if i < k else abar[i] for i in range(1, n + 1))
    return CellVectors(n, d, mu, tuple(abar), tuple(bvec), tuple(cvec))


def cell_vectors(e):
    return _cell_vectors(e.a)


def _exact_div(vec, q):
    out = []
    for x in vec:
        if x % q:
            raise ArithmeticError("torus direction is not integral")
        out.append(x // q)
    return tuple(out)


@lru_cache(maxsize=None)
def _torus_dirs(a, mask):
    n = len(a)
    cv = _cell_vectors(a)
    A = _classify(n, mask)
    ks = A.beginnings
    b = len(ks)
    out = []
    for j in range(b - 1):
        diff = tuple(x - y for x, y in zip(cv.bvec[ks[j + 1]], cv.bvec[ks[j]]))
        out.append(_exact_div(diff, cv.abar[ks[j]]))
    last = tuple(cv.abar[n + 1] * x + y - z
                 for x, y, z in zip(cv.bvec[ks[0]], cv.cvec[1], cv.bvec[ks[-1]]))
    out.append(_exact_div(last, cv.abar[ks[-1]]))
    return tuple(out)


def torus_dirs(e, A):
    """The integer vectors d_1^A, ..., d_b(A)^A spanning T_A."""
    if A.thickness == "full":
        raise ValueError("A must be proper")
    return _torus_dirs(e.a, A.mask)


# set families

@lru_cache(maxsize=None)
def subsets_of_size(n, s):
    from itertools import combinations
    return tuple(mask_of(c) for c in combinations(range(1, n + 1), s))


@lru_cache(maxsize=None)
def _thick_family(n, s):
    if not 1 <= s <= n - 1:
        return ()
    return tuple(_classify(n, m) for m in subsets_of_size(n, s)
                 if _classify(n, m).thickness == "thick")


def thick_family(n, s):
    """Thick sets of size s, in increasing bitmask order of their combinations."""
    return list(_thick_family(n, s))


def two_gap(B):
    """The double gap (k0, k0+1) of an almost thick set."""
    for g in B.gaps():
        if len(g) == 2:
            return g
    raise ValueError("not almost thick")


def beta1(B):
    return two_gap(B)[0]


def beta2(B):
    return two_gap(B)[1]


def up1(B):
    return _classify(B.n, B.mask | 1 << (beta1(B) - 1))


def up2(B):
    return _classify(B.n, B.mask | 1 << (beta2(B) - 1))


@lru_cache(maxsize=None)
def _almost_thick_family(n, s):
    if not 1 <= s - 1 <= n - 2:
        return ()
    return tuple(_classify(n, m) for m in subsets_of_size(n, s - 1)
                 if _classify(n, m).thickness == "almost_thick")


def almost_thick_family(n, s):
    """The almost thick sets B with |B| = s - 1."""
    return list(_almost_thick_family(n, s))


def almost_thick_maps(n, s):
    fam = almost_thick_family(n, s)
    return (fam, {B.mask: beta1(B) for B in fam}, {B.mask: beta2(B) for B in fam},
            {B.mask: up1(B) for B in fam}, {B.mask: up2(B) for B in fam})


def _shifts_from(A):
    """Almost thick sets C with C^(1) = A."""
    n = A.n
    out = []
    for k in A.members:
        if cyc(k + 1, n) not in A and cyc(k - 1, n) in A:
            C = _classify(n, A.mask & ~(1 << (k - 1)))
            if C.thickness == "almost_thick" and beta1(C) == k:
                out.append(C)
    return out


def claim1_sequence(B):
    """B_1, ..., B_n with B_n = B, B_{i+1}^(1) = B_i^(2) cyclically and beta2 bijective.

    Backtracking: each step picks C with C^(1) equal to the previous C^(2),
    starting from B itself, and the n-th step has to land on B again.
    """
    if B.thickness != "almost_thick":
        raise ValueError("B must be almost thick")
    n = B.n
    seq = []
    used = set()

    def search(prev):
        last = len(seq) == n - 1
        for C in _shifts_from(up2(prev)):
            if (C.mask == B.mask) != last:
                continue
            b2 = beta2(C)
            if b2 in used:
                continue
            used.add(b2)
            seq.append(C)
            if last or search(C):
                return True
            used.discard(b2)
            seq.pop()
        return False

    if not search(B):
        raise RuntimeError("no gap-shifting sequence found")
    return seq


def check_claim1(seq):
    n = len(seq)
    for i in range(n):
        if up1(seq[(i + 1) % n]).mask != up2(seq[i]).mask:
            return False
    return sorted(beta2(C) for C in seq) == list(range(1, n + 1))
