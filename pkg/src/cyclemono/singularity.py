"""Numerical invariants of f = x_1^a_1 x_2 + ... + x_n^a_n x_1 and the predicted decomposition."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cyclecomb import Exponents
from .intpoly import IntPoly, divisor_chain_decomposition


@dataclass(frozen=True)
class SingularityInvariants:
    e: Exponents
    d: int
    mu: int
    v: tuple
    w: tuple
    g: int
    b: int
    charpoly: IntPoly

    @property
    def n(self):
        return self.e.n

    def to_json(self):
        return {"exponents": list(self.e.a), "n": self.n, "d": self.d, "mu": self.mu,
                "v": list(self.v), "w": [str(x) for x in self.w], "g": self.g, "b": self.b,
                "charpoly": self.charpoly.to_list()}


def weights_closed_form(e):
    """v_j = sum_l (-1)^(l-1) prod_{k=j+l}^{j+n-1} a_k, indices mod n."""
    n = e.n
    out = []
    for j in range(1, n + 1):
        total = 0
        for l in range(1, n + 1):
            prod = 1
            for k in range(j + l, j + n):
                prod *= e[k]
            total += (-1) ** (l - 1) * prod
        out.append(total)
    return tuple(out)


def weights_by_solving(e):
    """Solve a_j v_j + v_{j+1} = d exactly."""
    n, d = e.n, e.d
    M = [[Fraction(0)] * n + [Fraction(d)] for _ in range(n)]
    for j in range(n):
        M[j][j] += e.a[j]
        M[j][(j + 1) % n] += 1
    for c in range(n):
        p = next(i for i in range(c, n) if M[i][c] != 0)
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return tuple(M[i][n] for i in range(n))


def invariants(e):
    if not isinstance(e, Exponents):
        e = Exponents(tuple(e))
    n, d, mu = e.n, e.d, e.mu
    v = weights_closed_form(e)
    if weights_by_solving(e) != tuple(Fraction(x) for x in v):
        raise ArithmeticError("closed-form weights disagree with the linear system")
    w = tuple(Fraction(x, d) for x in v)
    g = gcd(v[0], d)
    b = d // g
    tb = IntPoly.t_pow_minus_one(b)
    cp = tb ** g
    cp = cp * IntPoly([-1, 1]) if n % 2 == 0 else cp // IntPoly([-1, 1])
    if cp.degree != mu:
        raise ArithmeticError("characteristic polynomial has the wrong degree")
    return SingularityInvariants(e, d, mu, v, w, g, b, cp)


def predicted_decomposition(inv):
    tb = IntPoly.t_pow_minus_one(inv.b)
    if inv.n % 2:
        return [(inv.g - 1, tb), (1, tb // IntPoly([-1, 1]))]
    return [(inv.g, tb), (1, IntPoly([-1, 1]))]


def wrong_decomposition(inv):
    """The non-standard even-n decomposition with a doubled Or(t - 1)."""
    tb = IntPoly.t_pow_minus_one(inv.b)
    return [(inv.g - 1, tb), (1, tb // IntPoly([-1, 1])), (2, IntPoly([-1, 1]))]


def expand_blocks(decomp):
    out = []
    for mult, p in decomp:
        out.extend([p] * mult)
    return out


def is_standard(decomp, charpoly):
    """The blocks form the divisor chain of charpoly, with multiplicities."""
    blocks = [p for p in expand_blocks(decomp) if p.degree > 0]
    chain = divisor_chain_decomposition(charpoly)
    return sorted(blocks, key=lambda p: (-p.degree, p.coeffs)) == \
        sorted(chain, key=lambda p: (-p.degree, p.coeffs))
