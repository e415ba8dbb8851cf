"""The integral monodromy on H_{n-1} and an explicit witness of its standard form.

Basis: delta_1, ..., delta_{d-1}, and for even n also gamma, beta.  The
monodromy shifts delta_j to delta_{j+v_1}; delta_d is expanded through
sum_j delta_j = 0 (n odd) or sum_j delta_j = c*gamma (n even).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from . import intmat
from .cyclecomb import cell_vectors
from .intpoly import IntPoly
from .latpair import (
    IsomorphismWitness,
    LatticePair,
    char_poly,
    direct_sum,
    orbit_sum_snf,
    orlik_block,
    verify_witness,
    witness_from_basis,
)
from .loblock import lo_coprime_to_orlik, power_decompose
from .singularity import expand_blocks, predicted_decomposition, wrong_decomposition


class VerificationError(ArithmeticError):
    def __init__(self, stage, message=""):
        super().__init__(f"{stage}: {message}" if message else stage)
        self.stage = stage


def sphere_coefficient(e):
    """c with sum_j delta_j = c*gamma for even n."""
    n = e.n
    m = n // 2
    abar = cell_vectors(e).abar
    prod = 1
    for k in range(1, n, 2):
        prod *= abar[k]
    return (-1) ** ((m + 2) * (m + 1) // 2) * prod


def odd_product(e):
    """a_1 a_3 ... a_{n-1}."""
    out = 1
    for k in range(1, e.n, 2):
        out *= e[k]
    return out


@dataclass
class MonodromyModel:
    inv: object
    labels: list
    hmon: LatticePair
    c: int = None
    gamma: dict = None   # gamma in terms of the sphere classes od, ev
    beta: dict = None

    def to_json(self):
        out = {"labels": self.labels, "matrix": self.hmon.matrix, "order": self.hmon.order}
        if self.c is not None:
            out.update({"c": self.c, "gamma": self.gamma, "beta": self.beta})
        return out


def build_monodromy(inv):
    n, d = inv.n, inv.d
    v1 = inv.v[0]
    even = n % 2 == 0
    rank = d - 1 + (2 if even else 0)
    if rank != inv.mu:
        raise VerificationError("basis", "rank differs from the Milnor number")
    c = sphere_coefficient(inv.e) if even else None
    H = intmat.zeros(rank, rank)
    for j in range(1, d):
        t = (j + v1) % d
        if t:
            H[t - 1][j - 1] = 1
        else:
            for i in range(d - 1):
                H[i][j - 1] = -1
            if even:
                H[d - 1][j - 1] = c
    labels = [f"delta_{j}" for j in range(1, d)]
    model = MonodromyModel(inv, labels, None)
    if even:
        H[d - 1][d - 1] = 1
        H[d][d] = 1
        labels += ["gamma", "beta"]
        model.c = c
        model.gamma = {"od": 1, "ev": odd_product(inv.e)}
        model.beta = {"od": 0, "ev": 1}
        if gcd(inv.b, c) != 1:
            raise VerificationError("basis", "gcd(b, c) != 1")
    model.hmon = LatticePair(H)
    if char_poly(model.hmon) != inv.charpoly:
        raise VerificationError("basis", "characteristic polynomial mismatch")
    # the order is the lcm of orbit lengths, so h^order = 1 holds by construction
    model.hmon.order
    return model


def target_pair(decomp):
    return direct_sum([orlik_block(p) for p in expand_blocks(decomp) if p.degree > 0])


def _odd_witness(model):
    inv = model.inv
    d, v, g, b = inv.d, inv.v[0], inv.g, inv.b

    def dvec(j):
        j %= d
        if j:
            out = [0] * (d - 1)
            out[j - 1] = 1
            return out
        return [-1] * (d - 1)

    cols = []
    for r in range(1, g):
        for k in range(b):
            cols.append(dvec(r + k * v))
    for k in range(b - 1):
        beta = [0] * (d - 1)
        for r in range(1, g + 1):
            beta = [x + y for x, y in zip(beta, dvec(r + k * v))]
        cols.append(beta)
    return witness_from_basis(intmat.transpose(cols))


def _even_witness(model):
    inv = model.inv
    d, v, g, b, c = inv.d, inv.v[0], inv.g, inv.b, model.c
    # (delta_1..delta_{d-1}, gamma, beta) -> (gamma, delta_1..delta_{d-1}, beta)
    mu = inv.mu
    P = intmat.zeros(mu, mu)
    P[0][d - 1] = 1
    for j in range(1, d):
        P[j][j - 1] = 1
    P[d][d] = 1
    U1 = IsomorphismWitness(P, intmat.transpose(P))
    dec = power_decompose(d, c, v)
    stage1 = direct_sum([dec.source, orlik_block(IntPoly([-1, 1]))])
    if not verify_witness(model.hmon, stage1, U1):
        raise VerificationError("identification with Lo(d, c)^v + Or(t-1)")
    one = [[1]]
    U2 = IsomorphismWitness(intmat.block_diag([dec.witness.matrix, one]),
                            intmat.block_diag([dec.witness.inverse, one]))
    if gcd(b, c) != 1:
        raise VerificationError("coprime step", "gcd(b, c) != 1")
    W3 = lo_coprime_to_orlik(b, c)
    head = intmat.identity((g - 1) * b)
    U3 = IsomorphismWitness(intmat.block_diag([head, W3.matrix]),
                            intmat.block_diag([head, W3.inverse]))
    return U3.compose(U2.compose(U1))


def verify_theorem13(model):
    """Explicit witness hmon -> standard decomposition, checked exactly."""
    target = target_pair(predicted_decomposition(model.inv))
    U = _even_witness(model) if model.c is not None else _odd_witness(model)
    if not verify_witness(model.hmon, target, U):
        raise VerificationError("final witness check")
    return U, target


@dataclass
class WrongClaimCheck:
    charpolys_agree: bool
    true_snf: list
    wrong_snf: list
    monodromy_snf: list

    @property
    def distinguished(self):
        return self.true_snf != self.wrong_snf and self.monodromy_snf == self.true_snf


def cooper_wrong_claim_check(model):
    """Compare the true pair with the decomposition carrying a doubled Or(t-1)."""
    inv = model.inv
    if inv.n % 2:
        raise ValueError("only meaningful for even n")
    wrong = target_pair(wrong_decomposition(inv))
    true = target_pair(predicted_decomposition(inv))
    order = model.hmon.order
    return WrongClaimCheck(
        charpolys_agree=char_poly(wrong) == inv.charpoly == char_poly(true),
        true_snf=orbit_sum_snf(true, order),
        wrong_snf=orbit_sum_snf(wrong, order),
        monodromy_snf=orbit_sum_snf(model.hmon, order),
    )
