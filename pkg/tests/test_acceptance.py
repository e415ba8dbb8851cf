"""Acceptance sweeps for criteria 1-8.

Each criterion prints one PASS/FAIL line straight to the terminal, so the
lines survive pytest's output capture.  Heavy sweeps are computed once per
module and shared between criteria that read the same tuples.
"""

import time
from math import gcd

import pytest

from cyclemono.cli import admissible_tuples
from cyclemono.cubechain import clear_caches, verify_thm33
from cyclemono.intpoly import IntPoly
from cyclemono.latpair import (
    char_poly,
    direct_sum,
    is_unimodular,
    orbit_sum_poly,
    orlik_block,
    snf_invariants,
    verify_witness,
)
from cyclemono.loblock import (
    NotIsomorphicError,
    lo_block,
    lo_coprime_to_orlik,
    lo_equivalence,
    lo_plus_fixed_invariants,
    power_decompose,
)
from cyclemono.monodromy import build_monodromy, cooper_wrong_claim_check, target_pair, verify_theorem13
from cyclemono.singularity import invariants, is_standard, predicted_decomposition, wrong_decomposition
from cyclemono.specseq import (
    assemble_Hn1,
    d1_matrix,
    s_range,
    verify_d1_injective,
    xclass_indices,
    xclass_primitive,
)

pytestmark = pytest.mark.slow

SWEEP_N = range(2, 7)
SWEEP_MU = 80
CHAIN_N = range(2, 6)
CHAIN_MU = 40
D1_N = range(3, 8)
D1_MU = 80
LO_D = 24
LO_V = 12


def announce(capsys, k, title, failures, detail):
    status = "PASS" if not failures else "FAIL"
    with capsys.disabled():
        print(f"\n[{status}] criterion {k}: {title} ({detail})")
        for f in failures[:10]:
            print(f"    {f}")


def _conv(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


def expected_charpoly(n, b, g):
    """(t^b - 1)^g (t - 1)^(+-1) by plain convolution, low degree first."""
    tb = [-1] + [0] * (b - 1) + [1]
    out = [1]
    if n % 2:
        # (t^b - 1)/(t - 1) = 1 + t + ... + t^(b-1)
        out = [1] * b
        g -= 1
    else:
        out = [-1, 1]
    for _ in range(g):
        out = _conv(out, tb)
    return out


def _abar(a, k):
    prod = 1
    for x in a[:k - 1]:
        prod *= x
    return (-1) ** (k - 1) * prod


def expected_sphere_coefficient(a):
    n = len(a)
    m = n // 2
    out = (-1) ** ((m + 2) * (m + 1) // 2)
    for k in range(1, n, 2):
        out *= _abar(a, k)
    return out


@pytest.fixture(scope="module")
def sweep():
    """Criteria 1, 2, 5, 7 and 8 on every admissible tuple with n in 2..6, mu <= 80."""
    fails = {k: [] for k in (1, 2, 5, 7, 8)}
    counts = {"tuples": 0, "even": 0, "distinguished": 0}
    start = time.time()
    for e in admissible_tuples(SWEEP_N, SWEEP_MU):
        counts["tuples"] += 1
        inv = invariants(e)
        try:
            model = build_monodromy(inv)
        except ArithmeticError as exc:
            for k in (1, 2, 8):
                fails[k].append((e.a, f"build_monodromy: {exc}"))
            continue
        got = char_poly(model.hmon).to_list()
        if got != expected_charpoly(e.n, inv.b, inv.g):
            fails[1].append((e.a, got))

        try:
            U, target = verify_theorem13(model)
            predicted = predicted_decomposition(inv)
            ok = (verify_witness(model.hmon, target, U) and is_unimodular(U)
                  and target.matrix == target_pair(predicted).matrix
                  and is_standard(predicted, inv.charpoly))
            if not ok:
                fails[2].append((e.a, "witness rejected"))
        except ArithmeticError as exc:
            fails[2].append((e.a, str(exc)))

        if not xclass_primitive(e.d):
            fails[5].append((e.a, "r = 2 lattice not primitive"))
        for step in xclass_indices(e):
            if step.r >= 3 and step.index_invariants != [e.d]:
                fails[5].append((e.a, step.r, step.index_invariants))

        try:
            H = assemble_Hn1(e)
            spheres = "T_od" in H.labels and "T_ev" in H.labels
            if H.rank != e.mu or spheres != (e.n % 2 == 0):
                fails[7].append((e.a, H.rank, H.labels[-2:]))
        except ArithmeticError as exc:
            fails[7].append((e.a, str(exc)))

        if e.n % 2 == 0:
            counts["even"] += 1
            w = cooper_wrong_claim_check(model)
            non_iso = not is_standard(wrong_decomposition(inv), inv.charpoly)
            if not w.charpolys_agree:
                fails[8].append((e.a, "characteristic polynomials differ"))
            elif non_iso and not w.distinguished:
                fails[8].append((e.a, w.true_snf, w.wrong_snf, w.monodromy_snf))
            elif w.distinguished:
                counts["distinguished"] += 1
    counts["seconds"] = round(time.time() - start, 1)
    return fails, counts


def test_criterion_1_charpoly(sweep, capsys):
    fails, counts = sweep
    announce(capsys, 1, "char_poly(h_mon) = (t^b-1)^g (t-1)^(+-1)", fails[1],
             f"{counts['tuples']} tuples, n 2..6, mu <= {SWEEP_MU}, {counts['seconds']} s")
    assert not fails[1]


def test_criterion_2_standard_form(sweep, capsys):
    fails, counts = sweep
    announce(capsys, 2, "unimodular witness h_mon -> standard decomposition", fails[2],
             f"{counts['tuples']} tuples")
    assert not fails[2]


def test_criterion_3_chain_identities(capsys):
    fails = []
    literal = {}
    count = 0
    start = time.time()
    for e in admissible_tuples(CHAIN_N, CHAIN_MU):
        count += 1
        rep = verify_thm33(e, samples=1, seed=0, dump=False)
        clear_caches()
        if not rep.passed:
            fails.append((e.a, [(c.name, c.j, c.k, c.diagnostic) for c in rep.failures()][:3]))
        if e.n % 2 == 0:
            rel = rep.sum_relation
            if rel["c"] != expected_sphere_coefficient(e.a):
                fails.append((e.a, "coefficient", rel["c"]))
            held = rel["literal_sign_holds"]
            if held != rel["literal_sign_oracle_holds"]:
                fails.append((e.a, "literal form: key and oracle disagree"))
            tally = literal.setdefault(e.n, [0, 0])
            tally[0 if held else 1] += 1
    announce(capsys, 3, "boundary identities of R and X, sum relation with coefficient c", fails,
             f"{count} tuples, n 2..5, mu <= {CHAIN_MU}, {time.time() - start:.1f} s")
    with capsys.disabled():
        for n, (held, failed) in sorted(literal.items()):
            print(f"    info: ev-term factor (-1)^(n/2) a_1 a_3 ... at n={n}: "
                  f"holds {held}, fails {failed}")
    assert not fails


def test_criterion_4_d1_injective(capsys):
    fails = []
    checks = squares = n3 = 0
    start = time.time()
    for e in admissible_tuples(D1_N, D1_MU):
        for s in s_range(e.n):
            checks += 1
            cert = verify_d1_injective(e, s, with_chains=False)
            if not cert.ok:
                fails.append((e.a, s, "not injective"))
                continue
            M, _, cols = d1_matrix(e, s)
            if len(M) != len(cols):
                continue
            squares += 1
            det = abs(cert.minor_det)
            if gcd(det, e.mu) != 1:
                fails.append((e.a, s, "det shares a prime with mu", det))
            if e.n == 3 and s == 2:
                n3 += 1
                if det != e.d:
                    fails.append((e.a, s, "|det| != d", det))
    announce(capsys, 4, "d1 full column rank, square determinants coprime to mu, n=3 |det| = d",
             fails, f"{checks} (tuple, s) checks, {squares} square, {n3} at n=3, "
                    f"n 3..7, mu <= {D1_MU}, {time.time() - start:.1f} s")
    assert not fails


def test_criterion_4_chain_route(capsys):
    """d1 rebuilt from the chain calculus agrees with the combinatorial matrix."""
    fails = []
    count = 0
    for e in admissible_tuples(range(3, 6), 12):
        for s in s_range(e.n):
            count += 1
            cert = verify_d1_injective(e, s, with_chains=True)
            if not (cert.ok and cert.chain_matrix_agrees):
                fails.append((e.a, s))
        clear_caches()
    with capsys.disabled():
        print(f"\n    info: chain-route d1 agrees on {count - len(fails)}/{count} checks")
    assert not fails


def test_criterion_5_filtration(sweep, capsys):
    fails, counts = sweep
    announce(capsys, 5, "X-class filtration primitive at r=2, each further step of index d", fails[5],
             f"{counts['tuples']} tuples")
    assert not fails[5]


def test_criterion_6_lo_suite(capsys):
    fails = []
    pairs = powers = coprime = 0
    start = time.time()
    T1 = orlik_block(IntPoly([-1, 1]))
    for d in range(1, LO_D + 1):
        cs = range(-2 * d, 2 * d + 1)
        inv = {c: lo_plus_fixed_invariants(d, c) for c in cs}
        g = {c: gcd(d, c) if c else d for c in cs}
        for c1 in cs:
            for c2 in cs:
                pairs += 1
                if g[c1] == g[c2]:
                    U = lo_equivalence(d, c1, c2)
                    if not verify_witness(lo_block(d, c1), lo_block(d, c2), U):
                        fails.append(("equivalence", d, c1, c2))
                elif inv[c1] == inv[c2]:
                    fails.append(("invariants agree", d, c1, c2))
        for v in range(1, LO_V + 1):
            for c in cs:
                powers += 1
                dec = power_decompose(d, c, v)
                if not verify_witness(dec.source, dec.target, dec.witness):
                    fails.append(("power", d, c, v))
        target = direct_sum([orlik_block(IntPoly.t_pow_minus_one(d)), T1])
        tinv = snf_invariants(target, orbit_sum_poly(d))
        for c in cs:
            coprime += 1
            source = direct_sum([lo_block(d, c), T1])
            try:
                witnessed = verify_witness(source, target, lo_coprime_to_orlik(d, c))
            except NotIsomorphicError:
                witnessed = False
            separated = snf_invariants(source, orbit_sum_poly(d)) != tinv
            if witnessed != (g[c] == 1) or separated != (g[c] != 1):
                fails.append(("coprime criterion", d, c))
    announce(capsys, 6, "Lo witnesses, separating invariants and the coprime criterion", fails,
             f"d <= {LO_D}, |c| <= 2d: {pairs} pairs, {powers} powers (v <= {LO_V}), "
             f"{coprime} coprime cases, {time.time() - start:.1f} s")
    assert not fails


def test_criterion_7_hn1_rank(sweep, capsys):
    fails, counts = sweep
    announce(capsys, 7, "assemble_Hn1 rank = mu, sphere classes exactly for even n", fails[7],
             f"{counts['tuples']} tuples")
    assert not fails[7]


def test_criterion_8_wrong_claim(sweep, capsys):
    fails, counts = sweep
    announce(capsys, 8, "orbit-sum SNF separates the true pair from the doubled Or(t-1) form",
             fails[8], f"{counts['distinguished']}/{counts['even']} even-n tuples distinguished")
    assert not fails[8]
