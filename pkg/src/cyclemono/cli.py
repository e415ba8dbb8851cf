"""Command line interface: single reports, batch sweeps and E^1 page dumps.

    cyclemono report -e 2,3 --json
    cyclemono batch --n 2..4 --max-mu 40 --dedup-rotations
    cyclemono ss -e 2,2,2

Exit codes: 0 all verdicts pass or are skipped, 2 invalid input, 3 a
verification failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import specseq
from .cubechain import clear_caches, verify_thm33
from .cyclecomb import Exponents, InvalidExponentsError
from .intpoly import has_simple_zeros
from .latpair import find_generating_element
from .monodromy import build_monodromy, cooper_wrong_claim_check, verify_theorem13
from .singularity import invariants, predicted_decomposition

SCHEMA = 1
EXIT_OK, EXIT_INPUT, EXIT_FAIL = 0, 2, 3


def verdict(status, reason=None, **detail):
    return {"status": status, "reason": reason, "detail": detail}


def skipped(reason):
    return verdict("skipped", reason)


@dataclass
class Options:
    with_chains: bool = False
    with_ss: bool = False
    seed: int = 0
    dump_chains: bool = False
    budget: int = 1000
    samples: int = 1


@dataclass
class SingularityReport:
    exponents: list
    invariants: dict = None
    monodromy: dict = None
    predicted: list = None
    witness: list = None
    verdicts: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    schema: int = SCHEMA

    @property
    def ok(self):
        return all(v["status"] != "fail" for v in self.verdicts.values())

    def failed(self):
        return sorted(k for k, v in self.verdicts.items() if v["status"] == "fail")

    def to_json(self):
        return {"schema": self.schema, "exponents": self.exponents, "invariants": self.invariants,
                "monodromy": self.monodromy, "predicted": self.predicted, "witness": self.witness,
                "verdicts": self.verdicts, "timings": self.timings}

    @classmethod
    def from_json(cls, obj):
        if obj.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {obj.get('schema')!r}")
        return cls(**obj)

    def dumps(self, indent=None):
        return json.dumps(self.to_json(), indent=indent)

    @classmethod
    def loads(cls, text):
        return cls.from_json(json.loads(text))

    def text(self):
        inv = self.invariants or {}
        lines = [f"exponents  {','.join(map(str, self.exponents))}"]
        if inv:
            lines.append(f"n={inv['n']} d={inv['d']} mu={inv['mu']} g={inv['g']} b={inv['b']} "
                         f"v={inv['v']}")
        if self.predicted:
            lines.append("predicted  " + " + ".join(f"{m} x Or({p})" for m, p, _ in self.predicted if m))
        for name, v in self.verdicts.items():
            tail = f" ({v['reason']})" if v["reason"] else ""
            lines.append(f"  {name:<16} {v['status']}{tail}")
        total = sum(self.timings.values())
        lines.append(f"time {total:.3f}s")
        return "\n".join(lines)


class _Stage:
    """Times a block and turns an exception into a failed verdict."""

    def __init__(self, report, name):
        self.report, self.name = report, name

    def __enter__(self):
        self.t = time.perf_counter()
        return self

    def __exit__(self, typ, exc, tb):
        self.report.timings[self.name] = round(time.perf_counter() - self.t, 6)
        if exc is not None and isinstance(exc, Exception):
            self.report.verdicts[self.name] = verdict("fail", f"{typ.__name__}: {exc}")
            return True
        return False


def _ss_verdicts(report, e, opts):
    d, n = e.d, e.n
    with _Stage(report, "d1_injectivity"):
        per_s, ok = [], True
        for s in specseq.s_range(n):
            cert = specseq.verify_d1_injective(e, s, with_chains=opts.with_chains)
            ok = ok and cert.ok
            per_s.append({"s": s, "full_column_rank": cert.full_column_rank, "minor_det": cert.minor_det,
                          "replay_ok": cert.replay_ok, "chain_matrix_agrees": cert.chain_matrix_agrees})
        if not per_s:
            report.verdicts["d1_injectivity"] = skipped("no bidegree with s in range")
        else:
            report.verdicts["d1_injectivity"] = verdict("pass" if ok else "fail", None, per_s=per_s)
    with _Stage(report, "xclass_indices"):
        steps = specseq.xclass_indices(e)
        ok = specseq.xclass_primitive(d) and all(st.index_invariants == [d] for st in steps[2:])
        report.verdicts["xclass_indices"] = verdict(
            "pass" if ok else "fail", None,
            steps=[{"r": st.r, "rank": st.rank, "index_invariants": st.index_invariants} for st in steps])
    with _Stage(report, "claim2"):
        rows = []
        for r in range(3, specseq.max_r(n) + 1):
            if n - r + 2 in specseq.s_range(n):
                c = specseq.claim2_check(e, r)
                rows.append({"r": r, "s": c.s, "order": c.order, "ok": c.ok(d)})
        if rows:
            report.verdicts["claim2"] = verdict("pass" if all(x["ok"] for x in rows) else "fail", None,
                                                per_r=rows)
        else:
            report.verdicts["claim2"] = skipped("no filtration step with s in range")
    with _Stage(report, "hn1_rank"):
        basis = specseq.assemble_Hn1(e)
        report.verdicts["hn1_rank"] = verdict("pass", None, rank=basis.rank, labels=basis.labels,
                                              relation=basis.relation)


def run_report(e, opts=None):
    """Run the verdict suite on one admissible tuple."""
    opts = opts or Options()
    report = SingularityReport(list(e.a))
    with _Stage(report, "invariants"):
        inv = invariants(e)
        report.invariants = inv.to_json()
        report.predicted = [[m, str(p), p.to_list()] for m, p in predicted_decomposition(inv)]
    if "invariants" in report.verdicts:
        return report
    model = None
    with _Stage(report, "charpoly"):
        model = build_monodromy(inv)
        report.monodromy = model.to_json()
        report.verdicts["charpoly"] = verdict("pass", None, charpoly=inv.charpoly.to_list())
    if model is None:
        report.verdicts["thm13"] = skipped("monodromy construction failed")
    else:
        with _Stage(report, "thm13"):
            U, target = verify_theorem13(model)
            report.witness = U.matrix
            report.verdicts["thm13"] = verdict("pass", None, target_rank=target.rank)
        with _Stage(report, "wrong_claim"):
            if e.n % 2:
                report.verdicts["wrong_claim"] = skipped("odd n")
            else:
                w = cooper_wrong_claim_check(model)
                report.verdicts["wrong_claim"] = verdict(
                    "pass" if w.distinguished and w.charpolys_agree else "fail", None,
                    true_snf=w.true_snf, wrong_snf=w.wrong_snf, monodromy_snf=w.monodromy_snf)
        with _Stage(report, "generator"):
            if not has_simple_zeros(inv.charpoly):
                report.verdicts["generator"] = skipped("characteristic polynomial has repeated zeros")
            else:
                res = find_generating_element(model.hmon, budget=opts.budget)
                if res.vector is None:
                    report.verdicts["generator"] = skipped(f"budget exhausted after {res.tried} candidates")
                else:
                    report.verdicts["generator"] = verdict("pass", None, vector=res.vector, tried=res.tried)
    if opts.with_chains:
        with _Stage(report, "thm33"):
            rep = verify_thm33(e, samples=opts.samples, seed=opts.seed, dump=opts.dump_chains)
            report.verdicts["thm33"] = verdict("pass" if rep.passed else "fail", None, **rep.to_json())
    else:
        report.verdicts["thm33"] = skipped("needs --with-chains")
    if opts.with_ss:
        _ss_verdicts(report, e, opts)
    else:
        for name in ("d1_injectivity", "xclass_indices", "claim2", "hn1_rank"):
            report.verdicts[name] = skipped("needs --with-ss")
    return report


# enumeration

def parse_range(text):
    """'2..4' or '3' -> inclusive range."""
    lo, _, hi = str(text).partition("..")
    lo = int(lo)
    hi = int(hi) if hi else lo
    if lo < 1 or hi < lo:
        raise ValueError(f"bad range {text!r}")
    return range(lo, hi + 1)


def _tuples(n, bound):
    def rec(prefix, prod):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for a in range(1, bound // prod + 1):
            yield from rec(prefix + [a], prod * a)
    yield from rec([], 1)


def admissible_tuples(ns, max_mu, dedup_rotations=False):
    for n in ns:
        for a in _tuples(n, max_mu):
            if dedup_rotations and a != min(a[i:] + a[:i] for i in range(n)):
                continue
            try:
                yield Exponents(a)
            except InvalidExponentsError:
                continue


def worker_count():
    env = os.environ.get("CYCLEMONO_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), cap))
        except ValueError:
            pass
    return cap


def _batch_item(args):
    a, opts = args
    rep = run_report(Exponents(a), opts)
    clear_caches()
    return rep


def run_batch(tuples, opts, workers=1):
    items = [(e.a, opts) for e in tuples]
    if workers <= 1:
        return [_batch_item(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_batch_item, items, chunksize=8))


# page dumps

def ss_dump(e):
    n = e.n
    pages = []
    for s in specseq.s_range(n):
        M, rows, cols = specseq.d1_matrix(e, s)
        pages.append({
            "bidegree": [s, n - 1 - s],
            "rank": specseq.e1_rank(n, s),
            "basis": [f"Delta_A x T_A, A={list(A.members)}" for A in cols],
            "d1": {"target_bidegree": [s - 1, n - 1 - s],
                   "rows": [f"Delta_B x T_B, B={list(B.members)}" for B in rows],
                   "matrix": M}})
    filtration = [{"r": st.r, "rank": st.rank, "index_invariants": st.index_invariants}
                  for st in specseq.xclass_indices(e)]
    return {"schema": SCHEMA, "exponents": list(e.a), "d": e.d, "pages": pages,
            "xclass_filtration": filtration}


# entry point

def _parser():
    p = argparse.ArgumentParser(prog="cyclemono", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(q):
        q.add_argument("--json", action="store_true", help="print JSON")
        q.add_argument("--with-chains", action="store_true", help="verify the chain identities")
        q.add_argument("--with-ss", action="store_true", help="run the spectral sequence checks")
        q.add_argument("--seed", type=int, default=0, help="seed of the multiplicity oracle")
        q.add_argument("--dump-chains", action="store_true", help="attach residual chains of failed identities")
        q.add_argument("--budget", type=int, default=1000, help="generating element search budget")

    r = sub.add_parser("report", help="verify one exponent tuple")
    r.add_argument("-e", "--exponents", required=True, help="comma separated a_1,...,a_n")
    common(r)

    b = sub.add_parser("batch", help="sweep all admissible tuples")
    b.add_argument("--n", default="2..4", help="range of n, e.g. 2..4")
    b.add_argument("--max-mu", type=int, default=40, help="bound on the product of the a_j")
    b.add_argument("--dedup-rotations", action="store_true", help="one tuple per cyclic rotation class")
    common(b)

    s = sub.add_parser("ss", help="dump the E^1 pages and d^1 matrices as JSON")
    s.add_argument("-e", "--exponents", required=True)
    return p


def _opts(args):
    return Options(with_chains=args.with_chains, with_ss=args.with_ss, seed=args.seed,
                   dump_chains=args.dump_chains, budget=args.budget)


def _exponents(text):
    try:
        return Exponents.parse(text)
    except InvalidExponentsError as exc:
        print(f"cyclemono: invalid exponents: {exc}", file=sys.stderr)
        return None


def main(argv=None):
    args = _parser().parse_args(argv)
    if args.cmd == "report":
        e = _exponents(args.exponents)
        if e is None:
            return EXIT_INPUT
        rep = run_report(e, _opts(args))
        print(rep.dumps(indent=2) if args.json else rep.text())
        return EXIT_OK if rep.ok else EXIT_FAIL
    if args.cmd == "ss":
        e = _exponents(args.exponents)
        if e is None:
            return EXIT_INPUT
        print(json.dumps(ss_dump(e), indent=2))
        return EXIT_OK
    try:
        ns = parse_range(args.n)
    except ValueError as exc:
        print(f"cyclemono: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.max_mu < 1:
        print("cyclemono: --max-mu must be positive", file=sys.stderr)
        return EXIT_INPUT
    t0 = time.perf_counter()
    tuples = list(admissible_tuples(ns, args.max_mu, args.dedup_rotations))
    reports = run_batch(tuples, _opts(args), worker_count())
    bad = [r for r in reports if not r.ok]
    counts = {}
    for r in reports:
        c = counts.setdefault(len(r.exponents), [0, 0])
        c[0 if r.ok else 1] += 1
    elapsed = round(time.perf_counter() - t0, 3)
    if args.json:
        print(json.dumps({"schema": SCHEMA, "tuples": len(reports), "failures": len(bad),
                          "per_n": {str(k): {"pass": v[0], "fail": v[1]} for k, v in sorted(counts.items())},
                          "counterexamples": [r.to_json() for r in bad], "seconds": elapsed}, indent=2))
    else:
        for n, (ok, fail) in sorted(counts.items()):
            print(f"n={n}: {ok + fail} tuples, {ok} pass, {fail} fail")
        print(f"total: {len(reports)} tuples, {len(bad)} failures, {elapsed}s")
        for r in bad:
            print(f"counterexample {','.join(map(str, r.exponents))}: {', '.join(r.failed())}")
            print(r.dumps())
    return EXIT_OK if not bad else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
