import json

import pytest

from cyclemono.cli import (
    Options,
    SingularityReport,
    admissible_tuples,
    main,
    parse_range,
    run_report,
    ss_dump,
    worker_count,
)
from cyclemono.cyclecomb import Exponents


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_report_json(capsys):
    code, out = run(capsys, "report", "-e", "2,3", "--json")
    assert code == 0
    rep = json.loads(out.out)
    assert rep["schema"] == 1
    assert rep["invariants"]["d"] == 5
    assert rep["verdicts"]["thm13"]["status"] == "pass"
    assert rep["verdicts"]["thm33"]["status"] == "skipped"
    assert rep["verdicts"]["thm33"]["reason"]


def test_report_invalid_exponents(capsys):
    code, out = run(capsys, "report", "-e", "1,1")
    assert code == 2 and "even j" in out.err
    code, out = run(capsys, "report", "-e", "2,x")
    assert code == 2


def test_report_full_suite(capsys):
    code, out = run(capsys, "report", "-e", "2,2,2", "--with-chains", "--with-ss", "--json")
    assert code == 0
    rep = json.loads(out.out)
    assert {k: v["status"] for k, v in rep["verdicts"].items() if v["status"] != "skipped"} == {
        "charpoly": "pass", "thm13": "pass", "thm33": "pass", "d1_injectivity": "pass",
        "xclass_indices": "pass", "claim2": "pass", "hn1_rank": "pass"}


def test_report_text(capsys):
    code, out = run(capsys, "report", "-e", "2,3")
    assert code == 0 and "thm13" in out.out and "Or(t^5 - 1)" in out.out


def test_report_roundtrip():
    rep = run_report(Exponents((2, 3)), Options(with_chains=True, with_ss=False))
    text = rep.dumps()
    again = SingularityReport.loads(text)
    assert again == rep
    assert again.dumps() == text


def test_roundtrip_rejects_unknown_schema():
    obj = run_report(Exponents((2, 3))).to_json()
    obj["schema"] = 2
    with pytest.raises(ValueError):
        SingularityReport.from_json(obj)


def test_generator_verdict():
    # odd n with g = 1: simple zeros, a generating element exists
    rep = run_report(Exponents((2, 1, 3)))
    assert rep.invariants["g"] == 1
    assert rep.verdicts["generator"]["status"] == "pass"
    rep = run_report(Exponents((2, 1, 3)), Options(budget=0))
    v = rep.verdicts["generator"]
    assert v["status"] == "skipped" and "budget" in v["reason"]


def test_batch(capsys):
    code, out = run(capsys, "batch", "--n", "2..3", "--max-mu", "12", "--json")
    assert code == 0
    summary = json.loads(out.out)
    assert summary["failures"] == 0 and summary["tuples"] > 0


def test_batch_dedup_rotations():
    full = list(admissible_tuples(range(2, 5), 20))
    dedup = list(admissible_tuples(range(2, 5), 20, dedup_rotations=True))
    assert 0 < len(dedup) < len(full)
    classes = {min(e.a[i:] + e.a[:i] for i in range(e.n)) for e in full}
    assert len(classes) == len(dedup)


def test_seed_is_deterministic():
    opts = Options(with_chains=True, seed=7)
    a = run_report(Exponents((2, 3)), opts).verdicts["thm33"]
    b = run_report(Exponents((2, 3)), opts).verdicts["thm33"]
    assert a == b


def test_ss_dump(capsys):
    code, out = run(capsys, "ss", "-e", "2,2,2")
    assert code == 0
    dump = json.loads(out.out)
    (page,) = dump["pages"]
    assert page["bidegree"] == [2, 0] and page["rank"] == 3
    assert len(page["d1"]["matrix"]) == len(page["d1"]["rows"])
    assert ss_dump(Exponents((2, 2, 2))) == dump


def test_parse_range():
    assert list(parse_range("2..4")) == [2, 3, 4]
    assert list(parse_range("3")) == [3]
    with pytest.raises(ValueError):
        parse_range("4..2")


def test_worker_count(monkeypatch):
    monkeypatch.setenv("CYCLEMONO_THREADS", "1")
    assert worker_count() == 1
    monkeypatch.setenv("CYCLEMONO_THREADS", "nope")
    assert worker_count() >= 1
