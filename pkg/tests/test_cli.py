import json
import re
from importlib import resources

import jsonschema
import pytest

from coxinv.cli import SUITES, main, parse_caps
from coxinv.errors import DomainError
from coxinv.stiefel import canonical_torsor, evaluate, parse_expr
from coxinv.symbols import parse_class

SCHEMA = json.loads(resources.files("coxinv").joinpath("schemas/report.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("t,n,count", [("B", 2, 4), ("D", 4, 6), ("A", 5, 3)])
def test_basis(capsys, t, n, count):
    code, out, _ = run(capsys, "basis", "--type", t, "--rank", str(n))
    lines = out.splitlines()
    assert code == 0 and lines[-1] == f"count: {count}" and len(lines) == count + 1


def test_basis_golden(capsys):
    _, out, _ = run(capsys, "basis", "--type", "B", "--rank", "2")
    assert out == "1\nwt1\nwt2\nw1\ncount: 4\n"
    _, out, _ = run(capsys, "basis", "--type", "B", "--rank", "2", "--json")
    assert json.loads(out) == {"type": "B", "rank": 2, "basis": ["1", "wt1", "wt2", "w1"], "count": 4}


@pytest.mark.parametrize("argv,expected", [
    (("--type", "B", "--rank", "4", "--expr", "w1*wt3", "--q", "2"), "0"),
    (("--type", "B", "--rank", "4", "--expr", "wt1", "--q", "0"), "(u1)+(v1)+(u2)+(v2)"),
    (("--type", "B", "--rank", "2", "--expr", "w0", "--q", "0"), "1"),
])
def test_restrict_golden(capsys, argv, expected):
    code, out, _ = run(capsys, "restrict", *argv)
    assert code == 0 and out == expected + "\n"


def test_restrict_json(capsys):
    code, out, _ = run(capsys, "restrict", "--type", "B", "--rank", "2", "--expr", "w̃1", "--q", "1", "--json")
    d = json.loads(out)
    assert code == 0 and d["expr"] == "wt1" and d["q"] == 1 and d["torsor"] == "k(√t1) ; α=(u1)"


def test_restrict_errors(capsys):
    code, _, err = run(capsys, "restrict", "--type", "B", "--rank", "4", "--expr", "w1 + q2")
    assert code == 2 and "position 5" in err
    code, _, _ = run(capsys, "restrict", "--type", "B", "--rank", "4", "--expr", "w9")
    assert code == 2
    code, _, _ = run(capsys, "restrict", "--type", "B", "--rank", "4", "--expr", "w1", "--q", "3")
    assert code == 2


@pytest.mark.parametrize("poly,expected", [("x1*x2", "false"), ("0", "true"), ("x1^2*x2 + x1*x2^2", "true")])
def test_negligible(capsys, poly, expected):
    code, out, _ = run(capsys, "negligible", "--n", "2", "--poly", poly)
    assert code == 0 and out == expected + "\n"


def test_negligible_parse_error(capsys):
    code, _, err = run(capsys, "negligible", "--n", "2", "--poly", "x1 + z")
    assert code == 2 and err.startswith("coxinv: error:")


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "reld4")
    assert code == 0 and "result: PASS" in out
    code, out, _ = run(capsys, "verify", "--suite", "freeness", "--type", "B", "--rank", "6", "--json")
    assert code == 0 and json.loads(out)["witness"]["rank"] == 16
    code, out, _ = run(capsys, "verify", "--suite", "vanishing", "--type", "B", "--rank", "4", "--no-minus-one-square")
    assert code == 1 and "result: FAIL" in out


def test_usage_errors(capsys):
    assert run(capsys, "verify", "--suite", "nope")[0] == 2
    assert run(capsys, "verify", "--suite", "freeness")[0] == 2
    assert run(capsys, "basis", "--type", "Q", "--rank", "2")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "verify", "--suite", "reld4", "--cap", "bogus=3")[0] == 2


SUITE_ARGS = {
    "reld4": (), "d4-freeness": (), "siw0": ("--rank", "4"), "h0": ("--rank", "4"),
    "vanishing": ("--rank", "4"), "freeness": ("--type", "D", "--rank", "4"),
    "fixed-basis": ("--type", "B", "--rank", "3"), "eq24": ("--rank", "4"),
    "generation-dn": ("--rank", "4"), "subgroups": ("--type", "B", "--rank", "3"),
}


def _normalized(text):
    return re.sub(r'"elapsed_ms": [0-9.e+-]+', '"elapsed_ms": 0', text)


@pytest.mark.parametrize("suite", SUITES)
def test_json_reports_validate_and_repeat(capsys, suite):
    _, first, _ = run(capsys, "verify", "--suite", suite, *SUITE_ARGS[suite], "--json")
    jsonschema.validate(json.loads(first), SCHEMA)
    _, second, _ = run(capsys, "verify", "--suite", suite, *SUITE_ARGS[suite], "--json")
    assert _normalized(first) == _normalized(second)


def test_failure_report_validates(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "vanishing", "--rank", "4", "--no-minus-one-square", "--json")
    d = json.loads(out)
    jsonschema.validate(d, SCHEMA)
    assert code == 1 and not d["pass"] and d["witness"]["nonzero"]
    assert d["flags"] == {"minus_one_square": False, "two_square": True}


def test_caps(capsys, monkeypatch):
    assert parse_caps(["b_fingerprint_rank=3"]).b_fingerprint_rank == 3
    assert parse_caps([], "d_fingerprint_rank=6, subgroup_rank=2").subgroup_rank == 2
    assert parse_caps(["subgroup_rank=5"], "subgroup_rank=2").subgroup_rank == 5
    with pytest.raises(DomainError):
        parse_caps(["b_fingerprint_rank"])
    with pytest.raises(DomainError):
        parse_caps(["b_fingerprint_rank=0"])
    monkeypatch.setenv("COXINV_CAPS", "b_fingerprint_rank=3")
    code, _, err = run(capsys, "verify", "--suite", "freeness", "--type", "B", "--rank", "4")
    assert code == 2 and "cap" in err
    code, out, _ = run(capsys, "verify", "--suite", "freeness", "--type", "B", "--rank", "4",
                       "--cap", "b_fingerprint_rank=4", "--json")
    assert code == 0 and json.loads(out)["caps"]["b_fingerprint_rank"] == 4


@pytest.mark.parametrize("t,n,q,text", [
    ("B", 4, 0, "wt2 + w1*wt1"), ("B", 4, 2, "w2*wt2 + wt4"), ("B", 5, 1, "w1*wt3 + wt1"), ("D", 6, 3, "w2*wt2 + wt4"),
])
def test_rendered_classes_round_trip(t, n, q, text):
    T = canonical_torsor(t, n, q)
    value = evaluate(parse_expr(text, t, n), T)
    assert parse_class(str(value), T.ctx) == value


def test_unflagged_rendering_round_trips():
    T = canonical_torsor("B", 4, 2, False, False)
    value = evaluate(parse_expr("w2*wt2 + w1*wt3 + wt4", "B", 4), T)
    assert "(−1)" in str(value) or "(2)" in str(value)
    assert parse_class(str(value), T.ctx) == value
