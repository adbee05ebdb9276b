import json
import subprocess
import sys

import pytest

from fibspace.cli import main
from fibspace.numerics import parse_rational


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_fib(capsys):
    code, doc = run_json(capsys, "fib", "50")
    assert code == 0 and doc["result"]["f_n"] == "20365011074"


def test_identities(capsys):
    code, doc = run_json(capsys, "identities", "--max", "100")
    assert code == 0 and len(doc["result"]["rows"]) == 101
    assert all(r["sum_residual"] == "0" for r in doc["result"]["rows"])
    code, doc = run_json(capsys, "identities", "--max", "0")
    assert code == 0 and len(doc["result"]["rows"]) == 1


def test_transform_directions(capsys):
    code, doc = run_json(capsys, "transform", "--seq", "builtin:fib_square",
                         "--direction", "fbar", "--depth", "4")
    assert doc["result"]["terms"] == ["1", "1/2", "1/3", "1/4", "1/5"]
    code, doc = run_json(capsys, "transform", "--seq", '{"kind":"table","values":["1"]}',
                         "--direction", "inverse", "--depth", "2")
    assert doc["result"]["terms"] == ["1", "2", "9/2"]
    for direction in ("fhat", "fbar", "inverse"):
        code, doc = run_json(capsys, "transform", "--seq", "builtin:zero",
                             "--direction", direction, "--depth", "5")
        assert doc["result"]["terms"] == ["0"] * 6


def test_member_and_norm(capsys):
    code, doc = run_json(capsys, "member", "--seq", "builtin:fib_square",
                         "--space", "c0_lambda_fhat", "--lambda", "linear")
    assert code == 0 and doc["result"]["verdict"]["status"] == "certified_true"
    code, doc = run_json(capsys, "norm", "--seq", "builtin:sign_witness", "--depth", "10")
    assert doc["result"]["norm_lower_bound"] == "3/2"
    code, doc = run_json(capsys, "member", "--seq", "builtin:fib_square", "--space", "l_inf")
    assert code == 1


def test_basis_and_dual(capsys):
    code, doc = run_json(capsys, "basis", "--seq", "builtin:fib_square", "--m", "3",
                         "--depth", "40")
    assert doc["result"]["residual"] == "1/5"
    code, doc = run_json(capsys, "dual", "--seq", '{"kind":"table","values":["1"]}',
                         "--depth", "60")
    assert code == 0 and doc["result"]["gamma"]["status"] in ("certified_true", "empirical_true")


def test_classify_and_compact(capsys):
    code, doc = run_json(capsys, "classify", "--matrix", "builtin:zero",
                         "--class", "c_lambda_fhat->c")
    assert code == 0 and doc["result"]["overall"]["status"] == "certified_true"
    code, doc = run_json(capsys, "compact", "--matrix", "builtin:row_e0", "--target", "c",
                         "--depth", "60")
    assert code == 1
    assert doc["result"]["hmnc"] == {"kind": "interval", "lower": "1/2", "upper": "1"}
    assert doc["result"]["compact"] is False


@pytest.mark.parametrize("argv", [
    ("fib", "-1"),
    ("identities", "--min", "5", "--max", "2"),
    ("member", "--seq", '{"kind": ', "--space", "c"),
    ("member", "--seq", "builtin:nope", "--space", "c"),
    ("classify", "--matrix", "builtin:zero", "--class", "c->c"),
    ("compact", "--matrix", "builtin:zero", "--target", "c", "--horizon", "40"),
    ("transform", "--seq", "builtin:zero", "--lambda", '{"family":"geometric","ratio":"1"}'),
    ("nosuchcommand",),
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_parse_error_has_position(capsys):
    code, _, err = run(capsys, "member", "--seq", '{"kind": "table",\n "values": [1,]}',
                       "--space", "c")
    assert code == 2 and "line 2 column" in err


def test_formats_and_out(capsys, tmp_path):
    code, out, _ = run(capsys, "fib", "10", "--format", "csv")
    assert out.splitlines()[0] == "key,value"
    assert "result.f_n,89" in out
    code, out, _ = run(capsys, "fib", "10", "--format", "pretty")
    assert "result.f_n" in out
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "fib", "10", "--out", str(target))
    assert out == "" and json.loads(target.read_text())["result"]["f_n"] == "89"


def test_reports_are_deterministic_and_round_trip(capsys):
    argv = ("transform", "--seq", "builtin:b_seq", "--direction", "fhat", "--depth", "12")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    for term in json.loads(first)["result"]["terms"]:
        assert str(parse_rational(term)) == term


def test_selftest_command(capsys):
    code, doc = run_json(capsys, "selftest", "--depth", "8")
    assert code == 0
    code, doc = run_json(capsys, "selftest", "--depth", "8", "--corrupt", "fbar_inv")
    assert code == 1
    failed = [c["name"] for c in doc["result"]["checks"] if not c["passed"]]
    assert failed == ["inverse_identity"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fibspace", "fib", "7"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["f_n"] == "21"
