import importlib
import io
import json

import pytest

from groupdet import cli

CASES = {
    ("group", "info"): ["--group", "s3"],
    ("group", "characters"): ["--group", "z4"],
    ("det", "expand"): ["--group", "z4.json"],
    ("det", "eval"): ["--group", "s3", "--coeffs", "1,2,0,1/2,3,-1"],
    ("det", "circulant"): ["--coeffs", "1,2,3,4"],
    ("factor", "dedekind"): ["--group", "klein"],
    ("factor", "s3"): ["--coeffs", "1,1,1,1,1,1"],
    ("blocks", "dets"): ["--group", "s3", "--coeffs", "1,2,3,4,5,6"],
    ("pde", "symbol"): ["--group", "z3"],
    ("pde", "plane-wave"): ["--group", "z2", "--alpha", "1,1", "--func", "pow3"],
    ("pde", "fd-order"): ["--group", "z2", "--alpha", "1,1"],
    ("pde", "separated"): ["--group", "z2", "--funcs", "pow2,sin"],
    ("pde", "cayley"): ["--f", "2", "--power", "2"],
    ("pde", "polarization"): ["--f", "2", "--j", "1", "--l", "2"],
    ("pde", "omega9"): [],
    ("john", "transform"): ["--lam", "0.5,0.5,0.5", "--alpha", "-1,-2", "--beta", "3,4"],
    ("john", "closed"): ["--lam", "0.5,0.5,0.5", "--alpha", "-1,-2", "--beta", "3,4"],
    ("john", "compare"): ["--count", "3"],
    ("efun", "falling"): ["--n", "4"],
    ("efun", "hilbert"): ["--n", "4"],
    ("efun", "sigma"): ["--n", "3"],
    ("efun", "ode-coeffs"): ["--n", "5"],
    ("efun", "eval"): ["--kind", "L", "--n", "2", "--nu", "1/2", "--x", "1.3"],
    ("efun", "residual"): ["--n", "3", "--nu", "1/3", "--p", "1"],
    ("efun", "denominators"): ["--n", "3", "--nu", "1/2", "--terms", "20"],
    ("efun", "bracket"): ["--func", "prod", "--base", "0,0", "--r", "2", "--x", "0.3,0.9"],
    ("efun", "solve"): ["--n", "2"],
    ("liealg", "summary"): ["--group", "q8"],
    ("liealg", "generators"): ["--group", "z3"],
    ("liealg", "convolve"): ["--group", "s3", "--a", "1,0,0,0,0,0", "--b", "1,2,3,4,5,6"],
    ("liealg", "inverse"): ["--group", "z4", "--a", "2,1,0,0"],
    ("afrob", "check"): ["--n", "3"],
    ("afrob", "product"): ["--z", "1,2", "--X", "1,1", "--Y", "2,4"],
    ("afrob", "potential"): ["--z", "1,2,0.5"],
    ("afrob", "structure"): ["--z", "1,2,1/2"],
}


def invoke(argv):
    buf = io.StringIO()
    code = cli.run(argv, stdout=buf)
    return code, json.loads(buf.getvalue()), buf.getvalue()


def test_every_command_has_a_case():
    assert set(CASES) == set(cli.COMMANDS)


def test_every_operation_is_reachable():
    for op, cmd in cli.OPERATIONS.items():
        mod, fn = op.split(".")
        assert callable(getattr(importlib.import_module(f"groupdet.{mod}"), fn)), op
        assert tuple(cmd.split()) in cli.COMMANDS, op


@pytest.mark.parametrize("key", sorted(CASES), ids=lambda k: " ".join(k))
def test_command_runs(key):
    code, doc, _ = invoke([*key, *CASES[key]])
    assert code == 0, doc
    assert doc["config"]["seed"] == 42
    assert "result" in doc


def test_outputs_are_byte_identical():
    for key in [("group", "characters"), ("blocks", "dets"), ("afrob", "check"), ("efun", "eval")]:
        assert invoke([*key, *CASES[key]])[2] == invoke([*key, *CASES[key]])[2]


def test_z4_expansion_terms():
    _, doc, _ = invoke(["det", "expand", "--group", "z4"])
    terms = doc["result"]["polynomial"]["terms"]
    assert doc["result"]["degree"] == 4
    by_exps = {tuple(t["exps"]): (t["num"], t["den"]) for t in terms}
    assert by_exps[(4, 0, 0, 0)] == ("1", "1")
    assert by_exps[(0, 4, 0, 0)] == ("-1", "1")


def test_ode_coeffs_n5_printed():
    _, doc, _ = invoke(["efun", "ode-coeffs", "--n", "5"])
    texts = [row["text"] for row in doc["result"]["A"]]
    assert texts[2] == "685*nu^2 + 270*nu + 25"
    assert texts[5] == "-9576*nu^5"


def test_rational_serialization():
    _, doc, _ = invoke(["det", "eval", "--group", "z2", "--coeffs", "1/2,1/3"])
    assert doc["result"]["det"] == {"num": "5", "den": "36"}


def test_domain_error_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "table": [[0, 1], [0, 1]]}))
    code, doc, _ = invoke(["det", "expand", "--group", str(bad)])
    assert code == 2 and doc["error"]["code"] == "NonLatinSquare" and doc["error"]["module"] == "group-core"


def test_non_associative_exit_2(tmp_path):
    table = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"table": table}))
    code, doc, _ = invoke(["det", "expand", "--group", str(bad)])
    assert code == 2 and doc["error"]["code"] == "NonAssociative"


def test_module_errors_carry_their_module():
    code, doc, _ = invoke(["efun", "eval", "--kind", "Y_p", "--n", "3", "--nu", "0", "--x", "1", "--p", "1"])
    assert code == 2 and doc["error"] == {**doc["error"], "code": "ResonantExponents", "module": "efun"}
    code, doc, _ = invoke(["liealg", "inverse", "--group", "s3", "--a", "1,1,1,1,1,1"])
    assert code == 2 and doc["error"]["code"] == "SingularFrobenius"


def test_usage_errors_exit_1():
    assert invoke(["bogus"])[0] == 1
    assert invoke(["efun", "falling"])[0] == 1
    assert invoke(["det", "circulant", "--coeffs", "1,x"])[0] == 1


def test_alias():
    code, doc, _ = invoke(["frobgroup", "liealg", "--group", "s3"])
    assert code == 0 and doc["result"]["r"] == 3 and doc["result"]["derived_dim"] == 3


def test_out_file(tmp_path):
    out = tmp_path / "r.json"
    buf = io.StringIO()
    assert cli.run(["efun", "sigma", "--n", "3", "--out", str(out)], stdout=buf) == 0
    assert buf.getvalue() == ""
    assert json.loads(out.read_text())["result"]["sigma"]["values"] == ["1", "6", "3", "-10"]
