import json
import subprocess
import sys

import pytest

from jetinv import formsalg, sl2inv, sl3inv, syzygy
from jetinv.cli import main, render, run_command
from jetinv.jets import JetContext, lie_check, sl2_generators, tresse_frame

CTX = JetContext(2, 2)


def run(*argv):
    return run_command(list(argv))


def test_weight_of_hessian():
    res = run("weight", "--expr", "u[2,0]*u[0,2]-u[1,1]^2")
    assert res.status == "ok" and res.exit_code == 0
    assert res.result["weight"] == -4


def test_cubic_syzygy_verifies():
    res = run("syzygy", "verify", "--case", "cubic")
    assert res.status == "ok"
    assert res.result["verified"] is True
    assert res.command == "syzygy verify"


def test_equivalent_cubics():
    res = run("equiv", "--degree", "3", "--form1", "x^3+y^3", "--form2", "x^3+y^3")
    assert res.status == "ok"
    assert res.result["verdict"] == "equivalent"


def test_irregular_form_is_an_in_band_error():
    res = run("equiv", "--degree", "3", "--form1", "x^3", "--form2", "x^3")
    assert res.status == "error" and res.reason == "irregular"
    assert res.exit_code == 1


def test_json_schema():
    d = json.loads(run("weight", "--name", "Delta2").to_json())
    assert set(d) == {"status", "command", "result", "diagnostics"}
    assert isinstance(d["diagnostics"], list)


def test_parity_eval_and_lie_check():
    res = run("eval", "--name", "J21")
    assert res.result["expression"] == render(sl2inv.builtin("J21"))
    res = run("lie-check", "--group", "sl2", "--name", "I[1,1]@2")
    assert res.result["invariant"] == lie_check(sl2inv.builtin("I[1,1]@2"), sl2_generators())


def test_parity_eval_at_point():
    res = run("eval", "--name", "Delta2", "--at", "u[2,0]=1,u[0,2]=2,u[1,1]=1")
    value = sl2inv.builtin("Delta2").evaluate({"u[2,0]": 1, "u[0,2]": 2, "u[1,1]": 1})
    assert res.result["value"] == render(value) == "1"


def test_parity_forms():
    phi = formsalg.Form.parse("x^3+2*x*y^2-y^3", 2, 3)
    psi = formsalg.Form.parse("x^2-5*y^2", 2)
    res = run("discriminant", "--form", "x^3+2*x*y^2-y^3", "--degree", "3")
    assert res.result["discriminant"] == render(formsalg.discriminant(phi))
    res = run("resultant", "--form1", "x^3+2*x*y^2-y^3", "--form2", "x^2-5*y^2")
    assert res.result["resultant"] == render(formsalg.sylvester_resultant(phi, psi))
    assert any("constant" in d for d in res.diagnostics)


def test_parity_restrict():
    res = run("restrict", "--name", "Delta2", "--form", "x^3+y^3", "--degree", "3")
    phi = formsalg.Form.parse("x^3+y^3", 2, 3)
    assert res.result["restriction"] == render(formsalg.restrict(sl2inv.builtin("Delta2"), phi))


def test_parity_tresse():
    res = run("tresse", "--invariants", "u[0,0],u[1,0]", "--apply", "u[2,0]")
    f = [CTX.parse("u[0,0]"), CTX.parse("u[1,0]")]
    g = CTX.parse("u[2,0]")
    assert res.result["derivatives"] == [render(D(g)) for D in tresse_frame(f)]


def test_parity_sl3_generators():
    res = run("sl3", "generators")
    assert res.result["generators"]["J2"] == render(sl3inv.hessian3())
    assert res.result["generators"]["J4"] == "1"


def test_quartic_syzygy_relation_text():
    res = run("syzygy", "verify", "--case", "quartic")
    assert res.result["relation"] == str(syzygy.quartic_relation())


@pytest.mark.parametrize("argv,reason", [
    (["bogus"], "usage"),
    (["eval", "--expr", "u[2,0]+"], "parse-error"),
    (["eval", "--name", "nope"], "unknown-name"),
    (["eval", "--expr", "1/0"], "parse-error"),
    (["discriminant", "--form", "x^2+y", "--degree", "2"], "invalid-form"),
    (["weight", "--expr", "0"], "invalid-input"),
])
def test_error_reasons(argv, reason):
    res = run_command(argv)
    assert res.status == "error"
    assert res.reason == reason
    assert res.exit_code == 1


def test_budget_exceeded():
    res = run("syzygy", "discover", "--bound", "5", "--timeout-seconds", "0.01")
    assert res.reason == "budget-exceeded"
    assert res.exit_code == 3


def test_plain_output(capsys):
    assert main(["weight", "--expr", "u[2,0]*u[0,2]-u[1,1]^2", "--plain"]) == 0
    assert capsys.readouterr().out.strip() == "-4"
    assert main(["eval", "--name", "nope", "--plain"]) == 1
    assert "unknown-name" in capsys.readouterr().err


def test_output_is_byte_deterministic():
    argv = [sys.executable, "-m", "jetinv", "tresse", "--invariants", "u[0,0],u[1,0]",
            "--apply", "u[2,0]*u[0,2]-u[1,1]^2"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["status"] == "ok"
