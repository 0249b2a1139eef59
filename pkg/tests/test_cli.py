import json

from cflab.cli import _glue_expressions, main


def test_glue():
    assert _glue_expressions(["eval", "--a", "3n+3", "--b", "-2n^2"]) == ["eval", "--a", "3n+3", "--b=-2n^2"]


def test_eval(capsys):
    assert main(["eval", "--a", "3n^2+3n+1", "--b", "-2n^4", "--digits", "20"]) == 0
    out = capsys.readouterr().out
    assert "5.45872031851953" in out and "geometric" in out


def test_eval_syntax_error(capsys):
    assert main(["eval", "--a", "3n^", "--b", "-2n^4"]) == 2
    assert "position" in capsys.readouterr().err


def test_h_ladder(capsys):
    assert main(["h", "--alpha", "0", "--beta", "0", "--gamma", "3", "--route", "ladder", "--digits", "15"]) == 0
    assert "step" in capsys.readouterr().out


def test_h_pole(capsys):
    assert main(["h", "--alpha", "-1", "--beta", "0", "--gamma", "0"]) == 2
    assert "PoleError" in capsys.readouterr().err


def test_hyper(capsys):
    assert main(["hyper", "--a", "3n+3", "--b", "-2n^2"]) == 0
    assert "(2n^2+8n+6)/(n+2)" in capsys.readouterr().out


def test_verify_one(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "--id", "cor2.5", "--digits", "20", "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["summary"]["passed"] == 1 and data["reports"][0]["pass"] is True
    assert "PASS cor2.5" in capsys.readouterr().out


def test_verify_budget_exit_code(capsys):
    assert main(["verify", "--id", "cor2.1", "--digits", "1000000"]) == 2
    assert main(["verify", "--id", "cor2.1", "--digits", "1000000", "--keep-going"]) == 1


def test_constants(capsys):
    assert main(["constants", "--digits", "12"]) == 0
    assert "catalan" in capsys.readouterr().out
