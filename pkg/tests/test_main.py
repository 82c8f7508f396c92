import io
import json
from pathlib import Path

import pytest

from minimal_models import resultant as resultant_module
from minimal_models.main import EXIT_BUDGET, EXIT_DOMAIN, EXIT_NO_UNIT_MODEL, EXIT_OK, EXIT_USAGE, run
from minimal_models.map_parser import MapParser

FIXTURES = Path(__file__).resolve().parent.parent / "minimal_models" / "fixtures"


def _run(*argv):
    out = io.StringIO()
    code = run([str(FIXTURES / a) if a.endswith(".json") else a for a in argv], out)
    return code, out.getvalue()


def test_res_and_morphism():
    assert _run("res", "sum_of_squares.json") == (EXIT_OK, "4\n")
    assert _run("res", "not_morphism.json") == (EXIT_OK, "0\n")
    assert _run("morphism", "not_morphism.json") == (EXIT_OK, "false\n")
    code, text = _run("morphism", "squares.json", "--json")
    assert code == EXIT_OK and json.loads(text) == {"morphism": True}


def test_badprimes():
    assert _run("badprimes", "squares.json") == (EXIT_OK, "(none)\n")
    assert _run("badprimes", "diagonal_9_4.json") == (EXIT_OK, "2 3\n")
    code, text = _run("badprimes", "diagonal_9_4.json", "--json")
    assert json.loads(text) == {"bad_primes": [2, 3]}


def test_minimize_json():
    code, text = _run("minimize", "sum_of_squares.json", "-p", "2", "--json")
    doc = json.loads(text)
    assert code == EXIT_OK
    assert (doc["prime"], doc["input_valuation"], doc["valuation"]) == (2, 2, 0)
    assert doc["model"]["resultant"] in (1, -1)


def test_gmm_json():
    code, text = _run("gmm", "diagonal_9_4.json", "--json")
    doc = json.loads(text)
    assert code == EXIT_OK
    assert doc["model"]["resultant"] in (1, -1)
    assert [row["prime"] for row in doc["report"]["rows"]] == [2, 3]
    assert doc["report"]["minimal_resultant"] == 1


def test_gmm_emit_map_round_trips(tmp_path):
    code, text = _run("gmm", "diagonal_9_4.json", "--emit-map")
    assert code == EXIT_OK
    emitted = tmp_path / "model.json"
    emitted.write_text(text, encoding="utf-8")
    assert MapParser.render_map(MapParser.load_model(str(emitted))) == text
    assert run(["badprimes", str(emitted)], io.StringIO()) == EXIT_OK
    out = io.StringIO()
    run(["badprimes", str(emitted)], out)
    assert out.getvalue() == "(none)\n"


def test_egr_without_a_unit_model():
    code, text = _run("egr", "stubborn_at_2.json", "--radius", "2")
    assert code == EXIT_NO_UNIT_MODEL
    lines = text.splitlines()
    assert lines[0] == "no unit-resultant model found"
    assert lines[-1].split() == ["2", "4", "2", "bad", "yes"]
    code, text = _run("egr", "stubborn_at_2.json", "--radius", "2", "--json")
    assert code == EXIT_NO_UNIT_MODEL
    assert json.loads(text)["model"] is None


def test_only_egr_exits_3():
    # same stubborn map: gmm and report succeed with the bad prime in the table
    code, text = _run("gmm", "stubborn_at_2.json", "--radius", "2", "--json")
    assert code == EXIT_OK
    assert json.loads(text)["report"]["minimal_resultant"] == 4
    code, text = _run("report", "stubborn_at_2.json", "--radius", "2")
    assert code == EXIT_OK
    assert text.splitlines()[-1].split() == ["2", "4", "2", "bad", "yes"]


def test_egr_and_report_on_a_good_map():
    code, text = _run("egr", "squares.json")
    assert code == EXIT_OK and "resultant: 1" in text
    assert _run("report", "squares.json") == (EXIT_OK, "(no bad primes)\n")


def test_glue():
    code, text = _run("glue", "adele_2_3.json", "--json")
    assert code == EXIT_OK
    assert json.loads(text) == {"basis": [["1/2", 0], [0, 3]], "scale": "1/2"}
    assert _run("glue", "adele_2_3.json") == (EXIT_OK, "1/2    0\n  0    3\n")


def test_factorize():
    code, text = _run("factorize", "adele_hadamard.json", "--json")
    doc = json.loads(text)
    assert code == EXIT_OK
    assert [entry["prime"] for entry in doc["C"]["support"]] == [2]
    assert len(doc["B"]) == 2
    code, text = _run("factorize", "adele_hadamard.json")
    assert text.startswith("C at 2:\n") and "B:\n" in text


def test_domain_errors_exit_1(tmp_path, capsys):
    assert _run("gmm", "not_morphism.json")[0] == EXIT_DOMAIN
    assert _run("res", str(tmp_path / "missing.json"))[0] == EXIT_DOMAIN
    broken = tmp_path / "broken.json"
    broken.write_text('{"forms": ["x^2 + y", "y^2"]}', encoding="utf-8")
    assert run(["res", str(broken)], io.StringIO()) == EXIT_DOMAIN
    assert "not homogeneous" in capsys.readouterr().err


def test_usage_errors_exit_64():
    assert run([], io.StringIO()) == EXIT_USAGE
    assert _run("res", "squares.json", "--bogus")[0] == EXIT_USAGE
    assert _run("minimize", "squares.json")[0] == EXIT_USAGE
    assert _run("frobnicate")[0] == EXIT_USAGE


def test_degenerate_resultant_exits_2(monkeypatch):
    monkeypatch.setattr(resultant_module, "_macaulay_quotient", lambda lift: None)
    assert _run("res", "plane_squares.json")[0] == EXIT_BUDGET


@pytest.mark.parametrize("flag", ["-v", "-vv"])
def test_verbosity_flags(flag):
    out = io.StringIO()
    assert run([flag, "res", str(FIXTURES / "squares.json")], out) == EXIT_OK
    assert out.getvalue() == "1\n"


def test_egr_output_is_byte_identical_across_runs():
    first = _run("egr", "stubborn_at_2.json", "--radius", "2", "--json")
    assert _run("egr", "stubborn_at_2.json", "--radius", "2", "--json") == first
