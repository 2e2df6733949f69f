import io
import json

import pytest

import sixlogic.gsixproof.decide as decide_module
from sixlogic.calculi.sfcalc import axiom_derivation, derivation_to_json
from sixlogic.cli import main, run
from sixlogic.core.config import Engine
from sixlogic.core.syntax import Var
from sixlogic.gsixproof.decide import DecisionOutcome, Verdict

OR_TO_NEGATED_AND = "p | q => ~(~p & ~q)"


def run_json(*argv: str) -> tuple[int, dict]:
    code, output = run([*argv, "--format", "json"])
    data = json.loads(output)
    assert data["exit"] == code
    return code, data


def test_decide():
    code, output = run(["decide", OR_TO_NEGATED_AND])
    assert code == 0
    assert output.splitlines()[0] == "provable (cross)"

    code, data = run_json("decide", "=> p | ~p", "--engine", "backward")
    assert code == 1
    assert data["verdict"] == "not-provable"
    assert data["counterassignment"] == {"p": "n"}


def test_decide_show_proof():
    _, data = run_json("decide", OR_TO_NEGATED_AND)
    assert "witness" not in data
    _, data = run_json("decide", OR_TO_NEGATED_AND, "--show-proof")
    assert data["witness"]["sequent"] == OR_TO_NEGATED_AND


def test_resource_exceeded():
    code, data = run_json("decide", "p, q => r", "--engine", "semantic", "--var-cap", "2")
    assert code == 3
    assert data["cap"] == "var_cap"


def test_disagreement(monkeypatch):
    def wrong(s, caps=None):
        return DecisionOutcome(s, Engine.SEMANTIC, Verdict.NOT_PROVABLE)

    monkeypatch.setitem(decide_module.ENGINES, Engine.SEMANTIC, wrong)
    code, data = run_json("decide", OR_TO_NEGATED_AND)
    assert code == 4
    assert data["verdicts"]["semantic"] == "not-provable"


def test_usage_errors():
    assert run(["decide"])[0] == 2
    assert run(["frobnicate"])[0] == 2
    assert run(["prove", OR_TO_NEGATED_AND, "--engine", "semantic"])[0] == 2
    assert run(["decide", "p", "--gsub-cap", "0"])[0] == 2
    assert run(["--help"]) == (0, "")


def test_parse_error():
    code, data = run_json("decide", "p & => q")
    assert code == 2
    assert data["text"] == "p & => q"
    assert data["column"] is not None


def test_valid():
    assert run(["valid", "p => p | q"]) == (0, "valid")
    code, data = run_json("valid", "p, ~p => q")
    assert code == 1
    assert data["counterassignment"] == {"p": "b", "q": "0"}
    code, output = run(["valid", "=> p | ~p", "--matrix", "boolean"])
    assert code == 0


def test_eval():
    assert run(["eval", "~p", "--assign", "p=1/3"]) == (0, "2/3")
    _, data = run_json("eval", "#p", "--assign", "p=n")
    assert data["value"] == "1" and data["designated"]
    assert run(["eval", "p & q", "--assign", "p=1"])[0] == 2
    assert run(["eval", "p", "--assign", "p=7"])[0] == 2


def test_entails_and_theorem():
    assert run(["entails", "p & q", "|-", "p"]) == (0, "true")
    assert run(["entails", "p", "⊢", "p | q", "--consequence", "matrix"]) == (0, "true")
    assert run(["entails", "p, ~p", "|-", "q"]) == (1, "false")
    assert run(["entails", "|-", "p | ~p"]) == (1, "false")
    assert run(["entails", "p", "q"])[0] == 2
    assert run(["theorem", "#p | ~#p"]) == (0, "true")
    assert run(["theorem", "p | ~p"]) == (1, "false")


def test_prove_and_check(tmp_path):
    """
    A proof written by prove checks, and stops checking once its principal formula is changed.
    """
    path = tmp_path / "proof.json"
    code, output = run(["prove", OR_TO_NEGATED_AND, "--out", str(path)])
    assert code == 0
    assert output.endswith(f"written to {path}")
    code, output = run(["check-proof", str(path)])
    assert code == 0
    assert output.startswith(f"proof of {OR_TO_NEGATED_AND} checks")

    data = json.loads(path.read_text(encoding="utf-8"))
    data["principal"] = "q"
    path.write_text(json.dumps(data), encoding="utf-8")
    code, output = run(["check-proof", str(path)])
    assert code == 1
    assert output.startswith("proof rejected: root")

    assert run(["check-proof", str(tmp_path / "missing.json")])[0] == 2
    assert run(["prove", "=> p | ~p"])[0] == 1


def test_check_sf(tmp_path):
    path = tmp_path / "derivation.json"
    path.write_text(json.dumps(derivation_to_json(axiom_derivation(Var("p")))), encoding="utf-8")
    code, data = run_json("check-sf", str(path))
    assert code == 0 and data["valid"]


def test_gen():
    code, output = run(["gen", "two"])
    assert code == 0
    assert output.splitlines()[-1].startswith("230 logic rules")
    _, data = run_json("gen", "sf")
    assert data["count"] == 84
    _, data = run_json("gen", "axiom")
    assert data["count"] == 324
    assert run(["gen", "axiom", "--partition-cap", "10"])[0] == 3
    assert run(["gen", "two", "--matrix", "L3"])[0] == 2
    _, data = run_json("gen", "two", "--matrix", "boolean")
    assert data["count"] == 10


def test_gen_out(tmp_path):
    path = tmp_path / "sf.json"
    code, output = run(["gen", "sf", "--out", str(path)])
    assert code == 0
    assert output == f"84 SF rules, written to {path}"
    assert len(json.loads(path.read_text(encoding="utf-8"))) == 84


def test_gsub():
    code, output = run(["gsub", "#~#(p & q) => ~#p | ~#q"])
    assert code == 0
    assert output.splitlines()[-1] == "15 generalized subformulas"
    _, data = run_json("gsub", "=> #(p | q)", "--literal")
    assert data["count"] == 7


def test_table():
    _, data = run_json("table", "circ")
    assert [v for _, v in data["rows"]] == ["1", "0", "0", "0", "0", "1"]
    _, data = run_json("table", "and")
    assert data["table"][3][2] == "1/3"
    code, output = run(["table", "neg"])
    assert code == 0
    assert output.splitlines()[0] == "p     ¬p"
    assert output.splitlines()[1:] == ["0     1", "1/3   2/3", "n     n", "b     b", "2/3   1/3", "1     0"]


def test_streamline_and_witnesses():
    code, output = run(["streamline"])
    assert code == 0
    assert "(18) propred[(9), (17)]" in output
    _, data = run_json("streamline", "--replay", "nabla-right")
    assert data["results"][0]["premises"] == ["~A => A"]
    code, output = run(["witnesses"])
    assert code == 0 and output.endswith("valid for m6")
    assert run(["witnesses", "--matrix", "L3"])[0] == 2


@pytest.mark.parametrize(("argv", "code"), [(["table", "nabla"], 0), (["valid", "=> p"], 1)])
def test_main_prints(capsys, argv, code):
    assert main(argv) == code
    assert capsys.readouterr().out


def test_sequent_files(tmp_path, monkeypatch):
    path = tmp_path / "sequents.txt"
    path.write_text(f"# one provable, one not\n\n{OR_TO_NEGATED_AND}\n#p => p\n", encoding="utf-8")
    code, data = run_json("decide", "--file", str(path))
    assert code == 1
    assert [r["verdict"] for r in data["results"]] == ["provable", "not-provable"]
    assert [r["exit"] for r in data["results"]] == [0, 1]

    code, output = run(["prove", "--file", str(path)])
    assert code == 1
    assert output.startswith(f"{OR_TO_NEGATED_AND}\n")

    monkeypatch.setattr("sys.stdin", io.StringIO("p => p | q\n#\tread from stdin\n"))
    assert run(["valid", "--file", "-"]) == (0, "valid")

    assert run(["decide", "p => p", "--file", str(path)])[0] == 2
    assert run(["prove", "--file", str(path), "--out", str(tmp_path / "proof.json")])[0] == 2
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing here\n", encoding="utf-8")
    assert run(["valid", "--file", str(empty)])[0] == 2


def test_check_sf_reports_invalid_root(tmp_path):
    path = tmp_path / "derivation.json"
    path.write_text(json.dumps({"nsequent": [["0", "p"]], "rule": "axiom"}), encoding="utf-8")
    code, data = run_json("check-sf", str(path))
    assert code == 1
    assert not data["valid"]
    assert data["counterassignment"]["p"] != "0"
