import io
import json
from pathlib import Path

import jsonschema
import pytest

from sqema import fol
from sqema.cli import main
from sqema.oracle import fo_equivalent

SCHEMAS = Path(__file__).resolve().parent.parent / "docs" / "schemas"

CHURCH_ROSSER = "forall yj . R(yi,yj) -> (forall y . R(yi,y) -> (exists u . R(y,u) & R(yj,u)))"


def cli(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def as_json(kind, text):
    data = json.loads(text)
    jsonschema.validate(data, json.loads((SCHEMAS / f"{kind}.schema.json").read_text()))
    return data


def test_correspond_church_rosser_verified():
    code, out, _ = cli("correspond", "dia box p -> box dia p", "--verify", "--max-worlds", "3")
    assert code == 0
    assert "status: SUCCESS" in out and "verification: VERIFIED (530 frames, 1570 worlds)" in out
    local = next(l for l in out.splitlines() if l.startswith("local: "))[7:]
    assert fo_equivalent(fol.parse_fo(local), fol.parse_fo(CHURCH_ROSSER), 3)


def test_correspond_json():
    code, out, _ = cli("correspond", "dia box p -> box dia p", "--format", "json", "--trace", "--verify")
    d = as_json("correspond", out)
    assert code == 0 and d["success"] and d["canonical"] and d["verification"]["verified"]
    assert d["trace"] and {s["rule"] for s in d["trace"]} >= {"DiaRule", "Ackermann"}
    assert fo_equivalent(fol.parse_fo(d["local"]), fol.parse_fo(CHURCH_ROSSER), 3)


def test_correspond_trace_text():
    code, out, _ = cli("correspond", "box p -> p", "--trace")
    assert code == 0 and "trace:" in out and "Ackermann @ p" in out


def test_mckinsey_exit_1():
    code, out, _ = cli("correspond", "box dia p -> dia box p")
    assert code == 1
    assert "AllOrdersExhausted" in out
    assert "#i0 -> box dia p & box dia ~p" in out
    code, out, _ = cli("correspond", "box dia p -> dia box p", "--format", "json")
    d = as_json("correspond", out)
    assert d["reason"] == "AllOrdersExhausted" and d["local"] is None


def test_budget_and_order_flags():
    code, out, _ = cli("correspond", "dia box p -> box dia p", "--budget", "1")
    assert code == 1 and "BudgetExceeded" in out
    code, out, _ = cli("correspond", "box(box p <-> q) -> p", "--order", "p,q", "--max-orders", "1")
    assert code == 1
    code, out, _ = cli("correspond", "box(box p <-> q) -> p", "--order", "q,p")
    assert code == 0 and "local: false" in out


def test_no_polarity_switch_flag():
    assert cli("correspond", "box dia p -> dia (p & p)")[0] == 0
    assert cli("correspond", "box dia p -> dia (p & p)", "--no-polarity-switch")[0] == 1


def test_classify_d():
    code, out, _ = cli("classify", "p & box(dia p -> box q) -> dia box box q")
    assert code == 0
    assert "sahlqvist=false" in out and "inductive=true" in out and "edges: p->q" in out
    code, out, _ = cli("classify", "box((~box p | q) | (~q | box p)) | ~p", "--format", "json")
    d = as_json("classify", out)
    assert d["cycle"] == ["p", "q", "p"] and not d["inductive"]


def test_verify_against():
    code, out, _ = cli("verify", "box p -> p", "--against", "R(yi,yi)", "--format", "json")
    d = as_json("verify", out)
    assert code == 0 and d["verification"]["verified"] and d["source"] == "given"
    code, out, _ = cli("verify", "box p -> p", "--against", "true", "--max-worlds", "1")
    assert code == 1 and "REFUTED at frame 1;0 world 0" in out


def test_verify_computed():
    code, out, _ = cli("verify", "p -> box dia p", "--format", "json", "--max-worlds", "2")
    d = as_json("verify", out)
    assert code == 0 and d["source"] == "computed"
    assert d["verification"]["frames_checked"] == 18
    code, out, _ = cli("verify", "box dia p -> dia box p", "--format", "json")
    assert code == 1 and as_json("verify", out)["verification"] is None


def test_gen():
    code, out, _ = cli("gen", "sahlqvist", "--seed", "4", "--count", "3", "--format", "json")
    d = as_json("gen", out)
    assert code == 0 and [x["seed"] for x in d["formulae"]] == [4, 5, 6]
    again = cli("gen", "sahlqvist", "--seed", "4", "--count", "3")[1].splitlines()
    assert again == [x["formula"] for x in d["formulae"]]


def test_batch(tmp_path):
    path = tmp_path / "in.txt"
    path.write_text("% comment\nbox p -> p\n\nbox dia p -> dia box p\ndia box p -> box dia p\n")
    code, out, _ = cli("batch", str(path), "--verify", "--format", "json")
    d = as_json("batch", out)
    assert code == 1
    assert [r["line"] for r in d["rows"]] == [2, 4, 5]
    s = d["summary"]
    assert (s["success"], s["failure"], s["error"], s["total"]) == (2, 1, 0, 3)
    assert s["success"] + s["failure"] + s["error"] == s["total"] == len(d["rows"])
    code, out, _ = cli("batch", str(path))
    assert "total 3: 2 success, 1 failure, 0 error" in out


def test_batch_parse_error_line_number(tmp_path):
    path = tmp_path / "in.txt"
    path.write_text("box p -> p\n(p &\n")
    code, out, _ = cli("batch", str(path), "--format", "json")
    d = as_json("batch", out)
    assert code == 2
    assert d["rows"][1]["error"]["line"] == 2 and d["rows"][1]["error"]["column"] == 5


def test_batch_stdin(monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("box p -> p\n"))
    code, out, _ = cli("batch", "-")
    assert code == 0 and "1 success" in out


def test_parse_error_exit_2():
    code, out, err = cli("correspond", "box (p &")
    assert code == 2 and "line 1, column 9" in err
    code, out, _ = cli("classify", "p $", "--format", "json")
    d = as_json("parse-error", out)
    assert code == 2 and (d["line"], d["column"]) == (1, 3)


@pytest.mark.parametrize("argv", [
    [], ["frobnicate"], ["correspond"], ["correspond", "p", "--max-worlds", "5"],
    ["gen", "modal"], ["verify", "p", "--against", "R(x"], ["batch", "/nonexistent/file"],
    ["gen", "sahlqvist", "--max-depth", "1"], ["correspond", "p", "--max-orders", "0"],
])
def test_usage_errors(argv):
    assert cli(*argv)[0] == 2


def test_help():
    assert cli("--help")[0] == 0
