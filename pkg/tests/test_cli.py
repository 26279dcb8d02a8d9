import json

from typer.testing import CliRunner

from main import app, split_top_level, three_columns

runner = CliRunner()


def invoke(*args: str):
    return runner.invoke(app, list(args))


def test_split_top_level():
    assert split_top_level("v2,phi(0,1),v1") == ["v2", "phi(0,1)", "v1"]


def test_usage_errors_exit_two():
    assert invoke("resolve", "--group", "C6", "--field", "2").exit_code == 2
    assert invoke("resolve", "--group", "Q8", "--field", "3").exit_code == 2
    assert invoke("resolve", "--group", "Q8", "--window", "3..1").exit_code == 2
    assert invoke("massey", "--group", "C2xC2", "--triple", "u1,u2").exit_code == 2


def test_resolve_json():
    result = invoke("resolve", "--group", "Q8", "--window", "-9..9", "--check-exact", "--check-minimal", "--json")
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data["schema"] == 1
    assert [d["rank"] for d in data["degrees"]][:4] == [1, 1, 2, 2]
    assert all(c["passed"] for c in data["checks"])


def test_ring_json():
    result = invoke("ring", "--group", "C2", "--max-degree", "2", "--json")
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data["basis"]["1"] == ["x"]
    assert ["x", "x", "y"] in data["products"]


def test_gamma_json():
    result = invoke("gamma", "--group", "C2xC2xC2", "--field", "2", "--json")
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data["schema"] == 1
    assert data["verdict"] == "trivial"
    result = invoke("gamma", "--group", "Q8", "--json")
    assert json.loads(result.stdout)["verdict"] == "nontrivial"


def test_gamma_text():
    result = invoke("gamma", "--group", "C3", "--field", "3")
    assert result.exit_code == 0, result.output
    assert "nontrivial" in result.output


def test_massey_triple():
    result = invoke("massey", "--group", "C2xC2", "--triple", "v2,phi(0,1),v1", "--json")
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data["degree"] == 1
    assert data["representative"] == [["u1"]]
    assert data["indeterminacy_dimension"] == 0


def test_massey_matric_file(tmp_path):
    square = {"rows": [0, 0], "cols": [1, 1], "entries": [["y", "x+y"], ["x", "y"]]}
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"W": square, "X": square, "Y": square}))
    result = invoke("massey", "--group", "Q8", "--matric", str(path), "--json")
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data["contains_zero"] is False
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert invoke("massey", "--group", "Q8", "--matric", str(bad)).exit_code == 2


def test_m_table_json():
    result = invoke("m-table", "--group", "Q8", "--check-cocycle", "--json")
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert {"triple": ["x", "y", "x"], "value": "x^2"} in data["entries"]
    assert data["checks"][0]["passed"]


def test_field_modulus_on_the_command_line():
    result = invoke("resolve", "--group", "Q8", "--field", "2^2/1,1,1", "--window", "-2..2", "--json")
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["field"] == "2^2/1,1,1"
    assert invoke("resolve", "--group", "Q8", "--field", "2^2/1,0,1").exit_code == 2


def test_three_columns():
    rows = three_columns(["a", "bb", "c", "d", "e"])
    assert rows == ["a  | c | e", "bb | d"]
    assert three_columns([]) == []


def test_m_table_text_follows_listing_order():
    result = invoke("m-table", "--group", "Q8")
    assert result.exit_code == 0, result.output
    rows = [line for line in result.stdout.splitlines() if line.startswith("m(")]
    assert len(rows) == 10
    heads = [cell.split(" = ")[0].strip() for cell in rows[0].split(" | ")]
    assert heads == ["m(x, y, x)", "m(s, x, x^2*y)", "m(y*s, x, x^2)"]
    assert rows[1].startswith("m(y, x, y) = y^2")
    assert len(rows[-1].split(" | ")) == 2
