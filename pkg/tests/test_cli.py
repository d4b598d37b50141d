import hashlib
import json
from pathlib import Path

import jsonschema
import pytest

from hvdimer.cli import main

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "fixtures"
SCHEMAS = ROOT / "docs" / "schemas"


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def check_manifest(out: Path, command):
    m = json.loads((out / "run_manifest.json").read_text())
    jsonschema.validate(m, schema("run_manifest"))
    assert m["command"] == command
    for item in m["outputs"]:
        assert hashlib.sha256((out / item["path"]).read_bytes()).hexdigest() == item["sha256"]
    return m


def run(tmp_path, *argv, name="out"):
    out = tmp_path / name
    code = main([*map(str, argv), "--out-dir", str(out)])
    return code, out


def test_hv_delta4(tmp_path, capsys):
    code, out = run(tmp_path, "hv", FIX / "delta4.json")
    assert code == 0
    assert "1 dimer model" in capsys.readouterr().out
    m = check_manifest(out, "hv")
    names = {o["path"] for o in m["outputs"]}
    assert {"arrangements.json", "dimer_0.json", "dimer_0.svg", "theorem1_report.json"} <= names
    assert "dimer_1.json" not in names
    jsonschema.validate(json.loads((out / "dimer_0.json").read_text()), schema("dimer"))
    report = json.loads((out / "theorem1_report.json").read_text())
    jsonschema.validate(report, schema("report"))
    assert report["pass"]


def test_hv_is_deterministic_and_jobs_invariant(tmp_path):
    _, a = run(tmp_path, "hv", FIX / "delta4.json", name="a")
    _, b = run(tmp_path, "hv", FIX / "delta4.json", name="b")
    _, c = run(tmp_path, "hv", FIX / "delta4.json", "--jobs", "2", name="c")
    for f in ("arrangements.json", "dimer_0.json", "theorem1_report.json", "run_manifest.json"):
        assert (a / f).read_bytes() == (b / f).read_bytes()
        assert (a / f).read_bytes() == (c / f).read_bytes()


def test_hv_unit_triangle(tmp_path):
    code, out = run(tmp_path, "hv", FIX / "unit_triangle.json")
    assert code == 0
    g = json.loads((out / "dimer_0.json").read_text())
    assert len(g["nodes"]) == 2 and len(g["edges"]) == 3


def test_hv_errors(tmp_path, capsys):
    code, out = run(tmp_path, "hv", FIX / "nonconvex.json", name="nc")
    assert code == 2 and "NonConvex" in capsys.readouterr().err
    assert check_manifest(out, "hv")["status"] == "ValidationError"
    code, out = run(tmp_path, "hv", FIX / "delta4.json", "--max-samples", "100", name="un")
    assert code == 3
    assert check_manifest(out, "hv")["status"] == "Unsaturated"
    code, _ = run(tmp_path, "hv", FIX / "delta4.json", "--grid-denominator", "8", name="q")
    assert code == 2
    code, _ = run(tmp_path, "hv", tmp_path / "missing.json", name="missing")
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(tmp_path, "hv", bad, name="bad")[0] == 2


def test_charpoly(tmp_path, capsys):
    code, out = run(tmp_path, "charpoly", FIX / "z3_hexagon.json")
    assert code == 0
    assert capsys.readouterr().out.strip() == "3 + x + y + x^-1*y^-1"
    data = json.loads((out / "charpoly.json").read_text())
    jsonschema.validate(data, schema("charpoly"))
    assert data["num_matchings"] == 6
    check_manifest(out, "charpoly")


def test_charpoly_unit_hexagon(tmp_path, capsys):
    _, hv = run(tmp_path, "hv", FIX / "unit_triangle.json", name="hv")
    capsys.readouterr()
    code, out = run(tmp_path, "charpoly", hv / "dimer_0.json")
    assert code == 0
    data = json.loads((out / "charpoly.json").read_text())
    assert data["num_matchings"] == 3
    assert data["newton_polygon"]["vertices"] == [[0, 0], [1, 0], [0, 1]]


def test_charpoly_errors(tmp_path):
    code, out = run(tmp_path, "charpoly", FIX / "no_matching.json")
    assert code == 4 and check_manifest(out, "charpoly")["status"] == "NoMatching"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"nodes": [], "edges": [{"w": 0}], "rotation": []}))
    assert run(tmp_path, "charpoly", bad, name="b")[0] == 2


def test_zigzag(tmp_path):
    code, out = run(tmp_path, "zigzag", FIX / "z3_hexagon.json")
    assert code == 0
    data = json.loads((out / "zigzag.json").read_text())
    jsonschema.validate(data, schema("zigzag"))
    assert data["isoradiality"]["pass"] and data["consistency"]["pass"]
    assert data["homology_classes"] == [[-2, 1], [1, -2], [1, 1]]
    check_manifest(out, "zigzag")


def test_mckay_matrix(tmp_path):
    code, out = run(tmp_path, "mckay", FIX / "z5_matrix.json")
    assert code == 0
    q = json.loads((out / "quiver.json").read_text())
    jsonschema.validate(q, schema("quiver"))
    assert len(q["vertices"]) == 5 and len(q["arrows"]) == 15 and len(q["potential"]) == 10
    assert not (out / "theorem2_report.json").exists()
    jsonschema.validate(json.loads((out / "tiling.json").read_text()), schema("dimer"))
    check_manifest(out, "mckay")


def test_mckay_inline_matrix(tmp_path):
    code, out = run(tmp_path, "mckay", "--matrix", "1,0,0,1")
    assert code == 0
    q = json.loads((out / "quiver.json").read_text())
    assert q["relations_text"] == ["yz - zy", "zx - xz", "xy - yx"]


def test_mckay_triangle(tmp_path):
    code, out = run(tmp_path, "mckay", FIX / "z5_triangle.json")
    assert code == 0
    assert json.loads((out / "theorem2_report.json").read_text())["pass"]


def test_mckay_singular(tmp_path):
    code, out = run(tmp_path, "mckay", FIX / "singular_matrix.json")
    assert code == 2 and check_manifest(out, "mckay")["status"] == "ValidationError"
    assert run(tmp_path, "mckay", "--matrix", "1,2,2,1", name="neg")[0] == 2
    assert run(tmp_path, "mckay", FIX / "delta4.json", name="quad")[0] == 2


@pytest.mark.parametrize("fixture, cells", [("trinomial_base.json", 2), ("trinomial_pullback.json", 10)])
def test_coamoeba(tmp_path, fixture, cells):
    code, out = run(tmp_path, "coamoeba", FIX / fixture, "--samples", "2000", "--grid", "128",
                    "--resolution", "96")
    assert code == 0
    rep = json.loads((out / "theorem3_report.json").read_text())
    assert rep["pass"] and rep["colored_cells"] == cells
    dec = json.loads((out / "decomposition.json").read_text())
    jsonschema.validate(dec, schema("coamoeba_decomposition"))
    assert (out / "coamoeba.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert (out / "coamoeba.svg").read_text().startswith("<svg")
    check_manifest(out, "coamoeba")


def test_coamoeba_tampered(tmp_path):
    code, out = run(tmp_path, "coamoeba", FIX / "trinomial_tampered.json", "--samples", "200", "--grid", "64",
                    "--resolution", "32")
    assert code == 5
    rep = json.loads((out / "theorem3_report.json").read_text())
    assert rep["pass"] is False and rep["counterexample"]
    assert check_manifest(out, "coamoeba")["status"] == "VerificationFailure"


def test_input_schemas_accept_fixtures():
    for f in ("delta4", "unit_triangle", "delta2", "z3_triangle", "z5_triangle"):
        jsonschema.validate(json.loads((FIX / f"{f}.json").read_text()), schema("polygon"))
    for f in ("trinomial_base", "trinomial_pullback", "trinomial_tampered"):
        jsonschema.validate(json.loads((FIX / f"{f}.json").read_text()), schema("trinomial"))
    jsonschema.validate(json.loads((FIX / "z3_hexagon.json").read_text()), schema("dimer"))


def test_repro(tmp_path, capsys):
    code, out = run(tmp_path, "repro", "--samples", "2000", "--grid", "128")
    text = capsys.readouterr().out
    assert code == 0, text
    assert text.count("PASS") == 14 and "FAIL" not in text
    rep = json.loads((out / "repro_report.json").read_text())
    jsonschema.validate(rep, schema("report"))
    check_manifest(out, "repro")
