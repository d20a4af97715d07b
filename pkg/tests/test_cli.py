from __future__ import annotations

import csv
import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest
from conftest import vectors
from hypothesis import given
from hypothesis import strategies as st
from oracles import convex_hull_2d

from asymspace.cli.documents import DocumentError, dumps, load_task, parse_space, parse_task
from asymspace.cli.dump import UnsupportedDimensionError, decimal_str, dump_geometry, unit_ball_polygon
from asymspace.cli.main import main
from asymspace.geometry import Ball, hexagon, u_norm

HEX = {"name": "hexagon", "dimension": 2, "generators": [["1", "0"], ["-1", "0"], ["0", "1"], ["0", "-1"], ["1", "1"], ["-1", "-1"]]}
LINF = {"dimension": 2, "generators": [["1", "0"], ["-1", "0"], ["0", "1"], ["0", "-1"]]}
QT2 = {"dimension": 2, "generators": [["0", "0"], ["1", "0"], ["0", "1"]]}
TRIANGLE = [{"center": c, "radius": "1"} for c in (["0", "0"], ["2", "0"], ["0", "2"])]


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc), encoding="utf-8")
    return str(path)


def run_json(tmp_path, doc, *flags):
    path = write(tmp_path, "task.json", doc)
    out = tmp_path / "report.json"
    code = main([path, "--format", "json", "--out", str(out), *flags])
    report = json.loads(out.read_text()) if out.exists() else None
    return code, report


# ---------------------------------------------------------------- worked examples
def test_hexagon_bip_check_reports_certificate_and_witnesses(tmp_path):
    code, rep = run_json(tmp_path, {"task": "bip-check", "space": HEX, "family": TRIANGLE})
    assert code == 1 and rep["status"] == "bip-violated-here"
    assert rep["certificate"]["verified"] is True
    assert rep["certificate"]["combined_bound"] == "-1"
    assert len(rep["pairwise_witnesses"]) == 3
    assert rep["pairwise_witnesses"][2]["forward_i_backward_j"] == ["1", "1"]


def test_identity_op_norm(tmp_path):
    doc = {"task": "op-norm", "space": LINF, "target": QT2, "matrix": [["1", "0"], ["0", "1"]]}
    code, rep = run_json(tmp_path, doc)
    assert code == 0 and rep["value"] == "1"


def test_negative_norm_rejected(tmp_path, capsys):
    doc = {"task": "norm-check", "space": {"dimension": 2, "generators": [["1", "0"], ["0", "1"], ["1", "1"]]}}
    code, rep = run_json(tmp_path, doc)
    assert code == 2 and rep is None
    assert "norm can be negative" in capsys.readouterr().err


# ---------------------------------------------------------------- each task
def test_linf_family_holds(tmp_path):
    code, rep = run_json(tmp_path, {"task": "bip-check", "space": LINF, "family": TRIANGLE})
    assert code == 0 and rep["common_point"] == ["1", "1"]


def test_premise_fails(tmp_path):
    fam = TRIANGLE + [{"center": ["9", "9"], "r": "1", "s": "1/2"}]
    code, rep = run_json(tmp_path, {"task": "bip-check", "space": LINF, "family": fam})
    assert code == 0 and rep["status"] == "premise-fails" and rep["failing_pairs"]


def test_ball_intersect(tmp_path):
    balls = [{"center": ["0", "0"], "radius": "1"}, {"center": ["3", "0"], "radius": "1", "orientation": "backward"}]
    code, rep = run_json(tmp_path, {"task": "ball-intersect", "space": QT2, "balls": balls})
    assert code == 1 and rep["certificate"]["verified"]
    balls[1]["center"] = ["2", "0"]
    code, rep = run_json(tmp_path, {"task": "ball-intersect", "space": QT2, "balls": balls})
    assert code == 0 and rep["status"] == "nonempty"


def test_extend_task(tmp_path):
    doc = {"task": "extend", "space": HEX, "target": QT2, "domain": [["1", "1"]], "images": [["2", "-1/3"]]}
    code, rep = run_json(tmp_path, doc)
    assert code == 0 and rep["operator_norm"] == rep["beta"] == "1"
    doc["engine"] = "coordinatewise"
    code, rep = run_json(tmp_path, doc)
    assert code == 0 and rep["operator_norm"] == "1"


def test_project_task(tmp_path):
    code, rep = run_json(tmp_path, {"task": "project", "space": LINF, "subspace": [["1", "1"]]})
    assert code == 0 and rep["status"] == "projection-exists"
    # the hexagon plane inside its qtilde embedding has no norm-one projection
    gens = [["1", "-1", "0", "0", "1", "-1"], ["0", "0", "1", "-1", "1", "-1"]]
    qt6 = {"dimension": 6, "generators": [["0"] * 6] + [[("1" if i == k else "0") for i in range(6)] for k in range(6)]}
    code, rep = run_json(tmp_path, {"task": "project", "space": qt6, "subspace": gens})
    assert code == 1 and rep["status"] == "not-extendable" and rep["certificate"]


def test_embed_task(tmp_path):
    code, rep = run_json(tmp_path, {"task": "embed", "space": HEX, "points": [["1", "2"], ["-1/2", "3/4"]]})
    assert code == 0 and all(c["equal"] for c in rep["checks"])


def test_necessity_task(tmp_path):
    code, rep = run_json(tmp_path, {"task": "necessity-demo", "space": HEX, "family": TRIANGLE})
    assert code == 1 and rep["status"].startswith("non-injective")
    assert rep["image_of_xi_certificate"]["verified"] and rep["projection"] == "not-extendable"
    code, rep = run_json(tmp_path, {"task": "necessity-demo", "space": LINF, "family": TRIANGLE})
    assert code == 0 and rep["status"] == "refused"


def test_text_format_and_stdout(tmp_path, capsys):
    path = write(tmp_path, "t.json", {"task": "norm-check", "space": HEX, "points": [["1", "−1/2"]]})
    assert main([path]) == 0
    out = capsys.readouterr().out
    assert "status: valid-norm" in out and "p(x): 1" in out


def test_space_by_relative_path(tmp_path):
    (tmp_path / "spaces").mkdir()
    write(tmp_path, "spaces/hex.json", HEX)
    code, rep = run_json(tmp_path, {"task": "bip-check", "space": "spaces/hex.json", "family": TRIANGLE})
    assert code == 1
    doc = load_task(str(tmp_path / "task.json"))
    assert json.loads(dumps(doc))["space"] == "spaces/hex.json"


# ---------------------------------------------------------------- input errors
@pytest.mark.parametrize(
    "doc,where",
    [
        ({"task": "norm-check", "space": {"dimension": 2, "generators": [["1", 0.5]]}}, "$.space.generators[0][1]"),
        ({"task": "norm-check", "space": {"dimension": 2, "generators": [["1", "0.5"]]}}, "$.space.generators[0][1]"),
        ({"task": "norm-check", "space": {"dimension": 2, "generators": [["1"]]}}, "$.space.generators[0]"),
        ({"task": "fly", "space": HEX}, "$.task"),
        ({"task": "bip-check", "space": HEX}, "$.family"),
        ({"task": "bip-check", "space": HEX, "family": [{"center": ["0", "0"], "radius": "0"}]}, "$.family[0].radius"),
        ({"task": "norm-check", "space": HEX, "extra": 1}, "$.extra"),
        ({"task": "extend", "space": HEX, "target": QT2, "matrix": [["1", "0"], ["0", "1"]]}, "$.matrix"),
    ],
)
def test_document_diagnostics(tmp_path, doc, where, capsys):
    path = write(tmp_path, "bad.json", doc)
    with pytest.raises(DocumentError) as exc:
        load_task(path)
    assert exc.value.where == where
    assert main([path]) == 2
    assert where in capsys.readouterr().err


def test_json_syntax_error_has_line_and_column(tmp_path):
    path = write(tmp_path, "broken.json", '{\n  "task": "norm-check",\n  "space": [\n}')
    with pytest.raises(DocumentError) as exc:
        load_task(path)
    assert exc.value.where.endswith(":4:1")
    assert main([path]) == 2


def test_missing_file_is_input_error(tmp_path):
    assert main([str(tmp_path / "nope.json")]) == 2


def test_unbounded_operator_extension_is_input_error(tmp_path):
    u = {"dimension": 1, "generators": [["1"], ["0"]]}
    doc = {"task": "extend", "space": u, "target": u, "domain": [["1"]], "images": [["-1"]]}
    code, _ = run_json(tmp_path, doc)
    assert code == 2


# ---------------------------------------------------------------- round trip
def _rat_strings():
    return st.builds(lambda a, b: str(Fraction(a, b)), st.integers(-50, 50), st.integers(1, 9))


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.lists(_rat_strings(), min_size=n, max_size=n), min_size=1, max_size=5))))
def test_space_round_trip(data):
    n, gens = data
    doc = {"dimension": n, "generators": gens, "name": "x"}
    assert parse_space(doc).to_json() == doc


@given(vectors(2, 9, 7), vectors(2, 9, 7))
def test_task_round_trip(c1, c2):
    doc = {
        "task": "bip-check",
        "space": HEX,
        "family": [{"center": [str(v) for v in c1], "r": "1/3", "s": "2"}, {"center": [str(v) for v in c2], "radius": "5/2"}],
    }
    parsed = parse_task(json.loads(json.dumps(doc)))
    assert json.loads(dumps(parsed)) == doc
    assert parse_task(json.loads(dumps(parsed))).fields == parsed.fields


def test_round_trip_canonicalizes():
    doc = {"task": "norm-check", "space": {"dimension": 1, "generators": [["2/4"], ["−3"], [0]]}}
    assert json.loads(dumps(parse_task(doc)))["space"]["generators"] == [["1/2"], ["-3"], ["0"]]


# ---------------------------------------------------------------- dumps
def test_hexagon_unit_ball_csv(tmp_path):
    files = dump_geometry(str(tmp_path), hexagon(), digits=3)
    with open(tmp_path / "unit_ball.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 6 and set(rows[0]) == {"x", "y"}
    pts = {(Fraction(r["x"]), Fraction(r["y"])) for r in rows}
    assert pts == set(convex_hull_2d(pts))
    assert all(os.path.exists(f) for f in files)


def test_unit_ball_polygon_is_counterclockwise():
    verts = unit_ball_polygon(hexagon()).vertices
    area2 = sum(verts[i][0] * verts[(i + 1) % 6][1] - verts[(i + 1) % 6][0] * verts[i][1] for i in range(6))
    assert area2 > 0


def test_one_dimensional_dump_rejected(tmp_path):
    with pytest.raises(UnsupportedDimensionError):
        dump_geometry(str(tmp_path), u_norm(), [Ball((0,), 1, u_norm())])
    path = write(tmp_path, "u.json", {"task": "norm-check", "space": {"dimension": 1, "generators": [["1"], ["0"]]}})
    assert main([path, "--dump", str(tmp_path / "d")]) == 2


def test_triangle_overlay(tmp_path):
    path = write(tmp_path, "t.json", {"task": "bip-check", "space": HEX, "family": TRIANGLE})
    assert main([path, "--dump", str(tmp_path / "d"), "--out", str(tmp_path / "r.txt")]) == 1
    svg = (tmp_path / "d" / "family.svg").read_text()
    assert svg.count("<polygon") == 3 and "empty intersection" in svg


def test_unbounded_balls_are_clipped(tmp_path):
    balls = [{"center": ["0", "0"], "radius": "1"}]
    path = write(tmp_path, "t.json", {"task": "ball-intersect", "space": QT2, "balls": balls})
    assert main([path, "--dump", str(tmp_path / "d"), "--digits", "2", "--out", str(tmp_path / "r")]) == 0
    svg = (tmp_path / "d" / "family.svg").read_text()
    assert "stroke-dasharray" in svg and "common point (" in svg


def test_decimal_rendering():
    assert decimal_str(Fraction(1, 3), 4) == "0.3333"
    assert decimal_str(Fraction(-5, 2), 0) == "-2"
    assert decimal_str(Fraction(7), 2) == "7.00"


def test_module_entry_point(tmp_path):
    path = write(tmp_path, "t.json", {"task": "op-norm", "space": LINF, "target": QT2, "matrix": [["1", "0"], ["0", "1"]]})
    proc = subprocess.run([sys.executable, "-m", "asymspace", path, "--format", "json"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == "1"
