import json
import subprocess
import sys

import pytest

from padiclfc.cli import main

FIELD_SQRT2 = {"p": 2, "f": 1, "eis_poly": [[-2], [0], [1]],
               "precision": 12}
FIELD_UNRAM3 = {"p": 3, "f": 2, "eis_poly": [[-3, 0], [1, 0]],
                "precision": 12}
FIELD_X3_3 = {"p": 3, "f": 1, "eis_poly": [[-3], [0], [0], [1]],
              "precision": 12}
FIELD_BAD_EIS = {"p": 2, "f": 1, "eis_poly": [[-1], [0], [1]],
                 "precision": 12}


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_lfc_unramified_table(tmp_path):
    field = write(tmp_path, "f.json", FIELD_UNRAM3)
    out = str(tmp_path / "table.json")
    assert main(["lfc", "--field", field, "--k", "4", "--out", out]) == 0
    payload = json.loads(open(out).read())
    vals = {(r["sigma"], r["tau"]): r for r in payload["table"]}
    assert vals[(0, 0)]["valuation"] == 0
    assert vals[(1, 1)]["valuation"] == 1
    assert vals[(1, 1)]["digits"]["coords"][0][0] == 3


def test_lfc_trivial_field(tmp_path):
    field = write(tmp_path, "f.json",
                  {"p": 2, "f": 1, "eis_poly": [[-2], [1]], "precision": 10})
    out = str(tmp_path / "t.json")
    assert main(["lfc", "--field", field, "--k", "2", "--out", out]) == 0
    payload = json.loads(open(out).read())
    assert len(payload["table"]) == 1


def test_exit_codes(tmp_path):
    field = write(tmp_path, "x33.json", FIELD_X3_3)
    assert main(["lfc", "--field", field, "--k", "2",
                 "--out", str(tmp_path / "o.json")]) == 2
    bad = write(tmp_path, "bad.json", FIELD_BAD_EIS)
    assert main(["lfc", "--field", bad, "--k", "2",
                 "--out", str(tmp_path / "o.json")]) == 3
    missing = str(tmp_path / "missing.json")
    assert main(["lfc", "--field", missing, "--k", "2"]) == 1


def test_verify_roundtrip_and_corruption(tmp_path):
    field = write(tmp_path, "f.json", FIELD_SQRT2)
    table = str(tmp_path / "table.json")
    assert main(["lfc", "--field", field, "--k", "6", "--out", table]) == 0
    report = str(tmp_path / "rep.json")
    assert main(["verify", "--table", table, "--checks", "cocycle,order",
                 "--out", report]) == 0
    rep = json.loads(open(report).read())
    assert rep["overall"] is True
    assert {c["name"]: c["pass"] for c in rep["checks"]} == {
        "cocycle": True, "order": True}
    # corrupt one entry by a factor of pi (shift the coordinate layers):
    # the cocycle check must fail and name a triple
    payload = json.loads(open(table).read())
    for row in payload["table"]:
        if row["sigma"] == 1 and row["tau"] == 1:
            coords = row["digits"]["coords"]
            row["digits"]["coords"] = [[0] * len(coords[0])] + coords[:-1]
            row["digits"]["prec_abs"] += 1
    bad = write(tmp_path, "bad_table.json", payload)
    assert main(["verify", "--table", bad, "--checks", "cocycle",
                 "--out", report]) == 1
    rep = json.loads(open(report).read())
    assert rep["checks"][0]["pass"] is False
    assert "failing_triple" in rep["checks"][0]


def test_verify_guard_exit_code(tmp_path):
    s3 = {"p": 3, "f": 1,
          "eis_poly": [[3], [0], [0], [0], [0], [0], [1]],
          "precision": 12}
    field = write(tmp_path, "s3.json", s3)
    code = main(["verify", "--field", field, "--k", "6",
                 "--checks", "compositum",
                 "--out", str(tmp_path / "rep.json")])
    assert code == 5


def test_lfc_byte_determinism(tmp_path):
    field = write(tmp_path, "f.json", FIELD_SQRT2)
    out1 = str(tmp_path / "a.json")
    out2 = str(tmp_path / "b.json")
    assert main(["lfc", "--field", field, "--k", "4", "--out", out1]) == 0
    assert main(["lfc", "--field", field, "--k", "4", "--out", out2]) == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()


def test_catalog_empty_and_small(tmp_path):
    empty = write(tmp_path, "empty.json", {"entries": []})
    out = str(tmp_path / "summary.json")
    assert main(["catalog", "--field", empty, "--k", "2",
                 "--out", out]) == 0
    assert json.loads(open(out).read())["entries"] == []
    # degree <= 2 over Q_3 from the shipped catalog
    assert main(["catalog", "--p", "3", "--max-degree", "2", "--k", "4",
                 "--checks", "cocycle,unramified-exact",
                 "--out", out]) == 0
    rep = json.loads(open(out).read())
    assert rep["overall"] is True
    assert len(rep["entries"]) == 4  # C1 + unramified + two ramified
    for r in rep["entries"]:
        assert r["lfc_seconds"] < 1.0


def test_catalog_parallel(tmp_path):
    out = str(tmp_path / "summary.json")
    assert main(["catalog", "--p", "2", "--max-degree", "2", "--k", "3",
                 "--checks", "cocycle", "--jobs", "2", "--out", out]) == 0
    rep = json.loads(open(out).read())
    assert rep["overall"] is True
    assert len(rep["entries"]) == 8


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "padiclfc.cli", "selftest"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.count("PASS") == 4
