"""End-to-end tests of the command line interface."""

import json
from fractions import Fraction

import pytest

from bkpnpoint import cli
from bkpnpoint.cli import main


def write_coords(path, rows):
    path.write_text(json.dumps(rows) + "\n")
    return str(path)


@pytest.fixture
def one_entry_coords(tmp_path):
    return write_coords(tmp_path / "coords.json", [[1, 0, "1"]])


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_npoint_frozen_one_point(capsys, one_entry_coords):
    code, doc = run_json(capsys, [
        "npoint", "--coords", one_entry_coords, "--n", "1",
        "--max-weight", "5",
    ])
    assert code == 0
    assert doc["schema_version"] == 1
    assert doc["agree"] is True
    assert doc["first_difference"] is None
    expected = [
        {"indices": [1], "value": "-1"},
        {"indices": [3], "value": "0"},
        {"indices": [5], "value": "0"},
    ]
    assert set(doc["tables"]) == {"wangyang", "embedded", "oracle"}
    for route in doc["tables"]:
        assert doc["tables"][route] == expected


def test_npoint_zero_coords_all_routes(capsys, tmp_path):
    coords = write_coords(tmp_path / "zero.json", [])
    code, doc = run_json(capsys, [
        "npoint", "--coords", coords, "--n", "2", "--max-weight", "6",
    ])
    assert code == 0
    for route, records in doc["tables"].items():
        assert records, route
        assert all(r["value"] == "0" for r in records)


def test_npoint_single_route_and_window_cap(capsys, one_entry_coords):
    code, doc = run_json(capsys, [
        "npoint", "--coords", one_entry_coords, "--n", "2",
        "--max-weight", "5", "--formula", "wangyang", "--window-cap", "40",
    ])
    assert code == 0
    assert list(doc["tables"]) == ["wangyang"]
    assert doc["agree"] is True


def test_npoint_csv_output(capsys, one_entry_coords):
    code = main([
        "npoint", "--coords", one_entry_coords, "--n", "1",
        "--max-weight", "3", "--formula", "oracle", "--format", "csv",
    ])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "formula,indices,value"
    assert lines[1] == "oracle,1,-1"
    assert lines[2] == "oracle,3,0"


def test_npoint_deterministic_bytes(tmp_path, one_entry_coords):
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        code = main([
            "npoint", "--coords", one_entry_coords, "--n", "2",
            "--max-weight", "5", "--out", str(out),
        ])
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_npoint_input_errors(capsys, tmp_path, one_entry_coords):
    missing = str(tmp_path / "nope.json")
    assert main(["npoint", "--coords", missing, "--n", "1",
                 "--max-weight", "3"]) == 2
    assert main(["npoint", "--coords", one_entry_coords, "--n", "0",
                 "--max-weight", "3"]) == 2
    assert main(["npoint", "--coords", one_entry_coords, "--n", "3",
                 "--max-weight", "2"]) == 2
    broken = tmp_path / "broken.json"
    broken.write_text("not json")
    assert main(["npoint", "--coords", str(broken), "--n", "1",
                 "--max-weight", "3"]) == 2
    conflict = write_coords(tmp_path / "conflict.json",
                            [[1, 0, "1"], [0, 1, "1"]])
    assert main(["npoint", "--coords", conflict, "--n", "1",
                 "--max-weight", "3"]) == 2
    capsys.readouterr()


def test_npoint_disagreement_exit_code(capsys, one_entry_coords, monkeypatch):
    # corrupt one route to exercise the comparison failure path
    def tampered(b, n, max_weight, cutoff_bump=0):
        return {(1,): Fraction(-1), (3,): Fraction(99), (5,): Fraction(0)}

    monkeypatch.setattr(cli, "oracle_npoint_table", tampered)
    code, doc = run_json(capsys, [
        "npoint", "--coords", one_entry_coords, "--n", "1",
        "--max-weight", "5",
    ])
    assert code == 1
    assert doc["agree"] is False
    assert doc["first_difference"]["indices"] == [3]
    assert doc["first_difference"]["values"]["oracle"] == "99"
    assert doc["first_difference"]["values"]["wangyang"] == "0"


def test_convert_frozen(capsys, one_entry_coords):
    assert main(["convert", "--coords", one_entry_coords]) == 0
    assert capsys.readouterr().out == '[[0, 0, "-2"], [0, 1, "2"]]\n'


def test_convert_empty_and_file_output(capsys, tmp_path):
    coords = write_coords(tmp_path / "zero.json", [])
    out = tmp_path / "kp.json"
    assert main(["convert", "--coords", coords, "--out", str(out)]) == 0
    assert out.read_text() == "[]\n"
    # triangle-only input converts after antisymmetric completion
    coords = write_coords(tmp_path / "tri.json", [[0, 1, "-1"]])
    assert main(["convert", "--coords", coords]) == 0
    assert capsys.readouterr().out == '[[0, 0, "-2"], [0, 1, "2"]]\n'


def test_verify_each_check_small(capsys):
    argv_common = ["--seed", "3", "--count", "1"]
    for check, extra in [
        ("gs", ["--weight", "5"]),
        ("square", ["--weight", "5"]),
        ("state", ["--weight", "5"]),
        ("formulas", ["--weight", "5", "--n", "2"]),
        ("lemma", ["--k", "2", "--window-cap", "5"]),
    ]:
        code, doc = run_json(
            capsys, ["verify", "--check", check] + argv_common + extra)
        assert code == 0, check
        assert doc["passed"] is True
        assert doc["checks"][0]["name"] == check
        assert doc["checks"][0]["params"]["instances"] == 1


def test_verify_coords_instance(capsys, one_entry_coords):
    code, doc = run_json(capsys, [
        "verify", "--check", "gs", "--coords", one_entry_coords,
    ])
    assert code == 0
    assert doc["checks"][0]["params"]["instances"] == 1
    # lemma check instantiates the coordinate file
    code, doc = run_json(capsys, [
        "verify", "--check", "lemma", "--coords", one_entry_coords,
        "--k", "2", "--window-cap", "4",
    ])
    assert code == 0


def test_verify_suite_small(capsys):
    code, doc = run_json(capsys, [
        "verify", "--suite", "full", "--seed", "5", "--count", "1",
        "--weight", "5", "--k", "2",
    ])
    assert code == 0
    assert [c["name"] for c in doc["checks"]] == [
        "gs", "square", "state", "formulas", "lemma"]
    assert doc["passed"] is True


def test_verify_failure_reported(capsys, monkeypatch):
    monkeypatch.setattr(cli, "check_gs_relation", lambda b, depth: False)
    code, doc = run_json(capsys, [
        "verify", "--check", "gs", "--count", "2",
    ])
    assert code == 1
    assert doc["passed"] is False
    assert "instance 0" in doc["checks"][0]["detail"]


def test_verify_csv_output(capsys):
    code = main([
        "verify", "--check", "lemma", "--count", "1", "--k", "1",
        "--format", "csv",
    ])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "check,passed,detail"
    assert lines[1] == "lemma,true,"


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as err:
        main(["npoint", "--n", "1", "--max-weight", "3"])  # no coords
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["verify"])  # neither --check nor --suite
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["npoint", "--coords", "x", "--n", "1", "--max-weight", "3",
              "--formula", "bogus"])
    assert err.value.code == 2
    capsys.readouterr()
