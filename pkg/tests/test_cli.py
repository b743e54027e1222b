import json
from pathlib import Path

import pytest

from drsubmax.cli import (InstanceError, emit_instance, main, parse_instance)

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "linear_packing.json"


def test_fixture_parses():
    inst = parse_instance(FIXTURE.read_bytes())
    assert inst.constraint["n"] == 2
    assert inst.constraint["m"] == 1
    assert inst.eps == 0.05
    assert inst.known_opt == 0.95


def test_round_trip_identity():
    inst = parse_instance(FIXTURE.read_bytes())
    again = parse_instance(emit_instance(inst))
    assert emit_instance(again) == emit_instance(inst)
    assert again.objective == inst.objective
    assert again.constraint == inst.constraint


def test_malformed_json_reports_line():
    with pytest.raises(InstanceError, match="line"):
        parse_instance(b'{"objective": }')


def test_negative_weight_rejected_with_path():
    bad = json.loads(FIXTURE.read_text())
    bad["objective"]["weights"][1] = -1.0
    with pytest.raises(InstanceError, match="objective"):
        parse_instance(json.dumps(bad))


def test_unsorted_triplets_rejected():
    bad = json.loads(FIXTURE.read_text())
    bad["constraint"]["triplets"] = [[0, 1, 1.0], [0, 0, 1.0]]
    with pytest.raises(InstanceError, match="sorted"):
        parse_instance(json.dumps(bad))


def test_duplicate_triplets_rejected():
    bad = json.loads(FIXTURE.read_text())
    bad["constraint"]["triplets"] = [[0, 0, 1.0], [0, 0, 2.0]]
    with pytest.raises(InstanceError, match="sorted|duplicate"):
        parse_instance(json.dumps(bad))


def test_non_laminar_family_rejected():
    bad = {"objective": {"kind": "linear", "weights": [1, 1, 1]},
           "constraint": {"type": "polymatroid", "kind": "laminar", "n": 3,
                          "sets": [[0, 1], [1, 2]], "caps": [1, 1]},
           "eps": 0.05}
    with pytest.raises(InstanceError, match="laminar"):
        parse_instance(json.dumps(bad))


def test_solve_packing_exit_and_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["solve-packing", str(FIXTURE), "--guess", "0.95",
                 "--report", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["schema"] == 1
    assert rep["feasible"] is True
    assert rep["termination"] == "converged"
    assert rep["slack"] <= 1 - 2 * 0.05 + 1e-9


def test_reports_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["solve-packing", str(FIXTURE), "--guess", "0.95",
                     "--report", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_eps_out_of_range_rejected(capsys):
    code = main(["solve-packing", str(FIXTURE), "--eps", "0.5"])
    assert code == 1
    assert "0.05" in capsys.readouterr().err


def test_oversized_guess_maps_to_exit_2(capsys):
    code = main(["solve-packing", str(FIXTURE), "--guess", "95"])
    assert code == 2


def test_wrong_constraint_type_rejected(capsys):
    code = main(["solve-matroid", str(FIXTURE)])
    assert code == 1


def test_solve_matroid_end_to_end(tmp_path, capsys):
    inst = {"objective": {"kind": "coverage", "weights": [1, 1, 1],
                          "covers": [[0], [1], [2]]},
            "constraint": {"type": "polymatroid", "kind": "uniform",
                           "n": 3, "k": 2},
            "eps": 0.05, "seed": 0}
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(inst))
    code = main(["solve-matroid", str(path), "--guess", "2.0"])
    assert code == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["feasible"] is True


def test_monotone_flag_incompatibility(tmp_path, capsys):
    inst = {"objective": {"kind": "directed-cut", "n": 2,
                          "arcs": [[0, 1, 1.0]]},
            "constraint": {"type": "polymatroid", "kind": "uniform",
                           "n": 2, "k": 1},
            "eps": 0.05}
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(inst))
    assert main(["solve-matroid", str(path), "--monotone", "true",
                 "--guess", "1.0"]) == 1


def test_verify_on_fixture(capsys):
    code = main(["verify", str(FIXTURE)])
    assert code == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["value"] >= (1 - 2.718281828 ** -0.5) * rep["guess_used"] * 0.999
    assert rep["opt"] == pytest.approx(0.95, abs=0.02)


def test_selftest_subcommand(capsys):
    assert main(["selftest"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["selftest"] == "ok"
