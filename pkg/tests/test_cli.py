import json

import pytest

from qsuper.cli import main
from qsuper.twist import dump_structure, load_structure


def run(tmp_path, *argv, cache="c"):
    out = tmp_path / "report.json"
    code = main(["--cache-dir", str(tmp_path / cache), "--out", str(out), *argv])
    return code, (out.read_bytes() if out.exists() else b"")


def test_relations_report(tmp_path):
    code, raw = run(tmp_path, "relations", "--datum", "sl3", "--max-degree", "3")
    assert code == 0
    rep = json.loads(raw)
    assert {"weight": [2, 1], "relation": [["E1*E1*E2", "1"], ["E1*E2*E1", "-q - q^(-1)"],
                                           ["E2*E1*E1", "1"]]} in rep["relations"]
    assert rep["all_pair_to_zero"] is True


def test_verma_report(tmp_path):
    code, raw = run(tmp_path, "verma", "--datum", "sl(2|1)", "--weight", "1,0")
    assert code == 0
    rep = json.loads(raw)
    assert rep["equal"] and all(r["equal"] == "yes" for r in rep["rows"])
    assert sum(r["rank_quantum"] for r in rep["rows"]) == 3


def test_dk_report(tmp_path):
    code, raw = run(tmp_path, "dk", "--datum", "sl2", "--module", "vector", "--n", "2",
                    "--word", "s1 s1", "--order", "4")
    assert code == 0
    rep = json.loads(raw)
    assert len(rep["rows"]) == 5 and all(r["deviation"] <= rep["budget"] for r in rep["rows"])


def test_braid_and_twist_reports(tmp_path):
    code, raw = run(tmp_path, "braid", "--datum", "sl(2|1)", "--module", "fundamental", "--n", "3")
    assert code == 0 and json.loads(raw)["ok"]
    code, raw = run(tmp_path, "twist", "--structure", "exterior1", "--gauges", "2")
    assert code == 0 and json.loads(raw)["ok"]


def test_reports_are_byte_stable_and_cache_independent(tmp_path):
    argv = ["verma", "--datum", "sl3", "--weight", "1,1", "--cut", "3"]
    _, cold = run(tmp_path, *argv, cache="fresh")
    _, warm = run(tmp_path, *argv, cache="fresh")
    _, nocache = run(tmp_path, "--no-cache", *argv)
    assert cold == warm == nocache
    code, raw = run(tmp_path, "cache", "info", cache="fresh")
    assert code == 0 and json.loads(raw)["entries"] > 0
    code, raw = run(tmp_path, "cache", "clear", cache="fresh")
    assert json.loads(raw)["cleared"] > 0


def test_datum_file(tmp_path):
    f = tmp_path / "d.json"
    f.write_text(json.dumps({"A": [[2, -1], [-1, 2]]}))
    code, raw = run(tmp_path, "relations", "--datum", str(f), "--max-degree", "3")
    assert code == 0 and len(json.loads(raw)["relations"]) == 2


def test_assertion_failure_exit_code(tmp_path):
    S = load_structure("exterior2")
    doc = dump_structure(S)
    doc["Phi"].append([3, 0, 3, "0 + 1 h + 0 h^2 + 0 h^3"])
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(doc))
    code, _ = run(tmp_path, "twist", "--structure", str(f), "--gauges", "1")
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["verma", "--datum", "bogus", "--weight", "1"],
    ["verma", "--datum", "sl2", "--weight", "1.5"],
    ["verma", "--datum", "sl2", "--weight", "1,0"],
    ["verma", "--datum", "sl2", "--weight", "1", "--cut", "-1"],
    ["dk", "--datum", "sl2", "--word", "s1 q2"],
    ["dk", "--datum", "sl2", "--n", "2", "--word", "s2"],
    ["dk", "--datum", "sl2", "--tol", "0"],
    ["braid", "--datum", "sl2", "--module", "nope"],
    ["twist", "--structure", "missing-structure"],
    ["frobnicate"],
])
def test_input_errors(tmp_path, argv, capsys):
    code, _ = run(tmp_path, *argv)
    assert code == 2
    assert capsys.readouterr().err
