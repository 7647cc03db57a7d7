import json
import subprocess
import sys

import pytest

from topogs import _backend
from topogs.choice import SocialChoiceFunction, save_table, table_to_json
from topogs.cli import main
from topogs.report import SuiteConfig, run_verify


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    doc = json.loads(out.out) if out.out.strip().startswith("{") else None
    return code, doc, out.err


def test_analyze_dictatorship(capsys):
    code, doc, _ = run(capsys, "analyze", "--rule", "dictatorship:1", "-n", "3", "-N", "2")
    assert code == 0
    assert doc["schema_version"] == 1 and "timing" in doc
    assert doc["results"]["pairing_vector"] == [0, 1] and doc["results"]["dictator"] == 1


def test_analyze_plurality(capsys):
    code, doc, _ = run(capsys, "analyze", "--rule", "plurality_lex", "-n", "3", "-N", "2")
    assert code == 0
    r = doc["results"]
    assert r["axioms"]["strategy_proof"] is False
    assert set(r["witnesses"]["strategy_proof"]) >= {"profile", "voter", "misreport"}
    assert r["pairing_vector"] is None and r["vertex_map"] is None


def test_analyze_table_file(capsys, tmp_path):
    p = tmp_path / "d.json"
    save_table(SocialChoiceFunction.dictatorship(0, 3, 2), p)
    code, doc, _ = run(capsys, "analyze", "--table", str(p))
    assert code == 0 and doc["results"]["dictator"] == 0


def test_analyze_non_total_table(capsys, tmp_path):
    doc = table_to_json(SocialChoiceFunction.dictatorship(0, 3, 2))
    doc["entries"] = doc["entries"][:-3]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    code, out, err = run(capsys, "analyze", "--table", str(p))
    assert code == 2 and out is None and "not total" in err


def test_analyze_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", "--table", str(tmp_path / "none.json"))
    assert code == 2 and err


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["verify", "-n", "3", "--suite", "bogus"]) == 2
    assert main(["analyze", "--rule", "nosuch", "-n", "3", "-N", "2"]) == 2
    assert main(["analyze", "--rule", "plurality_lex"]) == 2
    capsys.readouterr()


def test_envelope(capsys):
    code, _, err = run(capsys, "verify", "--suite", "nerves", "-n", "5", "-N", "2")
    assert code == 2 and "envelope" in err
    code, _, err = run(capsys, "arrangement", "-n", "6", "-N", "3")
    assert code == 2
    code, _, err = run(capsys, "analyze", "--rule", "dictatorship:0", "-n", "4", "-N", "3")
    assert code == 2 and "envelope" in err


def test_verify_examples(capsys):
    code, doc, _ = run(capsys, "verify", "--suite", "homology", "-n", "3", "-N", "2")
    assert code == 0
    h = doc["results"]["homology"]
    assert h["rank_in_top_degree"] == 2 and h["profile_nerve"][1]["torsion"] == []
    code, doc, _ = run(capsys, "verify", "--suite", "enumerate", "-n", "3", "-N", "2")
    assert code == 0 and doc["results"]["enumerate"]["count"] == 2


@pytest.mark.slow
def test_verify_nerves_4_2(capsys):
    code, doc, _ = run(capsys, "verify", "--suite", "nerves", "-n", "4", "-N", "2")
    assert code == 0 and doc["results"]["nerves"]["identical"]


def test_verify_budget_failure(capsys):
    code, doc, _ = run(capsys, "verify", "--suite", "enumerate", "-n", "3", "-N", "2",
                       "--max-nodes", "5")
    assert code == 1
    assert doc["results"]["enumerate"]["budget_exceeded"] is True


def test_homology_examples(capsys, tmp_path):
    code, doc, _ = run(capsys, "homology", "--target", "NA", "-n", "5")
    assert code == 0 and [g["betti"] for g in doc["results"]["homology"]] == [1, 0, 0, 1]
    code, doc, _ = run(capsys, "homology", "--target", "NProfiles", "-n", "3", "-N", "3", "-k", "1")
    assert doc["results"]["homology"] == [{"degree": 1, "betti": 3, "torsion": []}]
    dump = tmp_path / "np.json"
    code, doc, _ = run(capsys, "homology", "--target", "NP", "-n", "4", "-k", "1",
                       "--dump-complex", str(dump))
    assert doc["results"]["homology"][0]["betti"] == 0
    assert json.loads(dump.read_text())["vertex_count"] == 12
    code, _, err = run(capsys, "homology", "--target", "NP", "-n", "4", "-k", "9")
    assert code == 2 and "outside" in err


def test_enumerate_and_arrangement(capsys, tmp_path):
    code, doc, _ = run(capsys, "enumerate-scf", "-n", "3", "-N", "2",
                       "--tables-dir", str(tmp_path / "t"))
    assert code == 0 and sorted(doc["results"]["dictators"]) == [0, 1]
    assert len(list((tmp_path / "t").iterdir())) == 2
    code, doc, _ = run(capsys, "arrangement", "-n", "3", "-N", "2")
    assert code == 0 and doc["results"]["max_dimension"] == 2


def test_out_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, doc, _ = run(capsys, "verify", "--suite", "axioms", "-n", "3", "-N", "2",
                       "--out", str(out))
    assert json.loads(out.read_text()) == doc


def test_report_deterministic():
    cfg = SuiteConfig(3, 2, ("axioms", "homology", "equivalence", "pairing"), seed=11,
                      samples=50)
    a, b = run_verify(cfg), run_verify(cfg)
    assert a.deterministic_json() == b.deterministic_json()
    assert '"seed": 11' in a.deterministic_json()


def test_python_backend_flag(capsys):
    saved = _backend.kernels, _backend.name
    try:
        code, doc, _ = run(capsys, "--backend", "python", "verify", "--suite", "enumerate",
                           "-n", "3", "-N", "2")
    finally:
        _backend.kernels, _backend.name = saved
    assert code == 0 and doc["timing"]["backend"] == "python"


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "topogs.cli", "arrangement", "-n", "3", "-N", "2"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["pass"]
