import json
from pathlib import Path

import pytest

from sigma3.cli import main, parse_vector

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(autouse=True)
def cache(tmp_path, monkeypatch):
    monkeypatch.setenv("SIGMA3_CACHE_DIR", str(tmp_path / "cache"))
    (tmp_path / "cache").mkdir()
    return tmp_path / "cache"


def write_curve(path, lam):
    path.write_text(json.dumps({"lambda": [[v, 0] for v in lam]}))
    return path


def test_periods_writes_file_and_uses_cache(tmp_path, cache, capsys):
    out = tmp_path / "p.json"
    assert main(["periods", "--curve", "real-roots", "-o", str(out)]) == 0
    data = json.loads(out.read_text())
    assert {"omega1", "omega2", "eta1", "eta2", "Z"} <= set(data)
    assert list(cache.glob("periods_*.json"))
    assert "symmetry residual" in capsys.readouterr().out


def test_periods_from_file(tmp_path):
    curve = write_curve(tmp_path / "c.json", [1, 0, 0, 0, 0, 0, 0])
    assert main(["periods", "--curve", str(curve), "-o", str(tmp_path / "p.json")]) == 0


def test_malformed_json_is_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{lambda: ")
    assert main(["periods", "--curve", str(bad)]) == 2
    assert "malformed" in capsys.readouterr().err


def test_missing_file_is_input_error(tmp_path):
    assert main(["periods", "--curve", str(tmp_path / "none.json")]) == 2


def test_repeated_roots_are_input_error(tmp_path, capsys):
    # x^7 - 2 x^6 + x^5 = x^5 (x - 1)^2
    curve = write_curve(tmp_path / "c.json", [0, 0, 0, 0, 0, 1, -2])
    assert main(["periods", "--curve", str(curve)]) == 2
    assert "error" in capsys.readouterr().err


def test_bad_tolerance_is_input_error():
    assert main(["periods", "--curve", "x7p1", "--quad-tol", "-1"]) == 2


def test_eval(capsys):
    assert main(["eval", "--curve", "x7p1", "--sigma", "0.1,0.2j,0.3",
                 "--wp", "0.1,0.2j,0.3", "--indices", "333", "--aj", "2,0.5,1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert {"sigma", "wp", "u", "x_of_u", "y_of_u"} <= set(out)
    x = complex(*out["x_of_u"])
    assert abs(x - (2 + 0.5j)) < 1e-8


def test_eval_needs_something():
    assert main(["eval", "--curve", "x7p1"]) == 2


def test_eval_rejects_bad_point():
    assert main(["eval", "--curve", "x7p1", "--aj", "2,oops"]) == 2


def test_parse_vector():
    assert list(parse_vector("1, 2j,-1-1j")) == [1, 2j, -1 - 1j]


def test_psi_symbolic_requires_n_above_three(capsys):
    assert main(["psi", "--n", "3", "--symbolic"]) == 2
    assert "requires n > 3" in capsys.readouterr().err


def test_psi_symbolic_prints_golden_text(capsys):
    assert main(["psi", "--n", "4", "--symbolic", "--curve", "real-roots"]) == 0
    assert capsys.readouterr().out.strip() == (GOLDEN / "psi4_real_roots.txt").read_text().strip()


def test_psi_numeric(capsys):
    assert main(["psi", "--n", "2", "--numeric", "--points", "2"]) == 0
    cap = capsys.readouterr()
    assert "warning" in cap.err
    assert len(json.loads(cap.out)["values"]) == 2


def test_verify_writes_report_and_flags_failures(tmp_path, capsys):
    report = tmp_path / "report.json"
    code = main(["verify", "--curve", "x7p1", "--trials", "2", "--report", str(report)])
    data = json.loads(report.read_text())
    assert code == (0 if data["pass"] else 1)
    failing = {s["name"] for s in data["sections"] if not s["pass"]}
    # the limit checks along the curve are the only known failures
    assert failing <= {"curve_limit_j1", "curve_limit_j2", "curve_limit_j3"}
    assert "report written" in capsys.readouterr().out
