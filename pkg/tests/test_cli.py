import io
import json
import math

import pandas as pd
import pytest

from omegaperiods.__main__ import EXIT_INPUT, EXIT_OK, EXIT_POLE, EXIT_TOLERANCE, main
from omegaperiods.algebra import Potential
from omegaperiods.omega import OmegaEvaluator
from omegaperiods.utils import _json_to_complex


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def _run_json(capsys, *argv):
    code, out = _run(capsys, *argv)
    return code, json.loads(out)


def test_eval(capsys):
    code, response = _run_json(capsys, "eval", "--pot", "d=1", "--k", "0", "--s", "1")
    assert code == EXIT_OK
    assert response["status"] == "ok"
    assert response["command"] == "eval"
    assert _json_to_complex(response["values"][0]) == pytest.approx(1, rel=1e-10)
    assert response["achieved_error"] <= 1e-9
    assert set(response) == {"status", "command", "values", "achieved_error", "poles", "warnings", "data"}


def test_eval_response_is_lossless(capsys):
    s = 0.3 + 0.7j
    code, out = _run(capsys, "eval", "--pot", "d=3;a1=0.5;a2=1-0.25i", "--k", "1", "--s", "0.3+0.7i")
    assert code == EXIT_OK
    printed = _json_to_complex(json.loads(out)["values"][0])
    expected = OmegaEvaluator(Potential.parse("d=3;a1=0.5;a2=1-0.25i")).omega(1, s)
    assert printed == expected


def test_eval_at_a_pole(capsys):
    code, response = _run_json(capsys, "eval", "--pot", "d=1", "--k", "0", "--s", "0")
    assert code == EXIT_POLE
    assert response["status"] == "pole"
    assert response["poles"] == [{"n": 0, "residue": {"re": 1.0, "im": 0.0}}]


def test_det(capsys):
    code, response = _run_json(capsys, "det", "--pot", "d=2", "--s0", "1")
    assert code == EXIT_OK
    assert _json_to_complex(response["values"][0]) == pytest.approx(-2.5066282746, rel=1e-9)
    assert len(response["warnings"]) == 1
    closed = _json_to_complex(response["data"]["closed_form_monomial"])
    assert closed == pytest.approx(-math.sqrt(2 * math.pi), rel=1e-12)


def test_det_reports_the_pole_column(capsys):
    code, response = _run_json(capsys, "det", "--pot", "d=2", "--s0", "-1")
    assert code == EXIT_POLE
    assert response["poles"][0]["column"] == 0
    assert response["poles"][0]["n"] == 0


def test_residues(capsys):
    code, response = _run_json(capsys, "residues", "--pot", "d=2", "--n", "4")
    assert code == EXIT_OK
    values = [_json_to_complex(v) for v in response["values"]]
    assert values == pytest.approx([1, 0, -0.5, 0, 0.125])


@pytest.mark.parametrize("argv", [
    ["eval", "--pot", "d=0", "--k", "0", "--s", "1"],
    ["eval", "--pot", "d=2", "--s", "1"],
    ["eval", "--pot", "d=2", "--k", "2", "--s", "1"],
    ["eval", "--pot", "d=2", "--k", "0", "--s", "1+2j"],
    ["eval", "--k", "0", "--s", "1"],
    ["residues", "--pot", "d=2", "--n", "-1"],
    ["reduce", "--pot", "d=2", "--q", "t^"],
    ["solve", "--alpha", "1,0", "--v", "1"],
    ["eval", "--pot", "d=2", "--k", "0", "--s", "1", "--tol", "2"],
])
def test_input_errors(capsys, argv):
    code, response = _run_json(capsys, *argv)
    assert code == EXIT_INPUT
    assert response["status"] == "error"
    assert response["warnings"]


def test_tolerance_from_the_environment(capsys, monkeypatch):
    monkeypatch.setenv("OMEGA_TOL", "abc")
    code, _ = _run_json(capsys, "eval", "--pot", "d=1", "--k", "0", "--s", "1")
    assert code == EXIT_INPUT


def test_config_file(capsys, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"quadrature": {"series_max": 20}, "potential": "d=1"}))
    code, response = _run_json(capsys, "incomplete", "--s", "1", "--z", "1", "-c", str(config))
    assert code == EXIT_TOLERANCE
    assert response["status"] == "tolerance"
    assert response["values"]


def test_incomplete_and_diff(capsys):
    code, response = _run_json(capsys, "incomplete", "--pot", "d=1", "--s", "1", "--z", "2")
    assert code == EXIT_OK
    assert _json_to_complex(response["values"][0]) == pytest.approx(1 - math.exp(-2), rel=1e-10)
    code, response = _run_json(capsys, "diff", "--pot", "d=2", "--k", "1", "--l", "0", "--s", "1")
    assert code == EXIT_OK
    assert _json_to_complex(response["values"][0]) == pytest.approx(-math.sqrt(2 * math.pi), rel=1e-9)


def test_mittag_leffler_with_fixed_order(capsys):
    code, response = _run_json(capsys, "ml", "--pot", "d=1", "--k", "0", "--s", "0.5", "--n", "40")
    assert code == EXIT_OK
    assert _json_to_complex(response["values"][0]) == pytest.approx(math.sqrt(math.pi), rel=1e-9)


def test_reduce(capsys):
    code, response = _run_json(capsys, "reduce", "--pot", "d=2", "--q", "t + t*T", "--s", "1", "--z", "1")
    assert code == EXIT_OK
    assert [red["sigma_shift"] for red in response["data"]] == [0, 1]
    # int_0^1 (t + t^2) exp(-t^2/2) dt
    expected = 1 - 2 * math.exp(-0.5) + math.sqrt(math.pi / 2) * math.erf(1 / math.sqrt(2))
    assert _json_to_complex(response["values"][0]) == pytest.approx(expected, rel=1e-9)


def test_reduce_without_a_point(capsys):
    code, response = _run_json(capsys, "reduce", "--pot", "d=3", "--q", "1")
    assert code == EXIT_OK
    assert response["values"] == []
    assert response["data"][0]["A"] == []


def test_solve(capsys):
    code, response = _run_json(capsys, "solve", "--alpha", "0,1", "--v", "1.2533141373155001,1", "--s", "3")
    assert code == EXIT_OK
    c = [_json_to_complex(v) for v in response["values"]]
    assert c == pytest.approx([1, 0], rel=1e-9, abs=1e-10)
    assert _json_to_complex(response["data"]["value"]) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-9)


def test_csv_output(capsys):
    code, out = _run(capsys, "residues", "--pot", "d=1", "--n", "2", "--format", "csv")
    assert code == EXIT_OK
    table = pd.read_csv(io.StringIO(out))
    assert list(table.columns) == ["status", "re", "im"]
    assert table["re"].tolist() == pytest.approx([1, -1, 0.5])


def test_batch_factorials(capsys, tmp_path):
    samples = tmp_path / "points.csv"
    samples.write_text("1\n2\n3\n\n4\n5,0\n")
    code, out = _run(capsys, "eval", "--pot", "d=1", "--k", "0", "--batch", str(samples), "--format", "csv",
                     "--workers", "3")
    assert code == EXIT_OK
    table = pd.read_csv(io.StringIO(out))
    assert table["s_re"].tolist() == [1, 2, 3, 4, 5]
    assert table["re"].tolist() == pytest.approx([1, 1, 2, 6, 24], rel=1e-10)
    assert not table["pole"].any()


def test_batch_pole_row(capsys, tmp_path):
    samples = tmp_path / "points.csv"
    samples.write_text("0\n1\n")
    code, out = _run(capsys, "eval", "--pot", "d=1", "--k", "0", "--batch", str(samples))
    assert code == EXIT_OK
    pole, regular = json.loads(out)
    assert pole["pole"] is True
    assert pole["residue_re"] == 1
    assert "re" not in pole
    assert regular["pole"] is False
    assert regular["re"] == pytest.approx(1, rel=1e-10)


def test_batch_flags_poles_of_mittag_leffler(capsys, tmp_path):
    samples = tmp_path / "points.csv"
    samples.write_text("0\n-1\n0.5\n")
    code, out = _run(capsys, "ml", "--pot", "d=1", "--k", "0", "--batch", str(samples))
    assert code == EXIT_OK
    first, second, regular = json.loads(out)
    assert first["pole"] is True and first["residue_re"] == 1
    assert second["pole"] is True and second["residue_re"] == -1
    assert "error" not in first and "error" not in second
    assert regular["re"] == pytest.approx(math.sqrt(math.pi), rel=1e-9)


def test_batch_of_failing_rows(capsys, tmp_path):
    samples = tmp_path / "points.csv"
    samples.write_text("-1\n-2,1\n")
    code, out = _run(capsys, "incomplete", "--pot", "d=1", "--z", "1", "--batch", str(samples))
    assert code == EXIT_TOLERANCE
    rows = json.loads(out)
    assert all(row["error"].startswith("InputError") for row in rows)


def test_empty_batch(capsys, tmp_path):
    samples = tmp_path / "points.csv"
    samples.write_text("")
    code, out = _run(capsys, "eval", "--pot", "d=1", "--k", "0", "--batch", str(samples))
    assert code == EXIT_OK
    assert out == ""


def test_batch_rejects(capsys, tmp_path):
    samples = tmp_path / "points.csv"
    samples.write_text("1,2,3\n")
    code, _ = _run(capsys, "eval", "--pot", "d=1", "--k", "0", "--batch", str(samples))
    assert code == EXIT_INPUT
    code, _ = _run(capsys, "det", "--pot", "d=1", "--batch", str(samples))
    assert code == EXIT_INPUT
    code, _ = _run(capsys, "eval", "--pot", "d=1", "--k", "0", "--batch", str(tmp_path / "missing.csv"))
    assert code == EXIT_INPUT


def test_selftest(capsys):
    code, response = _run_json(capsys, "selftest", "--n", "1")
    assert code == EXIT_OK
    assert response["status"] == "ok"
    assert all(row["passed"] for row in response["data"])
    checks = {row["check"] for row in response["data"]}
    assert {"growth", "periodic_solution", "truncation_radius", "divisibility", "path_additivity"} <= checks
