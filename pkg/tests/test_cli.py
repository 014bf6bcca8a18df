import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from leontief_ipm import cli
from leontief_ipm.data import bundled_path

from helpers import X_STAR


@pytest.fixture()
def generalized_model_path():
    return bundled_path("leontief_generalized.json")


@pytest.fixture()
def trivial_model_path():
    return bundled_path("single_sector_trivial.json")


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return path


class TestSolve:
    def test_two_technology_economy(self, tmp_path, generalized_model_path, capsys):
        solution_path = tmp_path / "solution.json"
        trace_path = tmp_path / "trace.csv"
        artifacts = cli.cmd_solve(
            generalized_model_path,
            solution_path=solution_path,
            trace_path=trace_path,
        )
        assert artifacts.exit_code == 0
        assert artifacts.solution_path == solution_path

        doc = json.loads(solution_path.read_text())
        assert doc["status"] == "converged"
        x = np.array(doc["x"])
        rounded_target = np.array([415.0, 0.0, 54.0])
        assert np.all(np.abs(x - rounded_target) <= 0.01 * np.maximum(1.0, rounded_target))

        with trace_path.open() as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == ["k", "mu", "alpha", "merit", "gap", "residual_norm", "step_floor"]
        assert len(rows) - 1 == doc["iterations"] + 1
        # numbers round-trip exactly through repr
        assert float(rows[1][3]) > 0.0

    def test_round_trip_with_verify(self, tmp_path, generalized_model_path, capsys):
        solution_path = tmp_path / "solution.json"
        artifacts = cli.cmd_solve(
            generalized_model_path,
            solution_path=solution_path,
            trace_path=tmp_path / "trace.csv",
        )
        assert artifacts.exit_code == 0
        code = cli.cmd_verify(generalized_model_path, solution_path, tol=1e-4)
        assert code == 0

    def test_trivial_single_sector(self, tmp_path, trivial_model_path, capsys):
        solution_path = tmp_path / "solution.json"
        artifacts = cli.cmd_solve(
            trivial_model_path,
            solution_path=solution_path,
            trace_path=tmp_path / "trace.csv",
        )
        assert artifacts.exit_code == 0
        doc = json.loads(solution_path.read_text())
        assert abs(doc["x"][0]) <= 1e-5

    def test_malformed_model(self, tmp_path, capsys):
        model_path = tmp_path / "broken.json"
        model_path.write_text("{this is not json")
        artifacts = cli.cmd_solve(model_path)
        assert artifacts.exit_code == 2
        assert artifacts.solution_path is None
        assert not list(tmp_path.glob("*.solution.json"))
        assert not list(tmp_path.glob("*.trace.csv"))

    def test_main_with_overrides(self, tmp_path, generalized_model_path, capsys):
        code = cli.main(
            [
                "solve",
                str(generalized_model_path),
                "--solution-out",
                str(tmp_path / "s.json"),
                "--trace-out",
                str(tmp_path / "t.csv"),
                "--delta",
                "1e-4",
                "--sigma",
                "0.4",
                "--max-iter",
                "200",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "status=converged" in out

    def test_main_rejects_bad_config(self, generalized_model_path, capsys):
        code = cli.main(["solve", str(generalized_model_path), "--sigma", "1.5"])
        assert code == 2


class TestVerify:
    def test_reference_solution_passes(self, tmp_path, generalized_model_path, capsys):
        solution_path = write_json(tmp_path / "x.json", {"x": list(X_STAR)})
        assert cli.cmd_verify(generalized_model_path, solution_path, tol=1e-8) == 0
        out = capsys.readouterr().out
        assert "verification: PASS" in out

    def test_zero_vector_fails_feasibility(self, tmp_path, generalized_model_path, capsys):
        solution_path = write_json(tmp_path / "x.json", {"x": [0.0, 0.0, 0.0]})
        assert cli.cmd_verify(generalized_model_path, solution_path, tol=1e-8) == 1
        out = capsys.readouterr().out
        assert "verification: FAIL" in out

    def test_missing_solution_file(self, generalized_model_path, tmp_path, capsys):
        assert cli.cmd_verify(generalized_model_path, tmp_path / "nope.json") == 2

    def test_oracle_solution_of_blocks_of_one_model(self, tmp_path, capsys):
        # single-technology model solved by enumeration, then verified
        doc = {
            "sectors": 2,
            "blocks": [
                {"technology": [[0.2, 0.1]], "demand": [5.0]},
                {"technology": [[0.1, 0.2]], "demand": [-1.0]},
            ],
        }
        model_path = write_json(tmp_path / "m.json", doc)
        code = cli.cmd_oracle(model_path)
        assert code == 0
        import leontief_ipm as li

        v = li.build_generalized_leontief_vlcp(li.load_model(model_path))
        best = li.enumerate_vlcp_solutions(v)[0]
        solution_path = write_json(tmp_path / "x.json", {"x": list(best.x)})
        assert cli.cmd_verify(model_path, solution_path, tol=1e-6) == 0


class TestOracle:
    def test_two_technology_economy(self, generalized_model_path, capsys):
        assert cli.cmd_oracle(generalized_model_path) == 0
        out = capsys.readouterr().out
        assert "415.3846154" in out
        assert "53.84615385" in out

    def test_trivial_model(self, trivial_model_path, capsys):
        assert cli.cmd_oracle(trivial_model_path) == 0
        out = capsys.readouterr().out
        assert "x = [0]" in out

    def test_large_model_hits_cap(self, tmp_path, capsys):
        doc = {
            "sectors": 20,
            "blocks": [
                {"technology": [[0.0] * 20], "demand": [-1.0]} for _ in range(20)
            ],
        }
        model_path = write_json(tmp_path / "big.json", doc)
        assert cli.cmd_oracle(model_path) == 4


class TestCheckMatrix:
    def test_minor_sweep_cap(self, tmp_path, capsys):
        # 13 sectors with one two-technology block exceeds the minor-sweep order
        sectors = 13
        blocks = [
            {"technology": [[0.0] * sectors, [0.0] * sectors], "demand": [-1.0, -1.0]}
        ]
        blocks += [
            {"technology": [[0.0] * sectors], "demand": [-1.0]}
            for _ in range(sectors - 1)
        ]
        model_path = write_json(tmp_path / "wide.json", {"sectors": sectors, "blocks": blocks})
        assert cli.cmd_check_matrix(model_path) == 4

    def test_zero_technology(self, tmp_path, capsys):
        doc = {
            "sectors": 2,
            "blocks": [
                {"technology": [[0.0, 0.0]], "demand": [1.0]},
                {"technology": [[0.0, 0.0]], "demand": [1.0]},
            ],
        }
        model_path = write_json(tmp_path / "zero.json", doc)
        assert cli.cmd_check_matrix(model_path) == 0
        out = capsys.readouterr().out
        assert "nonsingular M-matrix: yes" in out

    def test_column_stochastic_single_technology(self, capsys):
        assert cli.cmd_check_matrix(bundled_path("leontief_open_singular.json")) == 0
        out = capsys.readouterr().out
        assert "nonsingular M-matrix: no" in out

    def test_generalized_model(self, generalized_model_path, capsys):
        assert cli.cmd_check_matrix(generalized_model_path) == 0
        out = capsys.readouterr().out
        assert "vertical block P: no" in out
        assert "vertical block P0: yes" in out


def test_module_invocation_subprocess(tmp_path):
    solution = tmp_path / "s.json"
    trace = tmp_path / "t.csv"
    result = subprocess.run(
        [
            sys.executable,
            "-m",
            "leontief_ipm.cli",
            "solve",
            str(bundled_path("leontief_generalized.json")),
            "--solution-out",
            str(solution),
            "--trace-out",
            str(trace),
        ],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert result.returncode == 0, result.stderr
    assert solution.is_file()
    assert trace.is_file()
