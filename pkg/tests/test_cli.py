import csv
import json

import numpy as np
import pytest

from bergband.cli import main, EXIT_OK, EXIT_VERDICT_FAIL, EXIT_USAGE, EXIT_NUMERICAL


@pytest.fixture()
def run_config_path(tmp_path):
    cfg = {
        "targets": [0.3, 0.2, 0.1],
        "epsilon": 0.02,
        "eta_points": 5,
        "n_r": 24,
        "n_t": 48,
        "n_strip": 16,
    }
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg))
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    return header, rows


class TestSynth:
    def test_writes_profile_json(self, tmp_path):
        out = tmp_path / "profile.json"
        assert main(["synth", "--targets", "0.1", "--out", str(out)]) == EXIT_OK
        doc = json.loads(out.read_text())
        assert doc["coeffs"][0] == pytest.approx(22.4, rel=1e-12)
        assert doc["R0"] == 0.35

    def test_ill_conditioned_exit_code(self, tmp_path):
        targets = ",".join(str(t) for t in np.linspace(1.0, 0.1, 9))
        assert main(["synth", "--targets", targets]) == EXIT_NUMERICAL


class TestDiscSpec:
    def test_targets_reproduced(self, tmp_path):
        out = tmp_path / "spec.csv"
        code = main(
            ["disc-spec", "--targets", "0.3,0.2,0.1", "--n", "10", "--out", str(out)]
        )
        assert code == EXIT_OK
        header, rows = read_csv(out)
        assert header == ["n", "lambda"]
        assert len(rows) == 10
        # rows 2..4 of the modulus ordering carry the targets
        values = [float(r[1]) for r in rows]
        assert values[1:4] == pytest.approx([0.3, 0.2, 0.1], abs=1e-8)

    def test_profile_file_input(self, tmp_path):
        prof = tmp_path / "p.json"
        main(["synth", "--targets", "0.1", "--out", str(prof)])
        out = tmp_path / "spec.csv"
        assert main(["disc-spec", "--profile", str(prof), "--out", str(out)]) == EXIT_OK
        _, rows = read_csv(out)
        assert float(rows[1][1]) == pytest.approx(0.1, abs=1e-10)


class TestBands:
    def test_csv_contract(self, tmp_path, run_config_path):
        out = tmp_path / "bands.csv"
        code = main(
            ["bands", "--config", str(run_config_path), "--h", "0.05", "--out", str(out)]
        )
        assert code == EXIT_OK
        header, rows = read_csv(out)
        assert header == ["eta", "n", "lambda"]
        assert len(rows) == 5 * 8  # eta_points x N_keep
        etas = sorted({float(r[0]) for r in rows})
        assert etas[0] == pytest.approx(-np.pi)
        assert etas[-1] == pytest.approx(np.pi)

    def test_reproducible_columns(self, tmp_path, run_config_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        main(["bands", "--config", str(run_config_path), "--h", "0.05", "--out", str(out1)])
        main(["bands", "--config", str(run_config_path), "--h", "0.05", "--out", str(out2)])
        assert out1.read_text() == out2.read_text()


class TestRunAndReport:
    def test_run_pass(self, run_config_path, capsys):
        assert main(["run", "--config", str(run_config_path)]) == EXIT_OK
        assert "pass" in capsys.readouterr().out

    def test_report_json(self, tmp_path, run_config_path):
        out = tmp_path / "report.json"
        code = main(["report", "--config", str(run_config_path), "--out", str(out)])
        assert code == EXIT_OK
        doc = json.loads(out.read_text())
        assert doc["verdict"] == "pass"
        assert {"components", "gaps", "targets", "delta_achieved"} <= set(doc)
        assert all(t["hit"] for t in doc["targets"])

    def test_verdict_fail_exit_code(self, tmp_path):
        cfg = {
            "targets": [0.3, 0.2999],
            "epsilon": 0.0001,
            "eta_points": 3,
            "h_min": 0.06,
            "n_r": 16,
            "n_t": 32,
            "n_strip": 10,
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(cfg))
        assert main(["run", "--config", str(path)]) == EXIT_VERDICT_FAIL

    def test_missing_config_usage_error(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "nope.json")]) == EXIT_USAGE


class TestChecks:
    def test_floquet_check(self, capsys):
        assert main(["floquet-check", "--M", "8", "--trials", "3"]) == EXIT_OK

    def test_conformal_check(self, capsys):
        assert main(["conformal-check", "--alpha", "0.3", "--trials", "3"]) == EXIT_OK

    def test_study_h(self, tmp_path):
        out = tmp_path / "study.csv"
        code = main(
            [
                "study-h",
                "--targets",
                "0.3,0.2,0.1",
                "--h-list",
                "0.1,0.05",
                "--n-track",
                "2",
                "--out",
                str(out),
            ]
        )
        assert code == EXIT_OK
        header, rows = read_csv(out)
        assert header == ["h", "n", "lambda", "error"]
        assert len(rows) == 4

    def test_unknown_command_usage_exit(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == EXIT_USAGE
