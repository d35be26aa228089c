import json

import numpy as np
import pytest

from circmaxent.cli import main
from circmaxent.moments import UNIT_MASS_MOMENT


def read(path):
    return json.loads(path.read_text())


class TestMomentsCommand:
    def test_point_mass(self, tmp_path):
        out = tmp_path / "m.json"
        code = main(
            ["moments", "--measure", "point_mass", "--a", "1", "-K", "20", "-o", str(out)]
        )
        assert code == 0
        payload = read(out)
        assert payload["K"] == 20
        values = np.array([complex(re, im) for re, im in payload["values"]])
        ks = np.arange(20)
        assert np.max(np.abs(values - np.exp(-1j * ks) / (2 * np.pi))) < 1e-15

    def test_spec_file(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"atoms": [[0.0, 1.0]], "normalize": True}))
        out = tmp_path / "m.json"
        assert main(["moments", "--spec", str(spec), "-K", "4", "-o", str(out)]) == 0
        values = read(out)["values"]
        assert values[0][0] == pytest.approx(UNIT_MASS_MOMENT)

    def test_missing_measure_is_domain_error(self, tmp_path, capsys):
        code = main(["moments", "-K", "4", "-o", str(tmp_path / "m.json")])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_usage_error_exit_two(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["bogus-subcommand"])
        assert excinfo.value.code == 2


class TestConditionCommands:
    def test_condition_pins_phase_mean(self, tmp_path):
        moments = tmp_path / "m.json"
        phase = tmp_path / "phase.json"
        main(["moments", "--measure", "point_mass", "-K", "12", "-o", str(moments)])
        assert main(["condition", "--in", str(moments), "--M", "0", "-o", str(phase)]) == 0
        payload = read(phase)
        assert payload["values"][0] == [np.pi / 2.0, 0.0]

    def test_uncondition_roundtrip(self, tmp_path):
        moments = tmp_path / "m.json"
        phase = tmp_path / "phase.json"
        back = tmp_path / "back.json"
        main(["moments", "--measure", "point_mass", "-K", "12", "-o", str(moments)])
        main(["condition", "--in", str(moments), "-o", str(phase)])
        assert (
            main(
                [
                    "uncondition",
                    "--in", str(phase),
                    "--tau0", repr(UNIT_MASS_MOMENT),
                    "-o", str(back),
                ]
            )
            == 0
        )
        original = np.array([complex(re, im) for re, im in read(moments)["values"]])
        recovered = np.array([complex(re, im) for re, im in read(back)["values"]])
        assert np.max(np.abs(original - recovered)) < 1e-12


class TestSolverCommands:
    def test_maxent_and_invert(self, tmp_path):
        moments = tmp_path / "m.json"
        phase = tmp_path / "phase.json"
        model = tmp_path / "model.json"
        diag = tmp_path / "diag.json"
        rec = tmp_path / "rec.json"
        main(["moments", "--measure", "gaussians", "-K", "8", "-o", str(moments)])
        main(["condition", "--in", str(moments), "-o", str(phase)])
        assert (
            main(["maxent", "--in", str(phase), "-o", str(model), "--diag", str(diag)])
            == 0
        )
        model_payload = read(model)
        assert model_payload["K"] == 8 and len(model_payload["alphas"]) == 8
        diag_payload = read(diag)
        assert diag_payload["status"] == "Converged"
        assert (
            main(
                [
                    "invert",
                    "--in", str(phase),
                    "--tau0", repr(UNIT_MASS_MOMENT),
                    "-o", str(rec),
                ]
            )
            == 0
        )
        rec_payload = read(rec)
        assert rec_payload["coefficient_count"] == rec_payload["series"]["K"] * 2 - 1


class TestReportCommands:
    def test_pipeline_both_writes_report_directory(self, tmp_path):
        out = tmp_path / "out"
        code = main(
            ["pipeline", "--measure", "gaussians", "-K", "20", "--mode", "both", "-o", str(out)]
        )
        assert code == 0
        names = {p.name for p in out.iterdir()}
        assert {"report.json", "moments.json", "moment_errors.csv", "pointwise.csv", "phase.csv"} <= names
        payload = read(out / "report.json")
        assert payload["methods"]["conditioned"]["error"] is None
        assert payload["methods"]["unconditioned"]["error"] is None

    def test_pipeline_single_mode(self, tmp_path):
        out = tmp_path / "out"
        code = main(
            [
                "pipeline",
                "--measure", "point_mass",
                "-K", "6",
                "--extended", "2",
                "--mode", "conditioned",
                "--grid", "1024",
                "-o", str(out),
            ]
        )
        assert code == 0
        payload = read(out / "report.json")
        assert payload["methods"]["unconditioned"]["error"] == "not run"
        assert payload["methods"]["conditioned"]["error"] is None

    def test_experiment_deterministic_outputs(self, tmp_path):
        args = ["experiment", "--measure", "point_mass", "-K", "6", "--extended", "2", "--grid", "1024"]
        assert main(args + ["-o", str(tmp_path / "a")]) == 0
        assert main(args + ["-o", str(tmp_path / "b")]) == 0
        for path in (tmp_path / "a").iterdir():
            assert path.read_bytes() == (tmp_path / "b" / path.name).read_bytes()
