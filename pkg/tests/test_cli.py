"""End-to-end checks of the command-line interface.

Everything goes through ``main(argv)`` so the tests exercise argument
parsing, config merging, and the exit-code contract exactly as a shell
user would hit them.
"""

import json

import numpy as np
import pytest

from mzsim.cli import CSV_COLUMNS, main
from mzsim.experiments import (
    chain_angles_for_sweep,
    equal_angles,
    eta_general,
    gamma_closed,
)
from mzsim.qasm import emit, parse
from mzsim.experiments import build_eraser


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = text.rstrip("\n").split("\n")
    header = lines[0].split(",")
    return header, [dict(zip(header, line.split(","))) for line in lines[1:]]


class TestRunExact:
    def test_eraser_erased_probabilities(self, capsys):
        code, out, err = run_cli(
            capsys, "run", "--experiment", "eraser", "--exact")
        assert code == 0 and err == ""
        doc = json.loads(out)
        assert doc["experiment"] == "eraser"
        assert doc["observable"] == "distribution"
        assert doc["exact"] is True
        assert doc["shots"] is None
        assert doc["device"] == "ideal"
        assert doc["fidelity_estimate"] == 1.0
        assert doc["probabilities"]["00"] == pytest.approx(0.5, abs=1e-12)
        assert doc["probabilities"]["11"] == pytest.approx(0.5, abs=1e-12)
        assert doc["theory"] == {"00": 0.5, "01": 0.0, "10": 0.0, "11": 0.5}
        assert doc["parameters"] == {"erase": True}

    def test_eraser_without_erasure_is_uniform(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--experiment", "eraser", "--no-erase", "--exact")
        assert code == 0
        doc = json.loads(out)
        for key in ("00", "01", "10", "11"):
            assert doc["probabilities"][key] == pytest.approx(0.25, abs=1e-12)

    def test_bomb_eta_csv_row(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--experiment", "bomb", "--exact",
            "--format", "csv")
        assert code == 0
        header, rows = parse_csv(out)
        assert header == list(CSV_COLUMNS)
        assert len(rows) == 1
        row = rows[0]
        assert row["experiment"] == "bomb"
        assert row["observable"] == "eta"
        assert row["N"] == "2"
        assert float(row["value"]) == pytest.approx(1 / 3, abs=1e-12)
        assert float(row["theory"]) == pytest.approx(1 / 3, abs=1e-12)
        assert row["shots"] == "" and row["seed"] == ""
        assert row["device"] == "ideal"
        assert row["mitigated"] == "false"

    def test_bomb_absent_collapses_to_00(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--experiment", "bomb", "--no-bomb", "--exact")
        doc = json.loads(out)
        assert code == 0
        assert doc["value"]["00"] == pytest.approx(1.0)
        assert all(v < 1e-12 for k, v in doc["value"].items() if k != "00")
        assert doc["theory"]["00"] == 1.0

    def test_general_bomb_matches_closed_form(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--experiment", "general-bomb",
            "--angles", "0.25,0.25,0.25,0.25", "--exact")
        assert code == 0
        doc = json.loads(out)
        expected = eta_general(equal_angles(4))
        assert doc["value"] == pytest.approx(expected, abs=1e-9)
        assert doc["theory"] == pytest.approx(expected, abs=1e-12)
        assert doc["parameters"]["angles_over_pi"] == pytest.approx([0.25] * 4)

    def test_hardy_gamma(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--experiment", "hardy",
            "--theta0", "0.575", "--theta1", "0.575", "--exact")
        assert code == 0
        doc = json.loads(out)
        expected = gamma_closed(0.575 * np.pi, 0.575 * np.pi)
        assert doc["value"] == pytest.approx(expected, abs=1e-9)
        assert doc["observable"] == "gamma"
        assert doc["parameters"]["theta0_over_pi"] == pytest.approx(0.575)

    def test_eraser_csv_distribution_rows(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--experiment", "eraser", "--exact",
            "--format", "csv")
        assert code == 0
        _, rows = parse_csv(out)
        assert [r["observable"] for r in rows] == [
            "p_00", "p_01", "p_10", "p_11"]
        probs = {r["observable"]: float(r["value"]) for r in rows}
        assert probs["p_00"] == pytest.approx(0.5, abs=1e-12)
        assert probs["p_11"] == pytest.approx(0.5, abs=1e-12)
        assert probs["p_01"] == pytest.approx(0.0, abs=1e-12)
        assert float(rows[0]["theory"]) == 0.5


class TestRunSampled:
    def test_ideal_sampling_document(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--experiment", "eraser",
            "--shots", "4096", "--seed", "7")
        assert code == 0
        doc = json.loads(out)
        assert doc["shots"] == 4096
        assert doc["seed"] == 7
        assert sum(doc["counts"].values()) == 4096
        # the erased interferometer never produces 01 or 10
        assert set(doc["counts"]) <= {"00", "11"}
        total = sum(doc["value"].values())
        assert total == pytest.approx(1.0)

    def test_same_seed_is_byte_identical(self, capsys):
        _, first, _ = run_cli(
            capsys, "run", "--experiment", "bomb", "--shots", "2048",
            "--seed", "3")
        _, second, _ = run_cli(
            capsys, "run", "--experiment", "bomb", "--shots", "2048",
            "--seed", "3")
        assert first == second

    def test_different_seeds_differ(self, capsys):
        _, first, _ = run_cli(
            capsys, "run", "--experiment", "bomb", "--shots", "2048",
            "--seed", "3")
        _, second, _ = run_cli(
            capsys, "run", "--experiment", "bomb", "--shots", "2048",
            "--seed", "4")
        assert json.loads(first)["counts"] != json.loads(second)["counts"]

    def test_noisy_device_document(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--experiment", "bomb", "--device", "vigo",
            "--shots", "1024", "--seed", "0")
        assert code == 0
        doc = json.loads(out)
        assert doc["device"] == "vigo-0820"
        assert 0.0 < doc["fidelity_estimate"] < 1.0
        assert doc["error_estimate"] == pytest.approx(
            1.0 - doc["fidelity_estimate"])
        assert doc["swap_count"] == 0
        assert sum(doc["counts"].values()) == 1024

    def test_mitigated_run(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--experiment", "eraser", "--device", "vigo",
            "--shots", "4096", "--seed", "1", "--mitigate")
        assert code == 0
        doc = json.loads(out)
        probs = doc["mitigated_probabilities"]
        assert sum(probs.values()) == pytest.approx(1.0)
        assert all(v >= 0 for v in probs.values())
        assert isinstance(doc["mitigated_value"], dict)

    def test_mitigated_csv_rows_flagged(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--experiment", "hardy",
            "--theta0", "0.5", "--theta1", "0.5",
            "--device", "vigo", "--shots", "1024", "--seed", "5",
            "--mitigate", "--format", "csv")
        assert code == 0
        _, rows = parse_csv(out)
        assert [r["mitigated"] for r in rows] == ["false", "true"]
        assert all(r["observable"] == "gamma" for r in rows)
        assert all(r["theta0_over_pi"] == "0.5" for r in rows)
        assert all(r["device"] == "vigo-0820" for r in rows)


class TestConfigFile:
    def test_config_supplies_everything(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({
            "experiment": "bomb", "bomb": False, "exact": True,
        }))
        code, out, _ = run_cli(capsys, "run", "--config", str(cfg))
        assert code == 0
        doc = json.loads(out)
        assert doc["parameters"] == {"present": False}
        assert doc["exact"] is True

    def test_flag_overrides_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({
            "experiment": "bomb", "bomb": False, "exact": True,
        }))
        code, out, _ = run_cli(capsys, "run", "--config", str(cfg), "--bomb")
        assert code == 0
        assert json.loads(out)["parameters"] == {"present": True}

    def test_config_seed_and_shots(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({
            "experiment": "eraser", "shots": 512, "seed": 11,
        }))
        code, out, _ = run_cli(capsys, "run", "--config", str(cfg))
        doc = json.loads(out)
        assert code == 0
        assert doc["shots"] == 512 and doc["seed"] == 11

    def test_missing_config_file(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "run", "--config", str(tmp_path / "nope.json"))
        assert code == 2
        assert "config file not found" in err

    def test_config_not_json(self, capsys, tmp_path):
        cfg = tmp_path / "broken.json"
        cfg.write_text("{not json")
        code, _, err = run_cli(capsys, "run", "--config", str(cfg))
        assert code == 2
        assert "not valid JSON" in err

    def test_config_not_an_object(self, capsys, tmp_path):
        cfg = tmp_path / "list.json"
        cfg.write_text("[1, 2, 3]")
        code, _, err = run_cli(capsys, "run", "--config", str(cfg))
        assert code == 2
        assert "JSON object" in err


class TestRunErrors:
    def test_experiment_required(self, capsys):
        code, _, err = run_cli(capsys, "run")
        assert code == 2
        assert "experiment is required" in err

    def test_mitigate_needs_device(self, capsys):
        code, _, err = run_cli(
            capsys, "run", "--experiment", "eraser", "--mitigate")
        assert code == 2
        assert "needs a noisy device" in err

    def test_general_bomb_needs_angles(self, capsys):
        code, _, err = run_cli(capsys, "run", "--experiment", "general-bomb")
        assert code == 2
        assert "--angles" in err

    def test_hardy_needs_thetas(self, capsys):
        code, _, err = run_cli(capsys, "run", "--experiment", "hardy")
        assert code == 2
        assert "--theta0" in err

    def test_bad_angle_list(self, capsys):
        code, _, err = run_cli(
            capsys, "run", "--experiment", "general-bomb",
            "--angles", "0.3,oops")
        assert code == 2
        assert "bad angle list" in err

    def test_angles_violating_sum_rule(self, capsys):
        code, _, err = run_cli(
            capsys, "run", "--experiment", "general-bomb",
            "--angles", "0.5,0.9", "--exact")
        assert code == 2
        assert "sum" in err

    def test_unknown_device(self, capsys):
        code, _, err = run_cli(
            capsys, "run", "--experiment", "eraser", "--device", "andromeda")
        assert code == 2
        assert "neither" in err

    def test_invalid_experiment_choice_exits_2(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["run", "--experiment", "nope"])
        assert info.value.code == 2
        capsys.readouterr()

    def test_output_into_missing_directory(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "run", "--experiment", "eraser", "--exact",
            "--output", str(tmp_path / "no" / "such" / "dir" / "out.json"))
        assert code == 3
        assert err.startswith("error:")

    def test_output_file_written(self, capsys, tmp_path):
        target = tmp_path / "doc.json"
        code, out, _ = run_cli(
            capsys, "run", "--experiment", "eraser", "--exact",
            "--output", str(target))
        assert code == 0
        assert out == ""
        doc = json.loads(target.read_text())
        assert doc["probabilities"]["00"] == pytest.approx(0.5)


class TestSweep:
    def test_ideal_general_bomb_grid(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--experiment", "general-bomb",
            "--n-values", "2,3",
            "--theta-start", "0.3", "--theta-stop", "0.5",
            "--theta-step", "0.1")
        assert code == 0
        header, rows = parse_csv(out)
        assert header == list(CSV_COLUMNS)
        assert len(rows) == 6  # 2 chain lengths x 3 grid points
        for row in rows:
            n = int(row["N"])
            t = float(row["theta_over_pi"])
            expected = eta_general(chain_angles_for_sweep(t * np.pi, n))
            assert float(row["value"]) == pytest.approx(expected, abs=1e-9)
            assert float(row["theory"]) == pytest.approx(expected, abs=1e-9)
            assert row["device"] == "ideal"
            assert row["shots"] == "" and row["seed"] == ""
            assert row["mitigated"] == "false"
        assert [float(r["theta_over_pi"]) for r in rows[:3]] == [0.3, 0.4, 0.5]

    def test_hardy_diagonal(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--experiment", "hardy",
            "--theta-start", "0.5", "--theta-stop", "0.6",
            "--theta-step", "0.05")
        assert code == 0
        _, rows = parse_csv(out)
        assert len(rows) == 3
        for row in rows:
            t = float(row["theta_over_pi"])
            assert row["theta0_over_pi"] == row["theta1_over_pi"]
            assert float(row["theta0_over_pi"]) == t
            expected = gamma_closed(t * np.pi, t * np.pi)
            assert float(row["value"]) == pytest.approx(expected, abs=1e-9)
            assert row["observable"] == "gamma"

    def test_hardy_full_grid(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--experiment", "hardy",
            "--theta-start", "0.4", "--theta-stop", "0.5",
            "--theta-step", "0.1", "--hardy-grid", "full")
        assert code == 0
        _, rows = parse_csv(out)
        assert len(rows) == 4
        combos = {(r["theta0_over_pi"], r["theta1_over_pi"]) for r in rows}
        assert combos == {("0.4", "0.4"), ("0.4", "0.5"),
                          ("0.5", "0.4"), ("0.5", "0.5")}
        assert all(r["theta_over_pi"] == "" for r in rows)

    def test_noisy_sweep_with_repeats(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--experiment", "general-bomb",
            "--n-values", "2", "--theta-start", "0.5", "--theta-stop", "0.5",
            "--theta-step", "0.1", "--device", "vigo-0820",
            "--shots", "500", "--seed", "0", "--repeats", "2")
        assert code == 0
        _, rows = parse_csv(out)
        assert len(rows) == 3  # one exact row + two sampled repeats
        ideal, first, second = rows
        assert ideal["device"] == "ideal" and ideal["std_dev"] == ""
        # sampled rows carry self-reproducing derived seeds
        for r, row in enumerate((first, second)):
            expected_seed = int(
                np.random.SeedSequence((0, 0, r)).generate_state(1)[0])
            assert row["seed"] == str(expected_seed)
            assert row["shots"] == "500"
            assert row["device"] == "vigo-0820"
        values = [float(first["value"]), float(second["value"])]
        for row in (first, second):
            assert float(row["std_dev"]) == pytest.approx(np.std(values))

    def test_mitigated_sweep_rows(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--experiment", "general-bomb",
            "--n-values", "2", "--theta-start", "0.5", "--theta-stop", "0.5",
            "--theta-step", "0.1", "--device", "vigo-0820",
            "--shots", "500", "--seed", "2", "--repeats", "2", "--mitigate")
        assert code == 0
        _, rows = parse_csv(out)
        assert [r["mitigated"] for r in rows] == [
            "false", "false", "false", "true", "true"]

    def test_sweep_json_format(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--experiment", "hardy",
            "--theta-start", "0.5", "--theta-stop", "0.5",
            "--theta-step", "0.1", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert len(doc["rows"]) == 1
        assert doc["rows"][0]["observable"] == "gamma"

    def test_sweep_determinism(self, capsys):
        argv = ("sweep", "--experiment", "hardy", "--theta-start", "0.55",
                "--theta-stop", "0.6", "--theta-step", "0.05",
                "--device", "vigo", "--shots", "400", "--seed", "9",
                "--repeats", "2")
        _, first, _ = run_cli(capsys, *argv)
        _, second, _ = run_cli(capsys, *argv)
        assert first == second

    def test_sweep_output_file(self, capsys, tmp_path):
        target = tmp_path / "sweep.csv"
        code, out, _ = run_cli(
            capsys, "sweep", "--experiment", "hardy",
            "--theta-start", "0.5", "--theta-stop", "0.5",
            "--theta-step", "0.1", "--output", str(target))
        assert code == 0 and out == ""
        header, rows = parse_csv(target.read_text())
        assert header == list(CSV_COLUMNS) and len(rows) == 1


class TestSweepErrors:
    def test_missing_grid_flags(self, capsys):
        code, _, err = run_cli(
            capsys, "sweep", "--experiment", "hardy",
            "--theta-start", "0.5")
        assert code == 2
        assert "--theta-stop" in err

    def test_general_bomb_needs_n_values(self, capsys):
        code, _, err = run_cli(
            capsys, "sweep", "--experiment", "general-bomb",
            "--theta-start", "0.3", "--theta-stop", "0.5",
            "--theta-step", "0.1")
        assert code == 2
        assert "--n-values" in err

    def test_unsupported_sweep_via_config(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "experiment": "eraser", "theta_start": 0.3,
            "theta_stop": 0.5, "theta_step": 0.1,
        }))
        code, _, err = run_cli(capsys, "sweep", "--config", str(cfg))
        assert code == 2
        assert "sweep supports" in err

    def test_grid_point_on_boundary(self, capsys):
        code, _, err = run_cli(
            capsys, "sweep", "--experiment", "general-bomb",
            "--n-values", "2", "--theta-start", "0.5",
            "--theta-stop", "1.0", "--theta-step", "0.5")
        assert code == 2
        assert "strictly inside" in err

    def test_negative_step(self, capsys):
        code, _, err = run_cli(
            capsys, "sweep", "--experiment", "hardy",
            "--theta-start", "0.5", "--theta-stop", "0.6",
            "--theta-step", "-0.1")
        assert code == 2
        assert "positive" in err

    def test_empty_range(self, capsys):
        code, _, err = run_cli(
            capsys, "sweep", "--experiment", "hardy",
            "--theta-start", "0.6", "--theta-stop", "0.5",
            "--theta-step", "0.1")
        assert code == 2
        assert "empty" in err

    def test_bad_repeats(self, capsys):
        code, _, err = run_cli(
            capsys, "sweep", "--experiment", "hardy",
            "--theta-start", "0.5", "--theta-stop", "0.5",
            "--theta-step", "0.1", "--repeats", "0")
        assert code == 2
        assert "repeats" in err


class TestTranspileCommand:
    @pytest.fixture
    def eraser_qasm(self, tmp_path):
        path = tmp_path / "eraser.qasm"
        path.write_text(emit(build_eraser(erase=True)))
        return str(path)

    def test_report_and_emitted_qasm(self, capsys, eraser_qasm):
        code, out, err = run_cli(
            capsys, "transpile", eraser_qasm, "--device", "vigo")
        assert code == 0 and err == ""
        assert "device: vigo-0820" in out
        assert "qubits: logical 2 -> physical 5" in out
        assert "swaps inserted: 0" in out
        assert "estimated error: 0.046340" in out
        # the QASM payload follows the report after a blank line
        payload = out.split("\n\n", 1)[1]
        circuit = parse(payload)
        assert circuit.num_qubits == 5
        kinds = {inst.gate.name for inst in circuit.instructions
                 if inst.kind == "gate"}
        assert kinds <= {"U1", "U2", "U3", "CNOT"}

    def test_output_file_holds_qasm_only(self, capsys, eraser_qasm, tmp_path):
        target = tmp_path / "routed.qasm"
        code, out, _ = run_cli(
            capsys, "transpile", eraser_qasm, "--device", "vigo",
            "--output", str(target))
        assert code == 0
        assert "estimated fidelity" in out
        assert "OPENQASM" not in out
        parsed = parse(target.read_text())
        assert parsed.num_qubits == 5

    def test_explicit_layout(self, capsys, eraser_qasm):
        code, out, _ = run_cli(
            capsys, "transpile", eraser_qasm, "--device", "vigo",
            "--layout", "2,1")
        assert code == 0
        assert "initial layout: [2, 1" in out

    def test_fuse_flag(self, capsys, eraser_qasm):
        code, out, _ = run_cli(
            capsys, "transpile", eraser_qasm, "--device", "vigo", "--fuse")
        assert code == 0
        payload = out.split("\n\n", 1)[1]
        fused = parse(payload)
        assert fused.count_gates().get("U3", 0) >= 1

    def test_missing_input(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "transpile", str(tmp_path / "ghost.qasm"),
            "--device", "vigo")
        assert code == 2
        assert "input file not found" in err

    def test_parse_error_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.qasm"
        bad.write_text("OPENQASM 2.0;\nqreg q[1];\nrz(0.1) q[0];\n")
        code, _, err = run_cli(
            capsys, "transpile", str(bad), "--device", "vigo")
        assert code == 2
        assert "line 3" in err

    def test_ideal_device_rejected(self, capsys, eraser_qasm):
        code, _, err = run_cli(
            capsys, "transpile", eraser_qasm, "--device", "ideal")
        assert code == 2
        assert "requires a real device" in err

    def test_bad_layout_exits_3(self, capsys, eraser_qasm):
        code, _, err = run_cli(
            capsys, "transpile", eraser_qasm, "--device", "vigo",
            "--layout", "1,1")
        assert code == 3
        assert err.startswith("error:")

    def test_device_flag_required(self, capsys, eraser_qasm):
        with pytest.raises(SystemExit) as info:
            main(["transpile", eraser_qasm])
        assert info.value.code == 2
        capsys.readouterr()
