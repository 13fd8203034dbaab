"""CLI behavior: exit codes, output files, determinism."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from combcut.cli import main

BELL = {
    "n": 2,
    "gates": [{"name": "h", "wires": [0]}, {"name": "cnot", "wires": [0, 1]}],
}


@pytest.fixture()
def bell_file(tmp_path):
    path = tmp_path / "bell.json"
    path.write_text(json.dumps(BELL))
    return str(path)


class TestExitCodes:
    def test_decompose_ok(self, capsys):
        assert main(["decompose", "--gate", "cz", "--mode", "schmidt"]) == 0
        out = capsys.readouterr().out
        assert "L = 2" in out

    def test_unknown_gate_is_invalid_input(self, capsys):
        assert main(["decompose", "--gate", "ccz"]) == 2

    def test_missing_file_is_invalid_input(self, capsys):
        assert main(["simulate", "nope.json", "--input", "00",
                     "--observable", "ZZ"]) == 2

    def test_malformed_json_is_invalid_input(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code = main(["simulate", str(bad), "--input", "00", "--observable", "ZZ"])
        assert code == 2
        assert "malformed JSON" in capsys.readouterr().err

    def test_pipeline_agreement_exit_zero(self, bell_file, capsys):
        code = main(["pipeline", bell_file, "--input", "00",
                     "--observable", "ZZ", "--mode", "schmidt"])
        assert code == 0
        assert "agrees" in capsys.readouterr().out

    def test_pipeline_budget_exit_one(self, tmp_path, capsys):
        circuit = {"n": 2, "gates": [{"name": "cz", "wires": [0, 1]}] * 3}
        path = tmp_path / "c.json"
        path.write_text(json.dumps(circuit))
        code = main(["pipeline", str(path), "--input", "00", "--observable", "ZI",
                     "--mode", "pauli", "--budget", "10"])
        assert code == 1
        assert "64" in capsys.readouterr().out

    def test_verify_pass_exit_zero(self, capsys):
        code = main(["verify", "--suite", "scaling", "--kmax", "3",
                     "--mode", "schmidt"])
        assert code == 0
        assert "suite scaling: pass" in capsys.readouterr().out

    def test_verify_corpus(self, tmp_path, capsys):
        from combcut.corpus import build_corpus

        build_corpus(tmp_path / "corpus")
        code = main(["verify", "--suite", "corpus",
                     "--corpus-dir", str(tmp_path / "corpus")])
        assert code == 0

    def test_verify_corpus_missing_dir_is_invalid_input(self, tmp_path, capsys):
        code = main(["verify", "--suite", "corpus",
                     "--corpus-dir", str(tmp_path / "nowhere")])
        assert code == 2
        assert "manifest" in capsys.readouterr().err


class TestOutputs:
    def test_decompose_json_mode(self, capsys):
        assert main(["decompose", "--gate", "swap", "--mode", "schmidt",
                     "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["term_count"] == 4

    def test_gadgetize_writes_circuit(self, bell_file, tmp_path, capsys):
        out = tmp_path / "g.json"
        code = main(["gadgetize", bell_file, "--variant", "v2",
                     "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["ancillas"] == [2, 3, 4]

    def test_cut_command(self, tmp_path, capsys):
        comb = {
            "n": 2,
            "gates": [{"name": "h", "wires": [1]}],
            "gaps": [{"position": 1, "wires": [0, 1]}],
            "partition": [0],
        }
        path = tmp_path / "comb.json"
        path.write_text(json.dumps(comb))
        out = tmp_path / "dec.json"
        code = main(["cut", str(path), "--gap-gates", "cz",
                     "--mode", "pauli", "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["mode"] == "pauli"
        assert len(payload["terms"]) == 4

    def test_verify_writes_deterministic_files(self, tmp_path):
        base1 = tmp_path / "run1"
        base2 = tmp_path / "run2"
        for base in (base1, base2):
            code = main(["verify", "--suite", "fidelity", "--n", "4",
                         "--out", str(base)])
            assert code == 0
        assert base1.with_suffix(".json").read_bytes() == \
            base2.with_suffix(".json").read_bytes()
        assert (tmp_path / "run1.csv").read_bytes() == \
            (tmp_path / "run2.csv").read_bytes()
        report = (tmp_path / "run1_report.csv").read_text()
        assert report.splitlines()[0] == "n_or_k,mode,L,rank,fidelity,wall_ms"

    def test_simulate_out_file(self, bell_file, tmp_path):
        out = tmp_path / "sim.json"
        code = main(["simulate", bell_file, "--input", "00",
                     "--observable", "ZZ", "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert abs(payload["expectation"] - 1.0) < 1e-12
        assert payload["wall_ms"] == 0.0  # zeroed for determinism


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "combcut.cli", "decompose",
             "--gate", "cnot", "--mode", "schmidt"],
            capture_output=True,
            text=True,
            cwd=str(Path(__file__).resolve().parent.parent),
        )
        assert proc.returncode == 0
        assert "L = 2" in proc.stdout
