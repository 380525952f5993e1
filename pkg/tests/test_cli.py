import json

import numpy as np
import pytest

from equichan import fileio
from equichan.apps import depolarized_copies
from equichan.channels import ExtremalSpec, ExtremalTriple, symmetrization_spec
from equichan.cli import run
from equichan.staircases import staircase


@pytest.fixture
def state_file(tmp_path, rng):
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = A @ A.conj().T
    rho /= np.trace(rho)
    f = tmp_path / "state.json"
    fileio.save_json(fileio.matrix_to_obj(rho), f)
    return f, rho


class TestClassify:
    def test_lists_triples(self, capsys):
        assert run(["classify", "1", "1", "2"]) == 0
        out = capsys.readouterr().out
        assert "2 admissible triples" in out
        assert "(1,-1)" in out and "(0,0)" in out


class TestSimulate:
    def test_dense_and_streamed_agree(self, tmp_path, state_file, capsys):
        f_state, rho = state_file
        spec = symmetrization_spec(2, 2)
        f_spec = tmp_path / "spec.json"
        fileio.save_json(fileio.spec_to_obj(spec), f_spec)
        out_a = tmp_path / "dense.json"
        out_b = tmp_path / "stream.json"
        assert run(["simulate", "--spec", str(f_spec), "--state", str(f_state),
                    "--out", str(out_a)]) == 0
        assert run(["simulate", "--spec", str(f_spec), "--state", str(f_state),
                    "--stream", "--out", str(out_b)]) == 0
        dense = fileio.matrix_from_obj(fileio.load_json(out_a)["output"])
        rec = fileio.load_json(out_b)
        streamed = fileio.matrix_from_obj(rec["output"])
        assert np.linalg.norm(dense - streamed) < 1e-9
        assert rec["ledger"]["num_simple_cg"] == 1


class TestSample:
    def test_box_frequencies(self, capsys):
        assert run(["sample", "--shape", "3,1", "--mode", "alg3",
                    "--count", "2000", "--seed", "7"]) == 0
        out = capsys.readouterr().out
        assert "total variation vs exact" in out
        tv = float(out.strip().splitlines()[-1].split(":")[1])
        assert tv < 0.05

    def test_paths_newline_delimited(self, capsys):
        assert run(["sample", "--shape", "2,1", "--what", "path",
                    "--count", "3", "--seed", "1"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 3
        for line in lines:
            steps = json.loads(line)
            assert steps[0] == [0, 0] and steps[-1] == [2, 1]

    def test_bad_shape_exits_nonzero(self):
        with pytest.raises(SystemExit):
            run(["sample", "--shape", "1,2"])


class TestEstimate:
    def test_tasks(self, capsys):
        assert run(["estimate", "--task", "purify", "-m", "5", "-d", "2"]) == 0
        out = capsys.readouterr().out
        assert "log2^p" in out and "d^2" in out
        assert run(["estimate", "--task", "general", "-m", "4", "-n", "4",
                    "-d", "2", "-r", "2", "--r-prime", "2"]) == 0
        out = capsys.readouterr().out
        assert "absorb" in out


class TestVerify:
    def test_single_suite_passes(self, capsys):
        assert run(["verify", "--suite", "vectorization", "--seed", "3"]) == 0
        out = capsys.readouterr().out
        assert "ALL SUITES PASSED" in out

    def test_requires_selection(self, capsys):
        assert run(["verify"]) == 2

    def test_failure_exit_code(self, capsys):
        # the purity suite carries the documented impossible m=2 strictness case
        assert run(["verify", "--suite", "purity"]) == 1
        out = capsys.readouterr().out
        assert "SOME SUITES FAILED" in out


class TestApps:
    def test_symmetrize(self, tmp_path, state_file):
        f_state, rho = state_file
        out = tmp_path / "result.json"
        assert run(["apps", "symmetrize", "--state", str(f_state),
                    "-m", "2", "-d", "2", "--out", str(out)]) == 0
        rec = fileio.load_json(out)
        assert rec["fidelity"] is None
        assert rec["ledger"]["peak_live_dim"] >= 2

    def test_clone_with_fidelity(self, tmp_path):
        psi = np.array([[1.0], [0.0]])
        f_state = tmp_path / "psi.json"
        fileio.save_json(fileio.matrix_to_obj(psi), f_state)
        out = tmp_path / "clone.json"
        assert run(["apps", "clone", "--state", str(f_state),
                    "-m", "1", "-n", "2", "-d", "2", "--out", str(out)]) == 0
        rec = fileio.load_json(out)
        assert abs(rec["fidelity"] - 2 / 3) < 1e-10

    def test_purify(self, tmp_path):
        rho = depolarized_copies(np.array([1.0, 0.0]), 0.3, 3, 2)
        f_state = tmp_path / "rho.json"
        fileio.save_json(fileio.matrix_to_obj(rho), f_state)
        ref = tmp_path / "ref.json"
        fileio.save_json(fileio.matrix_to_obj(np.array([[1.0], [0.0]])), ref)
        out = tmp_path / "pa.json"
        assert run(["apps", "purify", "--state", str(f_state), "-m", "3", "-d", "2",
                    "--reference", str(ref), "--out", str(out)]) == 0
        rec = fileio.load_json(out)
        assert rec["fidelity"] > 0.85

    def test_missing_file_is_usage_error(self, tmp_path):
        assert run(["apps", "symmetrize", "--state", str(tmp_path / "nope.json"),
                    "-m", "2", "-d", "2"]) == 2
