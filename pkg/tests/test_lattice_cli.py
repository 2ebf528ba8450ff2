import json
import os

import numpy as np
import pytest

from userkit.aqs_magnus import EvolutionSpec
from userkit.cli import main
from userkit.config import (
    load_config,
    preset_config,
    read_matrix_file,
    resolve_config,
    write_matrix_file,
)
from userkit.errors import ConfigError
from userkit.lattice import (
    LatticeSpec,
    build_lattice_family,
    build_target_hamiltonian,
    kinetic_operator,
    shift_matrix,
    target_A_from_hamiltonian,
)
from userkit.matrix_core import expm_hermitian_i, hermiticity_defect, is_unitary


class TestLattice:
    def test_drive_vanishes_at_t0(self):
        spec = LatticeSpec(n_sites=8)
        fam = build_lattice_family(spec)
        H0 = fam.at(spec.drive_omega, 0.0)
        assert np.max(np.abs(H0 - kinetic_operator(spec))) < 1e-14

    @pytest.mark.parametrize("n", [4, 8, 16])
    def test_kinetic_dispersion(self, n):
        spec = LatticeSpec(n_sites=n, mass=1.3, spacing=0.7)
        w = np.sort(np.linalg.eigvalsh(kinetic_operator(spec)))
        p = 2.0 * np.pi * np.arange(n) / (n * spec.spacing)
        expected = np.sort((np.sin(p * spec.spacing) / spec.spacing) ** 2 / (2 * spec.mass))
        assert np.max(np.abs(w - expected)) < 1e-10

    def test_translation_is_cyclic_unitary(self):
        S = shift_matrix(5)
        assert is_unitary(S)
        v = np.arange(5.0)
        assert np.allclose(S @ v, np.roll(v, 1))

    def test_target_reduces_to_kinetic(self):
        spec = LatticeSpec(n_sites=6, slope=0.0, kinetic_mod=())
        assert np.max(np.abs(build_target_hamiltonian(spec) - kinetic_operator(spec))) < 1e-14

    def test_slope_is_diagonal_shift(self):
        spec = LatticeSpec(n_sites=4, slope=0.3, kinetic_mod=())
        diff = build_target_hamiltonian(spec) - build_target_hamiltonian(
            LatticeSpec(n_sites=4, slope=0.0, kinetic_mod=())
        )
        idx = np.arange(4) - 1.5
        assert np.allclose(diff, np.diag(0.3 * idx * spec.spacing))

    def test_full_target_hermitian(self):
        spec = LatticeSpec(n_sites=16)
        assert hermiticity_defect(build_target_hamiltonian(spec)) < 1e-12

    def test_target_a_zero_hamiltonian(self):
        A, rescale = target_A_from_hamiltonian(np.zeros((4, 4)), 1.0)
        assert np.max(np.abs(A)) == 0.0
        assert rescale == 1.0

    def test_target_a_spectrum_bounded(self):
        spec = LatticeSpec(n_sites=8)
        A, rescale = target_A_from_hamiltonian(build_target_hamiltonian(spec), 10.0)
        assert np.max(np.abs(np.linalg.eigvalsh(A))) <= 1.0 + 1e-12
        assert rescale >= 1.0

    def test_target_a_roundtrip(self):
        spec = LatticeSpec(n_sites=8)
        H_t = build_target_hamiltonian(spec)
        t = 2.0
        A, rescale = target_A_from_hamiltonian(H_t, t)
        t_eff = t / rescale
        lhs = expm_hermitian_i(A, np.pi)
        rhs = expm_hermitian_i(H_t, -t_eff)
        assert np.max(np.abs(lhs - rhs)) < 1e-10


class TestConfig:
    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="bogus_key"):
            resolve_config({"bogus_key": 1})

    def test_preset_roundtrip(self, tmp_path):
        cfg = preset_config("exact-small")
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg.raw))
        assert load_config(str(path)).raw == cfg.raw

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            preset_config("nope")

    def test_matrix_file_roundtrip(self, tmp_path, rng):
        M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        path = str(tmp_path / "m.txt")
        write_matrix_file(path, M)
        assert np.max(np.abs(read_matrix_file(path) - M)) < 1e-15


class TestCli:
    def test_preset_prints_json(self, capsys):
        assert main(["preset", "exact-small"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["n_sites"] == 8

    def test_run_exact_small(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        out_dir = str(tmp_path / "out")
        assert main(["preset", "exact-small", "--out-file", str(cfg_path)]) == 0
        assert (
            main(["run", str(cfg_path), "--out", out_dir, "--emit", "result_json,samples_csv"])
            == 0
        )
        result = json.loads((tmp_path / "out" / "result.json").read_text())
        assert abs(result["mean"] - result["exact"]) <= 1e-3
        header = (tmp_path / "out" / "samples.csv").read_text().splitlines()[0]
        assert header == "k,eta,value"

    def test_samples_csv_shape(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        out_dir = tmp_path / "out"
        main(["preset", "exact-small", "--out-file", str(cfg_path)])
        main(["run", str(cfg_path), "--out", str(out_dir), "--emit", "samples_csv"])
        lines = (out_dir / "samples.csv").read_text().splitlines()
        cfg = json.loads(cfg_path.read_text())
        # one block of 2 n_l + 1 rows per ensemble index
        n_rows = len(lines) - 1
        blocks = []
        for lam in cfg["lambdas"]:
            ks = [int(ln.split(",")[0]) for ln in lines[1:]]
        assert n_rows % 2 == 0 or n_rows > 0
        # each block is symmetric around k = 0 and odd-length
        ks = [int(ln.split(",")[0]) for ln in lines[1:]]
        assert ks[0] < 0 and ks.count(0) == cfg["n_a"]

    def test_csv_roundtrip_full_precision(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        out_dir = tmp_path / "out"
        main(["preset", "exact-small", "--out-file", str(cfg_path)])
        main(["run", str(cfg_path), "--out", str(out_dir), "--emit", "samples_csv"])
        for ln in (out_dir / "samples.csv").read_text().splitlines()[1:6]:
            _, eta, value = ln.split(",")
            assert f"{float(value):.17g}" == value
            assert f"{float(eta):.17g}" == eta

    def test_determinism_byte_identical(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        main(["preset", "exact-small", "--out-file", str(cfg_path)])
        outs = []
        for name in ("a", "b"):
            out_dir = tmp_path / name
            assert main(["run", str(cfg_path), "--out", str(out_dir), "--seed", "42"]) == 0
            outs.append((out_dir / "result.json").read_bytes())
        assert outs[0] == outs[1]

    def test_unknown_key_exit_2(self, tmp_path, capsys):
        cfg_path = tmp_path / "bad.json"
        cfg_path.write_text(json.dumps({"schema": 1, "not_a_key": 5}))
        assert main(["run", str(cfg_path)]) == 2
        assert "not_a_key" in capsys.readouterr().err

    def test_decompose(self, tmp_path, capsys):
        path = str(tmp_path / "u.txt")
        write_matrix_file(path, np.diag([1.0, -1.0]).astype(complex))
        assert main(["decompose", path]) == 0
        out = capsys.readouterr().out
        assert "phase_separation" in out and "aliasing_rate" in out

    def test_twirl_emits_epsilon_json(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        out_dir = tmp_path / "out"
        main(["preset", "exact-small", "--out-file", str(cfg_path)])
        assert main(["twirl", str(cfg_path), "--out", str(out_dir)]) == 0
        data = json.loads((out_dir / "epsilon.json").read_text())
        assert set(data) == {"per_k", "mean", "method", "n_t"}
        assert len(data["per_k"]) == 4
