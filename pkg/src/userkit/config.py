"""Experiment configuration: flat JSON schema, presets, matrix-file I/O."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .lattice import LatticeSpec
from .sear import SearConfig

SCHEMA_VERSION = 1

KNOWN_KEYS = {
    "schema",
    "seed",
    "n_sites",
    "mass",
    "spacing",
    "drive_omega",
    "slope",
    "kinetic_mod",
    "evolution_time",
    "n_a",
    "n_t",
    "kappa",
    "lambdas",
    "perturbation",
    "safety",
    "n_s",
    "probe_state",
    "observable",
    "twirl_mode",
    "output_dir",
    "emit",
}

EMIT_KINDS = {"samples_csv", "reconstruction_csv", "epsilon_json", "result_json"}

DEFAULTS = {
    "schema": SCHEMA_VERSION,
    "seed": 0,
    "n_sites": 16,
    "mass": 1.0,
    "spacing": 1.0,
    "drive_omega": 8.0,
    "slope": 0.1,
    "kinetic_mod": [0.0, 0.0, 0.05],
    "evolution_time": 1.0,
    "n_a": 4,
    "n_t": 64,
    "kappa": 2,
    "lambdas": [0.25, 0.2, 0.125, 0.1],
    "perturbation": 0.0,
    "safety": 10.0,
    "n_s": 4,
    "probe_state": "basis:0",
    "observable": "position",
    "twirl_mode": "haar",
    "output_dir": ".",
    "emit": ["result_json"],
}

PRESETS = {
    "exact-small": {
        "n_sites": 8,
        "perturbation": 0.0,
        "seed": 1,
        "emit": ["result_json", "epsilon_json"],
    },
    "noisy-16": {
        "n_sites": 16,
        "perturbation": 1e-2,
        "n_t": 128,
        "seed": 1,
        "emit": ["result_json", "epsilon_json"],
    },
}


@dataclass(frozen=True)
class ExperimentConfig:
    raw: dict

    @property
    def lattice(self) -> LatticeSpec:
        r = self.raw
        return LatticeSpec(
            n_sites=r["n_sites"],
            mass=r["mass"],
            spacing=r["spacing"],
            drive_omega=r["drive_omega"],
            slope=r["slope"],
            kinetic_mod=tuple(r["kinetic_mod"]),
        )

    @property
    def sear(self) -> SearConfig:
        r = self.raw
        return SearConfig(
            n_a=r["n_a"],
            n_t=r["n_t"],
            kappa=r["kappa"],
            lambdas=tuple(r["lambdas"]),
            perturbation=r["perturbation"],
            safety=r["safety"],
            seed=r["seed"],
            n_s=r["n_s"],
        )

    def config_hash(self) -> str:
        # output_dir and emit select where/what to write, not what is computed
        physics = {k: v for k, v in self.raw.items() if k not in ("output_dir", "emit")}
        blob = json.dumps(physics, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def resolve_config(overrides: dict) -> ExperimentConfig:
    for key in overrides:
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown config key: {key!r}")
    raw = dict(DEFAULTS)
    raw.update(overrides)
    if raw["schema"] != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema version {raw['schema']} (expected {SCHEMA_VERSION})")
    for kind in raw["emit"]:
        if kind not in EMIT_KINDS:
            raise ConfigError(f"unknown emit kind: {kind!r}")
    if raw["twirl_mode"] not in ("haar", "simulable"):
        raise ConfigError(f"unknown twirl_mode: {raw['twirl_mode']!r}")
    return ExperimentConfig(raw=raw)


def preset_config(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset: {name!r} (have {sorted(PRESETS)})")
    return resolve_config(dict(PRESETS[name]))


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    return resolve_config(data)


def probe_state_vector(spec_str: str, lattice: LatticeSpec) -> np.ndarray:
    """'basis:<index>' or 'gaussian:<center>:<width>' (positions in units of a)."""
    parts = str(spec_str).split(":")
    n = lattice.n_sites
    if parts[0] == "basis":
        idx = int(parts[1]) if len(parts) > 1 else 0
        if not 0 <= idx < n:
            raise ConfigError(f"basis index {idx} out of range [0, {n})")
        v = np.zeros(n, dtype=complex)
        v[idx] = 1.0
        return v
    if parts[0] == "gaussian":
        center = float(parts[1]) if len(parts) > 1 else 0.0
        width = float(parts[2]) if len(parts) > 2 else 1.0
        x = (np.arange(n) - (n - 1) / 2.0) * lattice.spacing
        v = np.exp(-((x - center) ** 2) / (4.0 * width**2)).astype(complex)
        return v / np.linalg.norm(v)
    raise ConfigError(f"unknown probe_state spec: {spec_str!r}")


def observable_matrix(spec_str: str, lattice: LatticeSpec) -> np.ndarray:
    from .lattice import position_operator, sine_momentum_operator

    parts = str(spec_str).split(":", 1)
    if parts[0] == "position":
        return position_operator(lattice)
    if parts[0] == "momentum-proxy":
        return sine_momentum_operator(lattice)
    if parts[0] == "file":
        if len(parts) != 2:
            raise ConfigError("observable 'file' spec needs a path: 'file:<path>'")
        return read_matrix_file(parts[1])
    raise ConfigError(f"unknown observable spec: {spec_str!r}")


def read_matrix_file(path: str) -> np.ndarray:
    """Plain-text matrix: first line dim, then dim^2 lines 're im' row-major."""
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise ConfigError(f"cannot read matrix file {path}: {exc}") from exc
    try:
        dim = int(lines[0])
        entries = [complex(float(a), float(b)) for a, b in (ln.split() for ln in lines[1:])]
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"malformed matrix file {path}: {exc}") from exc
    if len(entries) != dim * dim:
        raise ConfigError(f"matrix file {path}: expected {dim * dim} entries, got {len(entries)}")
    return np.asarray(entries, dtype=complex).reshape(dim, dim)


def write_matrix_file(path: str, M: np.ndarray) -> None:
    M = np.asarray(M, dtype=complex)
    with open(path, "w") as fh:
        fh.write(f"{M.shape[0]}\n")
        for entry in M.reshape(-1):
            fh.write(f"{entry.real:.17g} {entry.imag:.17g}\n")


def atomic_write_text(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)
