"""Command-line entry point.

Subcommands:
  run <config>         Full pipeline on a JSON config; emits requested artifacts.
  preset <name>        Print (or write with --out) a ready-to-run preset config.
  decompose <matrix>   Spectral report of a unitary from a matrix file.
  twirl <config>       Noise-strength estimation only; emits epsilon_json.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .channels import haar_unitary
from .config import (
    ExperimentConfig,
    atomic_write_text,
    load_config,
    observable_matrix,
    preset_config,
    probe_state_vector,
    read_matrix_file,
)
from .errors import ConfigError, UserKitError
from .lattice import build_lattice_family, build_target_hamiltonian, target_A_from_hamiltonian
from .aqs_magnus import EvolutionSpec, time_ordered_evolve
from .sear import (
    SearResult,
    estimate_noise_strength,
    generate_approx_unitaries,
    mean_approx_expectation,
    reconstruction_grids,
)
from .user_recon import (
    Observable,
    PureState,
    aliasing_rate,
    phase_separation,
    sinc_reconstruct,
    spectral_decompose,
)

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _build_twirl_set(cfg: ExperimentConfig, fam):
    r = cfg.raw
    n_t = r["n_t"]
    if r["twirl_mode"] == "haar":
        rng = np.random.default_rng(r["seed"] + 7919)
        return [haar_unitary(r["n_sites"], rng) for _ in range(n_t)]
    # Simulable twirl set: AQS evolutions on a deterministic (gamma, t) grid.
    # These are not a unitary 2-design, so the resulting noise strengths carry
    # a set-dependent bias; the mode is recorded in the emitted metadata.
    rng = np.random.default_rng(r["seed"] + 7919)
    members = []
    for _ in range(n_t):
        gamma = r["drive_omega"] * (0.5 + rng.random())
        t = 0.3 + 0.7 * rng.random()
        members.append(time_ordered_evolve(fam, EvolutionSpec(gamma=gamma, t_final=t, n_steps=128)))
    return members


def run_experiment(cfg: ExperimentConfig) -> int:
    r = cfg.raw
    lattice = cfg.lattice
    sear_cfg = cfg.sear
    fam = build_lattice_family(lattice)
    H_t = build_target_hamiltonian(lattice)
    target_A, rescale = target_A_from_hamiltonian(H_t, r["evolution_time"])
    t_eff = r["evolution_time"] / rescale
    psi = PureState(probe_state_vector(r["probe_state"], lattice))
    O = Observable.from_matrix(observable_matrix(r["observable"], lattice))
    twirl_set = _build_twirl_set(cfg, fam)

    approx_list = generate_approx_unitaries(fam, target_A, sear_cfg)
    grids = reconstruction_grids(psi, O, approx_list, sear_cfg)
    mean_value, values = mean_approx_expectation(psi, O, approx_list, sear_cfg)
    noise_strength, per_k = estimate_noise_strength(approx_list, twirl_set, psi, O, sear_cfg)
    spread = O.spread()
    error_bar = noise_strength * spread
    exact = None
    if lattice.n_sites <= 64:
        from .matrix_core import expm_hermitian_i

        U_i = expm_hermitian_i(target_A, np.pi)
        v = U_i @ psi.amplitudes
        exact = float(np.real(v.conj() @ O.matrix @ v))

    out_dir = r["output_dir"]
    os.makedirs(out_dir, exist_ok=True)
    emit = set(r["emit"])

    if "samples_csv" in emit:
        lines = ["k,eta,value"]
        for rplan, samples in grids:
            for j, val in enumerate(samples):
                k = j - rplan.n_l
                lines.append(f"{k},{_fmt(k * rplan.lam * t_eff)},{_fmt(val)}")
        atomic_write_text(os.path.join(out_dir, "samples.csv"), "\n".join(lines) + "\n")

    if "reconstruction_csv" in emit:
        rplan, samples = grids[0]
        lines = ["eta,interpolated_value"]
        ks = np.arange(-rplan.n_l, rplan.n_l + 1)
        for eta in np.linspace(0.0, 1.2, 121):
            w = np.sinc((eta - ks * rplan.lam) / rplan.lam)
            lines.append(f"{_fmt(eta * t_eff)},{_fmt(float(np.dot(samples, w)))}")
        atomic_write_text(os.path.join(out_dir, "reconstruction.csv"), "\n".join(lines) + "\n")

    if "epsilon_json" in emit:
        payload = {
            "per_k": per_k,
            "mean": noise_strength,
            "method": "discrete_sim/" + r["twirl_mode"],
            "n_t": r["n_t"],
        }
        atomic_write_text(
            os.path.join(out_dir, "epsilon.json"),
            json.dumps(payload, sort_keys=True, indent=2) + "\n",
        )

    if "result_json" in emit:
        payload = {
            "mean": mean_value,
            "error_bar": error_bar,
            "epsilon": noise_strength,
            "spread": spread,
            "exact": exact,
            "config_hash": cfg.config_hash(),
        }
        atomic_write_text(
            os.path.join(out_dir, "result.json"),
            json.dumps(payload, sort_keys=True, indent=2) + "\n",
        )

    print(f"<O_i> ~ {mean_value:.12g} +/- {abs(error_bar):.12g}")
    return 0


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    cfg = _apply_flags(cfg, args)
    return run_experiment(cfg)


def _apply_flags(cfg: ExperimentConfig, args) -> ExperimentConfig:
    raw = dict(cfg.raw)
    if getattr(args, "seed", None) is not None:
        raw["seed"] = args.seed
    if getattr(args, "out", None) is not None:
        raw["output_dir"] = args.out
    if getattr(args, "emit", None):
        kinds = []
        for chunk in args.emit:
            kinds.extend(x for x in chunk.split(",") if x)
        raw["emit"] = kinds
    from .config import resolve_config

    return resolve_config(raw)


def _cmd_preset(args) -> int:
    cfg = preset_config(args.name)
    cfg = _apply_flags(cfg, args)
    text = json.dumps(cfg.raw, sort_keys=True, indent=2) + "\n"
    if args.out_file:
        atomic_write_text(args.out_file, text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_decompose(args) -> int:
    U = read_matrix_file(args.matrix_file)
    su = spectral_decompose(U)
    P = phase_separation(su)
    print(f"dim: {su.dim}")
    print("phases:", " ".join(_fmt(p) for p in su.phases))
    print(f"phase_separation: {_fmt(P)}")
    if P > 0:
        print(f"aliasing_rate: {_fmt(aliasing_rate(su))}")
    else:
        print("aliasing_rate: inf (degenerate spectrum)")
    return 0


def _cmd_twirl(args) -> int:
    cfg = load_config(args.config)
    cfg = _apply_flags(cfg, args)
    r = dict(cfg.raw)
    r["emit"] = ["epsilon_json"]
    from .config import resolve_config

    return run_experiment(resolve_config(r))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="userkit", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default=None, help="output directory override")
        sp.add_argument("--emit", action="append", default=None, help="comma-separated artifact kinds")

    sp = sub.add_parser("run", help="run the full pipeline on a config file")
    sp.add_argument("config")
    common(sp)
    sp.set_defaults(func=_cmd_run)

    sp = sub.add_parser("preset", help="print a preset config")
    sp.add_argument("name")
    sp.add_argument("--out-file", default=None, help="write the config here instead of stdout")
    common(sp)
    sp.set_defaults(func=_cmd_preset)

    sp = sub.add_parser("decompose", help="spectral report for a unitary matrix file")
    sp.add_argument("matrix_file")
    sp.set_defaults(func=_cmd_decompose)

    sp = sub.add_parser("twirl", help="noise-strength estimation only")
    sp.add_argument("config")
    common(sp)
    sp.set_defaults(func=_cmd_twirl)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UserKitError as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(diag), file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
