#!/usr/bin/env python3
"""Error-bar coverage study for the noisy lattice preset.

Runs the full pipeline over many seeds, checks how often the reported error
bar (plus a small spread-proportional slack) covers the exact value, and
reports how the median noise strength scales with the injected perturbation.
"""

import argparse
import time

import numpy as np

from userkit.channels import haar_unitary
from userkit.config import (
    ExperimentConfig,
    observable_matrix,
    preset_config,
    probe_state_vector,
)
from userkit.lattice import build_lattice_family, build_target_hamiltonian, target_A_from_hamiltonian
from userkit.sear import run_sear
from userkit.user_recon import Observable, PureState


def run_one(preset, seed, perturbation=None):
    cfg = preset_config(preset)
    raw = dict(cfg.raw)
    raw["seed"] = seed
    if perturbation is not None:
        raw["perturbation"] = perturbation
    cfg = ExperimentConfig(raw)
    lat = cfg.lattice
    fam = build_lattice_family(lat)
    H_t = build_target_hamiltonian(lat)
    target_A, _ = target_A_from_hamiltonian(H_t, raw["evolution_time"])
    psi = PureState(probe_state_vector(raw["probe_state"], lat))
    O = Observable.from_matrix(observable_matrix(raw["observable"], lat))
    rng = np.random.default_rng(raw["seed"] + 7919)
    twirl = [haar_unitary(lat.n_sites, rng) for _ in range(raw["n_t"])]
    return run_sear(fam, target_A, psi, O, twirl, cfg.sear)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--preset", default="noisy-16")
    p.add_argument("--seeds", type=int, default=50)
    p.add_argument("--slack", type=float, default=0.05, help="extra coverage slack as a fraction of the observable spread")
    p.add_argument("--perturbations", type=float, nargs="+", default=[0.0, 1e-3, 1e-2, 1e-1])
    p.add_argument("--monotonicity-seeds", type=int, default=8)
    args = p.parse_args()

    t0 = time.time()
    hits = 0
    for seed in range(args.seeds):
        res = run_one(args.preset, seed)
        err = abs(res.mean_value - res.exact_value)
        covered = err <= res.error_bar + args.slack * res.spread
        hits += covered
        print(f"seed={seed:3d} err={err:.3e} bar={res.error_bar:.3e} covered={covered}")
    print(f"coverage: {hits}/{args.seeds}")

    for pert in args.perturbations:
        eps = [run_one(args.preset, s, pert).noise_strength for s in range(args.monotonicity_seeds)]
        print(f"perturbation={pert:.1e} median eps={np.median(eps):.3e}")
    print(f"total time: {time.time() - t0:.1f} s")


if __name__ == "__main__":
    main()
