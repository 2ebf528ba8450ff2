"""End-to-end SEAR pipeline.

Stage I/II: build an ensemble of approximate intermediate unitaries from
designed discretization sequences and reconstruct each sample's expectation
value by integer-power sampling.  Stage III: twirl the complementary defect
channels over a unitary set to estimate a depolarizing noise strength, and
report mean value +/- (noise strength x observable spread).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import pi
from typing import Optional, Sequence

import numpy as np

from .aqs_magnus import HamiltonianFamily, SequencePlan, approx_discretization_unitary, design_sequence
from .channels import (
    DensityMatrix,
    complementary_error_channel,
    density_from_pure,
    expectation,
    noise_strength_from_expectation,
    twirl_discrete,
)
from .matrix_core import DEFAULT_TOL, Tolerances, eig_hermitian, expm_hermitian_i
from .user_recon import (
    Observable,
    PureState,
    ReconstructionPlan,
    min_eigenvalue_gap,
    sample_integer_powers,
    sinc_reconstruct,
    user_reconstruct,
)


@dataclass(frozen=True)
class SearConfig:
    n_a: int
    n_t: int
    kappa: int = 2
    lambdas: tuple = (0.25, 0.2, 0.125, 0.1)
    perturbation: float = 0.0
    safety: float = 10.0
    seed: int = 0
    n_s: int = 4
    direct_eval: bool = False  # ablation: skip USER, evaluate samples directly

    def __post_init__(self):
        lams = tuple(float(x) for x in self.lambdas)
        object.__setattr__(self, "lambdas", lams)
        if len(lams) != self.n_a:
            raise ValueError(f"need n_a={self.n_a} lambdas, got {len(lams)}")
        if any(not 0.0 < l < 0.5 for l in lams):
            raise ValueError("every lambda must lie in (0, 1/2)")
        if self.kappa not in (1, 2):
            raise ValueError("kappa must be 1 or 2")
        if self.n_t < 1 or self.n_a < 1:
            raise ValueError("n_a and n_t must be positive")


@dataclass(frozen=True)
class SampleRecord:
    index: int
    lam: float
    value: float
    epsilon: Optional[float] = None


@dataclass(frozen=True)
class SearResult:
    mean_value: float
    noise_strength: float
    spread: float
    error_bar: float
    exact_value: Optional[float]
    per_sample: tuple


def generate_approx_unitaries(
    fam: Optional[HamiltonianFamily],
    target_A: np.ndarray,
    config: SearConfig,
    tol: Tolerances = DEFAULT_TOL,
) -> list[tuple[np.ndarray, SequencePlan]]:
    """One approximate intermediate unitary per ensemble index k: design a
    sequence at lambda^(k), form the discretization unitary, raise it to
    tau^(k) = round(1/lambda^(k))."""
    seeds = np.random.SeedSequence(config.seed).generate_state(config.n_a)
    out = []
    for k, lam in enumerate(config.lambdas):
        plan = design_sequence(
            fam,
            target_A,
            lam,
            config.kappa,
            config.perturbation,
            seed=int(seeds[k]),
            n_s=config.n_s,
            tol=tol,
        )
        U_sd = approx_discretization_unitary(plan)
        tau = int(round(1.0 / lam))
        U_k = np.linalg.matrix_power(U_sd, tau)
        out.append((U_k, plan))
    return out


def _reconstruction_plan(plan: SequencePlan, safety: float, tol: Tolerances) -> ReconstructionPlan:
    gap = min_eigenvalue_gap(eig_hermitian(plan.target_A, tol), tol)
    return ReconstructionPlan.from_gap(gap, plan.lam, safety)


def reconstruction_grids(
    psi: PureState,
    O: Observable,
    approx_list: Sequence[tuple[np.ndarray, SequencePlan]],
    config: SearConfig,
    tol: Tolerances = DEFAULT_TOL,
) -> list[tuple[ReconstructionPlan, np.ndarray]]:
    """Per ensemble index: the reconstruction plan and the raw sample grid
    obtained by integer powers of that index's discretization unitary."""
    grids = []
    for _, plan in approx_list:
        U_sd = approx_discretization_unitary(plan)
        rplan = _reconstruction_plan(plan, config.safety, tol)
        grids.append((rplan, sample_integer_powers(psi, O, U_sd, rplan.n_l)))
    return grids


def mean_approx_expectation(
    psi: PureState,
    O: Observable,
    approx_list: Sequence[tuple[np.ndarray, SequencePlan]],
    config: SearConfig,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[float, list[float]]:
    """Arithmetic mean of the per-sample reconstructed expectation values."""
    if not approx_list:
        raise ValueError("approx_list must be nonempty")
    if config.direct_eval:
        values = []
        for U_k, _ in approx_list:
            v = U_k @ psi.amplitudes
            values.append(float(np.real(v.conj() @ O.matrix @ v)))
    else:
        values = [
            sinc_reconstruct(samples, rplan.lam)
            for rplan, samples in reconstruction_grids(psi, O, approx_list, config, tol)
        ]
    return float(np.mean(values)), values


def estimate_noise_strength(
    approx_list: Sequence[tuple[np.ndarray, SequencePlan]],
    twirl_set: Sequence[np.ndarray],
    psi: PureState,
    O: Observable,
    config: SearConfig,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[float, list[float]]:
    """Per-k discrete twirl of the complementary defect channel, then the mean."""
    unitaries = [U for U, _ in approx_list]
    probe = density_from_pure(psi)
    per_k = []
    for k in range(len(unitaries)):
        ch = complementary_error_channel(unitaries, k, tol)
        est = twirl_discrete(ch, twirl_set, probe, O, tol)
        per_k.append(est.epsilon)
    return float(np.mean(per_k)), per_k


def run_sear(
    fam: Optional[HamiltonianFamily],
    target_A: np.ndarray,
    psi: PureState,
    O: Observable,
    twirl_set: Sequence[np.ndarray],
    config: SearConfig,
    tol: Tolerances = DEFAULT_TOL,
) -> SearResult:
    approx_list = generate_approx_unitaries(fam, target_A, config, tol)
    mean_value, values = mean_approx_expectation(psi, O, approx_list, config, tol)
    spread = O.spread()
    if spread <= tol.tol_eig:
        # Zero-spread observables (multiples of the identity) cannot resolve a
        # noise strength, and do not need one: the error bar is zero anyway.
        noise_strength, per_k = 0.0, [0.0] * config.n_a
    else:
        noise_strength, per_k = estimate_noise_strength(
            approx_list, twirl_set, psi, O, config, tol
        )
    error_bar = noise_strength * spread
    exact_value = None
    if target_A.shape[0] <= 64:
        # Small dims only: direct diagonalization of the ideal intermediate
        # unitary (kept local so the oracle module stays import-independent).
        U_i = expm_hermitian_i(target_A, pi, tol)
        v = U_i @ psi.amplitudes
        exact_value = float(np.real(v.conj() @ O.matrix @ v))
    per_sample = tuple(
        SampleRecord(index=k, lam=config.lambdas[k], value=values[k], epsilon=per_k[k])
        for k in range(config.n_a)
    )
    return SearResult(
        mean_value=mean_value,
        noise_strength=noise_strength,
        spread=spread,
        error_bar=error_bar,
        exact_value=exact_value,
        per_sample=per_sample,
    )
