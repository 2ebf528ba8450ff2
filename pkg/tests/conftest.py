import numpy as np
import pytest

from userkit.oracle import mc_haar_unitary


def random_hermitian(rng, d, scale=1.0):
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * 0.5 * (G + G.conj().T)


def random_state(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_target_A(rng, d, min_gap=0.1):
    """Hermitian with spectrum in [-1, 1] and pairwise gaps >= min_gap."""
    while True:
        w = np.sort(rng.uniform(-1.0, 1.0, d))
        if np.min(np.diff(w)) >= min_gap:
            break
    V = mc_haar_unitary(d, int(rng.integers(0, 2**31)))
    return (V * w) @ V.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
