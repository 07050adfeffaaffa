"""Deterministic 64-bit stream derivation for reproducible Monte-Carlo runs.

Every random draw in the package comes from a Philox generator whose key is
derived from the master seed plus the integer coordinates of the work unit
(symbol pair, sample block, slot, phase-draw index).  Results are therefore
bit-identical no matter how the work is split across workers.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# domain tags keep noise and phase streams disjoint even for equal coordinates
TAG_NOISE = 0x6E6F6973_65000000
TAG_PHASE = 0x70686173_65000000

#: samples per noise block; block index enters the stream key so that arbitrary
#: chunkings of the sample axis reproduce the same values
BLOCK_SIZE = 1 << 16


def splitmix64(x: int) -> int:
    """One round of the splitmix64 mixer (public-domain constants)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_key(seed: int, *fields: int) -> int:
    """Fold integer coordinates into the master seed, one mixer round each."""
    key = splitmix64(seed & _MASK64)
    for f in fields:
        key = splitmix64(key ^ (int(f) & _MASK64))
    return key


def noise_stream(seed: int, k1: int, k2: int, block: int, slot: int, draw: int) -> np.random.Generator:
    """Generator for the noise samples of pair (k1, k2) in one sample block."""
    key = derive_key(seed, TAG_NOISE, k1, k2, block, slot, draw)
    return np.random.Generator(np.random.Philox(key=key))


def phase_stream(seed: int, slot: int, draw: int) -> np.random.Generator:
    """Generator for one (theta1, theta2) phase-offset draw."""
    key = derive_key(seed, TAG_PHASE, slot, draw)
    return np.random.Generator(np.random.Philox(key=key))


def complex_noise(rng: np.random.Generator, n: int, sigma2: float) -> tuple[np.ndarray, np.ndarray]:
    """Draw n complex Gaussian samples with total variance sigma2.

    z = sigma * (g1 + i*g2) / sqrt(2) with g1, g2 standard normal, so each
    real dimension carries variance sigma2 / 2.
    """
    g1 = rng.standard_normal(n)
    g2 = rng.standard_normal(n)
    s = np.sqrt(sigma2 / 2.0)
    return s * g1, s * g2


def phase_pair(rng: np.random.Generator) -> tuple[float, float]:
    """Draw one i.i.d. (theta1, theta2) pair uniform on (0, 2*pi)."""
    th = rng.uniform(0.0, 2.0 * np.pi, 2)
    return float(th[0]), float(th[1])
