"""Joint and separable maximum-likelihood demapping over a sum constellation.

With square QAM users and real nonnegative scale factors, the in-phase and
quadrature components of the received sum never mix, so the joint search over
all N1*N2 sum points splits into two independent per-axis searches over M
one-dimensional sums each: 2M candidate evaluations per symbol instead of
M^2.  Both demappers share a tie rule (smallest index, row-major) so their
decisions match exactly, ties included.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constellations import SumConstellation, _as_points

__all__ = [
    "PamProjection",
    "DemapResult",
    "pam_projections",
    "joint_ml_demap",
    "separable_ml_demap",
    "joint_ml_demap_batch",
    "separable_ml_demap_batch",
]


@dataclass(frozen=True)
class PamProjection:
    """One axis of the separable sum: values[k1X * m2 + k2X] = aL*x1X + aS*x2X.

    level_index-i maps each point of user i's constellation to its level index
    on this axis, which is how per-axis decisions recombine into constellation
    indices.
    """

    axis: str  # "in_phase" | "quadrature"
    values: np.ndarray
    levels1: np.ndarray
    levels2: np.ndarray
    level_index1: np.ndarray
    level_index2: np.ndarray


@dataclass(frozen=True)
class DemapResult:
    """Decided pair (k1, k2), its exact squared distance, and the number of
    candidate metric evaluations spent on the decision."""

    k1: int
    k2: int
    metric: float
    candidates: int


def _axis_levels(points: np.ndarray, axis: str) -> tuple[np.ndarray, np.ndarray]:
    """Level values (ascending) and per-point level indices for one axis.

    Raises if the points do not form a complete square grid on this axis.
    """
    comp = points.real if axis == "in_phase" else points.imag
    n = points.size
    m = int(round(np.sqrt(n)))
    if m * m != n:
        raise ValueError("separable demapping requires square QAM constellations")
    levels = np.unique(comp)
    if levels.size != m:
        raise ValueError("separable demapping requires square QAM constellations")
    idx = np.searchsorted(levels, comp)
    if not np.allclose(levels[idx], comp, rtol=0, atol=1e-12):
        raise ValueError("separable demapping requires square QAM constellations")
    return levels, idx.astype(np.intp)


def pam_projections(s1, s2, a_L: float, a_S: float) -> tuple[PamProjection, PamProjection]:
    """Per-axis sum alphabets for square-QAM users under real scales.

    Rejects non-square-QAM inputs and non-real or negative scales, where
    separability does not hold.
    """
    if not (np.isreal(a_L) and np.isreal(a_S)) or a_L < 0 or a_S < 0:
        raise ValueError("separable demapping requires real scale factors >= 0")
    p1 = _as_points(s1)
    p2 = _as_points(s2)
    projections = []
    for axis in ("in_phase", "quadrature"):
        lv1, idx1 = _axis_levels(p1, axis)
        lv2, idx2 = _axis_levels(p2, axis)
        # grid completeness: each (I level, Q level) combination exactly once
        for pts, ax in ((p1, "user 1"), (p2, "user 2")):
            li, _ = _axis_levels(pts, "in_phase")
            lq, _ = _axis_levels(pts, "quadrature")
            grid = (li[:, None] + 1j * lq[None, :]).ravel()
            if not np.array_equal(np.sort_complex(grid), np.sort_complex(pts)):
                raise ValueError(f"{ax}: points do not form a complete QAM grid")
        values = (float(a_L) * lv1[:, None] + float(a_S) * lv2[None, :]).ravel()
        projections.append(
            PamProjection(axis, values, lv1, lv2, idx1, idx2)
        )
    return projections[0], projections[1]


def joint_ml_demap(y: complex, s_sum: SumConstellation) -> DemapResult:
    """Exhaustive nearest-point search over all N1*N2 sum points.

    Ties break to the smallest row-major (k1, k2) index.
    """
    metrics = np.abs(complex(y) - s_sum.points) ** 2
    k = int(np.argmin(metrics))
    k1, k2 = divmod(k, s_sum.n2)
    return DemapResult(k1, k2, float(metrics[k]), s_sum.size)


def _index_lut(proj_i: PamProjection, proj_q: PamProjection, user: int) -> np.ndarray:
    li = proj_i.level_index1 if user == 1 else proj_i.level_index2
    lq = proj_q.level_index1 if user == 1 else proj_q.level_index2
    m_i = (proj_i.levels1 if user == 1 else proj_i.levels2).size
    m_q = (proj_q.levels1 if user == 1 else proj_q.levels2).size
    lut = np.full((m_i, m_q), -1, dtype=np.intp)
    lut[li, lq] = np.arange(li.size)
    return lut


def separable_ml_demap(y: complex, proj_i: PamProjection, proj_q: PamProjection) -> DemapResult:
    """Per-axis nearest-sum search; 2M candidate evaluations per symbol.

    Each axis takes the first (smallest row-major) minimiser, matching the
    joint demapper's tie rule when the constellations come from the QAM
    generator's level-major ordering.
    """
    y = complex(y)
    mi = (y.real - proj_i.values) ** 2
    mq = (y.imag - proj_q.values) ** 2
    qi = int(np.argmin(mi))
    qq = int(np.argmin(mq))
    m2_i = proj_i.levels2.size
    m2_q = proj_q.levels2.size
    ia1, ia2 = divmod(qi, m2_i)
    ib1, ib2 = divmod(qq, m2_q)
    lut1 = _index_lut(proj_i, proj_q, 1)
    lut2 = _index_lut(proj_i, proj_q, 2)
    k1 = int(lut1[ia1, ib1])
    k2 = int(lut2[ia2, ib2])
    metric = float(mi[qi] + mq[qq])
    return DemapResult(k1, k2, metric, proj_i.values.size + proj_q.values.size)


def joint_ml_demap_batch(ys, s_sum: SumConstellation, chunk: int = 4096):
    """Vectorised joint demap; returns (k1, k2, metric) arrays."""
    ys = np.asarray(ys, dtype=np.complex128).ravel()
    k1 = np.empty(ys.size, dtype=np.intp)
    k2 = np.empty(ys.size, dtype=np.intp)
    metric = np.empty(ys.size)
    for lo in range(0, ys.size, chunk):
        hi = min(lo + chunk, ys.size)
        m = np.abs(ys[lo:hi, None] - s_sum.points[None, :]) ** 2
        k = np.argmin(m, axis=1)
        k1[lo:hi], k2[lo:hi] = np.divmod(k, s_sum.n2)
        metric[lo:hi] = m[np.arange(hi - lo), k]
    return k1, k2, metric


def separable_ml_demap_batch(ys, proj_i: PamProjection, proj_q: PamProjection):
    """Vectorised separable demap; returns (k1, k2, metric) arrays."""
    ys = np.asarray(ys, dtype=np.complex128).ravel()
    mi = (ys.real[:, None] - proj_i.values[None, :]) ** 2
    mq = (ys.imag[:, None] - proj_q.values[None, :]) ** 2
    qi = np.argmin(mi, axis=1)
    qq = np.argmin(mq, axis=1)
    ia1, ia2 = np.divmod(qi, proj_i.levels2.size)
    ib1, ib2 = np.divmod(qq, proj_q.levels2.size)
    lut1 = _index_lut(proj_i, proj_q, 1)
    lut2 = _index_lut(proj_i, proj_q, 2)
    rows = np.arange(ys.size)
    metric = mi[rows, qi] + mq[rows, qq]
    return lut1[ia1, ib1], lut2[ia2, ib2], metric
