"""Grid searches for split factors and rotation angles, plus SNR sweeps.

All searches are plain exhaustive grid scans (the objective surfaces are
cheap, non-convex, and at high SNR exactly flat over wide plateaus, so
anything smarter just obscures the tie-breaking).  Tie rules:

  * metric minimisers (alpha_star, theta_star, alpha_theta_star): first grid
    point attaining the minimum, i.e. smallest alpha / smallest theta.  On the
    high-SNR plateaus, where the objective underflows to exactly zero over a
    range of splits, this picks the plateau's left edge, which is what the
    published reference tables correspond to.
  * capacity maximiser (alpha_opt): largest alpha attaining the maximum
    (closest to an even instantaneous split).

Grid points are evaluated independently (optionally in parallel) and reduced
in a fixed order, so winners are reproducible for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .capacity import (
    CapacityEstimate,
    ChannelSpec,
    CpaConfig,
    McConfig,
    cc_sum_capacity,
    cc_sum_capacity_random_phase,
    cpa_sum_capacity,
)
from .constellations import Constellation, by_name, rotate
from .metric import q_metric_rotated, q_total, qp_metric

__all__ = [
    "GridSpec",
    "SweepSpec",
    "SweepRow",
    "DEFAULT_ALPHA_GRID",
    "DEFAULT_THETA_GRID_DEG",
    "alpha_star",
    "alpha_opt",
    "theta_star",
    "alpha_theta_star",
    "sweep",
]


@dataclass(frozen=True)
class GridSpec:
    """Inclusive arithmetic grid start, start+step, ..., stop."""

    start: float
    stop: float
    step: float

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ValueError("grid step must be finite and > 0")
        if not self.start <= self.stop:
            raise ValueError("grid start must be <= stop")
        n = round((self.stop - self.start) / self.step)
        if abs(self.start + n * self.step - self.stop) > 1e-12 * max(1.0, abs(self.stop)):
            raise ValueError("grid step must divide the span so the grid includes stop")

    def values(self) -> np.ndarray:
        n = round((self.stop - self.start) / self.step)
        return np.round(self.start + self.step * np.arange(n + 1), 12)


DEFAULT_ALPHA_GRID = GridSpec(0.01, 1.00, 0.01)
DEFAULT_THETA_GRID_DEG = GridSpec(1.0, 90.0, 1.0)


def _scan_min(values, objectives):
    """First grid point attaining the minimum (ties toward smaller value)."""
    best_i = 0
    best_v = objectives[0]
    for i in range(1, len(objectives)):
        if objectives[i] < best_v:
            best_i, best_v = i, objectives[i]
    return values[best_i], best_v


def _parallel_map(fn, items, workers):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(int(workers), len(items))) as pool:
        return list(pool.map(fn, items))


def _check_alpha_grid(grid: GridSpec):
    if not (grid.start > 0 and grid.stop <= 1.0):
        raise ValueError("alpha grid must lie within (0, 1]")


def alpha_star(
    s1,
    s2,
    P1,
    P2,
    sigma2,
    grid: GridSpec | None = None,
    phase: str = "none",
    phase_draws: int = 1_000,
    seed: int = 0,
    workers: int = 1,
) -> tuple[float, float]:
    """Split factor minimising the two-slot surrogate objective.

    phase "none" uses the deterministic metric; "random" uses the
    phase-averaged metric with the given draw budget and seed (the same draw
    streams are shared by every grid point, so the scan is internally
    consistent).  Returns (alpha, objective).
    """
    grid = grid or DEFAULT_ALPHA_GRID
    _check_alpha_grid(grid)
    alphas = grid.values()
    if phase == "none":
        fn = lambda a: q_total(s1, s2, P1, P2, float(a), sigma2)
    elif phase == "random":
        def fn(a):
            lo = qp_metric(s1, s2, P1, P2, float(a), sigma2, phase_draws, seed)
            hi = qp_metric(s1, s2, P1, P2, 2.0 - float(a), sigma2, phase_draws, seed)
            return lo.value + hi.value
    else:
        raise ValueError(f"phase must be 'none' or 'random', got {phase!r}")
    objectives = _parallel_map(fn, list(alphas), workers)
    a, v = _scan_min(alphas, objectives)
    return float(a), float(v)


def alpha_opt(
    s1,
    s2,
    P1,
    P2,
    sigma2,
    grid: GridSpec | None = None,
    mc: McConfig | None = None,
    phase: str = "none",
    workers: int = 1,
) -> tuple[float, CapacityEstimate]:
    """Split factor maximising the Monte-Carlo scheme capacity on the grid.

    Noise streams do not depend on alpha, so all grid points share the same
    draws (common random numbers) and the argmax is stable.  Ties go to the
    largest alpha.
    """
    grid = grid or DEFAULT_ALPHA_GRID
    _check_alpha_grid(grid)
    mc = mc or McConfig()
    ch = ChannelSpec(sigma2=sigma2, phase=phase)
    alphas = grid.values()

    def fn(a):
        return cpa_sum_capacity(s1, s2, CpaConfig(P1, P2, float(a)), ch, mc)

    estimates = _parallel_map(fn, list(alphas), workers)
    best_i = 0
    for i in range(1, len(estimates)):
        if estimates[i].bits >= estimates[best_i].bits:
            best_i = i
    return float(alphas[best_i]), estimates[best_i]


def theta_star(s1, s2, P1, P2, sigma2, theta_grid: GridSpec | None = None) -> tuple[float, float]:
    """Rotation angle minimising the surrogate objective at an even split.

    The rotation baseline keeps instantaneous scales (sqrt(P1), sqrt(P2)) and
    rotates user 2 by theta.  Grid is in degrees within (0, 90]; returns
    (theta_radians, objective) with ties toward the smallest angle.
    """
    theta_grid = theta_grid or DEFAULT_THETA_GRID_DEG
    if not (theta_grid.start > 0 and theta_grid.stop <= 90.0):
        raise ValueError("theta grid must lie within (0, 90] degrees")
    degs = theta_grid.values()
    objectives = [q_metric_rotated(s1, s2, P1, P2, 1.0, math.radians(t), sigma2).value for t in degs]
    t, v = _scan_min(degs, objectives)
    return math.radians(float(t)), float(v)


def alpha_theta_star(
    s1,
    s2,
    P1,
    P2,
    sigma2,
    alpha_grid: GridSpec | None = None,
    theta_grid: GridSpec | None = None,
    workers: int = 1,
) -> tuple[float, float, float]:
    """Joint 2-D minimiser over split factor and rotation angle.

    Objective is the two-slot surrogate with user 2 rotated in both slots.
    Ties go to the smallest alpha, then the smallest theta.  Returns
    (alpha, theta_radians, objective).
    """
    alpha_grid = alpha_grid or DEFAULT_ALPHA_GRID
    theta_grid = theta_grid or DEFAULT_THETA_GRID_DEG
    _check_alpha_grid(alpha_grid)
    alphas = alpha_grid.values()
    degs = theta_grid.values()

    def row(a):
        a = float(a)
        out = []
        for t in degs:
            th = math.radians(float(t))
            v = (
                q_metric_rotated(s1, s2, P1, P2, a, th, sigma2).value
                + q_metric_rotated(s1, s2, P1, P2, 2.0 - a, th, sigma2).value
            )
            out.append(v)
        return out

    rows = _parallel_map(row, list(alphas), workers)
    best = (math.inf, None, None)
    for a, row_vals in zip(alphas, rows):
        for t, v in zip(degs, row_vals):
            if v < best[0]:
                best = (v, float(a), float(t))
    return best[1], math.radians(best[2]), best[0]


@dataclass(frozen=True)
class SweepSpec:
    """One family of sweep rows: a scheme/constellation/SNR-list combination."""

    scheme: str
    constellation: Constellation | str
    snr_db: tuple
    p2_ratio: float = 1.0
    phase: str = "none"

    def resolve(self) -> Constellation:
        if isinstance(self.constellation, Constellation):
            return self.constellation
        return by_name(self.constellation)


@dataclass(frozen=True)
class SweepRow:
    scheme: str
    constellation: str
    snr_db: float
    p2_ratio: float
    alpha: float | None
    theta_deg: float | None
    capacity_bits: float
    stderr_bits: float
    objective: float | None


SCHEMES = ("baseline", "cpa", "cr", "cpa_cr")


def sweep(
    specs,
    mc: McConfig | None = None,
    alpha_grid: GridSpec | None = None,
    theta_grid: GridSpec | None = None,
    workers: int = 1,
) -> list[SweepRow]:
    """Evaluate scheme capacities over SNR lists; one row per (spec, SNR).

    Powers follow the sweep convention P1 = 10^(snr_db/10), P2 = ratio * P1,
    sigma2 = 1.  Scheme parameters are chosen per SNR point: the split factor
    by the surrogate search under the entry's phase model, the rotation angle
    by the fixed-phase surrogate, baseline uses an even split and no rotation.
    """
    mc = mc or McConfig()
    rows = []
    for spec in specs:
        if spec.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {spec.scheme!r}; expected one of {SCHEMES}")
        s = spec.resolve()
        for snr in spec.snr_db:
            P1 = 10.0 ** (float(snr) / 10.0)
            P2 = spec.p2_ratio * P1
            rows.append(_sweep_row(spec, s, float(snr), P1, P2, mc, alpha_grid, theta_grid, workers))
    return rows


def _sweep_row(spec, s, snr, P1, P2, mc, alpha_grid, theta_grid, workers) -> SweepRow:
    sigma2 = 1.0
    phase = spec.phase
    ch = ChannelSpec(sigma2=sigma2, phase=phase)
    alpha = theta = objective = None

    if spec.scheme == "baseline":
        est = _plain_capacity(s, s, math.sqrt(P1), math.sqrt(P2), ch, mc, workers)
    elif spec.scheme == "cpa":
        alpha, objective = alpha_star(
            s, s, P1, P2, sigma2, alpha_grid, phase=phase,
            phase_draws=mc.phase_draws, seed=mc.seed, workers=workers,
        )
        est = cpa_sum_capacity(s, s, CpaConfig(P1, P2, alpha), ch, mc, workers=workers)
    elif spec.scheme == "cr":
        theta_rad, objective = theta_star(s, s, P1, P2, sigma2, theta_grid)
        theta = math.degrees(theta_rad)
        est = _plain_capacity(s, rotate(s, theta_rad), math.sqrt(P1), math.sqrt(P2), ch, mc, workers)
    else:  # cpa_cr
        alpha, theta_rad, objective = alpha_theta_star(s, s, P1, P2, sigma2, alpha_grid, theta_grid, workers)
        theta = math.degrees(theta_rad)
        est = cpa_sum_capacity(s, rotate(s, theta_rad), CpaConfig(P1, P2, alpha), ch, mc, workers=workers)

    return SweepRow(
        scheme=spec.scheme,
        constellation=s.label,
        snr_db=snr,
        p2_ratio=spec.p2_ratio,
        alpha=alpha,
        theta_deg=theta,
        capacity_bits=est.bits,
        stderr_bits=est.stderr,
        objective=objective,
    )


def _plain_capacity(s1, s2, a1, a2, ch, mc, workers):
    if ch.phase == "random":
        return cc_sum_capacity_random_phase(s1, s2, a1, a2, ch, mc, workers=workers)
    return cc_sum_capacity(s1, s2, a1, a2, ch, mc, workers=workers)
