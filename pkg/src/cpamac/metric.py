"""Deterministic high-SNR surrogate objectives for the power-split search.

The split-factor search would otherwise need a Monte-Carlo capacity estimate
per grid point.  At high SNR the capacity maximiser is approximated closely by
the minimiser of a deterministic pairwise-exponential sum (a Jensen upper
bound on the un-normalised mutual-information term), which is free of the
noise variable and therefore cheap and exactly reproducible:

    Q(abar) = sum_{k1,k2} log2 sum_{i1,i2}
              exp(-|sqrt(P_L) dx1 + sqrt(P_S) dx2|^2 / (2 sigma2))

with P_L = (2-abar)*P1, P_S = abar*P2 and dx the constellation differences.
The phase-averaged variant takes the expectation of the same sum over i.i.d.
uniform phase offsets, realised by seeded draws.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._seeding import phase_pair, phase_stream
from .capacity import McConfig, _mc_stats
from .constellations import _as_points, rotate

__all__ = [
    "MetricValue",
    "q_metric",
    "q_total",
    "qp_metric",
    "q_metric_rotated",
    "i1_estimate",
]


@dataclass(frozen=True)
class MetricValue:
    """Value of the surrogate objective for one slot scale pair.

    stderr is zero for the fixed-phase metric and the across-draw standard
    error for the phase-averaged one.
    """

    value: float
    alpha_bar: float
    scales_echo: tuple[float, float]
    stderr: float = 0.0


def _slot_powers(P1, P2, alpha_bar):
    if not (0.0 < alpha_bar < 2.0):
        raise ValueError(f"alpha_bar must be in (0, 2), got {alpha_bar!r}")
    if not (P1 > 0 and P2 > 0 and math.isfinite(P1) and math.isfinite(P2)):
        raise ValueError("power budgets must be finite and > 0")
    return (2.0 - alpha_bar) * P1, alpha_bar * P2


def _check_sigma2(sigma2):
    if not (math.isfinite(sigma2) and sigma2 > 0):
        raise ValueError(f"sigma2 must be finite and > 0, got {sigma2!r}")


def q_metric(s1, s2, P1, P2, alpha_bar: float, sigma2: float) -> MetricValue:
    """Deterministic surrogate objective for slot scale pair (P_L, P_S)."""
    _check_sigma2(sigma2)
    pl, ps = _slot_powers(P1, P2, alpha_bar)
    p1 = _as_points(s1)
    p2 = _as_points(s2)
    d1 = math.sqrt(pl) * (p1[:, None] - p1[None, :])
    d2 = math.sqrt(ps) * (p2[:, None] - p2[None, :])
    mu = d1[:, None, :, None] + d2[None, :, None, :]
    k = p1.size * p2.size
    x = np.ascontiguousarray((np.abs(mu) ** 2).reshape(k, k) * (-0.5 / sigma2))
    return MetricValue(float(kernels.q_sum(x)), float(alpha_bar), (pl, ps))


def q_metric_rotated(s1, s2, P1, P2, alpha_bar: float, theta: float, sigma2: float) -> MetricValue:
    """q_metric with user 2's constellation rotated by theta (radians)."""
    return q_metric(s1, rotate(s2, theta), P1, P2, alpha_bar, sigma2)


def q_total(s1, s2, P1, P2, alpha: float, sigma2: float) -> float:
    """Sum of the surrogate objective over both slots of a split alpha."""
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must be in (0, 1], got {alpha!r}")
    return (
        q_metric(s1, s2, P1, P2, alpha, sigma2).value
        + q_metric(s1, s2, P1, P2, 2.0 - alpha, sigma2).value
    )


def qp_metric(
    s1,
    s2,
    P1,
    P2,
    alpha_bar: float,
    sigma2: float,
    phase_draws: int = 1_000,
    seed: int = 0,
    fix_theta1: bool = False,
    workers: int = 1,
) -> MetricValue:
    """Phase-averaged surrogate: mean of the Q-style sum over uniform offsets.

    Each draw rotates the user difference terms by e^{i*theta1}, e^{i*theta2};
    the tuple exponent depends on the offsets only through theta1 - theta2.
    Draw d comes from the (seed, d)-keyed stream, so the estimate is
    reproducible and independent of how draws are chunked across workers.
    fix_theta1 pins theta1 = 0 (same limit by phase-difference invariance;
    off by default).
    """
    _check_sigma2(sigma2)
    if int(phase_draws) < 1:
        raise ValueError("phase_draws must be >= 1")
    pl, ps = _slot_powers(P1, P2, alpha_bar)
    p1 = _as_points(s1)
    p2 = _as_points(s2)
    dx1 = p1[:, None] - p1[None, :]
    dx2 = p2[:, None] - p2[None, :]
    k = p1.size * p2.size
    inv2 = 0.5 / sigma2
    a4 = pl * np.abs(dx1[:, None, :, None]) ** 2 + ps * np.abs(dx2[None, :, None, :]) ** 2
    cross = dx1[:, None, :, None] * np.conj(dx2[None, :, None, :])
    scale = 2.0 * math.sqrt(pl * ps)
    a = np.ascontiguousarray(a4.reshape(k, k) * inv2)
    b = np.ascontiguousarray(cross.real.reshape(k, k) * (scale * inv2))
    c = np.ascontiguousarray(cross.imag.reshape(k, k) * (-scale * inv2))

    draws = int(phase_draws)
    thetas = [phase_pair(phase_stream(seed, 0, d)) for d in range(draws)]
    delta = np.array([(0.0 if fix_theta1 else t1) - t2 for t1, t2 in thetas])
    cos_d = np.cos(delta)
    sin_d = np.sin(delta)
    out = np.zeros(draws)
    bounds = _draw_chunks(draws, workers)
    if len(bounds) == 1:
        kernels.qp_draw_values(a, b, c, cos_d, sin_d, 0, draws, out)
    else:
        with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
            futs = [pool.submit(kernels.qp_draw_values, a, b, c, cos_d, sin_d, lo, hi, out) for lo, hi in bounds]
            for f in futs:
                f.result()
    value = float(out.mean())
    stderr = float(out.std(ddof=1) / math.sqrt(draws)) if draws > 1 else 0.0
    return MetricValue(value, float(alpha_bar), (pl, ps), stderr)


def _draw_chunks(total, workers):
    workers = max(1, min(int(workers), total))
    step = (total + workers - 1) // workers
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def i1_estimate(s1, s2, P_L, P_S, sigma2, mc: McConfig, workers: int = 1) -> tuple[float, float]:
    """Monte-Carlo estimate of the un-normalised mutual-information term.

    This is the quantity the deterministic metric upper-bounds (Jensen), so
    it exists to test that bound:  i1 <= q_metric at matching scales.  Returns
    (value, stderr).
    """
    _check_sigma2(sigma2)
    if not (P_L >= 0 and P_S >= 0):
        raise ValueError("slot powers must be >= 0")
    out, n = _mc_stats(
        s1, s2, math.sqrt(P_L), math.sqrt(P_S), 0.0, 0.0, sigma2, mc, slot=0, draw=0, workers=workers
    )
    value = float((out[:, 2] / n).sum())
    if n > 1:
        var_pair = np.maximum(out[:, 3] - out[:, 2] ** 2 / n, 0.0) / (n - 1)
        stderr = math.sqrt(float(var_pair.sum()) / n)
    else:
        stderr = 0.0
    return value, stderr
