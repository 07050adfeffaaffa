"""Monte-Carlo estimation of constellation-constrained sum capacities.

The two-user channel is y = a1*x1 + a2*x2 + z with z circularly symmetric
complex Gaussian of total variance sigma2 (sigma2/2 per real dimension) and
uniform inputs over finite constellations.  The sum capacity in bits per
complex channel use is

    I = log2(N1*N2) - (1/(N1*N2)) * sum_{k1,k2} E_z[ w(k1, k2, z) ]

where w is the log2 likelihood ratio between the full tuple sum and the
transmitted tuple's own term (see kernels.pair_stats for the stabilised
form).  Expectations are realised by seeded Monte-Carlo; every estimate is
bit-reproducible for a given master seed regardless of worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._seeding import BLOCK_SIZE, complex_noise, noise_stream, phase_pair, phase_stream
from .constellations import _as_points

__all__ = [
    "ChannelSpec",
    "McConfig",
    "CapacityEstimate",
    "CpaConfig",
    "cc_sum_capacity",
    "cc_sum_capacity_phase",
    "cc_sum_capacity_random_phase",
    "cpa_sum_capacity",
]

PHASE_MODELS = ("none", "fixed", "random")


@dataclass(frozen=True)
class ChannelSpec:
    """Noise variance and phase model of the channel.

    phase "none": y = a1*x1 + a2*x2 + z.
    phase "fixed": user terms rotated by e^{i*theta1}, e^{i*theta2}.
    phase "random": thetas i.i.d. uniform on (0, 2*pi), known only to the
    receiver; capacity is the expectation over them.
    """

    sigma2: float
    phase: str = "none"
    theta1: float = 0.0
    theta2: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0):
            raise ValueError(f"sigma2 must be finite and > 0, got {self.sigma2!r}")
        if self.phase not in PHASE_MODELS:
            raise ValueError(f"phase must be one of {PHASE_MODELS}, got {self.phase!r}")
        if not (math.isfinite(self.theta1) and math.isfinite(self.theta2)):
            raise ValueError("fixed phase offsets must be finite")


@dataclass(frozen=True)
class McConfig:
    """Sampling budget: noise draws per pair (and per phase draw), phase draws,
    and the 64-bit master seed all streams derive from."""

    noise_samples: int = 20_000
    phase_draws: int = 1_000
    seed: int = 0

    def __post_init__(self):
        if int(self.noise_samples) < 1:
            raise ValueError("noise_samples must be >= 1")
        if int(self.phase_draws) < 1:
            raise ValueError("phase_draws must be >= 1")
        if not 0 <= int(self.seed) < (1 << 64):
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class CapacityEstimate:
    """Sum-capacity estimate in bits with its Monte-Carlo standard error."""

    bits: float
    stderr: float
    config_echo: dict = field(default_factory=dict, repr=False)


@dataclass(frozen=True)
class CpaConfig:
    """Alternating power split: slot scales (sqrt((2-a)*P1), sqrt(a*P2)) for
    a in {alpha, 2-alpha}, so each user's average power stays at P_i."""

    P1: float
    P2: float
    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.P1) and self.P1 > 0 and math.isfinite(self.P2) and self.P2 > 0):
            raise ValueError("power budgets must be finite and > 0")
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha!r}")

    @property
    def omega(self) -> tuple[float, float]:
        return (self.alpha, 2.0 - self.alpha)

    def slot_scales(self, alpha_bar: float) -> tuple[float, float]:
        return (math.sqrt((2.0 - alpha_bar) * self.P1), math.sqrt(alpha_bar * self.P2))


def _difference_arrays(p1, p2, a1, a2, theta1, theta2):
    d1 = (a1 * np.exp(1j * theta1)) * (p1[:, None] - p1[None, :])
    d2 = (a2 * np.exp(1j * theta2)) * (p2[:, None] - p2[None, :])
    return d1, d2


def _tuple_exponents(d1, d2, inv_sigma2):
    mu = d1[:, None, :, None] + d2[None, :, None, :]
    k = d1.shape[0] * d2.shape[0]
    return np.ascontiguousarray((np.abs(mu) ** 2).reshape(k, k) * inv_sigma2)


def _draw_noise(n1, n2, n, sigma2, seed, slot, draw):
    """Noise matrix (K, n); pair (k1, k2) gets its own block-keyed streams."""
    k = n1 * n2
    zr = np.empty((k, n))
    zi = np.empty((k, n))
    for p in range(k):
        k1, k2 = divmod(p, n2)
        done = 0
        block = 0
        while done < n:
            take = min(BLOCK_SIZE, n - done)
            rng = noise_stream(seed, k1, k2, block, slot, draw)
            gr, gi = complex_noise(rng, take, sigma2)
            zr[p, done:done + take] = gr
            zi[p, done:done + take] = gi
            done += take
            block += 1
    return zr, zi


def _chunk_bounds(total: int, workers: int):
    workers = max(1, min(int(workers), total))
    step = (total + workers - 1) // workers
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def _mc_stats(s1, s2, a1, a2, theta1, theta2, sigma2, mc: McConfig, slot: int, draw: int, workers: int = 1):
    """Per-pair (sum w, sum w^2, sum v, sum v^2) over mc.noise_samples draws."""
    p1 = _as_points(s1)
    p2 = _as_points(s2)
    if not (np.isfinite(a1) and np.isfinite(a2)) or a1 < 0 or a2 < 0:
        raise ValueError("scale factors must be finite and >= 0")
    inv = 1.0 / sigma2
    d1, d2 = _difference_arrays(p1, p2, a1, a2, theta1, theta2)
    c2 = _tuple_exponents(d1, d2, inv)
    n = int(mc.noise_samples)
    zr, zi = _draw_noise(p1.size, p2.size, n, sigma2, mc.seed, slot, draw)
    d1r = np.ascontiguousarray(d1.real)
    d1i = np.ascontiguousarray(d1.imag)
    d2r = np.ascontiguousarray(d2.real)
    d2i = np.ascontiguousarray(d2.imag)
    k = c2.shape[0]
    out = np.zeros((k, 4))
    bounds = _chunk_bounds(k, workers)
    if len(bounds) == 1:
        kernels.pair_stats(d1r, d1i, d2r, d2i, c2, inv, zr, zi, 0, k, out)
    else:
        with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
            futs = [
                pool.submit(kernels.pair_stats, d1r, d1i, d2r, d2i, c2, inv, zr, zi, lo, hi, out)
                for lo, hi in bounds
            ]
            for f in futs:
                f.result()
    return out, n


def _capacity_from_stats(out, n, k):
    bits = math.log2(k) - float(out[:, 0].sum()) / (n * k)
    if n > 1:
        var_pair = np.maximum(out[:, 1] - out[:, 0] ** 2 / n, 0.0) / (n - 1)
        stderr = math.sqrt(float(var_pair.sum()) / (n * k * k))
    else:
        stderr = 0.0
    return max(bits, 0.0), stderr


def _echo(s1, s2, a1, a2, ch: ChannelSpec, mc: McConfig, **extra) -> dict:
    def lab(s):
        return getattr(s, "label", "") or f"points[{_as_points(s).size}]"

    d = {
        "constellations": (lab(s1), lab(s2)),
        "scales": (float(a1), float(a2)),
        "sigma2": ch.sigma2,
        "phase": ch.phase,
        "noise_samples": mc.noise_samples,
        "seed": mc.seed,
    }
    d.update(extra)
    return d


def cc_sum_capacity(s1, s2, a1, a2, ch: ChannelSpec, mc: McConfig, workers: int = 1) -> CapacityEstimate:
    """Sum capacity of the fixed channel y = a1*x1 + a2*x2 + z, in bits.

    Identical, including bit-for-bit, to cc_sum_capacity_phase with zero
    offsets and the same seed.
    """
    if ch.phase != "none":
        raise ValueError("cc_sum_capacity expects phase='none'; use the phase-aware estimators")
    out, n = _mc_stats(s1, s2, a1, a2, 0.0, 0.0, ch.sigma2, mc, slot=0, draw=0, workers=workers)
    bits, stderr = _capacity_from_stats(out, n, out.shape[0])
    return CapacityEstimate(bits, stderr, _echo(s1, s2, a1, a2, ch, mc))


def cc_sum_capacity_phase(
    s1, s2, a1, a2, theta1: float, theta2: float, ch: ChannelSpec, mc: McConfig, workers: int = 1
) -> CapacityEstimate:
    """Sum capacity conditioned on fixed phase offsets (theta1, theta2)."""
    out, n = _mc_stats(s1, s2, a1, a2, theta1, theta2, ch.sigma2, mc, slot=0, draw=0, workers=workers)
    bits, stderr = _capacity_from_stats(out, n, out.shape[0])
    echo = _echo(s1, s2, a1, a2, ch, mc, theta1=float(theta1), theta2=float(theta2))
    return CapacityEstimate(bits, stderr, echo)


def _random_phase_bits(s1, s2, a1, a2, sigma2, mc, slot, workers):
    draws = int(mc.phase_draws)

    def one(d):
        th1, th2 = phase_pair(phase_stream(mc.seed, slot, d))
        out, n = _mc_stats(s1, s2, a1, a2, th1, th2, sigma2, mc, slot=slot, draw=d, workers=1)
        return _capacity_from_stats(out, n, out.shape[0])

    if workers <= 1 or draws == 1:
        results = [one(d) for d in range(draws)]
    else:
        with ThreadPoolExecutor(max_workers=min(workers, draws)) as pool:
            results = list(pool.map(one, range(draws)))
    per_draw = np.array([r[0] for r in results])
    bits = float(per_draw.mean())
    if draws > 1:
        stderr = float(per_draw.std(ddof=1) / math.sqrt(draws))
    else:
        stderr = results[0][1]
    return bits, stderr


def cc_sum_capacity_random_phase(s1, s2, a1, a2, ch: ChannelSpec, mc: McConfig, workers: int = 1) -> CapacityEstimate:
    """Expected sum capacity over i.i.d. uniform phase offsets.

    Averages mc.phase_draws conditional estimates, each using
    mc.noise_samples noise draws per pair.  The standard error is taken
    across draws, which folds in both sampling stages.
    """
    if ch.phase != "random":
        raise ValueError("cc_sum_capacity_random_phase expects phase='random'")
    bits, stderr = _random_phase_bits(s1, s2, a1, a2, ch.sigma2, mc, slot=0, workers=workers)
    echo = _echo(s1, s2, a1, a2, ch, mc, phase_draws=mc.phase_draws)
    return CapacityEstimate(max(bits, 0.0), stderr, echo)


def cpa_sum_capacity(s1, s2, cpa: CpaConfig, ch: ChannelSpec, mc: McConfig, workers: int = 1) -> CapacityEstimate:
    """Sum capacity of the alternating power-split scheme.

    Average of the two slot capacities with scales (sqrt((2-a)*P1),
    sqrt(a*P2)) for a in {alpha, 2-alpha}, under the channel's phase model.
    Slot estimates use independent seed-derived streams; their standard
    errors combine as half the root-sum-square.
    """
    slot_bits = []
    slot_se = []
    for slot, abar in enumerate(cpa.omega):
        a1, a2 = cpa.slot_scales(abar)
        if ch.phase == "random":
            b, se = _random_phase_bits(s1, s2, a1, a2, ch.sigma2, mc, slot=slot, workers=workers)
        else:
            out, n = _mc_stats(
                s1, s2, a1, a2, ch.theta1, ch.theta2, ch.sigma2, mc, slot=slot, draw=0, workers=workers
            )
            b, se = _capacity_from_stats(out, n, out.shape[0])
        slot_bits.append(b)
        slot_se.append(se)
    bits = 0.5 * (slot_bits[0] + slot_bits[1])
    stderr = 0.5 * math.hypot(slot_se[0], slot_se[1])
    echo = _echo(s1, s2, *cpa.slot_scales(cpa.alpha), ch, mc,
                 alpha=cpa.alpha, P1=cpa.P1, P2=cpa.P2,
                 phase_draws=mc.phase_draws if ch.phase == "random" else None)
    return CapacityEstimate(max(bits, 0.0), stderr, echo)
