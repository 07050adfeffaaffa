"""Benchmark the JIT kernels against the pure-numpy fallbacks.

Run as `python -m cpamac.bench [--samples N] [--pairs-of CONST]`.  Times the
three hot kernels on a representative workload and prints per-backend wall
times; warm-up calls exclude JIT compilation from the timings.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from . import _kernels_numpy
from ._seeding import complex_noise, noise_stream
from .capacity import _difference_arrays, _tuple_exponents
from .constellations import by_name

try:
    from . import _kernels_numba

    HAVE_NUMBA = True
except ImportError:
    _kernels_numba = None
    HAVE_NUMBA = False


def _workload(name: str, samples: int, snr_db: float = 12.0, alpha: float = 0.6):
    s = by_name(name)
    p = 10.0 ** (snr_db / 10.0)
    a1 = math.sqrt((2.0 - alpha) * p)
    a2 = math.sqrt(alpha * p)
    d1, d2 = _difference_arrays(s.points, s.points, a1, a2, 0.0, 0.0)
    c2 = _tuple_exponents(d1, d2, 1.0)
    k = c2.shape[0]
    zr = np.empty((k, samples))
    zi = np.empty((k, samples))
    for pair in range(k):
        rng = noise_stream(0, pair // s.size, pair % s.size, 0, 0, 0)
        zr[pair], zi[pair] = complex_noise(rng, samples, 1.0)
    d1r, d1i = np.ascontiguousarray(d1.real), np.ascontiguousarray(d1.imag)
    d2r, d2i = np.ascontiguousarray(d2.real), np.ascontiguousarray(d2.imag)
    return d1r, d1i, d2r, d2i, c2, zr, zi


def _time(fn, *args, repeat: int = 3) -> float:
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=4000)
    ap.add_argument("--constellation", default="8psk")
    args = ap.parse_args(argv)

    d1r, d1i, d2r, d2i, c2, zr, zi = _workload(args.constellation, args.samples)
    k = c2.shape[0]
    x = -0.5 * c2
    draws = 200
    rng = np.random.default_rng(0)
    delta = rng.uniform(0, 2 * np.pi, draws)
    cos_d, sin_d = np.cos(delta), np.sin(delta)

    backends = [("numpy", _kernels_numpy)]
    if HAVE_NUMBA:
        backends.append(("numba", _kernels_numba))

    print(f"workload: {args.constellation} ({k} pairs x {args.samples} samples), {draws} phase draws")
    results = {}
    for name, impl in backends:
        out_pairs = np.zeros((k, 4))
        out_draws = np.zeros(draws)
        # warm-up (JIT compile for the numba backend)
        impl.pair_stats(d1r, d1i, d2r, d2i, c2, 1.0, zr[:, :8].copy(), zi[:, :8].copy(), 0, k,
                        np.zeros((k, 4)))
        impl.q_sum(x)
        impl.qp_draw_values(-x, 0.1 * x, 0.05 * x, cos_d, sin_d, 0, 2, np.zeros(draws))
        t_pairs = _time(impl.pair_stats, d1r, d1i, d2r, d2i, c2, 1.0, zr, zi, 0, k, out_pairs)
        t_q = _time(impl.q_sum, x)
        t_qp = _time(impl.qp_draw_values, -x, 0.1 * x, 0.05 * x, cos_d, sin_d, 0, draws, out_draws)
        results[name] = (t_pairs, t_q, t_qp)
        print(f"  {name:>6}: pair_stats {t_pairs * 1e3:9.2f} ms | q_sum {t_q * 1e6:9.1f} us | "
              f"qp_draws {t_qp * 1e3:9.2f} ms")

    if len(results) == 2:
        np_t, nb_t = results["numpy"], results["numba"]
        print("  speedup (numpy/numba): "
              f"pair_stats {np_t[0] / nb_t[0]:5.1f}x | q_sum {np_t[1] / nb_t[1]:5.1f}x | "
              f"qp_draws {np_t[2] / nb_t[2]:5.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
