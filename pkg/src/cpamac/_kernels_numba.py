"""Numba implementations of the exp-heavy inner loops.

The mutual-information estimators spend essentially all of their time inside
log-sum-exp reductions over competing symbol tuples.  These kernels keep that
work in tight scalar loops (nogil, cached) so the Python layer can chunk work
across threads without losing bit-reproducibility: every output slot depends
only on its own pair/draw index, never on the chunking.
"""

import numpy as np
from numba import njit

LOG2E = 1.4426950408889634

# exp() rounds to exactly 0.0 below this argument, so terms can be skipped
# without changing any bit of the accumulated sums
_EXP_FLOOR = -746.0


@njit(cache=True, nogil=True)
def q_sum(x):
    """Sum of log2(row sums of exp(x)) for an exponent matrix x <= 0.

    Row p holds the exponents of the competing-tuple terms for transmit pair
    p; the self term x[p, p] is 0 by construction, so every row sum is >= 1
    and no max-shift is needed.
    """
    n_rows, n_cols = x.shape
    total = 0.0
    for p in range(n_rows):
        s = 0.0
        for q in range(n_cols):
            v = x[p, q]
            if v > _EXP_FLOOR:
                s += np.exp(v)
        total += np.log2(s)
    return total


@njit(cache=True, nogil=True)
def qp_draw_values(a, b, c, cos_d, sin_d, d_lo, d_hi, out):
    """Per-draw deterministic metric values under random phase offsets.

    For phase difference delta of draw d, the tuple exponent is
    -(a + cos(delta)*b + sin(delta)*c), which is <= 0 with the self term at 0.
    out[d] receives the full double sum for draw d; draws outside
    [d_lo, d_hi) are untouched.
    """
    n_rows, n_cols = a.shape
    for d in range(d_lo, d_hi):
        cd = cos_d[d]
        sd = sin_d[d]
        total = 0.0
        for p in range(n_rows):
            s = 0.0
            for q in range(n_cols):
                arg = -(a[p, q] + cd * b[p, q] + sd * c[p, q])
                if arg > _EXP_FLOOR:
                    s += np.exp(arg)
            total += np.log2(s)
        out[d] = total
    return out


@njit(cache=True, nogil=True)
def pair_stats(d1r, d1i, d2r, d2i, c2, inv_sigma2, zr, zi, p_lo, p_hi, out):
    """Accumulate per-pair Monte-Carlo statistics of the log-likelihood ratio.

    For transmit pair p = k1*N2 + k2 and noise sample z, the per-sample term is

        w = log2( sum_{i1,i2} exp(-(|mu|^2 + 2 Re(mu conj(z))) / sigma^2) )

    with mu = d1[k1,i1] + d2[k2,i2] (differences already carry the scale and
    any fixed phase rotation).  The |z|^2 / sigma^2 term of the likelihood
    denominator cancels algebraically against the numerator exponents, which
    is what keeps w finite at high SNR.

    The tuple sum factorises as exp(-c) * exp(-e1[i1]) * exp(-e2[i2]) where
    e1, e2 are the per-user cross terms, so each sample needs only N1 + N2
    exp() calls plus an N1*N2 product accumulation.  Both factors are shifted
    by their minima; in the (astronomically rare) event that the shifted
    product still underflows, an exact full log-sum-exp over the K tuples is
    used for that sample.

    out[p] receives (sum w, sum w^2, sum v, sum v^2) over the samples of pair
    p, where v = w - |z|^2 * log2(e) / sigma^2 is the per-sample term of the
    un-normalised mutual-information bound.
    """
    N1 = d1r.shape[0]
    N2 = d2r.shape[0]
    n = zr.shape[1]
    two_inv = 2.0 * inv_sigma2

    u1r = np.empty(N1)
    u1i = np.empty(N1)
    u2r = np.empty(N2)
    u2i = np.empty(N2)
    e1 = np.empty(N1)
    e2 = np.empty(N2)
    f1 = np.empty(N1)
    f2 = np.empty(N2)
    g = np.empty((N1, N2))

    for p in range(p_lo, p_hi):
        k1 = p // N2
        k2 = p % N2
        for i in range(N1):
            u1r[i] = two_inv * d1r[k1, i]
            u1i[i] = two_inv * d1i[k1, i]
        for j in range(N2):
            u2r[j] = two_inv * d2r[k2, j]
            u2i[j] = two_inv * d2i[k2, j]
        for i in range(N1):
            base = i * N2
            for j in range(N2):
                cc = c2[p, base + j]
                g[i, j] = np.exp(-cc) if cc < -_EXP_FLOOR else 0.0

        sw = 0.0
        sw2 = 0.0
        sv = 0.0
        sv2 = 0.0
        for s in range(n):
            x = zr[p, s]
            y = zi[p, s]
            m1 = np.inf
            for i in range(N1):
                e = u1r[i] * x + u1i[i] * y
                e1[i] = e
                if e < m1:
                    m1 = e
            m2 = np.inf
            for j in range(N2):
                e = u2r[j] * x + u2i[j] * y
                e2[j] = e
                if e < m2:
                    m2 = e
            if m1 + m2 > -650.0:
                for i in range(N1):
                    t = m1 - e1[i]
                    f1[i] = np.exp(t) if t > _EXP_FLOOR else 0.0
                for j in range(N2):
                    t = m2 - e2[j]
                    f2[j] = np.exp(t) if t > _EXP_FLOOR else 0.0
                tot = 0.0
                for i in range(N1):
                    acc = 0.0
                    for j in range(N2):
                        acc += g[i, j] * f2[j]
                    tot += f1[i] * acc
                w = (-(m1 + m2) + np.log(tot)) * LOG2E
            else:
                # exact fallback: full shifted log-sum-exp over all K tuples
                mx = -np.inf
                for i in range(N1):
                    base = i * N2
                    for j in range(N2):
                        e = -c2[p, base + j] - e1[i] - e2[j]
                        if e > mx:
                            mx = e
                tot = 0.0
                for i in range(N1):
                    base = i * N2
                    for j in range(N2):
                        e = -c2[p, base + j] - e1[i] - e2[j] - mx
                        if e > _EXP_FLOOR:
                            tot += np.exp(e)
                w = (mx + np.log(tot)) * LOG2E
            v = w - (x * x + y * y) * inv_sigma2 * LOG2E
            sw += w
            sw2 += w * w
            sv += v
            sv2 += v * v
        out[p, 0] = sw
        out[p, 1] = sw2
        out[p, 2] = sv
        out[p, 3] = sv2
    return out
