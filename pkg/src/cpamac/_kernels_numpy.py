"""Pure-numpy fallbacks for the hot kernels (same contracts, vectorised).

Selected when the CPAMAC_NUMBA env flag disables the JIT backend or numba is
not importable.  Values agree with the numba kernels to rounding (summation
order differs), and each backend is bit-reproducible on its own.
"""

import numpy as np

LOG2E = 1.4426950408889634


def q_sum(x):
    """Sum of log2(row sums of exp(x)) for an exponent matrix x <= 0."""
    return float(np.log2(np.exp(x).sum(axis=1)).sum())


def qp_draw_values(a, b, c, cos_d, sin_d, d_lo, d_hi, out):
    """Per-draw deterministic metric values under random phase offsets."""
    for d in range(d_lo, d_hi):
        arg = -(a + cos_d[d] * b + sin_d[d] * c)
        out[d] = np.log2(np.exp(arg).sum(axis=1)).sum()
    return out


def pair_stats(d1r, d1i, d2r, d2i, c2, inv_sigma2, zr, zi, p_lo, p_hi, out):
    """Accumulate per-pair Monte-Carlo statistics of the log-likelihood ratio.

    Vectorised equivalent of the numba kernel: per pair, the (samples x user)
    cross terms are built as outer products, both factors are min-shifted, and
    the tuple sum becomes a (samples x N1) @ (N1 x N2) matrix product.
    """
    N1 = d1r.shape[0]
    N2 = d2r.shape[0]
    two_inv = 2.0 * inv_sigma2
    for p in range(p_lo, p_hi):
        k1, k2 = divmod(p, N2)
        u1r = two_inv * d1r[k1]
        u1i = two_inv * d1i[k1]
        u2r = two_inv * d2r[k2]
        u2i = two_inv * d2i[k2]
        cmat = c2[p].reshape(N1, N2)
        g = np.exp(-cmat)

        x = zr[p]
        y = zi[p]
        e1 = np.outer(x, u1r) + np.outer(y, u1i)  # (n, N1)
        e2 = np.outer(x, u2r) + np.outer(y, u2i)  # (n, N2)
        m1 = e1.min(axis=1)
        m2 = e2.min(axis=1)
        f1 = np.exp(m1[:, None] - e1)
        f2 = np.exp(m2[:, None] - e2)
        tot = np.einsum("si,ij,sj->s", f1, g, f2)
        msum = m1 + m2
        with np.errstate(divide="ignore"):
            w = (-msum + np.log(tot)) * LOG2E
        bad = ~((tot > 0.0) & (msum > -650.0))
        if bad.any():
            for s in np.nonzero(bad)[0]:
                e = -cmat - e1[s][:, None] - e2[s][None, :]
                mx = e.max()
                w[s] = (mx + np.log(np.exp(e - mx).sum())) * LOG2E
        v = w - (x * x + y * y) * (inv_sigma2 * LOG2E)
        out[p, 0] = w.sum()
        out[p, 1] = (w * w).sum()
        out[p, 2] = v.sum()
        out[p, 3] = (v * v).sum()
    return out
