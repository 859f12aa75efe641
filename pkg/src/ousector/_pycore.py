"""Pure-numpy pairwise kernels (fallback for the compiled ``_ckernels``).

Signatures and results match ``_ckernels.pyx``; see that file for the
meaning of each argument.
"""
import numpy as np

_CHUNK = 1 << 22  # pair evaluations per block


def _rows_per_block(m):
    return max(1, _CHUNK // max(1, m))


def mehler_pairs(xs, ys, pref, q, a):
    xs = np.ascontiguousarray(xs, dtype=float)
    ys = np.ascontiguousarray(ys, dtype=float)
    n, m = xs.shape[0], ys.shape[0]
    out = np.empty((n, m), dtype=complex)
    step = _rows_per_block(m)
    for i0 in range(0, n, step):
        diff = q * xs[i0:i0 + step, None, :] - ys[None, :, :]
        out[i0:i0 + step] = pref * np.exp(-a * np.sum(diff * diff, axis=-1))
    return out


def _alt_exponent(xb, ys, s, inv_s, c):
    plus = xb[:, None, :] + ys[None, :, :]
    minus = xb[:, None, :] - ys[None, :, :]
    p2 = np.sum(plus * plus, axis=-1)
    m2 = np.sum(minus * minus, axis=-1)
    w = np.sum(xb * xb, axis=-1)[:, None] - np.sum(ys * ys, axis=-1)[None, :]
    return -0.125 * s * p2 - 0.125 * inv_s * m2 + 0.5 * c * w, m2


def alt_pairs(xs, ys, pref, s, c):
    xs = np.ascontiguousarray(xs, dtype=float)
    ys = np.ascontiguousarray(ys, dtype=float)
    n, m = xs.shape[0], ys.shape[0]
    out = np.empty((n, m), dtype=complex)
    inv_s = 1.0 / s
    step = _rows_per_block(m)
    for i0 in range(0, n, step):
        expo, _ = _alt_exponent(xs[i0:i0 + step], ys, s, inv_s, c)
        out[i0:i0 + step] = pref * np.exp(expo)
    return out


def domination_scan(xs, ys, g0, s, c, margin):
    """min over pairs of g0*exp(-margin*|x-y|^2/8) - g0*exp(Re exponent)."""
    xs = np.ascontiguousarray(xs, dtype=float)
    ys = np.ascontiguousarray(ys, dtype=float)
    m = ys.shape[0]
    best, bi, bj = np.inf, -1, -1
    step = _rows_per_block(m)
    re_s = s.real
    re_inv = (1.0 / s).real
    for i0 in range(0, xs.shape[0], step):
        expo, m2 = _alt_exponent(xs[i0:i0 + step], ys, re_s, re_inv, c)
        gap = g0 * np.exp(-0.125 * margin * m2) - g0 * np.exp(expo)
        k = int(np.argmin(gap))
        if gap.flat[k] < best:
            best = float(gap.flat[k])
            bi, bj = i0 + k // m, k % m
    return best, bi, bj
