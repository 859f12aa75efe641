# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pairwise kernels.

xs is (n, d), ys is (m, d), both float64.  Complex constants are derived
from the time z in Python (see ``mehler._time_constants``).

mehler_pairs     pref * exp(-a * |q x - y|^2)                (defining form)
alt_pairs        pref * exp(-s|x+y|^2/8 - |x-y|^2/(8s) + c(|x|^2-|y|^2)/2)
domination_scan  min of g0*exp(-margin|x-y|^2/8) - |alt kernel| over pairs
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, cos, sin, INFINITY

cnp.import_array()


cdef inline double complex _cexp(double complex w) noexcept nogil:
    cdef double r = exp(w.real)
    return r * cos(w.imag) + 1j * r * sin(w.imag)


def mehler_pairs(const double[:, ::1] xs, const double[:, ::1] ys,
                 double complex pref, double complex q, double complex a):
    cdef Py_ssize_t n = xs.shape[0], m = ys.shape[0], d = xs.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double complex acc, diff
    out = np.empty((n, m), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    with nogil:
        for i in range(n):
            for j in range(m):
                acc = 0
                for k in range(d):
                    diff = q * xs[i, k] - ys[j, k]
                    acc = acc + diff * diff
                o[i, j] = pref * _cexp(-a * acc)
    return out


def alt_pairs(const double[:, ::1] xs, const double[:, ::1] ys,
              double complex pref, double complex s, double c):
    cdef Py_ssize_t n = xs.shape[0], m = ys.shape[0], d = xs.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double p2, m2, w, t
    cdef double complex inv_s = 1.0 / s
    cdef double complex expo
    out = np.empty((n, m), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    with nogil:
        for i in range(n):
            for j in range(m):
                p2 = 0.0
                m2 = 0.0
                w = 0.0
                for k in range(d):
                    t = xs[i, k] + ys[j, k]
                    p2 = p2 + t * t
                    t = xs[i, k] - ys[j, k]
                    m2 = m2 + t * t
                    w = w + xs[i, k] * xs[i, k] - ys[j, k] * ys[j, k]
                expo = -0.125 * s * p2 - 0.125 * inv_s * m2 + 0.5 * c * w
                o[i, j] = pref * _cexp(expo)
    return out


def domination_scan(const double[:, ::1] xs, const double[:, ::1] ys,
                    double g0, double complex s, double c, double margin):
    cdef Py_ssize_t n = xs.shape[0], m = ys.shape[0], d = xs.shape[1]
    cdef Py_ssize_t i, j, k, bi = -1, bj = -1
    cdef double p2, m2, w, t, gap
    cdef double re_s = s.real
    cdef double re_inv = (1.0 / s).real
    cdef double best = INFINITY
    with nogil:
        for i in range(n):
            for j in range(m):
                p2 = 0.0
                m2 = 0.0
                w = 0.0
                for k in range(d):
                    t = xs[i, k] + ys[j, k]
                    p2 = p2 + t * t
                    t = xs[i, k] - ys[j, k]
                    m2 = m2 + t * t
                    w = w + xs[i, k] * xs[i, k] - ys[j, k] * ys[j, k]
                gap = (g0 * exp(-0.125 * margin * m2)
                       - g0 * exp(-0.125 * re_s * p2 - 0.125 * re_inv * m2 + 0.5 * c * w))
                if gap < best:
                    best = gap
                    bi = i
                    bj = j
    return best, bi, bj
