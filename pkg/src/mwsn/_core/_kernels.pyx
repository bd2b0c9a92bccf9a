# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled dual coordinate descent for the L1-loss linear SVM.

Mirrors ``mwsn._core._fallback.dcd_hinge`` step for step, including the
splitmix64 permutation stream, so both backends visit coordinates in the
same order.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t
from libc.math cimport INFINITY

cnp.import_array()


cdef inline uint64_t _splitmix64(uint64_t *state) noexcept nogil:
    cdef uint64_t z
    state[0] += <uint64_t>0x9E3779B97F4A7C15ULL
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)


def dcd_hinge(double[:, ::1] X, double[::1] y, double C, double tol,
              long max_iter, unsigned long long seed):
    """Solve ``min_w 0.5|w|^2 + C sum_i max(0, 1 - y_i w.x_i)``.

    Returns ``(w, alpha, n_iter)``.
    """
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    cdef Py_ssize_t i, k, s, t, tmp
    cdef double g, pg, pg_max, pg_min, a_old, a_new, qii, delta
    cdef long it = 0
    cdef uint64_t state = seed

    w_arr = np.zeros(d, dtype=np.float64)
    alpha_arr = np.zeros(n, dtype=np.float64)
    qd_arr = np.empty(n, dtype=np.float64)
    order_arr = np.arange(n, dtype=np.intp)
    cdef double[::1] w = w_arr
    cdef double[::1] alpha = alpha_arr
    cdef double[::1] qd = qd_arr
    cdef Py_ssize_t[::1] order = order_arr

    with nogil:
        for i in range(n):
            qii = 0.0
            for k in range(d):
                qii = qii + X[i, k] * X[i, k]
            qd[i] = qii

        while it < max_iter:
            # Fisher-Yates shuffle driven by splitmix64.
            s = n - 1
            while s > 0:
                t = <Py_ssize_t>(_splitmix64(&state) % <uint64_t>(s + 1))
                tmp = order[s]
                order[s] = order[t]
                order[t] = tmp
                s -= 1

            pg_max = -INFINITY
            pg_min = INFINITY
            for s in range(n):
                i = order[s]
                if qd[i] <= 0.0:
                    continue
                g = 0.0
                for k in range(d):
                    g = g + w[k] * X[i, k]
                g = y[i] * g - 1.0
                a_old = alpha[i]
                if a_old <= 0.0:
                    pg = g if g < 0.0 else 0.0
                elif a_old >= C:
                    pg = g if g > 0.0 else 0.0
                else:
                    pg = g
                if pg > pg_max:
                    pg_max = pg
                if pg < pg_min:
                    pg_min = pg
                if pg != 0.0:
                    a_new = a_old - g / qd[i]
                    if a_new < 0.0:
                        a_new = 0.0
                    elif a_new > C:
                        a_new = C
                    alpha[i] = a_new
                    delta = (a_new - a_old) * y[i]
                    for k in range(d):
                        w[k] = w[k] + delta * X[i, k]
            it += 1
            if pg_max - pg_min < tol:
                break

    return w_arr, alpha_arr, it
