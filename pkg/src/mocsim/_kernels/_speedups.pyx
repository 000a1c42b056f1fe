# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel implementations; see pyfallback.py for the reference loops."""

from libc.math cimport exp, isinf, isnan, INFINITY, NAN

import numpy as np

cimport numpy as cnp

cnp.import_array()


def synth_rtts(cnp.float64_t[::1] p_out, cnp.float64_t[::1] p_cong,
               cnp.float64_t[::1] u_out, cnp.float64_t[::1] u_cong,
               cnp.float64_t[::1] z,
               double sigma, double base_rtt, double cong_mult):
    cdef Py_ssize_t n = p_out.shape[0]
    rtt_arr = np.empty(n, dtype=np.float64)
    out_arr = np.zeros(n, dtype=np.uint8)
    cong_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.float64_t[::1] rtt = rtt_arr
    cdef cnp.uint8_t[::1] out = out_arr
    cdef cnp.uint8_t[::1] cong = cong_arr
    cdef Py_ssize_t k
    cdef double r
    for k in range(n):
        if u_out[k] < p_out[k]:
            out[k] = 1
            rtt[k] = INFINITY
            continue
        r = base_rtt * exp(sigma * z[k])
        if u_cong[k] < p_cong[k]:
            cong[k] = 1
            r = r * cong_mult
        rtt[k] = r
    return rtt_arr, out_arr, cong_arr


def window_mean_effective_rtt(cnp.float64_t[:, ::1] rtt,
                              cnp.int64_t[::1] starts, double timeout_rtt):
    cdef Py_ssize_t n_prov = rtt.shape[0]
    cdef Py_ssize_t n_win = starts.shape[0] - 1
    means_arr = np.empty((n_prov, n_win), dtype=np.float64)
    cdef cnp.float64_t[:, ::1] means = means_arr
    cdef Py_ssize_t p, w, k
    cdef double total, v
    cdef long count
    for p in range(n_prov):
        for w in range(n_win):
            total = 0.0
            count = 0
            for k in range(starts[w], starts[w + 1]):
                v = rtt[p, k]
                if isnan(v):
                    continue
                if isinf(v):
                    v = timeout_rtt
                total += v
                count += 1
            means[p, w] = total / count if count else NAN
    return means_arr


def fill_indices(cnp.float64_t[::1] sample_ts, cnp.float64_t[::1] tick_ts,
                 double staleness):
    cdef Py_ssize_t m = sample_ts.shape[0]
    cdef Py_ssize_t n = tick_ts.shape[0]
    out_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    cdef Py_ssize_t i
    cdef Py_ssize_t j = -1
    for i in range(n):
        while j + 1 < m and sample_ts[j + 1] <= tick_ts[i]:
            j += 1
        if j >= 0 and tick_ts[i] - sample_ts[j] <= staleness:
            out[i] = j
        else:
            out[i] = -1
    return out_arr
