"""Pure-Python kernel implementations.

Loop structure and arithmetic order mirror _speedups.pyx exactly; any
change here must be made there too, or backend parity tests will fail.
"""

from __future__ import annotations

import math

import numpy as np


def synth_rtts(p_out: np.ndarray, p_cong: np.ndarray,
               u_out: np.ndarray, u_cong: np.ndarray, z: np.ndarray,
               sigma: float, base_rtt: float, cong_mult: float):
    """Per-tick RTT synthesis from pre-drawn uniforms and normals.

    Returns (rtt, out_mask, cong_mask); outage ticks carry +inf RTT.
    """
    n = len(p_out)
    rtt = np.empty(n, dtype=np.float64)
    out = np.zeros(n, dtype=np.uint8)
    cong = np.zeros(n, dtype=np.uint8)
    for k in range(n):
        if u_out[k] < p_out[k]:
            out[k] = 1
            rtt[k] = math.inf
            continue
        r = base_rtt * math.exp(sigma * z[k])
        if u_cong[k] < p_cong[k]:
            cong[k] = 1
            r = r * cong_mult
        rtt[k] = r
    return rtt, out, cong


def window_mean_effective_rtt(rtt: np.ndarray, starts: np.ndarray,
                              timeout_rtt: float) -> np.ndarray:
    """Per-provider, per-window mean effective RTT.

    rtt is (providers, ticks) with NaN for gaps and +inf for timeouts;
    timeouts contribute timeout_rtt to the mean, gaps are excluded.  A
    window with only gaps yields NaN.
    """
    n_prov = rtt.shape[0]
    n_win = len(starts) - 1
    means = np.empty((n_prov, n_win), dtype=np.float64)
    for p in range(n_prov):
        for w in range(n_win):
            total = 0.0
            count = 0
            for k in range(starts[w], starts[w + 1]):
                v = rtt[p, k]
                if math.isnan(v):
                    continue
                if math.isinf(v):
                    v = timeout_rtt
                total += v
                count += 1
            means[p, w] = total / count if count else math.nan
    return means


def fill_indices(sample_ts: np.ndarray, tick_ts: np.ndarray,
                 staleness: float) -> np.ndarray:
    """Latest-sample-not-older-than lookup for every tick.

    Returns per tick the index of the newest sample with
    t <= tick and tick - t <= staleness, or -1 when none qualifies.
    """
    m = len(sample_ts)
    out = np.empty(len(tick_ts), dtype=np.int64)
    j = -1
    for i in range(len(tick_ts)):
        while j + 1 < m and sample_ts[j + 1] <= tick_ts[i]:
            j += 1
        if j >= 0 and tick_ts[i] - sample_ts[j] <= staleness:
            out[i] = j
        else:
            out[i] = -1
    return out
