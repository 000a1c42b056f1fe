#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs each hot kernel on realistic trace sizes and prints per-backend
timings plus the speedup.  Also cross-checks that both backends return
bit-identical results on the benchmark inputs.

    python benchmarks/bench_kernels.py [--ticks N] [--repeat R]
"""

import argparse
import math
import time

import numpy as np

from mocsim._kernels import pyfallback

try:
    from mocsim._kernels import _speedups
except ImportError:
    _speedups = None


def time_call(fn, *args, repeat=5):
    best = math.inf
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def identical(a, b) -> bool:
    if isinstance(a, tuple):
        return all(identical(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b, equal_nan=a.dtype.kind == "f")


def bench(name, args, repeat):
    py_t, py_out = time_call(getattr(pyfallback, name), *args, repeat=repeat)
    if _speedups is None:
        print(f"{name:28s} python {py_t * 1e3:9.2f} ms   (no compiled build)")
        return
    cy_t, cy_out = time_call(getattr(_speedups, name), *args, repeat=repeat)
    assert identical(py_out, cy_out), f"{name}: backends disagree"
    print(f"{name:28s} python {py_t * 1e3:9.2f} ms   "
          f"compiled {cy_t * 1e3:8.3f} ms   speedup {py_t / cy_t:7.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ticks", type=int, default=500_000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    n = args.ticks
    rng = np.random.default_rng(7)
    print(f"kernel benchmarks over {n} ticks "
          f"(compiled build {'present' if _speedups else 'absent'})\n")

    synth_args = (rng.uniform(0, 0.2, n), rng.uniform(0, 0.9, n),
                  rng.random(n), rng.random(n), rng.standard_normal(n),
                  0.4, 55.0, 4.0)
    bench("synth_rtts", synth_args, args.repeat)

    rtt = rng.uniform(10, 300, (4, n))
    rtt[rng.random(rtt.shape) < 0.02] = math.nan
    rtt[rng.random(rtt.shape) < 0.02] = math.inf
    cuts = np.arange(0, n, 200)[1:]
    starts = np.concatenate(([0], cuts, [n])).astype(np.int64)
    bench("window_mean_effective_rtt", (rtt, starts, 10_000.0), args.repeat)

    sample_ts = np.sort(rng.uniform(0, n * 3000.0, n))
    tick_ts = np.arange(0.0, n * 3000.0, 3000.0)
    bench("fill_indices", (sample_ts, tick_ts, 6000.0), args.repeat)


if __name__ == "__main__":
    main()
