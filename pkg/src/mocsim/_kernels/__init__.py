"""Hot-loop kernels behind trace synthesis, alignment, and window means.

At import time the compiled extension is preferred; when it is missing
(no compiler at install time) the pure-Python fallback is used.  Both
implementations run the same loops in the same order, so results are
bit-identical; only speed differs.  benchmarks/bench_kernels.py compares
the two.
"""

try:
    from . import _speedups as _impl
    BACKEND = "compiled"
except ImportError:  # extension not built
    from . import pyfallback as _impl
    BACKEND = "python"

synth_rtts = _impl.synth_rtts
window_mean_effective_rtt = _impl.window_mean_effective_rtt
fill_indices = _impl.fill_indices


def backend_name() -> str:
    """Which kernel implementation is active: 'compiled' or 'python'."""
    return BACKEND
