"""Producing per-provider link traces and aligning them on a decision timeline.

Synthetic traces realize the failure processes as a seeded discrete-time
sample generator; alignment snaps multiple traces onto a shared tick grid
with forward-fill bounded by a staleness limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Mapping, Sequence, Union

import numpy as np

from . import _kernels
from .core import (LinkTrace, NetType, PltModel, Sample, TIMEOUT, is_timeout,
                   jitter_from_window, plt_model_ms, JITTER_WINDOW)
from .errors import AlignmentError
from .reliability import HazardParams, WeibullParams

__all__ = [
    "GAP", "LinkTrace", "SyntheticLinkSpec", "AlignedTraces", "is_gap",
    "generate_trace", "align", "ssm_transform",
]


class _Gap:
    """Singleton marker for an aligned-timeline cell with no fresh sample."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "GAP"

    def __reduce__(self):
        return (_Gap, ())


GAP = _Gap()

Cell = Union[Sample, _Gap]


def is_gap(cell: object) -> bool:
    return isinstance(cell, _Gap)


#: Congestion probability cap; keeps the linear congestion hazard usable
#: over long horizons.
CONGESTION_PROB_CAP = 0.95


@dataclass(frozen=True)
class SyntheticLinkSpec:
    """Stochastic model of one provider's link.

    The hazard and Weibull processes are evaluated on elapsed time in
    seconds.  Per tick, an outage (TIMEOUT) fires with the discretized
    Weibull hazard probability, congestion fires with probability
    proportional to the congestion hazard (capped), RTT is the base value
    under multiplicative lognormal noise, and congestion scales RTT up and
    throughputs down by the same multiplier.
    """

    provider_id: str
    base_rtt_ms: float
    base_dl_kbps: float
    base_ul_kbps: float
    hazard: HazardParams
    weibull: WeibullParams
    rtt_noise_sigma: float = 0.0
    congestion_rtt_multiplier: float = 4.0
    seed: int = 0

    def __post_init__(self):
        if self.base_rtt_ms <= 0:
            raise ValueError("base_rtt_ms must be > 0")
        if self.base_dl_kbps <= 0 or self.base_ul_kbps <= 0:
            raise ValueError("base throughputs must be > 0")
        if self.rtt_noise_sigma < 0:
            raise ValueError("rtt_noise_sigma must be >= 0")
        if self.congestion_rtt_multiplier < 1:
            raise ValueError("congestion_rtt_multiplier must be >= 1")


def generate_trace(spec: SyntheticLinkSpec, duration_ms: float,
                   tick_ms: float = 3000.0,
                   plt_model: PltModel = PltModel()) -> LinkTrace:
    """Synthesize a trace of floor(duration/tick) samples; deterministic per seed."""
    if tick_ms <= 0:
        raise ValueError("tick_ms must be > 0")
    if duration_ms < tick_ms:
        raise ValueError(
            f"duration {duration_ms} ms yields an empty trace at tick "
            f"{tick_ms} ms")
    n = int(duration_ms // tick_ms)
    ticks_ms = np.arange(n, dtype=np.float64) * tick_ms
    start_s = ticks_ms / 1000.0
    end_s = (ticks_ms + tick_ms) / 1000.0

    # Outage: 1 - exp(-integral of the Weibull hazard over the tick); the
    # cumulative hazard (t/eta)^beta gives the integral in closed form.
    eta, beta = spec.weibull.eta, spec.weibull.beta
    p_out = 1.0 - np.exp(-((end_s / eta) ** beta - (start_s / eta) ** beta))
    p_cong = np.minimum(
        start_s * spec.hazard.phi * math.exp(-spec.hazard.p),
        CONGESTION_PROB_CAP)

    rng = np.random.default_rng(spec.seed)
    u_out = rng.random(n)
    u_cong = rng.random(n)
    z = rng.standard_normal(n)
    rtt, out, cong = _kernels.synth_rtts(
        p_out, p_cong, u_out, u_cong, z,
        spec.rtt_noise_sigma, spec.base_rtt_ms, spec.congestion_rtt_multiplier)

    mult = spec.congestion_rtt_multiplier
    samples = []
    window: list[float] = []  # trailing non-timeout RTTs for rolling jitter
    for k in range(n):
        t = float(ticks_ms[k])
        if out[k]:
            window.clear()
            samples.append(Sample(
                t=t, provider_id=spec.provider_id, rtt=TIMEOUT,
                loss=1.0, net_type=NetType.NONE))
            continue
        r = float(rtt[k])
        window.append(r)
        if len(window) > JITTER_WINDOW:
            window.pop(0)
        jitter = jitter_from_window(window) if len(window) == JITTER_WINDOW else None
        dl = spec.base_dl_kbps / mult if cong[k] else spec.base_dl_kbps
        ul = spec.base_ul_kbps / mult if cong[k] else spec.base_ul_kbps
        samples.append(Sample(
            t=t, provider_id=spec.provider_id, rtt=r, jitter=jitter,
            loss=0.0, dl_throughput=dl, ul_throughput=ul,
            plt=plt_model_ms(r, dl, plt_model), net_type=NetType.LTE))
    return LinkTrace(provider_id=spec.provider_id, samples=tuple(samples),
                     tick_ms=tick_ms)


@dataclass(frozen=True)
class AlignedTraces:
    """Rectangular per-provider sample matrix over a common tick timeline.

    Each cell is the source Sample (original timestamp) or GAP when no
    sample was fresh enough.  trace_bounds keeps every provider's original
    first/last sample so alignment round-trips exactly through as_traces().
    """

    providers: tuple[str, ...]
    timeline: tuple[float, ...]
    cells: Mapping[str, tuple[Cell, ...]]
    tick_ms: float
    staleness_bound_ms: float
    trace_bounds: Mapping[str, tuple[Sample, Sample]] = field(default_factory=dict)

    def __post_init__(self):
        for p in self.providers:
            row = self.cells[p]
            if len(row) != len(self.timeline):
                raise AlignmentError(
                    f"cell row for {p!r} has {len(row)} entries, "
                    f"timeline has {len(self.timeline)}")
            for tick, cell in zip(self.timeline, row):
                if is_gap(cell):
                    continue
                if not 0 <= tick - cell.t <= self.staleness_bound_ms:
                    raise AlignmentError(
                        f"cell for {p!r} at tick {tick} holds a sample from "
                        f"{cell.t}, outside the staleness bound")

    @property
    def n_ticks(self) -> int:
        return len(self.timeline)

    @cached_property
    def _timeline_array(self) -> np.ndarray:
        return np.asarray(self.timeline, dtype=np.float64)

    @cached_property
    def rtt_matrix(self) -> np.ndarray:
        """(providers, ticks) effective-RTT matrix: NaN for GAP, +inf for TIMEOUT."""
        mat = np.empty((len(self.providers), self.n_ticks), dtype=np.float64)
        for i, p in enumerate(self.providers):
            for k, cell in enumerate(self.cells[p]):
                if is_gap(cell):
                    mat[i, k] = math.nan
                elif is_timeout(cell.rtt):
                    mat[i, k] = math.inf
                else:
                    mat[i, k] = cell.rtt
        return mat

    def window_starts(self, window_ms: float) -> np.ndarray:
        """Tick-index boundaries partitioning the timeline into decision windows.

        Returns indices [0, ..., n_ticks]; window w covers ticks in
        [starts[w], starts[w+1]).  The last window may be partial.
        """
        if window_ms < self.tick_ms:
            raise ValueError(
                f"window {window_ms} ms covers no full tick at "
                f"{self.tick_ms} ms")
        origin = self.timeline[0]
        span = self.timeline[-1] - origin
        n_win = int(span // window_ms) + 1
        edges = origin + np.arange(1, n_win) * window_ms
        inner = np.searchsorted(self._timeline_array, edges, side="left")
        return np.concatenate(([0], inner, [self.n_ticks])).astype(np.int64)

    def as_traces(self) -> list[LinkTrace]:
        """Minimal per-provider traces that reproduce this alignment exactly."""
        out = []
        for p in self.providers:
            by_t: dict[float, Sample] = {}
            for cell in self.cells[p]:
                if not is_gap(cell):
                    by_t[cell.t] = cell
            if p in self.trace_bounds:
                first, last = self.trace_bounds[p]
                by_t[first.t] = first
                by_t[last.t] = last
            samples = tuple(by_t[t] for t in sorted(by_t))
            out.append(LinkTrace(provider_id=p, samples=samples,
                                 tick_ms=self.tick_ms))
        return out


def align(traces: Sequence[LinkTrace], tick_ms: float | None = None,
          staleness_bound_ms: float | None = None) -> AlignedTraces:
    """Align traces onto the common grid from max(start) to min(end).

    Each cell takes the provider's latest sample not older than the
    staleness bound (default twice the tick), else GAP.
    """
    if not traces:
        raise AlignmentError("need at least one trace")
    seen = set()
    for tr in traces:
        if not tr.samples:
            raise AlignmentError(f"trace {tr.provider_id!r} is empty")
        if tr.provider_id in seen:
            raise AlignmentError(f"duplicate provider {tr.provider_id!r}")
        seen.add(tr.provider_id)
    if tick_ms is None:
        tick_ms = max(tr.tick_ms for tr in traces)
    if tick_ms <= 0:
        raise ValueError("tick_ms must be > 0")
    if staleness_bound_ms is None:
        staleness_bound_ms = 2 * tick_ms
    if staleness_bound_ms < 0:
        raise ValueError("staleness_bound_ms must be >= 0")

    origin = max(tr.samples[0].t for tr in traces)
    end = min(tr.samples[-1].t for tr in traces)
    if origin > end:
        raise AlignmentError(
            f"traces do not overlap (latest start {origin} > earliest end {end})")
    n_ticks = int((end - origin) // tick_ms) + 1
    timeline = tuple(origin + k * tick_ms for k in range(n_ticks))
    tick_arr = np.asarray(timeline, dtype=np.float64)

    cells: dict[str, tuple[Cell, ...]] = {}
    bounds: dict[str, tuple[Sample, Sample]] = {}
    for tr in traces:
        ts = np.asarray([s.t for s in tr.samples], dtype=np.float64)
        idx = _kernels.fill_indices(ts, tick_arr, float(staleness_bound_ms))
        cells[tr.provider_id] = tuple(
            tr.samples[i] if i >= 0 else GAP for i in idx)
        bounds[tr.provider_id] = (tr.samples[0], tr.samples[-1])
    return AlignedTraces(
        providers=tuple(tr.provider_id for tr in traces),
        timeline=timeline, cells=cells, tick_ms=float(tick_ms),
        staleness_bound_ms=float(staleness_bound_ms), trace_bounds=bounds)


def ssm_transform(trace: LinkTrace, extra_rtt_ms: float, extra_hops: int = 0,
                  plt_model: PltModel = PltModel()) -> LinkTrace:
    """Supply-side detour penalty: lengthen every RTT by a fixed amount.

    TIMEOUT stays TIMEOUT; jitter and throughputs are unchanged; page load
    time is recomputed from the new RTT where the downlink speed is known,
    otherwise shifted by the handshake share of the penalty.  The hop count
    is recorded as trace metadata.
    """
    if extra_rtt_ms < 0:
        raise ValueError("extra_rtt_ms must be >= 0")
    samples = []
    for s in trace.samples:
        if is_timeout(s.rtt):
            samples.append(s)
            continue
        rtt = s.rtt + extra_rtt_ms
        if s.dl_throughput is not None and s.dl_throughput > 0:
            plt = plt_model_ms(rtt, s.dl_throughput, plt_model)
        elif s.plt is not None:
            plt = s.plt + plt_model.handshake_rtts * extra_rtt_ms
        else:
            plt = None
        samples.append(replace(s, rtt=rtt, plt=plt))
    meta = dict(trace.meta)
    meta["extra_rtt_ms"] = extra_rtt_ms
    meta["extra_hops"] = extra_hops
    return LinkTrace(provider_id=trace.provider_id, samples=tuple(samples),
                     tick_ms=trace.tick_ms, meta=meta)
