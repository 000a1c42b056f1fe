"""Switching policies over aligned traces and the improvement trade-off table.

The windowed policy is reactive: each closed window's per-provider average
RTT selects the provider for the next window.  The oracle assigns, per
window, the provider that actually performed best in that same window; it
upper-bounds any causal policy at zero switch delay.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from . import _kernels
from .core import LinkTrace, PltModel, Sample, TIMEOUT, is_timeout, plt_model_ms
from .links import AlignedTraces, is_gap

#: RTT charged for a timed-out probe inside means; the availability bound.
DEFAULT_TIMEOUT_RTT_MS = 10_000.0


@dataclass(frozen=True)
class SinglePolicy:
    """Stay on one provider for the whole scenario."""

    provider_id: str


@dataclass(frozen=True)
class WindowedDsmPolicy:
    """Reactive demand-side switching on per-window average RTT."""

    window_s: float = 10.0
    probe_interval_s: float = 3.0

    def __post_init__(self):
        if self.probe_interval_s <= 0:
            raise ValueError("probe_interval_s must be > 0")
        if self.window_s < self.probe_interval_s:
            raise ValueError("window_s must be >= probe_interval_s")


@dataclass(frozen=True)
class OraclePolicy:
    """Hindsight per-window best provider."""

    granularity_s: float = 10.0

    def __post_init__(self):
        if self.granularity_s <= 0:
            raise ValueError("granularity_s must be > 0")


Policy = Union[SinglePolicy, WindowedDsmPolicy, OraclePolicy]


@dataclass(frozen=True)
class Schedule:
    """Piecewise-constant provider assignment over a timeline.

    Segments are (start_ms, provider_id); the first starts at the timeline
    origin and consecutive segments differ in provider.  coverage_holes
    lists decision windows in which every provider was GAP.
    """

    segments: tuple[tuple[float, str], ...]
    span: tuple[float, float]
    coverage_holes: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.segments:
            raise ValueError("schedule needs at least one segment")
        if self.segments[0][0] != self.span[0]:
            raise ValueError("first segment must start at the timeline origin")
        prev_t, prev_p = self.segments[0]
        for t, p in self.segments[1:]:
            if t <= prev_t:
                raise ValueError("segment starts must be strictly increasing")
            if p == prev_p:
                raise ValueError("consecutive segments must differ in provider")
            prev_t, prev_p = t, p

    @property
    def switch_count(self) -> int:
        return len(self.segments) - 1

    def provider_at(self, t: float) -> str:
        """Provider assigned at time t (clamped to the first segment)."""
        starts = [s[0] for s in self.segments]
        i = bisect_right(starts, t) - 1
        return self.segments[max(i, 0)][1]


@dataclass(frozen=True)
class SwitchStats:
    """Switch count and realized improvement of one policy run."""

    switch_count: int
    improvement_vs: Mapping[str, float]
    mean_effective_rtt: float


@dataclass(frozen=True)
class TableRow:
    """One reactive-table row: a window size (or the oracle) and its outcome."""

    key: str
    window_s: float | None
    improvements: Mapping[str, float]
    switches: int
    mean_effective_rtt: float


def single_schedule(at: AlignedTraces, provider_id: str) -> Schedule:
    """Degenerate schedule: one provider across the whole timeline."""
    if provider_id not in at.providers:
        raise ValueError(f"provider {provider_id!r} not in aligned set")
    return Schedule(segments=((at.timeline[0], provider_id),),
                    span=(at.timeline[0], at.timeline[-1]))


def _window_means(at: AlignedTraces, window_ms: float,
                  timeout_rtt_ms: float) -> tuple[np.ndarray, np.ndarray]:
    starts = at.window_starts(window_ms)
    means = _kernels.window_mean_effective_rtt(
        at.rtt_matrix, starts, float(timeout_rtt_ms))
    return starts, means


def windowed_decide(at: AlignedTraces, window_s: float, start_provider: str,
                    timeout_rtt_ms: float = DEFAULT_TIMEOUT_RTT_MS) -> Schedule:
    """Reactive windowed schedule: window w's averages pick window w+1's provider.

    Per window each provider's RTT mean runs over its non-GAP ticks with
    TIMEOUT charged as timeout_rtt_ms; all-GAP providers are excluded.  At
    a boundary the argmin provider of the closed window wins; ties keep the
    current provider, as does a window in which every provider gapped (a
    recorded coverage hole).
    """
    if start_provider not in at.providers:
        raise ValueError(f"start provider {start_provider!r} not in aligned set")
    starts, means = _window_means(at, window_s * 1000.0, timeout_rtt_ms)
    n_win = means.shape[1]
    current = at.providers.index(start_provider)
    segments = [(at.timeline[0], start_provider)]
    holes = []
    for w in range(n_win - 1):
        col = means[:, w]
        if np.all(np.isnan(col)):
            holes.append(w)
            continue
        best = int(np.nanargmin(col))
        cur_val = col[current]
        if not math.isnan(cur_val) and cur_val <= col[best]:
            continue
        boundary = at.timeline[starts[w + 1]]
        segments.append((boundary, at.providers[best]))
        current = best
    return Schedule(segments=tuple(segments),
                    span=(at.timeline[0], at.timeline[-1]),
                    coverage_holes=tuple(holes))


def oracle_schedule(at: AlignedTraces, granularity_s: float = 10.0,
                    timeout_rtt_ms: float = DEFAULT_TIMEOUT_RTT_MS) -> Schedule:
    """Hindsight schedule: each window gets that window's argmin-mean provider.

    Ties prefer the incumbent to minimize switches; an all-GAP window keeps
    the incumbent and is recorded as a coverage hole.
    """
    starts, means = _window_means(at, granularity_s * 1000.0, timeout_rtt_ms)
    n_win = means.shape[1]
    segments: list[tuple[float, str]] = []
    holes = []
    current = -1
    for w in range(n_win):
        col = means[:, w]
        if np.all(np.isnan(col)):
            holes.append(w)
            chosen = current if current >= 0 else 0
        else:
            best_val = np.nanmin(col)
            if current >= 0 and not math.isnan(col[current]) \
                    and col[current] == best_val:
                chosen = current
            else:
                chosen = int(np.nanargmin(col))
        if chosen != current:
            segments.append((at.timeline[starts[w]], at.providers[chosen]))
            current = chosen
    return Schedule(segments=tuple(segments),
                    span=(at.timeline[0], at.timeline[-1]),
                    coverage_holes=tuple(holes))


def apply_schedule(sched: Schedule, at: AlignedTraces,
                   switch_delay_ms: float = 0.0,
                   composite_id: str = "dsm",
                   plt_model: PltModel = PltModel()) -> LinkTrace:
    """Composite trace a client following the schedule would observe.

    For switch_delay_ms after each switch the connection has not migrated
    yet, so ticks keep taking the previous provider's samples; this is a
    lagged lookup of the schedule.  A GAP cell surfaces as TIMEOUT (no
    usable measurement on the assigned link), and PLT is recomputed from
    the effective RTT and throughput.
    """
    if switch_delay_ms < 0:
        raise ValueError("switch_delay_ms must be >= 0")
    if sched.span != (at.timeline[0], at.timeline[-1]):
        raise ValueError(
            f"schedule span {sched.span} does not match timeline "
            f"({at.timeline[0]}, {at.timeline[-1]})")
    seg_starts = np.asarray([s[0] for s in sched.segments])
    lagged = np.asarray(at.timeline) - switch_delay_ms
    seg_idx = np.maximum(
        np.searchsorted(seg_starts, lagged, side="right") - 1, 0)
    samples = []
    for k, tick in enumerate(at.timeline):
        provider = sched.segments[seg_idx[k]][1]
        cell = at.cells[provider][k]
        if is_gap(cell):
            samples.append(Sample(t=tick, provider_id=composite_id,
                                  rtt=TIMEOUT, net_type=None))
            continue
        if is_timeout(cell.rtt):
            plt = None
        elif cell.dl_throughput is not None and cell.dl_throughput > 0:
            plt = plt_model_ms(cell.rtt, cell.dl_throughput, plt_model)
        else:
            plt = cell.plt
        samples.append(Sample(
            t=tick, provider_id=composite_id, rtt=cell.rtt,
            jitter=cell.jitter, loss=cell.loss,
            dl_throughput=cell.dl_throughput,
            ul_throughput=cell.ul_throughput, plt=plt,
            net_type=cell.net_type, lat=cell.lat, lon=cell.lon,
            cell_id=cell.cell_id))
    return LinkTrace(
        provider_id=composite_id, samples=tuple(samples), tick_ms=at.tick_ms,
        meta={"switches": sched.switch_count,
              "switch_delay_ms": switch_delay_ms})


def mean_effective_rtt(trace: LinkTrace,
                       timeout_rtt_ms: float = DEFAULT_TIMEOUT_RTT_MS) -> float:
    """Mean RTT with TIMEOUT charged as the availability bound."""
    if not trace.samples:
        raise ValueError("mean over an empty trace")
    total = 0.0
    for s in trace.samples:
        total += timeout_rtt_ms if is_timeout(s.rtt) else s.rtt
    return total / len(trace.samples)


def improvement(effective: LinkTrace, baseline: LinkTrace,
                timeout_rtt_ms: float = DEFAULT_TIMEOUT_RTT_MS) -> float:
    """Mean-RTT improvement of effective over baseline, in percent.

    Positive means the effective trace is better; the convention is
    antisymmetric around equal means.
    """
    if len(effective) != len(baseline) or any(
            a.t != b.t for a, b in zip(effective.samples, baseline.samples)):
        raise ValueError("effective and baseline must share the same timeline")
    mean_b = mean_effective_rtt(baseline, timeout_rtt_ms)
    mean_e = mean_effective_rtt(effective, timeout_rtt_ms)
    if mean_b == 0:
        raise ValueError("baseline mean RTT is zero")
    return 100.0 * (mean_b - mean_e) / mean_b


def reactive_table(at: AlignedTraces, windows_s: Sequence[float],
                   baselines: Sequence[str], switch_delay_ms: float = 0.0,
                   start_provider: str | None = None,
                   oracle_granularity_s: float = 10.0,
                   timeout_rtt_ms: float = DEFAULT_TIMEOUT_RTT_MS,
                   plt_model: PltModel = PltModel()) -> list[TableRow]:
    """Improvement/switch-count trade-off: one row per window size plus the oracle.

    Improvements are against each baseline provider's own composite trace;
    the switch delay applies identically to every row.
    """
    if not windows_s:
        raise ValueError("windows_s must be non-empty")
    if not baselines:
        raise ValueError("baselines must be non-empty")
    for b in baselines:
        if b not in at.providers:
            raise ValueError(f"baseline {b!r} not in aligned set")
    if start_provider is None:
        start_provider = at.providers[0]

    base_eff = {
        b: apply_schedule(single_schedule(at, b), at, switch_delay_ms,
                          composite_id=b, plt_model=plt_model)
        for b in baselines}

    def row(key: str, window_s: float | None, sched: Schedule) -> TableRow:
        eff = apply_schedule(sched, at, switch_delay_ms, plt_model=plt_model)
        return TableRow(
            key=key, window_s=window_s,
            improvements={
                b: improvement(eff, base_eff[b], timeout_rtt_ms)
                for b in baselines},
            switches=sched.switch_count,
            mean_effective_rtt=mean_effective_rtt(eff, timeout_rtt_ms))

    rows = [
        row(_format_window(w), w,
            windowed_decide(at, w, start_provider, timeout_rtt_ms))
        for w in windows_s]
    rows.append(row("oracle", None,
                    oracle_schedule(at, oracle_granularity_s, timeout_rtt_ms)))
    return rows


def switch_stats(sched: Schedule, effective: LinkTrace,
                 baselines_eff: Mapping[str, LinkTrace],
                 timeout_rtt_ms: float = DEFAULT_TIMEOUT_RTT_MS) -> SwitchStats:
    """Bundle a schedule's switch count with its realized improvements."""
    return SwitchStats(
        switch_count=sched.switch_count,
        improvement_vs={
            b: improvement(effective, base, timeout_rtt_ms)
            for b, base in baselines_eff.items()},
        mean_effective_rtt=mean_effective_rtt(effective, timeout_rtt_ms))


def _format_window(window_s: float) -> str:
    return str(int(window_s)) if float(window_s).is_integer() else str(window_s)
