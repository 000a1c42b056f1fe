"""Shared domain types and the derived-metric models.

Everything in this module is an immutable value object or a pure function;
there is no I/O and no hidden state, so all of it is safe to call from
concurrent workers.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence, Union

from .errors import MissingMetricError


class _Timeout:
    """Singleton marker for a probe that never completed within its bound.

    A distinguished object rather than a sentinel number, so aggregations
    cannot silently average timeouts into RTT statistics.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TIMEOUT"

    def __reduce__(self):
        return (_Timeout, ())

    def __deepcopy__(self, memo):
        return self

    def __copy__(self):
        return self


TIMEOUT = _Timeout()

Rtt = Union[float, _Timeout]


def is_timeout(value: object) -> bool:
    return isinstance(value, _Timeout)


class NetType(Enum):
    LTE = "LTE"
    HSPA_PLUS = "HSPA_PLUS"
    OTHER = "OTHER"
    NONE = "NONE"


class Metric(Enum):
    """Per-sample indicators that can be tested against a threshold."""

    RTT = "rtt"
    JITTER = "jitter"
    LOSS = "loss"
    DL_THROUGHPUT = "dl_throughput"
    UL_THROUGHPUT = "ul_throughput"
    PLT = "plt"
    AVAILABILITY = "availability"


class Transport(Enum):
    TCP_LIKE = "TCP_LIKE"
    UDP_LIKE = "UDP_LIKE"


@dataclass(frozen=True)
class Sample:
    """One timestamped per-provider measurement.

    ``t`` is milliseconds since scenario start.  ``rtt`` is either a finite
    millisecond value or the TIMEOUT marker; the remaining indicators are
    optional and ``None`` when the capture did not carry them.
    """

    t: float
    provider_id: str
    rtt: Rtt
    jitter: float | None = None
    loss: float | None = None
    dl_throughput: float | None = None
    ul_throughput: float | None = None
    plt: float | None = None
    net_type: NetType | None = None
    lat: float | None = None
    lon: float | None = None
    cell_id: str | None = None

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"sample timestamp must be >= 0, got {self.t}")
        if not is_timeout(self.rtt) and not self.rtt >= 0:
            raise ValueError(f"rtt must be >= 0 or TIMEOUT, got {self.rtt!r}")
        if self.loss is not None and not 0.0 <= self.loss <= 1.0:
            raise ValueError(f"loss must be in [0, 1], got {self.loss}")
        for name in ("dl_throughput", "ul_throughput"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be >= 0, got {v}")


@dataclass(frozen=True)
class Thresholds:
    """Benchmark vector defining per-metric pass/fail.

    Defaults are the Day-1 style benchmarks: 25/50 Mbps up/down, zero loss,
    100 ms RTT, 20 ms jitter, 1 s page load, 10 s availability bound.
    """

    uplink_kbps: float = 25_000.0
    downlink_kbps: float = 50_000.0
    loss_max: float = 0.0
    rtt_ms: float = 100.0
    jitter_ms: float = 20.0
    plt_ms: float = 1000.0
    availability_rtt_ms: float = 10_000.0

    def __post_init__(self):
        for name in ("uplink_kbps", "downlink_kbps", "rtt_ms", "jitter_ms",
                     "plt_ms", "availability_rtt_ms"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if not 0.0 <= self.loss_max <= 1.0:
            raise ValueError(f"loss_max must be in [0, 1], got {self.loss_max}")
        if self.rtt_ms >= self.availability_rtt_ms:
            raise ValueError("rtt_ms must be < availability_rtt_ms")


@dataclass(frozen=True)
class ProbeSpec:
    """Shape of one probe burst: packet size, count, cadence, timeout."""

    packet_size_bytes: int
    packets_per_burst: int = 10
    burst_interval_s: float = 60.0
    timeout_s: float = 60.0
    transport: Transport = Transport.TCP_LIKE

    def __post_init__(self):
        if self.packet_size_bytes < 1:
            raise ValueError("packet_size_bytes must be >= 1")
        if self.packets_per_burst < 1:
            raise ValueError("packets_per_burst must be >= 1")
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be > 0")


#: The canonical probe payload sizes exercised in the TCP/UDP experiments.
CANONICAL_PACKET_SIZES = (200, 1024, 2048, 4096)


@dataclass(frozen=True)
class PltModel:
    """Page-load-time model: handshake round trips plus serialization delay.

    Default page size is the 1.3 MB reference page; two handshake RTTs
    approximate connection setup plus request/response.  DNS time is not
    modeled.
    """

    page_bytes: int = 1_363_149
    handshake_rtts: float = 2.0

    def __post_init__(self):
        if self.page_bytes < 1:
            raise ValueError("page_bytes must be >= 1")
        if self.handshake_rtts < 0:
            raise ValueError("handshake_rtts must be >= 0")


@dataclass(frozen=True)
class LinkTrace:
    """Time-ordered samples for one provider; the unit of replay/synthesis.

    Defined here because every module consumes traces; re-exported by the
    links module, which owns trace production.
    """

    provider_id: str
    samples: tuple[Sample, ...]
    tick_ms: float = 3000.0
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.tick_ms <= 0:
            raise ValueError("tick_ms must be > 0")
        prev = None
        for s in self.samples:
            if s.provider_id != self.provider_id:
                raise ValueError(
                    f"sample provider {s.provider_id!r} != trace provider "
                    f"{self.provider_id!r}")
            if prev is not None and s.t <= prev:
                raise ValueError(
                    f"sample timestamps must be strictly increasing "
                    f"({s.t} after {prev})")
            prev = s.t

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class BurstStats:
    """Aggregates of one probe burst; median/jitter absent when unmeasurable."""

    rtt_median_ms: float | None
    jitter_ms: float | None
    loss: float


JITTER_WINDOW = 5


def jitter_from_window(rtts: Sequence[float]) -> float:
    """Jitter over a 5-RTT window: mean absolute successive difference.

    Zero iff the window is constant.  TIMEOUT values are rejected; the
    caller is expected to drop windows containing them.
    """
    if len(rtts) != JITTER_WINDOW:
        raise ValueError(
            f"jitter window needs exactly {JITTER_WINDOW} RTTs, got {len(rtts)}")
    if any(is_timeout(r) for r in rtts):
        raise ValueError("jitter window contains TIMEOUT; drop the window")
    diffs = [abs(rtts[i] - rtts[i - 1]) for i in range(1, JITTER_WINDOW)]
    return sum(diffs) / (JITTER_WINDOW - 1)


def plt_model_ms(rtt: float, dl_throughput_kbps: float,
                 model: PltModel = PltModel()) -> float:
    """Modeled page load time in ms for a given RTT and downlink speed.

    handshake_rtts * rtt + serialization delay of the page over the link
    (page_bytes * 8 bits at dl kilobits/second yields milliseconds).
    """
    if is_timeout(rtt):
        raise ValueError("cannot model PLT for a timed-out RTT")
    if dl_throughput_kbps <= 0:
        raise ValueError(f"dl_throughput_kbps must be > 0, got {dl_throughput_kbps}")
    return model.handshake_rtts * rtt + model.page_bytes * 8 / dl_throughput_kbps


def meets_threshold(sample: Sample, th: Thresholds, metric: Metric) -> bool:
    """Binary gate: does the sample pass the threshold for the metric?

    Boundaries are inclusive on the passing side.  RTT-like metrics pass at
    value <= threshold, throughputs at value >= threshold, loss at
    value <= loss_max.  Availability passes iff the RTT is not TIMEOUT and
    <= the availability bound; TIMEOUT fails every RTT-based test.
    """
    if metric is Metric.AVAILABILITY:
        return not is_timeout(sample.rtt) and sample.rtt <= th.availability_rtt_ms
    if metric is Metric.RTT:
        return not is_timeout(sample.rtt) and sample.rtt <= th.rtt_ms
    if metric is Metric.JITTER:
        value = sample.jitter
        if value is None:
            raise MissingMetricError("sample carries no jitter")
        return value <= th.jitter_ms
    if metric is Metric.LOSS:
        value = sample.loss
        if value is None:
            raise MissingMetricError("sample carries no loss")
        return value <= th.loss_max
    if metric is Metric.DL_THROUGHPUT:
        value = sample.dl_throughput
        if value is None:
            raise MissingMetricError("sample carries no dl_throughput")
        return value >= th.downlink_kbps
    if metric is Metric.UL_THROUGHPUT:
        value = sample.ul_throughput
        if value is None:
            raise MissingMetricError("sample carries no ul_throughput")
        return value >= th.uplink_kbps
    if metric is Metric.PLT:
        value = sample.plt
        if value is None:
            raise MissingMetricError("sample carries no plt")
        return value <= th.plt_ms
    raise ValueError(f"unknown metric {metric!r}")


def burst_stats(outcomes: Sequence[Rtt], spec: ProbeSpec) -> BurstStats:
    """Per-burst statistics from the per-packet RTT-or-TIMEOUT outcomes.

    Loss is the timeout fraction.  The RTT median covers surviving packets
    (absent when all are lost); jitter is computed over the first five
    surviving RTTs (absent when fewer than five survive).
    """
    if not outcomes:
        raise ValueError("empty burst outcome list")
    if len(outcomes) != spec.packets_per_burst:
        raise ValueError(
            f"expected {spec.packets_per_burst} outcomes per burst, "
            f"got {len(outcomes)}")
    survivors = [r for r in outcomes if not is_timeout(r)]
    loss = (len(outcomes) - len(survivors)) / len(outcomes)
    median = statistics.median(survivors) if survivors else None
    jitter = None
    if len(survivors) >= JITTER_WINDOW:
        jitter = jitter_from_window(survivors[:JITTER_WINDOW])
    return BurstStats(rtt_median_ms=median, jitter_ms=jitter, loss=loss)
