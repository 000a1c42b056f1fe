"""Reliability math and trace-level reliability metrics.

Covers the congestion hazard rate, Weibull availability density, cumulative
failure integration, gated performance-constrained reliability, n-redundancy
reliability with its MTTF, and the empirical R_s/Q_s counterparts computed
over measurement traces (including the any-network DSM combination).

All functions are pure; parameter objects are immutable.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence, Union

from .core import LinkTrace, Metric, Sample, Thresholds, meets_threshold
from .errors import AlignmentError, FailureRateClampedWarning, MissingMetricError

if TYPE_CHECKING:
    from .links import AlignedTraces


@dataclass(frozen=True)
class HazardParams:
    """Congestion hazard model: rate per inherent failure and traffic-density change.

    phi is the hazard rate per inherent failure (> 0, 1/time); p is the
    dimensionless traffic-density change rate in (-1, 1).  Evaluation time
    is passed per call.
    """

    phi: float
    p: float

    def __post_init__(self):
        if self.phi <= 0:
            raise ValueError(f"phi must be > 0, got {self.phi}")
        if not -1.0 < self.p < 1.0:
            raise ValueError(f"p must be in (-1, 1), got {self.p}")


@dataclass(frozen=True)
class WeibullParams:
    """Weibull shape/scale for the connectivity-availability process."""

    beta: float
    eta: float

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if self.eta <= 0:
            raise ValueError(f"eta must be > 0, got {self.eta}")


@dataclass(frozen=True)
class RedundancyParams:
    """Uniform per-network failure rate and the number of parallel networks."""

    lam: float
    n: int

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")


@dataclass(frozen=True)
class ReliabilityReport:
    """Trace-level reliability summary for one provider or policy output."""

    r_s: float
    q_s: Mapping[Metric, float]
    provider_set: tuple[str, ...]
    mttf: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.r_s <= 1.0:
            raise ValueError(f"r_s must be in [0, 1], got {self.r_s}")
        for metric, value in self.q_s.items():
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"q_s[{metric.value}] must be in [0, 1]")
            if value > self.r_s:
                raise ValueError(
                    f"q_s[{metric.value}]={value} exceeds r_s={self.r_s}")


def hazard_congestion(t: float, hp: HazardParams) -> float:
    """Instantaneous congestion hazard contribution: t * phi * e^(-p)."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return t * hp.phi * math.exp(-hp.p)


def weibull_availability(t: float, wp: WeibullParams) -> float:
    """Weibull probability density (beta/eta)(t/eta)^(beta-1) e^(-(t/eta)^beta).

    At t=0 the density diverges for beta < 1; that is reported as a domain
    error rather than returning infinity.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t == 0 and wp.beta < 1:
        raise ValueError("Weibull density diverges at t=0 for beta < 1")
    x = t / wp.eta
    return (wp.beta / wp.eta) * x ** (wp.beta - 1.0) * math.exp(-(x ** wp.beta))


def weibull_cumulative_hazard(t: float, wp: WeibullParams) -> float:
    """Cumulative Weibull hazard H(t) = (t/eta)^beta; used for discretization."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return (t / wp.eta) ** wp.beta


def cumulative_failure(hp: HazardParams, wp: WeibullParams,
                       horizon: float, step: float) -> float:
    """Cumulative failure rate: trapezoidal integral of Y(t)+Z(t) over [0, horizon].

    The step is honored approximately: the grid is uniform with the largest
    spacing <= step that divides the horizon evenly.  A result above 1 is
    clamped to 1 with a FailureRateClampedWarning (not silently).
    """
    if horizon <= 0:
        raise ValueError(f"horizon must be > 0, got {horizon}")
    if step <= 0:
        raise ValueError(f"step must be > 0, got {step}")
    if step > horizon:
        raise ValueError("step must be <= horizon")

    n = math.ceil(horizon / step)
    h = horizon / n

    def integrand(t: float) -> float:
        return hazard_congestion(t, hp) + weibull_availability(t, wp)

    total = 0.5 * (integrand(0.0) + integrand(horizon))
    for i in range(1, n):
        total += integrand(i * h)
    raw = total * h
    if raw > 1.0:
        warnings.warn(
            f"cumulative failure rate {raw:.6g} clamped to 1.0",
            FailureRateClampedWarning, stacklevel=2)
        return 1.0
    return raw


def linear_reliability(lam: float) -> float:
    """The 1 - lambda reliability form, clamped to [0, 1].

    Kept alongside the survival form because both appear in the model; all
    redundancy math uses exp(-lambda).
    """
    return min(1.0, max(0.0, 1.0 - lam))


def performance_constrained_q(w: bool, r: float) -> float:
    """Gated reliability Q = W * R: r when the gate passes, else 0."""
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"r must be in [0, 1], got {r}")
    return r if w else 0.0


def parallel_reliability(rp: RedundancyParams) -> float:
    """Reliability of n parallel redundant networks: 1 - (1 - e^(-lam))^n."""
    return 1.0 - (1.0 - math.exp(-rp.lam)) ** rp.n


def harmonic_number(n: int) -> Fraction:
    """H_n = sum_{k=1..n} 1/k as an exact rational."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def mttf(rp: RedundancyParams) -> float:
    """Mean time to fail of the n-redundant system: H_n / lambda.

    Integrating the parallel reliability over [0, inf) gives the harmonic
    numbers {1, 3/2, 11/6, 25/12, ...} over lambda.  lambda = 0 means the
    system never fails; that is signaled by returning math.inf, not by an
    exception.
    """
    if rp.lam == 0:
        return math.inf
    return float(harmonic_number(rp.n)) / rp.lam


@dataclass(frozen=True)
class CurveRow:
    """One (lambda, n) point of the redundancy curves."""

    lam: float
    n: int
    reliability: float
    mttf_times_lambda: float


def redundancy_curves(lambda_grid: Sequence[float], n_max: int) -> list[CurveRow]:
    """Dense reliability/MTTF table over a failure-rate grid, for plotting.

    MTTF is reported as MTTF*lambda (= H_n), which is independent of lambda.
    """
    if not lambda_grid:
        raise ValueError("lambda_grid must be non-empty")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    for lam in lambda_grid:
        if not 0.0 < lam <= 1.0:
            raise ValueError(f"lambda values must be in (0, 1], got {lam}")
    rows = []
    for lam in lambda_grid:
        for n in range(1, n_max + 1):
            rp = RedundancyParams(lam=lam, n=n)
            rows.append(CurveRow(
                lam=lam, n=n,
                reliability=parallel_reliability(rp),
                mttf_times_lambda=float(harmonic_number(n))))
    return rows


def _gated_pass(sample: Sample, th: Thresholds, metric: Metric) -> tuple[bool, bool]:
    """(passes, metric_present) with the availability gate of Q = W * R applied.

    A sample that is unavailable cannot pass any performance threshold; a
    sample missing the metric fails but is tracked separately so callers can
    distinguish all-absent traces.
    """
    try:
        ok = meets_threshold(sample, th, metric)
    except MissingMetricError:
        return False, False
    return ok and meets_threshold(sample, th, Metric.AVAILABILITY), True


def empirical_r_s(trace: LinkTrace, th: Thresholds) -> float:
    """Availability reliability: fraction of samples usable at all."""
    if not trace.samples:
        raise ValueError("empirical_r_s over an empty trace")
    hits = sum(
        1 for s in trace.samples if meets_threshold(s, th, Metric.AVAILABILITY))
    return hits / len(trace.samples)


def empirical_q_s(trace: LinkTrace, th: Thresholds, metric: Metric) -> float:
    """Performance-constrained reliability: fraction of samples passing the metric.

    The availability gate applies (an unavailable sample never passes), so
    q_s <= r_s holds for every metric.  Samples missing the metric count as
    failing; a trace carrying the metric nowhere raises MissingMetricError.
    """
    if not trace.samples:
        raise ValueError("empirical_q_s over an empty trace")
    hits = 0
    seen = False
    for s in trace.samples:
        ok, present = _gated_pass(s, th, metric)
        seen = seen or present
        hits += ok
    if not seen:
        raise MissingMetricError(
            f"metric {metric.value!r} absent from every sample")
    return hits / len(trace.samples)


AlignedInput = Union["AlignedTraces", Sequence[LinkTrace]]


def dsm_q_s(traces: AlignedInput, th: Thresholds, metric: Metric) -> float:
    """Any-network Q_s: fraction of ticks where at least one provider passes.

    Accepts an AlignedTraces matrix (gaps fail all thresholds) or a set of
    traces already sharing identical timestamps; anything else must go
    through links.align first.
    """
    rows = _aligned_rows(traces)
    if not rows:
        raise ValueError("dsm_q_s over an empty timeline")
    hits = 0
    seen = False
    for row in rows:
        row_ok = False
        for cell in row:
            if cell is None:
                continue
            ok, present = _gated_pass(cell, th, metric)
            seen = seen or present
            row_ok = row_ok or ok
        hits += row_ok
    if not seen:
        raise MissingMetricError(
            f"metric {metric.value!r} absent from every aligned sample")
    return hits / len(rows)


def _aligned_rows(traces: AlignedInput) -> list[tuple[Sample | None, ...]]:
    """Per-tick rows of samples (None = gap) from either accepted input form."""
    cells = getattr(traces, "cells", None)
    if cells is not None:
        from .links import is_gap  # deferred: links imports this module
        providers = traces.providers
        return [
            tuple(None if is_gap(cells[p][i]) else cells[p][i]
                  for p in providers)
            for i in range(len(traces.timeline))
        ]
    traces = list(traces)
    if not traces:
        raise AlignmentError("need at least one trace")
    timelines = {tuple(s.t for s in tr.samples) for tr in traces}
    if len(timelines) != 1:
        raise AlignmentError(
            "traces do not share identical timestamps; align them first")
    return list(zip(*(tr.samples for tr in traces)))


def trace_report(trace: LinkTrace, th: Thresholds,
                 metrics: Iterable[Metric] | None = None) -> ReliabilityReport:
    """ReliabilityReport for one trace: R_s, per-metric Q_s, estimated MTTF.

    Metrics absent from the whole trace are skipped.  The MTTF estimate
    treats the observed unavailable fraction as the single-network failure
    rate; a fully available trace reports no finite MTTF.
    """
    r_s = empirical_r_s(trace, th)
    q_s: dict[Metric, float] = {}
    wanted = list(metrics) if metrics is not None else [
        m for m in Metric if m is not Metric.AVAILABILITY]
    for metric in wanted:
        try:
            q_s[metric] = empirical_q_s(trace, th, metric)
        except MissingMetricError:
            continue
    lam_hat = 1.0 - r_s
    est = mttf(RedundancyParams(lam=lam_hat, n=1)) if lam_hat > 0 else math.inf
    return ReliabilityReport(
        r_s=r_s, q_s=q_s,
        provider_set=(trace.provider_id,),
        mttf=None if math.isinf(est) else est)
