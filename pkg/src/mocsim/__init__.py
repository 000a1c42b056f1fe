"""mocsim: redundant multi-operator connectivity simulator and analytics.

Generates or replays per-provider link-quality traces, runs demand-side,
supply-side, and hindsight-oracle switching policies over them, and
computes availability/performance reliability metrics, redundancy curves,
and switching trade-off tables.
"""

__version__ = "0.1.0"

from .core import (BurstStats, LinkTrace, Metric, NetType, PltModel,
                   ProbeSpec, Sample, Thresholds, TIMEOUT, Transport,
                   burst_stats, is_timeout, jitter_from_window,
                   meets_threshold, plt_model_ms)
from .links import (GAP, AlignedTraces, SyntheticLinkSpec, align,
                    generate_trace, is_gap, ssm_transform)
from .reliability import (CurveRow, HazardParams, RedundancyParams,
                          ReliabilityReport, WeibullParams,
                          cumulative_failure, dsm_q_s, empirical_q_s,
                          empirical_r_s, harmonic_number, hazard_congestion,
                          linear_reliability, mttf, parallel_reliability,
                          performance_constrained_q, redundancy_curves,
                          trace_report, weibull_availability,
                          weibull_cumulative_hazard)
from .switcher import (OraclePolicy, Policy, Schedule, SinglePolicy,
                       SwitchStats, TableRow, WindowedDsmPolicy,
                       apply_schedule, improvement, mean_effective_rtt,
                       oracle_schedule, reactive_table, single_schedule,
                       windowed_decide)
