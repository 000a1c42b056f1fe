"""Reliability formulas against closed forms and quadrature oracles."""

import math
from fractions import Fraction

import numpy as np
import pytest

from mocsim import (HazardParams, Metric, RedundancyParams,
                    ReliabilityReport, Thresholds, WeibullParams,
                    cumulative_failure, dsm_q_s, empirical_q_s, empirical_r_s,
                    harmonic_number, hazard_congestion, linear_reliability,
                    mttf, parallel_reliability, performance_constrained_q,
                    redundancy_curves, trace_report, weibull_availability,
                    weibull_cumulative_hazard)
from mocsim.errors import (AlignmentError, FailureRateClampedWarning,
                           MissingMetricError)

from conftest import make_trace


def expansion(lam: float, n: int) -> float:
    """The printed closed-form expansions for up to four parallel networks."""
    e = math.exp(-lam)
    return {
        1: e,
        2: 2 * e - e**2,
        3: 3 * e - 3 * e**2 + e**3,
        4: 4 * e - 6 * e**2 + 4 * e**3 - e**4,
    }[n]


class TestHazardCongestion:
    hp = HazardParams(phi=0.5, p=0.0)

    def test_zero_at_origin(self):
        assert hazard_congestion(0, self.hp) == 0

    def test_unit_case(self):
        assert hazard_congestion(2, self.hp) == pytest.approx(1.0)

    def test_exponential_damping(self):
        hp = HazardParams(phi=1.0, p=0.5)
        assert hazard_congestion(1, hp) == pytest.approx(math.exp(-0.5))

    def test_linear_in_time(self):
        assert hazard_congestion(6, self.hp) == pytest.approx(
            3 * hazard_congestion(2, self.hp))

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            hazard_congestion(-1, self.hp)

    def test_param_bounds(self):
        with pytest.raises(ValueError):
            HazardParams(phi=0, p=0)
        with pytest.raises(ValueError):
            HazardParams(phi=1, p=1.0)


class TestWeibull:
    def test_exponential_special_case(self):
        wp = WeibullParams(beta=1, eta=1)
        assert weibull_availability(0, wp) == pytest.approx(1.0)
        assert weibull_availability(1, wp) == pytest.approx(math.exp(-1))

    def test_density_integrates_to_one(self):
        # independent trapezoidal oracle on a fine grid
        wp = WeibullParams(beta=2, eta=1)
        ts = np.linspace(0, 10, 200_001)
        ys = [weibull_availability(t, wp) for t in ts]
        assert np.trapezoid(ys, ts) == pytest.approx(1.0, abs=1e-6)

    def test_divergent_origin_reported(self):
        with pytest.raises(ValueError, match="diverges"):
            weibull_availability(0, WeibullParams(beta=0.5, eta=1))

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            weibull_availability(-0.1, WeibullParams(beta=1, eta=1))

    def test_cumulative_hazard(self):
        wp = WeibullParams(beta=2, eta=10)
        assert weibull_cumulative_hazard(5, wp) == pytest.approx(0.25)


class TestCumulativeFailure:
    def test_vanishing_integrand(self):
        hp = HazardParams(phi=1e-12, p=0.0)
        wp = WeibullParams(beta=1, eta=1e12)
        assert cumulative_failure(hp, wp, horizon=10, step=0.1) == \
            pytest.approx(0.0, abs=1e-9)

    def test_matches_closed_form_for_linear_hazard(self):
        # hazard-only: integral of t*phi over [0, 10] = phi * 100 / 2 = 0.05
        hp = HazardParams(phi=0.001, p=0.0)
        wp = WeibullParams(beta=1, eta=1e12)  # negligible contribution
        assert cumulative_failure(hp, wp, horizon=10, step=0.5) == \
            pytest.approx(0.05, abs=1e-9)

    def test_step_halving_converges(self):
        hp = HazardParams(phi=0.002, p=0.3)
        wp = WeibullParams(beta=1.5, eta=50)
        a = cumulative_failure(hp, wp, horizon=20, step=0.01)
        b = cumulative_failure(hp, wp, horizon=20, step=0.005)
        assert abs(a - b) < 1e-6

    def test_monotone_in_horizon(self):
        hp = HazardParams(phi=0.01, p=0.0)
        wp = WeibullParams(beta=1.2, eta=100)
        values = [cumulative_failure(hp, wp, horizon=h, step=0.05)
                  for h in (1, 2, 5, 10)]
        assert values == sorted(values)

    def test_clamps_with_warning(self):
        hp = HazardParams(phi=10.0, p=0.0)
        wp = WeibullParams(beta=1, eta=1e9)
        with pytest.warns(FailureRateClampedWarning):
            assert cumulative_failure(hp, wp, horizon=10, step=0.1) == 1.0

    def test_bad_bounds_rejected(self):
        hp = HazardParams(phi=1, p=0)
        wp = WeibullParams(beta=1, eta=1)
        with pytest.raises(ValueError):
            cumulative_failure(hp, wp, horizon=0, step=0.1)
        with pytest.raises(ValueError):
            cumulative_failure(hp, wp, horizon=1, step=0)
        with pytest.raises(ValueError):
            cumulative_failure(hp, wp, horizon=1, step=2)


class TestGatedQ:
    @pytest.mark.parametrize("w,r,expected", [
        (True, 0.9, 0.9), (False, 0.9, 0.0), (True, 0.0, 0.0)])
    def test_gate(self, w, r, expected):
        assert performance_constrained_q(w, r) == expected

    def test_domain(self):
        with pytest.raises(ValueError):
            performance_constrained_q(True, 1.2)

    def test_result_is_zero_or_r(self, rng):
        for _ in range(100):
            r = float(rng.random())
            w = bool(rng.integers(0, 2))
            assert performance_constrained_q(w, r) in (0.0, r)


class TestParallelReliability:
    def test_zero_failure_rate(self):
        for n in range(1, 6):
            assert parallel_reliability(RedundancyParams(lam=0, n=n)) == 1.0

    def test_single_network_is_survival(self):
        assert parallel_reliability(RedundancyParams(lam=0.21, n=1)) == \
            pytest.approx(math.exp(-0.21))

    def test_four_networks_at_ofcom_lower_bound(self):
        expected = 1 - (1 - math.exp(-0.21)) ** 4
        assert parallel_reliability(RedundancyParams(lam=0.21, n=4)) == \
            pytest.approx(expected)
        assert expected == pytest.approx(0.99871, abs=5e-6)

    def test_matches_printed_expansions(self):
        for lam in np.linspace(0.0, 1.0, 101):
            for n in range(1, 5):
                got = parallel_reliability(RedundancyParams(lam=float(lam), n=n))
                assert abs(got - expansion(float(lam), n)) < 1e-12

    def test_monotone_in_n(self, rng):
        for _ in range(50):
            lam = float(rng.uniform(0, 1))
            values = [parallel_reliability(RedundancyParams(lam=lam, n=n))
                      for n in range(1, 7)]
            assert values == sorted(values)

    def test_linear_form_clamped(self):
        assert linear_reliability(0.21) == pytest.approx(0.79)
        assert linear_reliability(1.5) == 0.0
        assert linear_reliability(-0.5) == 1.0


class TestMttf:
    def test_printed_values(self):
        assert mttf(RedundancyParams(lam=1, n=3)) == pytest.approx(11 / 6)
        assert mttf(RedundancyParams(lam=2, n=1)) == pytest.approx(0.5)

    def test_harmonic_numbers_exact(self):
        assert harmonic_number(1) == 1
        assert harmonic_number(2) == Fraction(3, 2)
        assert harmonic_number(3) == Fraction(11, 6)
        assert harmonic_number(4) == Fraction(25, 12)

    def test_quadrature_oracle(self):
        # MTTF = integral of 1 - (1 - e^(-lam t))^n over [0, inf)
        lam, n = 1.0, 4
        ts = np.linspace(0, 50 / lam, 400_001)
        rel = 1 - (1 - np.exp(-lam * ts)) ** n
        numeric = np.trapezoid(rel, ts)
        assert mttf(RedundancyParams(lam=lam, n=n)) == \
            pytest.approx(numeric, rel=1e-3)

    def test_infinite_for_zero_rate(self):
        assert mttf(RedundancyParams(lam=0, n=2)) == math.inf

    def test_monotone_in_n(self):
        values = [mttf(RedundancyParams(lam=0.1, n=n)) for n in range(1, 8)]
        assert values == sorted(values)


class TestRedundancyCurves:
    def test_shape_and_lambda_ordering(self):
        rows = redundancy_curves([0.02, 0.21], n_max=4)
        assert len(rows) == 8
        r_low = next(r for r in rows if r.lam == 0.02 and r.n == 4)
        r_high = next(r for r in rows if r.lam == 0.21 and r.n == 4)
        assert r_low.reliability > r_high.reliability

    def test_rows_match_expansion(self):
        for row in redundancy_curves(list(np.linspace(0.02, 0.21, 25)), 4):
            assert row.reliability == pytest.approx(
                expansion(row.lam, row.n), abs=1e-12)

    def test_mttf_column_is_harmonic(self):
        rows = redundancy_curves([0.05], n_max=4)
        assert [r.mttf_times_lambda for r in rows] == pytest.approx(
            [1, 3 / 2, 11 / 6, 25 / 12])

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            redundancy_curves([], 4)
        with pytest.raises(ValueError):
            redundancy_curves([0.0], 4)
        with pytest.raises(ValueError):
            redundancy_curves([1.5], 4)
        with pytest.raises(ValueError):
            redundancy_curves([0.1], 0)


class TestEmpiricalReliability:
    th = Thresholds()

    def test_all_available(self):
        assert empirical_r_s(make_trace([50] * 20), self.th) == 1.0

    def test_timeout_fraction(self):
        rtts = [50.0] * 97 + ["T"] * 3
        assert empirical_r_s(make_trace(rtts), self.th) == pytest.approx(0.97)

    def test_all_timeout(self):
        assert empirical_r_s(make_trace(["T"] * 5), self.th) == 0.0

    def test_empty_trace_rejected(self):
        from mocsim import LinkTrace
        empty = LinkTrace(provider_id="np1", samples=())
        with pytest.raises(ValueError, match="empty"):
            empirical_r_s(empty, self.th)
        with pytest.raises(ValueError, match="empty"):
            empirical_q_s(empty, self.th, Metric.RTT)

    def test_definitional_count(self):
        rtts = [80.0] * 68 + [200.0] * 32
        assert empirical_q_s(make_trace(rtts), self.th, Metric.RTT) == \
            pytest.approx(0.68)

    def test_all_fail(self):
        assert empirical_q_s(make_trace([500.0] * 10), self.th,
                             Metric.RTT) == 0.0

    def test_availability_metric_reproduces_r_s(self):
        rtts = [50, 200, "T", 9_000, 12_000, 80]
        tr = make_trace(rtts)
        assert empirical_q_s(tr, self.th, Metric.AVAILABILITY) == \
            empirical_r_s(tr, self.th)

    def test_q_s_never_exceeds_r_s(self, rng):
        for _ in range(50):
            rtts = [
                "T" if rng.random() < 0.2 else float(rng.uniform(10, 15_000))
                for _ in range(40)]
            tr = make_trace(rtts)
            assert empirical_q_s(tr, self.th, Metric.RTT) <= \
                empirical_r_s(tr, self.th)

    def test_availability_gate_bounds_other_metrics(self):
        # a fast downlink on a timed-out sample cannot count as passing
        tr = make_trace(["T", 50.0], dl_throughput=[60_000.0, 60_000.0])
        assert empirical_q_s(tr, self.th, Metric.DL_THROUGHPUT) == 0.5
        assert empirical_q_s(tr, self.th, Metric.DL_THROUGHPUT) <= \
            empirical_r_s(tr, self.th)

    def test_missing_metric_everywhere(self):
        with pytest.raises(MissingMetricError):
            empirical_q_s(make_trace([50.0] * 3), self.th, Metric.PLT)


class TestDsmQs:
    th = Thresholds()

    def test_complementary_providers_cover_everything(self):
        a = make_trace([50, 500], provider="a")
        b = make_trace([500, 50], provider="b")
        assert dsm_q_s([a, b], self.th, Metric.RTT) == 1.0

    def test_single_trace_degenerates_to_empirical(self):
        tr = make_trace([50, 120, 90, "T", 101])
        assert dsm_q_s([tr], self.th, Metric.RTT) == \
            empirical_q_s(tr, self.th, Metric.RTT)

    def test_matches_bruteforce_or(self, rng):
        from mocsim import meets_threshold
        for _ in range(20):
            n = 30
            traces = []
            for pid in ("a", "b"):
                rtts = ["T" if rng.random() < 0.15 else
                        float(rng.uniform(20, 300)) for _ in range(n)]
                traces.append(make_trace(rtts, provider=pid))
            got = dsm_q_s(traces, self.th, Metric.RTT)
            hits = 0
            for i in range(n):
                hits += any(
                    meets_threshold(tr.samples[i], self.th, Metric.RTT)
                    for tr in traces)
            assert got == pytest.approx(hits / n)

    def test_dominates_individual_providers(self, rng):
        for _ in range(20):
            traces = [
                make_trace([float(rng.uniform(20, 300)) for _ in range(25)],
                           provider=p)
                for p in ("a", "b", "c")]
            combined = dsm_q_s(traces, self.th, Metric.RTT)
            for tr in traces:
                assert combined >= empirical_q_s(tr, self.th, Metric.RTT)

    def test_monotone_under_inclusion(self, rng):
        traces = [
            make_trace([float(rng.uniform(20, 300)) for _ in range(25)],
                       provider=p)
            for p in ("a", "b", "c")]
        q2 = dsm_q_s(traces[:2], self.th, Metric.RTT)
        q3 = dsm_q_s(traces, self.th, Metric.RTT)
        assert q3 >= q2

    def test_accepts_aligned_matrix_and_gaps_fail(self):
        from dataclasses import replace
        from mocsim import align
        a = make_trace([50.0] * 10, provider="a")
        ticks = [0, 1, 2, 3, 4, 5, 6, 9]  # hole leaves gaps at ticks 7-8
        b = make_trace([60.0] * len(ticks), provider="b")
        b = replace(b, samples=tuple(
            replace(s, t=k * 3000.0) for s, k in zip(b.samples, ticks)))
        at = align([a, b], tick_ms=3000.0, staleness_bound_ms=0.0)
        assert dsm_q_s(at, self.th, Metric.RTT) == 1.0
        # only the gappy provider: gap ticks fail outright
        at_b = align([b], tick_ms=3000.0, staleness_bound_ms=0.0)
        assert dsm_q_s(at_b, self.th, Metric.RTT) == pytest.approx(8 / 10)

    def test_unaligned_rejected(self):
        a = make_trace([50, 60], provider="a")
        b = make_trace([50, 60], provider="b", t0=1500.0)
        with pytest.raises(AlignmentError):
            dsm_q_s([a, b], self.th, Metric.RTT)

    def test_empty_rejected(self):
        with pytest.raises(AlignmentError):
            dsm_q_s([], self.th, Metric.RTT)


class TestReliabilityReport:
    def test_rejects_q_above_r(self):
        with pytest.raises(ValueError, match="exceeds"):
            ReliabilityReport(r_s=0.5, q_s={Metric.RTT: 0.6},
                              provider_set=("np1",))

    def test_trace_report_structure(self):
        tr = make_trace([50.0] * 9 + ["T"], dl_throughput=60_000.0,
                        loss=[0.0] * 9 + [1.0])
        rep = trace_report(tr, Thresholds())
        assert rep.r_s == pytest.approx(0.9)
        assert rep.q_s[Metric.RTT] == pytest.approx(0.9)
        assert rep.q_s[Metric.DL_THROUGHPUT] == pytest.approx(0.9)
        assert Metric.PLT not in rep.q_s
        assert rep.mttf == pytest.approx(1 / 0.1)
        assert rep.provider_set == ("np1",)

    def test_trace_report_perfect_trace_has_no_finite_mttf(self):
        rep = trace_report(make_trace([50.0] * 5), Thresholds())
        assert rep.mttf is None
