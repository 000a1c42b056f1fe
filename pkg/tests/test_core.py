"""Core domain types and derived-metric models."""

import copy
import pickle

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mocsim import (Metric, PltModel, ProbeSpec, Sample, Thresholds, TIMEOUT,
                    burst_stats, is_timeout, jitter_from_window,
                    meets_threshold, plt_model_ms)
from mocsim.errors import MissingMetricError

finite_rtts = st.lists(
    st.floats(min_value=0.1, max_value=1e5, allow_nan=False),
    min_size=5, max_size=5)


class TestTimeoutMarker:
    def test_singleton_survives_copy_and_pickle(self):
        assert copy.deepcopy(TIMEOUT) is TIMEOUT
        assert copy.copy(TIMEOUT) is TIMEOUT
        assert pickle.loads(pickle.dumps(TIMEOUT)) is TIMEOUT

    def test_is_timeout(self):
        assert is_timeout(TIMEOUT)
        assert not is_timeout(10_000.0)


class TestJitter:
    def test_constant_series_is_zero(self):
        assert jitter_from_window([40, 40, 40, 40, 40]) == 0

    def test_alternating_series(self):
        assert jitter_from_window([10, 20, 10, 20, 10]) == 10

    def test_hand_summed_example(self):
        # |45-38| + |41-45| + |52-41| + |39-52| = 7 + 4 + 11 + 13 = 35
        assert jitter_from_window([38, 45, 41, 52, 39]) == pytest.approx(35 / 4)

    @pytest.mark.parametrize("n", [0, 4, 6])
    def test_wrong_length_rejected(self, n):
        with pytest.raises(ValueError, match="exactly 5"):
            jitter_from_window([10.0] * n)

    def test_timeout_rejected(self):
        with pytest.raises(ValueError, match="drop the window"):
            jitter_from_window([10, 20, TIMEOUT, 20, 10])

    @given(finite_rtts)
    def test_non_negative_and_zero_iff_constant(self, rtts):
        j = jitter_from_window(rtts)
        assert j >= 0
        if len(set(rtts)) == 1:
            assert j == 0
        if j == 0:
            assert len(set(rtts)) == 1

    @given(finite_rtts, st.floats(min_value=-100, max_value=100,
                                  allow_nan=False))
    def test_shift_invariant(self, rtts, c):
        shifted = [r + c for r in rtts]
        assert jitter_from_window(shifted) == pytest.approx(
            jitter_from_window(rtts), abs=1e-9)

    @given(finite_rtts, st.floats(min_value=0.01, max_value=50,
                                  allow_nan=False))
    def test_scales_linearly(self, rtts, k):
        assert jitter_from_window([k * r for r in rtts]) == pytest.approx(
            k * jitter_from_window(rtts), rel=1e-9)


class TestPltModel:
    def test_reference_page_at_50mbps(self):
        # 2 * 100 + 1363149 * 8 / 50000 = 418.10384
        assert plt_model_ms(100, 50_000) == pytest.approx(418.10384)

    def test_degenerate_inputs_approach_zero(self):
        assert plt_model_ms(0, 1e15) == pytest.approx(0, abs=1e-4)

    def test_slower_link_strictly_worse(self):
        assert plt_model_ms(100, 25_000) > plt_model_ms(100, 50_000)

    def test_lower_bound_is_handshake_time(self):
        m = PltModel()
        assert plt_model_ms(80, 30_000, m) >= m.handshake_rtts * 80

    @given(st.floats(min_value=0, max_value=1e4, allow_nan=False),
           st.floats(min_value=1, max_value=1e6, allow_nan=False))
    def test_monotone_in_each_argument(self, rtt, dl):
        base = plt_model_ms(rtt, dl)
        assert plt_model_ms(rtt + 1, dl) > base
        assert plt_model_ms(rtt, dl * 2) < base
        assert plt_model_ms(rtt, dl, PltModel(page_bytes=3_000_000)) > base

    def test_nonpositive_throughput_rejected(self):
        with pytest.raises(ValueError, match="dl_throughput"):
            plt_model_ms(100, 0)

    def test_timeout_rtt_rejected(self):
        with pytest.raises(ValueError, match="timed-out"):
            plt_model_ms(TIMEOUT, 50_000)


def sample(**kwargs):
    defaults = dict(t=0.0, provider_id="np1", rtt=50.0)
    defaults.update(kwargs)
    return Sample(**defaults)


class TestMeetsThreshold:
    th = Thresholds()

    def test_boundary_is_inclusive(self):
        assert meets_threshold(sample(rtt=100.0), self.th, Metric.RTT)
        assert not meets_threshold(sample(rtt=100.0001), self.th, Metric.RTT)

    def test_timeout_fails_availability(self):
        assert not meets_threshold(sample(rtt=TIMEOUT), self.th,
                                   Metric.AVAILABILITY)

    def test_timeout_fails_rtt(self):
        assert not meets_threshold(sample(rtt=TIMEOUT), self.th, Metric.RTT)

    def test_downlink_passes_above_threshold(self):
        # 50.7 Mbps meets the 50 Mbps benchmark
        s = sample(dl_throughput=50_700.0)
        assert meets_threshold(s, self.th, Metric.DL_THROUGHPUT)

    def test_loss_passes_at_most_max(self):
        assert meets_threshold(sample(loss=0.0), self.th, Metric.LOSS)
        assert not meets_threshold(sample(loss=0.01), self.th, Metric.LOSS)

    @pytest.mark.parametrize("metric", [
        Metric.JITTER, Metric.LOSS, Metric.DL_THROUGHPUT,
        Metric.UL_THROUGHPUT, Metric.PLT])
    def test_absent_metric_raises(self, metric):
        with pytest.raises(MissingMetricError):
            meets_threshold(sample(), self.th, metric)

    @given(st.floats(min_value=0, max_value=20_000, allow_nan=False))
    def test_rtt_pass_implies_availability_pass(self, rtt):
        s = sample(rtt=rtt)
        if meets_threshold(s, self.th, Metric.RTT):
            assert meets_threshold(s, self.th, Metric.AVAILABILITY)


class TestBurstStats:
    spec = ProbeSpec(packet_size_bytes=1024)

    def test_clean_burst(self):
        stats = burst_stats([50.0] * 10, self.spec)
        assert stats.rtt_median_ms == 50
        assert stats.jitter_ms == 0
        assert stats.loss == 0.0

    def test_all_lost_burst(self):
        stats = burst_stats([TIMEOUT] * 10, self.spec)
        assert stats.rtt_median_ms is None
        assert stats.jitter_ms is None
        assert stats.loss == 1.0

    def test_partial_loss_counts_timeouts(self):
        stats = burst_stats([TIMEOUT, TIMEOUT] + [60.0] * 8, self.spec)
        assert stats.rtt_median_ms == 60
        assert stats.jitter_ms == 0
        assert stats.loss == pytest.approx(0.2)

    def test_jitter_absent_below_window(self):
        stats = burst_stats([TIMEOUT] * 6 + [60.0] * 4, self.spec)
        assert stats.jitter_ms is None
        assert stats.rtt_median_ms == 60

    def test_loss_is_a_tenth_multiple(self, rng):
        for _ in range(50):
            k = int(rng.integers(0, 11))
            outcomes = [TIMEOUT] * k + [float(rng.uniform(10, 90))] * (10 - k)
            stats = burst_stats(outcomes, self.spec)
            assert stats.loss * 10 == pytest.approx(round(stats.loss * 10))
            assert stats.loss == pytest.approx(k / 10)

    def test_wrong_burst_size_rejected(self):
        with pytest.raises(ValueError, match="expected 10"):
            burst_stats([50.0] * 7, self.spec)
        with pytest.raises(ValueError, match="empty"):
            burst_stats([], self.spec)


class TestTypeInvariants:
    def test_thresholds_require_rtt_below_availability(self):
        with pytest.raises(ValueError, match="availability"):
            Thresholds(rtt_ms=10_000, availability_rtt_ms=10_000)

    def test_thresholds_loss_range(self):
        with pytest.raises(ValueError, match="loss_max"):
            Thresholds(loss_max=1.5)

    def test_sample_rejects_negative_time(self):
        with pytest.raises(ValueError, match=">= 0"):
            sample(t=-1.0)

    def test_sample_rejects_bad_loss(self):
        with pytest.raises(ValueError, match="loss"):
            sample(loss=1.2)

    def test_probe_spec_bounds(self):
        with pytest.raises(ValueError):
            ProbeSpec(packet_size_bytes=0)
        with pytest.raises(ValueError):
            ProbeSpec(packet_size_bytes=200, packets_per_burst=0)
        with pytest.raises(ValueError):
            ProbeSpec(packet_size_bytes=200, timeout_s=0)

    def test_plt_model_bounds(self):
        with pytest.raises(ValueError):
            PltModel(page_bytes=0)
        with pytest.raises(ValueError):
            PltModel(handshake_rtts=-1)

    def test_trace_requires_increasing_timestamps(self):
        from mocsim import LinkTrace
        s0 = sample(t=3000.0)
        s1 = sample(t=3000.0)
        with pytest.raises(ValueError, match="strictly increasing"):
            LinkTrace(provider_id="np1", samples=(s0, s1))

    def test_trace_rejects_foreign_samples(self):
        from mocsim import LinkTrace
        with pytest.raises(ValueError, match="provider"):
            LinkTrace(provider_id="np2", samples=(sample(),))
