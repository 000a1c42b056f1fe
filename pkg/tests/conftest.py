"""Shared builders for traces and synthetic link specs."""

from __future__ import annotations

import numpy as np
import pytest

from mocsim import (HazardParams, LinkTrace, Sample, SyntheticLinkSpec,
                    TIMEOUT, WeibullParams)


def make_trace(rtts, provider="np1", t0=0.0, tick_ms=3000.0, **fields):
    """Trace from a list of RTTs; the string 'T' marks a timeout.

    Extra keyword lists (jitter=[...], loss=[...], ...) set optional sample
    fields positionally; a scalar applies to every sample.
    """
    samples = []
    for i, r in enumerate(rtts):
        extra = {}
        for name, values in fields.items():
            v = values[i] if isinstance(values, (list, tuple)) else values
            extra[name] = v
        samples.append(Sample(
            t=t0 + i * tick_ms, provider_id=provider,
            rtt=TIMEOUT if r == "T" else float(r), **extra))
    return LinkTrace(provider_id=provider, samples=tuple(samples),
                     tick_ms=tick_ms)


def random_spec(rng: np.random.Generator, provider: str,
                allow_outages: bool = True) -> SyntheticLinkSpec:
    """A plausible random link spec for property-style tests."""
    eta = float(rng.uniform(2e3, 2e5)) if allow_outages else 1e12
    return SyntheticLinkSpec(
        provider_id=provider,
        base_rtt_ms=float(rng.uniform(25, 160)),
        base_dl_kbps=float(rng.uniform(20_000, 90_000)),
        base_ul_kbps=float(rng.uniform(10_000, 40_000)),
        hazard=HazardParams(phi=float(rng.uniform(1e-6, 2e-3)),
                            p=float(rng.uniform(-0.9, 0.9))),
        weibull=WeibullParams(beta=float(rng.uniform(0.8, 2.0)), eta=eta),
        rtt_noise_sigma=float(rng.uniform(0.0, 0.5)),
        congestion_rtt_multiplier=float(rng.uniform(1.5, 6.0)),
        seed=int(rng.integers(0, 2**63 - 1)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240915)
