import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.stats import norm

from macjscc._rng import RunningStats, batch_sizes, default_seed, substream
from macjscc.errors import InputError, NumericalError
from macjscc.gmac import GaussianSourcePair, GmacSpec
from macjscc.mcsim import SimConfig, estimate_entropy_mc, run_batches, simulate_af_gmac, simulate_af_orth
from macjscc.orthogonal import LinearCombiner, OrthogonalSpec, SideInfoModel

FULL = SimConfig(seed=2024, n_samples=10**6)


class TestRunningStats:
    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(1, 50), min_size=1, max_size=6), st.integers(0, 2**32 - 1))
    def test_chunked_merge_matches_numpy(self, chunks, seed):
        data = np.random.default_rng(seed).normal(3.0, 2.0, sum(chunks))
        stats = RunningStats()
        pos = 0
        for c in chunks:
            stats.push(data[pos:pos + c])
            pos += c
        assert stats.n == data.size
        assert stats.mean == pytest.approx(data.mean(), rel=1e-12, abs=1e-12)
        if data.size > 1:
            assert stats.variance == pytest.approx(data.var(ddof=1), rel=1e-10, abs=1e-12)

    def test_batch_sizes(self):
        assert batch_sizes(25, 10) == [10, 10, 5]
        assert sum(batch_sizes(10**6, 100_000)) == 10**6

    def test_substreams_differ_and_repeat(self):
        a = substream(1, 0).random(4)
        assert np.array_equal(a, substream(1, 0).random(4))
        assert not np.array_equal(a, substream(1, 1).random(4))
        assert not np.array_equal(a, substream(2, 0).random(4))

    def test_env_seed(self, monkeypatch):
        monkeypatch.setenv("MACJSCC_SEED", "77")
        assert default_seed() == 77
        assert SimConfig.from_env(n_samples=1000).seed == 77
        monkeypatch.setenv("MACJSCC_SEED", "nope")
        with pytest.raises(InputError):
            default_seed()


class TestGmacSimulation:
    @pytest.mark.parametrize("rho,snr", [(0.1, 0.05), (0.75, 10.0), (0.5, 1.0)])
    def test_z_scores(self, rho, snr):
        r = simulate_af_gmac(GaussianSourcePair(1, 1, rho), GmacSpec.symmetric(snr), FULL)
        assert abs(r.z1) <= 4 and abs(r.z2) <= 4

    def test_asymmetric_powers(self):
        r = simulate_af_gmac(GaussianSourcePair(2.0, 0.5, 0.6), GmacSpec(3, 4, 1), FULL)
        assert abs(r.z1) <= 4 and abs(r.z2) <= 4

    def test_noiseless_floor(self):
        r = simulate_af_gmac(GaussianSourcePair(1, 1, 0.75), GmacSpec(1, 1, 1e-8), FULL)
        assert r.D1 == pytest.approx(0.125, rel=0.01)

    def test_thread_invariance(self):
        s, g = GaussianSourcePair(1, 1, 0.5), GmacSpec.symmetric(2.0)
        one = simulate_af_gmac(s, g, SimConfig(seed=3, n_samples=200_000, batch=20_000, threads=1))
        four = simulate_af_gmac(s, g, SimConfig(seed=3, n_samples=200_000, batch=20_000, threads=4))
        assert one == four

    def test_stderr_scales_with_sample_size(self):
        s, g = GaussianSourcePair(1, 1, 0.5), GmacSpec.symmetric(2.0)
        small = simulate_af_gmac(s, g, SimConfig(seed=1, n_samples=10**4))
        large = simulate_af_gmac(s, g, SimConfig(seed=1, n_samples=10**6))
        assert small.se1 / large.se1 == pytest.approx(10.0, rel=0.1)

    def test_config_validation(self):
        with pytest.raises(InputError):
            SimConfig(n_samples=10)
        with pytest.raises(InputError):
            SimConfig(threads=0)


class TestOrthogonalSimulation:
    def test_plain(self):
        r = simulate_af_orth(GaussianSourcePair(1, 1, 0.7), OrthogonalSpec.symmetric(4.0), cfg=FULL)
        assert abs(r.z1) <= 4 and abs(r.z2) <= 4

    @pytest.mark.parametrize("decoder_si", [False, True])
    def test_with_side_information(self, decoder_si):
        r = simulate_af_orth(GaussianSourcePair(1, 1, 0.4), OrthogonalSpec.symmetric(4.0),
                             SideInfoModel(0.5, 0.5), LinearCombiner.from_ratios(-0.16, 0.3),
                             decoder_si=decoder_si, cfg=FULL)
        assert abs(r.z1) <= 4 and abs(r.z2) <= 4

    def test_side_information_only_encoder(self):
        r = simulate_af_orth(GaussianSourcePair(1, 1, 0.4), OrthogonalSpec(2, 5, 1, 0.5),
                             SideInfoModel(0.8, 0.3), LinearCombiner.from_ratios(math.inf, 0.0),
                             decoder_si=True, cfg=FULL)
        assert abs(r.z1) <= 4 and abs(r.z2) <= 4


class TestEntropy:
    def test_standard_normal(self):
        h, se = estimate_entropy_mc(norm.pdf, lambda rng, n: rng.standard_normal(n),
                                    SimConfig(seed=5, n_samples=200_000))
        assert abs(h - 0.5 * math.log2(2 * math.pi * math.e)) <= 4 * se

    def test_scaled_normal_log_density(self):
        h, se = estimate_entropy_mc(lambda x: norm.logpdf(x, scale=2.0), lambda rng, n: 2.0 * rng.standard_normal(n),
                                    SimConfig(seed=6, n_samples=200_000), log_density=True)
        assert abs(h - (0.5 * math.log2(2 * math.pi * math.e) + 1.0)) <= 4 * se

    def test_separated_mixture_against_quadrature(self):
        def pdf(x):
            return 0.3 * norm.pdf(x, -4, 0.5) + 0.7 * norm.pdf(x, 3, 1.0)

        def sampler(rng, n):
            pick = rng.random(n) < 0.3
            return np.where(pick, rng.normal(-4, 0.5, n), rng.normal(3, 1.0, n))

        exact = quad(lambda x: -pdf(x) * math.log2(pdf(x)), -12, 12, points=[-4, 3], limit=200)[0]
        h, se = estimate_entropy_mc(pdf, sampler, SimConfig(seed=7, n_samples=200_000))
        assert abs(h - exact) <= 4 * se

    def test_nonpositive_density(self):
        with pytest.raises(NumericalError):
            estimate_entropy_mc(lambda x: np.zeros_like(x), lambda rng, n: rng.standard_normal(n),
                                SimConfig(n_samples=1000))

    def test_run_batches_order(self):
        cfg = SimConfig(seed=0, n_samples=3000, batch=1000, threads=3)
        (st1,) = run_batches(cfg, lambda rng, n: (rng.random(n),), 1)
        ref = np.concatenate([substream(0, b).random(1000) for b in range(3)])
        assert st1.mean == pytest.approx(ref.mean(), abs=1e-15)
