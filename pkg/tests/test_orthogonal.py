import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from macjscc.errors import InputError
from macjscc.gmac import GaussianSourcePair
from macjscc.orthogonal import (
    LinearCombiner,
    OrthogonalSpec,
    SideInfoModel,
    af_distortion_orth,
    af_distortion_orth_symmetric,
    af_multisource,
    af_si_distortion,
    af_si_joint,
    af_si_optimize,
    orth_sweep,
    sb_distortion_orth_symmetric,
    separation_bounds,
    tdma_bounds,
)
from macjscc.probcore import lmmse

UNIT = GaussianSourcePair(1.0, 1.0, 0.0)


class TestCapacities:
    def test_separation(self):
        c1, c2, c12 = separation_bounds(OrthogonalSpec(1, 3, 1, 1))
        assert c1 == pytest.approx(0.5, abs=1e-15)
        assert c2 == pytest.approx(1.0, abs=1e-15)
        assert c12 == c1 + c2

    def test_tdma_half(self):
        b1, b2, b12 = tdma_bounds(OrthogonalSpec(1, 1, 1, 1), 0.5)
        assert b1 == pytest.approx(0.25 * math.log2(3), abs=1e-15)
        assert b12 == b1 + b2

    def test_tdma_edge_limit(self):
        spec = OrthogonalSpec(2, 2, 1, 1)
        b1, b2, _ = tdma_bounds(spec, 1 - 1e-9)
        assert b1 == pytest.approx(separation_bounds(spec)[0], abs=1e-8)
        assert b2 == pytest.approx(0.0, abs=1e-7)

    def test_tdma_maximum_matches_grid(self):
        spec = OrthogonalSpec(1, 3, 1, 1)
        grid = np.linspace(1e-4, 1 - 1e-4, 20001)
        sums = [tdma_bounds(spec, a)[2] for a in grid]
        k = int(np.argmax(sums))
        # power-proportional split is the optimum
        assert grid[k] == pytest.approx(0.25, abs=1e-3)
        assert sums[k] == pytest.approx(0.5 * math.log2(5), abs=1e-8)

    def test_tdma_rejects_edges(self):
        with pytest.raises(InputError):
            tdma_bounds(OrthogonalSpec(1, 1, 1, 1), 1.0)


class TestAfSb:
    @pytest.mark.parametrize("s", [0.01, 0.3, 1.0, 7.0, 1000.0])
    def test_independent_sources(self, s):
        assert af_distortion_orth_symmetric(0.0, s) == pytest.approx(1 / (1 + s), rel=1e-14)
        assert sb_distortion_orth_symmetric(0.0, s) == pytest.approx(1 / (1 + s), rel=1e-14)

    @pytest.mark.parametrize("rho", [0.0, 0.3, 0.7, 0.9])
    def test_af_never_beats_sb(self, rho):
        for s in np.logspace(-2, 3, 201):
            assert af_distortion_orth_symmetric(rho, s) >= sb_distortion_orth_symmetric(rho, s) - 1e-9

    def test_limits(self):
        for rho in (0.3, 0.9):
            assert af_distortion_orth_symmetric(rho, 1e-9) == pytest.approx(1.0, abs=1e-8)
            assert sb_distortion_orth_symmetric(rho, 1e-9) == pytest.approx(1.0, abs=1e-8)
            assert af_distortion_orth_symmetric(rho, 1e9) < 1e-8
        s = 1e8
        assert sb_distortion_orth_symmetric(0.6, s) * s == pytest.approx(0.8, rel=1e-6)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.1, 5), st.floats(0.1, 5), st.floats(-0.95, 0.95),
           st.floats(0.01, 100), st.floats(0.01, 100), st.floats(0.1, 10), st.floats(0.1, 10))
    def test_matches_lmmse(self, v1, v2, rho, p1, p2, n1, n2):
        s, spec = GaussianSourcePair(v1, v2, rho), OrthogonalSpec(p1, p2, n1, n2)
        d1, d2 = af_distortion_orth(s, spec)
        _, err = lmmse(af_si_joint(s, spec), [0, 1], [4, 5])
        assert d1 == pytest.approx(err[0, 0], abs=1e-10 * max(1, v1))
        assert d2 == pytest.approx(err[1, 1], abs=1e-10 * max(1, v2))

    def test_sweep_rows(self):
        rows = orth_sweep(0.7, [1.0, 4.0])
        assert rows[1][0] == 4.0
        assert rows[1][1] == af_distortion_orth_symmetric(0.7, 4.0)
        with pytest.raises(InputError):
            orth_sweep(0.7, [4.0, 1.0])


class TestMultisource:
    def test_single_source(self):
        assert af_multisource(1, 0.0, 3.0, 1.0) == pytest.approx(0.25, abs=1e-15)

    @pytest.mark.parametrize("rho,s", [(0.3, 1.0), (0.7, 4.0), (0.95, 100.0)])
    def test_two_sources_match_pair_formula(self, rho, s):
        assert af_multisource(2, rho, s, 1.0) == pytest.approx(af_distortion_orth_symmetric(rho, s), abs=1e-10)

    @pytest.mark.parametrize("n", [1, 3, 8])
    def test_independent(self, n):
        assert af_multisource(n, 0.0, 2.0, 1.0) == pytest.approx(1 / 3, abs=1e-14)

    def test_nonincreasing_in_rho(self):
        vals = [af_multisource(5, r, 2.0, 1.0) for r in np.linspace(0, 0.9, 91)]
        assert np.all(np.diff(vals) <= 1e-12)

    def test_rejects_non_pd(self):
        with pytest.raises(InputError):
            af_multisource(3, -0.6, 1.0, 1.0)


class TestSideInformation:
    spec = OrthogonalSpec.symmetric(4.0)
    src = GaussianSourcePair(1.0, 1.0, 0.4)
    si = SideInfoModel(0.5, 0.5)

    def test_plain_combiner_reduces(self):
        got = af_si_distortion(self.src, self.spec, self.si, LinearCombiner(), decoder_si=False)
        np.testing.assert_allclose(got, af_distortion_orth(self.src, self.spec), atol=1e-12)

    def test_useless_side_information(self):
        got = af_si_distortion(self.src, self.spec, SideInfoModel(0, 0), LinearCombiner(), decoder_si=True)
        np.testing.assert_allclose(got, af_distortion_orth(self.src, self.spec), atol=1e-12)

    def test_decoder_side_information_helps(self):
        base = af_distortion_orth(self.src, self.spec)
        got = af_si_distortion(self.src, self.spec, self.si, LinearCombiner(), decoder_si=True)
        assert got[0] < base[0] - 1e-6 and got[1] < base[1] - 1e-6

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0, 2), st.floats(0, 2), st.floats(-0.9, 0.9), st.floats(-5, 5), st.floats(-5, 5),
           st.floats(0.1, 50))
    def test_conditioning_never_hurts(self, s1, s2, rho, t1, t2, snr):
        src = GaussianSourcePair(1.0, 1.0, rho)
        spec = OrthogonalSpec.symmetric(snr)
        comb = LinearCombiner.from_ratios(t1, t2)
        try:
            off = af_si_distortion(src, spec, SideInfoModel(s1, s2), comb, decoder_si=False)
        except InputError:
            return
        on = af_si_distortion(src, spec, SideInfoModel(s1, s2), comb, decoder_si=True)
        assert on[0] <= off[0] + 1e-9 and on[1] <= off[1] + 1e-9

    def test_degenerate_combiner(self):
        with pytest.raises(InputError):
            af_si_distortion(self.src, self.spec, self.si, LinearCombiner(0.0, 0.0, 1.0, 0.0))

    def test_optimize_none_mode(self):
        opt = af_si_optimize(self.src, self.spec, self.si, "none")
        assert opt.mean_distortion == pytest.approx(af_distortion_orth(self.src, self.spec)[0], abs=1e-12)

    @pytest.mark.parametrize("snr", [0.5, 1.0, 4.0, 20.0])
    def test_decoder_mode_beats_none(self, snr):
        spec = OrthogonalSpec.symmetric(snr)
        none = af_si_optimize(self.src, spec, self.si, "none").mean_distortion
        dec = af_si_optimize(self.src, spec, self.si, "dec").mean_distortion
        assert dec <= none

    def test_encoder_only_optimum_is_near_zero(self):
        # the optimum sits at a small negative ratio, not exactly at zero;
        # brute-force oracle on a fine symmetric grid confirms the location
        opt = af_si_optimize(self.src, self.spec, self.si, "enc")
        t = np.linspace(-0.1, 0.1, 2001)
        vals = [np.mean(af_si_distortion(self.src, self.spec, self.si, LinearCombiner.from_ratios(x, x)))
                for x in t]
        k = int(np.argmin(vals))
        assert opt.ratios[0] == pytest.approx(opt.ratios[1], abs=2e-4)
        assert opt.ratios[0] == pytest.approx(t[k], abs=2e-4)
        assert opt.mean_distortion <= vals[k] + 1e-12
        plain = np.mean(af_distortion_orth(self.src, self.spec))
        assert plain - opt.mean_distortion < 1e-3

    def test_optimize_rejects_mode(self):
        with pytest.raises(InputError):
            af_si_optimize(self.src, self.spec, self.si, "all")
