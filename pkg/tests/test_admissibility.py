import itertools
import math

import numpy as np
import pytest

from macjscc import fixtures
from macjscc.admissibility import (
    DistortionSpec,
    SideInfoSystem,
    check_multisource,
    check_theorem1,
    decoder_distortion,
    hamming_rate_distortion,
    lossless_conditions,
    mixed_si_rate,
    optimal_decoder,
    source_coding_region,
    wz_binary_rate,
)
from macjscc.errors import InputError
from macjscc.probcore import Kernel, Pmf, binary_entropy, bsc

COVER = fixtures.COVER_PMF


def h(table):
    return -sum(p * math.log2(p) for p in np.ravel(table) if p > 0)


def two_user_system(source_table, quantizers=None, maps="identity", distortion=None):
    src = Pmf([("U1", 2), ("U2", 2), ("Z1", 1), ("Z2", 1), ("Z", 1)], np.reshape(source_table, (2, 2, 1, 1, 1)))
    quant = quantizers or tuple(Kernel.deterministic([(f"U{i}", 2)], (f"W{i}", 2), lambda u: u) for i in (1, 2))
    return SideInfoSystem(src, quant, fixtures.channel_maps(maps), fixtures.adder_channel(), distortion)


class TestCoverLadder:
    """Sum-rate requirement H(U1,U2|Z) as decoder side information grows."""

    @pytest.mark.parametrize(
        "side, expected, tol",
        [
            ("none", 1.9183, 1e-3),
            ("z1", 1.7996, 1e-3),
            ("z1z2", 1.6829, 1e-3),
            ("v", 1.6016, 1e-3),
            ("full", 1.4119, 1e-3),
        ],
    )
    def test_sum_requirement(self, side, expected, tol):
        report = check_theorem1(fixtures.cover_example(side))
        assert report.lhs[2] == pytest.approx(expected, abs=tol)

    def test_brute_force_full_side_information(self):
        # independent enumeration of H(U1,U2 | Z1,Z2,V) from the generative model
        joint = {}
        for u1, u2, z1, z2, n in itertools.product((0, 1), repeat=5):
            p = COVER[u1, u2] * (0.7 if z1 == u2 else 0.3) * (0.7 if z2 == u1 else 0.3) * 0.5
            key = (u1, u2, z1, z2, u1 & u2 & n)
            joint[key] = joint.get(key, 0.0) + p
        cond = {}
        for (u1, u2, z1, z2, v), p in joint.items():
            cond[(z1, z2, v)] = cond.get((z1, z2, v), 0.0) + p
        expected = h(list(joint.values())) - h(list(cond.values()))
        report = check_theorem1(fixtures.cover_example("full"))
        assert report.lhs[2] == pytest.approx(expected, abs=1e-12)

    def test_verdict_flips_only_with_full_side_information(self):
        verdicts = {side: check_theorem1(fixtures.cover_example(side)).verdict for side in fixtures.DECODER_SIDE}
        assert verdicts.pop("full") is True
        assert not any(verdicts.values())

    def test_independent_inputs_give_adder_sum_capacity(self):
        report = check_theorem1(fixtures.cover_example("none", "independent"))
        assert report.rhs[2] == pytest.approx(1.5, abs=1e-12)
        assert report.rhs[0] == pytest.approx(1.0, abs=1e-12)

    def test_source_driven_inputs_without_side_information(self):
        report = check_theorem1(fixtures.cover_example("none", "identity"))
        assert report.lhs[2] == pytest.approx(1.918, abs=1e-3)
        assert report.rhs[2] == pytest.approx(1.585, abs=1e-3)
        assert report.verdict is False
        assert report.binding_constraint == 2


class TestSystemValidation:
    def test_quantizer_may_not_see_other_source(self):
        bad = (Kernel.deterministic([("U2", 2)], ("W1", 2), lambda u: u),
               Kernel.deterministic([("U2", 2)], ("W2", 2), lambda u: u))
        with pytest.raises(InputError):
            two_user_system(COVER, quantizers=bad)

    def test_two_user_check_rejects_other_sizes(self):
        src = Pmf([("U1", 2), ("Z1", 1), ("Z", 1)], [0.5, 0.5])
        sys1 = SideInfoSystem(
            src,
            (Kernel.deterministic([("U1", 2)], ("W1", 2), lambda u: u),),
            (Kernel([("W1", 2)], ("X1", 4), np.full((2, 4), 0.25)),),
            Kernel.deterministic([("X1", 4)], ("Y", 4), lambda x: x),
        )
        with pytest.raises(InputError):
            check_theorem1(sys1)
        report = check_multisource(sys1)
        assert report.margins == pytest.approx((1.0,), abs=1e-12)
        assert report.verdict is True


class TestZeroInformationCoding:
    def test_constant_quantizers_meet_maximal_distortion(self):
        const = tuple(Kernel.constant((f"W{i}", 1)) for i in (1, 2))
        maps = tuple(Kernel([(f"W{i}", 1)], (f"X{i}", 2), [[0.5, 0.5]]) for i in (1, 2))
        src = Pmf([("U1", 2), ("U2", 2), ("Z1", 1), ("Z2", 1), ("Z", 1)], COVER.reshape(2, 2, 1, 1, 1))
        sys0 = SideInfoSystem(src, const, maps, fixtures.adder_channel(), DistortionSpec.hamming(0.5, 0.5))
        report = check_theorem1(sys0)
        assert report.verdict is True
        assert max(report.lhs) == 0.0
        assert report.distortions == pytest.approx((0.5, 0.5))


class TestMultisource:
    def test_three_iid_bits_on_noiseless_adder(self):
        m = 3
        names = [(f"U{i}", 2) for i in (1, 2, 3)] + [(f"Z{i}", 1) for i in (1, 2, 3)] + [("Z", 1)]
        src = Pmf(names, np.full(8, 1 / 8))
        quant = tuple(Kernel.deterministic([(f"U{i}", 2)], (f"W{i}", 2), lambda u: u) for i in (1, 2, 3))
        maps = tuple(Kernel.deterministic([(f"W{i}", 2)], (f"X{i}", 2), lambda w: w) for i in (1, 2, 3))
        chan = Kernel.deterministic([(f"X{i}", 2) for i in (1, 2, 3)], ("Y", 4), lambda a, b, c: a + b + c)
        report = check_multisource(SideInfoSystem(src, quant, maps, chan))
        # oracle: with W = X = U, LHS = |A| bits and RHS = H(sum of |A| fair bits)
        binom_entropy = {k: h([math.comb(k, j) / 2**k for j in range(k + 1)]) for k in (1, 2, 3)}
        assert len(report.subsets) == 2**m - 1
        for subset, lhs, rhs in zip(report.subsets, report.lhs, report.rhs):
            assert lhs == pytest.approx(len(subset), abs=1e-12)
            assert rhs == pytest.approx(binom_entropy[len(subset)], abs=1e-12)
        assert report.verdict is False

    def test_independent_sources_reduce_to_mac_region(self):
        indep = np.full((2, 2), 0.25)
        report = check_theorem1(two_user_system(indep, maps="independent"))
        np.testing.assert_allclose(report.lhs, [1.0, 1.0, 2.0], atol=1e-12)
        np.testing.assert_allclose(report.rhs, [1.0, 1.0, 1.5], atol=1e-12)


class TestDecoder:
    def test_lossless_quantizer_gives_identity_decoder(self):
        dec = optimal_decoder(two_user_system(COVER))
        assert dec.distortions == (0.0, 0.0)
        np.testing.assert_array_equal(dec.tables[0][:, :, 0], [[0, 0], [1, 1]])

    def test_blind_guess(self):
        const = tuple(Kernel.constant((f"W{i}", 1)) for i in (1, 2))
        src = Pmf([("U1", 2), ("U2", 2), ("Z1", 1), ("Z2", 1), ("Z", 1)], COVER.reshape(2, 2, 1, 1, 1))
        maps = tuple(Kernel([(f"W{i}", 1)], (f"X{i}", 2), [[0.5, 0.5]]) for i in (1, 2))
        dec = optimal_decoder(SideInfoSystem(src, const, maps, fixtures.adder_channel()))
        assert dec.distortions[0] == pytest.approx(0.5, abs=1e-15)
        # ties go to the lowest index
        assert int(dec.tables[0].ravel()[0]) == 0

    def test_bsc_quantizer(self):
        quant = (bsc("U1", "W1", 0.04), Kernel.deterministic([("U2", 2)], ("W2", 2), lambda u: u))
        dec = optimal_decoder(two_user_system(COVER, quantizers=quant))
        assert dec.distortions[0] == pytest.approx(0.04, abs=1e-12)

    def test_decoder_distortion_of_optimal_tables(self):
        sys_ = two_user_system(COVER, quantizers=(bsc("U1", "W1", 0.2), bsc("U2", "W2", 0.1)))
        dec = optimal_decoder(sys_)
        assert decoder_distortion(sys_, dec.tables) == pytest.approx(dec.distortions, abs=1e-15)
        # any other decoder does no better
        flipped = [1 - t for t in dec.tables]
        worse = decoder_distortion(sys_, flipped)
        assert all(w >= d for w, d in zip(worse, dec.distortions))


class TestLossless:
    def _maps(self, kind):
        if kind == "independent":
            return tuple(Kernel.constant((f"X{i}", 2)) for i in (1, 2))
        return tuple(Kernel.deterministic([(f"U{i}", 2)], (f"X{i}", 2), lambda u: u) for i in (1, 2))

    def test_independent_inputs(self):
        pmf = Pmf([("U1", 2), ("U2", 2)], COVER)
        report = lossless_conditions(pmf, fixtures.adder_channel(), self._maps("independent"))
        assert report.rhs[2] == pytest.approx(1.5, abs=1e-12)
        assert report.verdict is False

    def test_source_driven_inputs(self):
        pmf = Pmf([("U1", 2), ("U2", 2)], COVER)
        report = lossless_conditions(pmf, fixtures.adder_channel(), self._maps("identity"))
        assert report.rhs[2] == pytest.approx(1.585, abs=1e-3)
        assert report.verdict is False

    def test_noiseless_separate_links_sit_on_the_boundary(self):
        # X = U over a perfect channel makes every requirement hold with equality,
        # which the strict inequalities reject
        pmf = Pmf([("U1", 2), ("U2", 2)], COVER)
        chan = Kernel.deterministic([("X1", 2), ("X2", 2)], ("Y", 4), lambda a, b: 2 * a + b)
        report = lossless_conditions(pmf, chan, self._maps("identity"))
        np.testing.assert_allclose(report.margins, 0.0, atol=1e-12)
        assert report.verdict is False

    def test_mapping_shape_enforced(self):
        pmf = Pmf([("U1", 2), ("U2", 2)], COVER)
        bad = (Kernel.deterministic([("U2", 2)], ("X1", 2), lambda u: u), self._maps("identity")[1])
        with pytest.raises(InputError):
            lossless_conditions(pmf, fixtures.adder_channel(), bad)


class TestSourceCoding:
    def test_unit_rates_suffice_for_cover_pmf(self):
        report = source_coding_region(two_user_system(COVER), 1.0, 1.0)
        assert report.verdict is True
        assert report.lhs[2] == pytest.approx(1.918, abs=1e-3)
        assert report.lhs[0] == pytest.approx(0.918, abs=1e-3)

    def test_constant_quantizers(self):
        const = tuple(Kernel.constant((f"W{i}", 1)) for i in (1, 2))
        maps = tuple(Kernel([(f"W{i}", 1)], (f"X{i}", 2), [[0.5, 0.5]]) for i in (1, 2))
        src = Pmf([("U1", 2), ("U2", 2), ("Z1", 1), ("Z2", 1), ("Z", 1)], COVER.reshape(2, 2, 1, 1, 1))
        sys0 = SideInfoSystem(src, const, maps, fixtures.adder_channel())
        assert source_coding_region(sys0, 1e-6, 1e-6).verdict is True

    def test_negative_rate_rejected(self):
        with pytest.raises(InputError):
            source_coding_region(two_user_system(COVER), -1.0, 1.0)


class TestClosedFormRates:
    def test_wyner_ziv_value(self):
        assert wz_binary_rate(0.3, 0.04) == pytest.approx(0.6577, abs=1e-3)

    def test_wyner_ziv_lossless_end(self):
        assert wz_binary_rate(0.3, 0.0) == pytest.approx(binary_entropy(0.3), abs=1e-12)

    def test_wyner_ziv_useless_side_information(self):
        assert wz_binary_rate(0.5, 0.1) == pytest.approx(1 - binary_entropy(0.1), abs=1e-12)

    def test_wyner_ziv_matches_enumeration(self):
        # U fair, side information S = BSC(p)(U), W = BSC(d)(U): I(U;W|S)
        p, d = 0.3, 0.04
        src = Pmf([("U", 2)], [0.5, 0.5])
        from macjscc.probcore import mutual_information, push_through

        joint = push_through(push_through(src, bsc("U", "S", p)), bsc("U", "W", d))
        assert wz_binary_rate(p, d) == pytest.approx(mutual_information(joint, ["U"], ["W"], ["S"]), abs=1e-12)

    def test_rate_distortion(self):
        assert hamming_rate_distortion(0.5, 0.04) == pytest.approx(0.758, abs=1e-3)
        assert hamming_rate_distortion(0.3, 0.0) == pytest.approx(binary_entropy(0.3), abs=1e-15)
        assert hamming_rate_distortion(0.5, 0.5) == 0.0

    @pytest.mark.parametrize("args", [(0.6, 0.1), (0.3, -0.1), (0.3, 0.6)])
    def test_out_of_range(self, args):
        with pytest.raises(InputError):
            wz_binary_rate(*args)

    def test_rate_distortion_out_of_range(self):
        with pytest.raises(InputError):
            hamming_rate_distortion(0.2, 0.3)


class TestMixedSideInformation:
    def _pmf(self):
        src = Pmf([("X", 2)], [0.5, 0.5])
        from macjscc.probcore import push_through

        return push_through(src, bsc("X", "Y", 0.3))

    def test_independent_w(self):
        assert mixed_si_rate(self._pmf(), Kernel.constant(("W", 2)), "X") == pytest.approx(0.0, abs=1e-15)

    def test_w_equals_source(self):
        w = Kernel.deterministic([("X", 2)], ("W", 2), lambda x: x)
        assert mixed_si_rate(self._pmf(), w, "X") == pytest.approx(1.0, abs=1e-12)

    def test_bsc_test_channel_with_shared_side_information(self):
        # oracle: plain loops over (x, y, w)
        p = {}
        for x, y, w in itertools.product((0, 1), repeat=3):
            p[(x, y, w)] = 0.5 * (0.7 if y == x else 0.3) * (0.9 if w == x else 0.1)

        def marg(keys):
            out = {}
            for k, v in p.items():
                kk = tuple(k[i] for i in keys)
                out[kk] = out.get(kk, 0.0) + v
            return list(out.values())

        # I(X;W|Y) = H(X,Y) + H(W,Y) - H(X,W,Y) - H(Y)
        expected = h(marg((0, 1))) + h(marg((2, 1))) - h(marg((0, 1, 2))) - h(marg((1,)))
        got = mixed_si_rate(self._pmf(), bsc("X", "W", 0.1), "X", encoder_side=["Y"])
        assert got == pytest.approx(expected, abs=1e-12)

    def test_w_may_not_use_decoder_side(self):
        from macjscc.probcore import push_through

        pmf = push_through(self._pmf(), bsc("X", "Z", 0.2))
        with pytest.raises(InputError):
            mixed_si_rate(pmf, bsc("Z", "W", 0.1), "X", decoder_side=["Z"])
