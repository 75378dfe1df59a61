import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import logsumexp
from scipy.stats import norm

from macjscc import _kernels

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not importable")


def inputs(seed, n=500, k=7):
    rng = np.random.default_rng(seed)
    x = rng.normal(0, 3, n)
    logw = np.log(rng.dirichlet(np.ones(k), size=n))
    means = rng.uniform(-4, 4, k)
    var = rng.uniform(1e-3, 3, k)
    return x, logw, means, var


@needs_numba
@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_paths_agree(seed):
    x, logw, means, var = inputs(seed)
    np.testing.assert_allclose(_kernels._nb_mixture_logpdf(x, logw, means, var),
                               _kernels._np_mixture_logpdf(x, logw, means, var), rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(_kernels._nb_normal_pdf_matrix(x, means, var),
                               _kernels._np_normal_pdf_matrix(x, means, var), rtol=1e-12, atol=1e-300)
    np.testing.assert_allclose(_kernels._nb_overlap_matrix(means, var, x[:9], var[::-1].repeat(2)[:9]),
                               _kernels._np_overlap_matrix(means, var, x[:9], var[::-1].repeat(2)[:9]),
                               rtol=1e-12, atol=1e-300)


def test_mixture_logpdf_against_scipy():
    x, logw, means, var = inputs(1)
    ref = logsumexp(logw + norm.logpdf(x[:, None], means[None, :], np.sqrt(var)[None, :]), axis=1)
    np.testing.assert_allclose(_kernels.mixture_logpdf(x, logw, means, var), ref, rtol=1e-12)


def test_mixture_logpdf_far_tail_is_finite():
    out = _kernels.mixture_logpdf(np.array([1e3]), np.log([[0.5, 0.5]]), np.zeros(2), np.array([1e-3, 1.0]))
    assert np.isfinite(out[0])
    assert out[0] == pytest.approx(np.log(0.5) + norm.logpdf(1e3), rel=1e-12)


def test_mixture_logpdf_broadcasts_shared_weights():
    x, logw, means, var = inputs(2)
    shared = logw[:1]
    np.testing.assert_allclose(_kernels.mixture_logpdf(x, shared, means, var),
                               _kernels.mixture_logpdf(x, np.repeat(shared, x.size, 0), means, var))


def test_overlap_is_gaussian_product_integral():
    a, c, b, d = np.array([0.3]), np.array([0.5]), np.array([-1.0]), np.array([0.7])
    assert _kernels.overlap_matrix(a, c, b, d)[0, 0] == pytest.approx(norm.pdf(0.3, -1.0, np.sqrt(1.2)), rel=1e-14)


def test_env_flag_selects_numpy_path():
    env = dict(os.environ, MACJSCC_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from macjscc import _kernels; print(_kernels.USE_NUMBA)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
