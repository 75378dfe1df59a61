"""Hot numeric kernels with a numba path and a pure-numpy path.

The numba path is used when numba imports cleanly and the environment
variable ``MACJSCC_DISABLE_NUMBA`` is unset (or set to ``0``/``false``).
Both paths return identical results up to floating-point reassociation;
``tests/test_kernels.py`` pins them against each other.
"""

import math
import os

import numpy as np

_LOG_2PI = math.log(2.0 * math.pi)


def _numba_requested():
    flag = os.environ.get("MACJSCC_DISABLE_NUMBA", "").strip().lower()
    return flag in ("", "0", "false", "no")


try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _numba_requested()


# --------------------------------------------------------------------------
# numpy implementations
# --------------------------------------------------------------------------

def _np_normal_pdf_matrix(x, means, variances):
    d = x[:, None] - means[None, :]
    return np.exp(-0.5 * d * d / variances[None, :]) / np.sqrt(2.0 * np.pi * variances[None, :])


def _np_mixture_logpdf(x, logw, means, variances):
    d = x[:, None] - means[None, :]
    logc = logw - 0.5 * (_LOG_2PI + np.log(variances)[None, :]) - 0.5 * d * d / variances[None, :]
    m = np.max(logc, axis=1)
    safe = np.where(np.isfinite(m), m, 0.0)
    return safe + np.log(np.sum(np.exp(logc - safe[:, None]), axis=1))


def _np_overlap_matrix(a, c, b, d):
    diff = a[:, None] - b[None, :]
    v = c[:, None] + d[None, :]
    return np.exp(-0.5 * diff * diff / v) / np.sqrt(2.0 * np.pi * v)


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _nb_normal_pdf_matrix(x, means, variances):
        n = x.shape[0]
        k = means.shape[0]
        out = np.empty((n, k))
        norm = np.empty(k)
        for j in range(k):
            norm[j] = 1.0 / math.sqrt(2.0 * math.pi * variances[j])
        for i in range(n):
            for j in range(k):
                d = x[i] - means[j]
                out[i, j] = norm[j] * math.exp(-0.5 * d * d / variances[j])
        return out

    @njit(cache=True)
    def _nb_mixture_logpdf(x, logw, means, variances):
        n = x.shape[0]
        k = means.shape[0]
        out = np.empty(n)
        lognorm = np.empty(k)
        for j in range(k):
            lognorm[j] = -0.5 * (_LOG_2PI + math.log(variances[j]))
        buf = np.empty(k)
        for i in range(n):
            m = -np.inf
            for j in range(k):
                d = x[i] - means[j]
                v = logw[i, j] + lognorm[j] - 0.5 * d * d / variances[j]
                buf[j] = v
                if v > m:
                    m = v
            if not math.isfinite(m):
                out[i] = m
                continue
            s = 0.0
            for j in range(k):
                s += math.exp(buf[j] - m)
            out[i] = m + math.log(s)
        return out

    @njit(cache=True)
    def _nb_overlap_matrix(a, c, b, d):
        out = np.empty((a.shape[0], b.shape[0]))
        for i in range(a.shape[0]):
            for j in range(b.shape[0]):
                diff = a[i] - b[j]
                v = c[i] + d[j]
                out[i, j] = math.exp(-0.5 * diff * diff / v) / math.sqrt(2.0 * math.pi * v)
        return out

else:  # pragma: no cover
    _nb_normal_pdf_matrix = _np_normal_pdf_matrix
    _nb_mixture_logpdf = _np_mixture_logpdf
    _nb_overlap_matrix = _np_overlap_matrix


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------

def _f64(arr):
    return np.ascontiguousarray(arr, dtype=np.float64)


def normal_pdf_matrix(x, means, variances):
    """Normal densities ``N(x_i; means_j, variances_j)`` as an ``(n, k)`` array."""
    impl = _nb_normal_pdf_matrix if USE_NUMBA else _np_normal_pdf_matrix
    return impl(_f64(x), _f64(means), _f64(variances))


def mixture_logpdf(x, logw, means, variances):
    """Natural-log density of a 1-D Gaussian mixture evaluated per sample.

    Parameters
    ----------
    x : ndarray, shape (n,)
        Evaluation points.
    logw : ndarray, shape (n, k)
        Per-sample log mixture weights (rows may differ, e.g. posterior weights).
    means, variances : ndarray, shape (k,)
        Component parameters shared by all samples.
    """
    x = _f64(x)
    logw = _f64(np.broadcast_to(logw, (x.shape[0], len(means))))
    impl = _nb_mixture_logpdf if USE_NUMBA else _np_mixture_logpdf
    return impl(x, logw, _f64(means), _f64(variances))


def overlap_matrix(a, c, b, d):
    """Gaussian product integrals ``N(a_i; b_j, c_i + d_j)`` as a matrix."""
    impl = _nb_overlap_matrix if USE_NUMBA else _np_overlap_matrix
    return impl(_f64(a), _f64(c), _f64(b), _f64(d))
