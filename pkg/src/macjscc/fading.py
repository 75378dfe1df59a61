"""Ergodic rates of the fading Gaussian MAC with ``M`` symmetric users.

Rates here follow the fading-channel convention ``log2(1 + SNR)`` with no
``1/2`` prefactor, and are reported per user (sum rate divided by ``M``).
"""

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from ._rng import RunningStats, batch_sizes, substream
from .errors import InputError, NumericalError

FAMILIES = ("rayleigh", "constant", "discrete")
MC_BATCH = 100_000


@dataclass(frozen=True)
class FadingModel:
    """iid fading powers ``nu = |h|^2`` for ``users`` independent users.

    ``rayleigh`` draws exponential powers with mean 1, ``constant`` fixes
    ``nu = value`` and ``discrete`` draws from ``values`` with ``probs``.
    """

    family: str = "rayleigh"
    users: int = 1
    value: float = 1.0
    values: tuple = field(default=())
    probs: tuple = field(default=())

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"family must be one of {FAMILIES}")
        if self.users < 1:
            raise InputError("need at least one user")
        if self.family == "constant" and self.value <= 0:
            raise InputError("constant fading power must be positive")
        if self.family == "discrete":
            v = np.asarray(self.values, float)
            p = np.asarray(self.probs, float)
            if v.size == 0 or v.shape != p.shape or np.any(v < 0) or np.any(p < 0):
                raise InputError("discrete fading needs matching nonnegative values and probs")
            if abs(p.sum() - 1) > 1e-12:
                raise InputError("discrete fading probabilities must sum to 1")

    def with_users(self, m):
        return FadingModel(self.family, int(m), self.value, self.values, self.probs)

    @property
    def mean(self):
        if self.family == "rayleigh":
            return 1.0
        if self.family == "constant":
            return float(self.value)
        return float(np.dot(self.values, self.probs))

    def sample(self, rng, n):
        shape = (int(n), self.users)
        if self.family == "rayleigh":
            return rng.exponential(1.0, size=shape)
        if self.family == "constant":
            return np.full(shape, float(self.value))
        return rng.choice(np.asarray(self.values, float), size=shape, p=np.asarray(self.probs, float))

    def expect_max(self, fn, lower=0.0):
        """``E[fn(nu_max) 1{nu_max > lower}]`` for the largest of ``users`` draws."""
        m = self.users
        if self.family == "constant":
            return float(fn(self.value)) if self.value > lower else 0.0
        if self.family == "discrete":
            v = np.asarray(self.values, float)
            p = np.asarray(self.probs, float)
            order = np.argsort(v)
            v, p = v[order], p[order]
            cdf = np.cumsum(p)
            pmax = cdf ** m - np.concatenate(([0.0], cdf[:-1])) ** m
            mask = v > lower
            return float(sum(pm * fn(x) for x, pm in zip(v[mask], pmax[mask])))

        def integrand(x):
            return fn(x) * m * math.exp(-x) * (-math.expm1(-x)) ** (m - 1)

        val, err = quad(integrand, lower, math.inf, epsabs=1e-13, epsrel=1e-12, limit=500)
        if not math.isfinite(val):
            raise NumericalError("quadrature over the max-fading density diverged")
        return val


# --------------------------------------------------------------------------
# CSI at the receiver
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CsirResult:
    rate: float
    stderr: float
    upper_bound: float
    n: int


def _check_power(p, sigma2):
    if p <= 0 or sigma2 <= 0:
        raise InputError("power and noise variance must be positive")


def csir_sum_rate(model: FadingModel, P, sigma2, n_mc=MC_BATCH, seed=0, batch=MC_BATCH) -> CsirResult:
    """Per-user rate ``(1/M) E[log2(1 + P sum(nu) / sigma2)]`` by Monte Carlo.

    The upper bound replaces the fading powers by their mean.
    """
    _check_power(P, sigma2)
    if n_mc < 10_000:
        raise InputError("n_mc must be at least 10^4")
    m = model.users
    ub = math.log2(1 + m * P * model.mean / sigma2) / m
    if model.family == "constant":
        # no randomness: the estimator is the bound itself
        return CsirResult(ub, 0.0, ub, int(n_mc))
    stats = RunningStats()
    for b, nb in enumerate(batch_sizes(n_mc, batch)):
        nu = model.sample(substream(seed, b), nb)
        stats.push(np.log2(1 + P * nu.sum(axis=1) / sigma2) / m)
    return CsirResult(stats.mean, stats.stderr, ub, stats.n)


def csir_subset_rates(model: FadingModel, P, sigma2, n_mc=MC_BATCH, seed=0, batch=MC_BATCH):
    """Monte Carlo bounds ``E[log2(1 + P sum_S nu / sigma2)]`` for every user subset.

    Returns ``{subset: (estimate, stderr)}``; limited to four users.
    """
    _check_power(P, sigma2)
    m = model.users
    if m > 4:
        raise InputError("subset bounds are exposed for at most 4 users")
    subsets = [s for r in range(1, m + 1) for s in combinations(range(1, m + 1), r)]
    stats = {s: RunningStats() for s in subsets}
    for b, nb in enumerate(batch_sizes(n_mc, batch)):
        nu = model.sample(substream(seed, b), nb)
        for s in subsets:
            idx = [i - 1 for i in s]
            stats[s].push(np.log2(1 + P * nu[:, idx].sum(axis=1) / sigma2))
    return {s: (st.mean, st.stderr) for s, st in stats.items()}


# --------------------------------------------------------------------------
# CSI at transmitters: best-user water-filling
# --------------------------------------------------------------------------

def average_power(model: FadingModel, lam, sigma2=1.0):
    """Per-user average power ``(1/M) E[(1/lam - sigma2/nu_max)^+]``."""
    thr = lam * sigma2
    return model.expect_max(lambda v: 1.0 / lam - sigma2 / v, lower=thr) / model.users


def waterfill_lambda(model: FadingModel, P_avg, sigma2=1.0):
    """Threshold ``lam`` meeting the per-user average power ``P_avg``.

    Only the strongest user transmits, with power ``1/lam - sigma2/nu``
    when ``nu > lam * sigma2``.
    """
    _check_power(P_avg, sigma2)

    def gap(lam):
        return average_power(model, lam, sigma2) - P_avg

    hi = 1.0
    for _ in range(200):
        if gap(hi) < 0:
            break
        hi *= 2.0
    else:
        raise NumericalError("could not bracket the water-filling threshold from above")
    lo = hi / 2.0
    for _ in range(2000):
        if gap(lo) > 0:
            break
        lo /= 2.0
    else:
        raise NumericalError("could not bracket the water-filling threshold from below")
    lam = brentq(gap, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=1000)
    if abs(gap(lam)) > 1e-8 * P_avg:
        raise NumericalError(f"water-filling residual {gap(lam):.3e} exceeds tolerance")
    return lam


def best_user_powers(nu, lam, sigma2=1.0):
    """Instantaneous powers under best-user water-filling (ties go to the lowest index)."""
    nu = np.atleast_2d(np.asarray(nu, dtype=float))
    out = np.zeros_like(nu)
    rows = np.arange(nu.shape[0])
    best = np.argmax(nu, axis=1)
    vmax = nu[rows, best]
    with np.errstate(divide="ignore"):
        p = np.where(vmax > lam * sigma2, 1.0 / lam - sigma2 / vmax, 0.0)
    out[rows, best] = p
    return out


def power_audit(model: FadingModel, lam, sigma2=1.0, n=10**6, seed=0, batch=MC_BATCH):
    """Monte Carlo per-user average power under the policy: ``(mean, stderr)``."""
    stats = RunningStats()
    for b, nb in enumerate(batch_sizes(n, batch)):
        nu = model.sample(substream(seed, b), nb)
        stats.push(best_user_powers(nu, lam, sigma2).sum(axis=1) / model.users)
    return stats.mean, stats.stderr


def csit_sum_rate(model: FadingModel, P_avg, sigma2=1.0):
    """Per-user ergodic rate under best-user water-filling, by quadrature."""
    lam = waterfill_lambda(model, P_avg, sigma2)
    thr = lam * sigma2
    total = model.expect_max(lambda v: math.log2(v / thr), lower=thr)
    return total / model.users
