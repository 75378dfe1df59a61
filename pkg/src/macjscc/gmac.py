"""Sources over the Gaussian MAC ``Y = X1 + X2 + N``.

Closed-form rate bounds for correlated Gaussian inputs, the admissible
input-correlation interval for discrete sources, and distortion of the
amplify-and-forward (AF), separation-based (SB) and Lapidoth-Tinguely (LT)
schemes together with the necessary-condition (NC) lower bound.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import InputError
from .probcore import GaussianVector

SCHEMES = ("af", "sb", "lt", "nc")


@dataclass(frozen=True)
class GmacSpec:
    P1: float
    P2: float
    sigma_n2: float

    def __post_init__(self):
        if min(self.P1, self.P2, self.sigma_n2) <= 0:
            raise InputError("powers and noise variance must be positive")

    @classmethod
    def symmetric(cls, snr, sigma_n2=1.0):
        return cls(snr * sigma_n2, snr * sigma_n2, sigma_n2)


@dataclass(frozen=True)
class GaussianSourcePair:
    sigma1_2: float
    sigma2_2: float
    rho: float

    def __post_init__(self):
        if self.sigma1_2 <= 0 or self.sigma2_2 <= 0:
            raise InputError("source variances must be positive")
        if abs(self.rho) > 1:
            raise InputError("|rho| must not exceed 1")

    def cov(self):
        c = self.rho * math.sqrt(self.sigma1_2 * self.sigma2_2)
        return np.array([[self.sigma1_2, c], [c, self.sigma2_2]])


@dataclass(frozen=True)
class SchemePoint:
    snr: float
    scheme: str
    D1: float
    D2: float
    R1: Optional[float] = None
    R2: Optional[float] = None
    rho_tilde: Optional[float] = None

    @property
    def snr_db(self):
        return 10.0 * math.log10(self.snr)


# --------------------------------------------------------------------------
# rate bounds
# --------------------------------------------------------------------------

def relaxed_bounds(g: GmacSpec, rho: float):
    """``(B1, B2, B12)`` in bits for jointly Gaussian inputs with correlation ``rho``."""
    if abs(rho) > 1:
        raise InputError("|rho| must not exceed 1")
    b1 = 0.5 * math.log2(1 + g.P1 * (1 - rho * rho) / g.sigma_n2)
    b2 = 0.5 * math.log2(1 + g.P2 * (1 - rho * rho) / g.sigma_n2)
    b12 = 0.5 * math.log2(1 + (g.P1 + g.P2 + 2 * rho * math.sqrt(g.P1 * g.P2)) / g.sigma_n2)
    return b1, b2, b12


@dataclass(frozen=True)
class RhoInterval:
    rho_max_1: float
    rho_max_2: float
    rho_min: float
    lemma3_cap: float
    feasible: bool

    @property
    def rho_max(self):
        return min(self.rho_max_1, self.rho_max_2)

    @property
    def upper(self):
        return min(self.rho_max, self.lemma3_cap)


def _rho_cap_single(h, p, sigma_n2):
    # largest rho with h <= 0.5 log2(1 + p (1 - rho^2) / sigma_n2); nan if none
    need = (2.0 ** (2 * h) - 1) * sigma_n2 / p
    return math.sqrt(1 - need) if need <= 1 else math.nan


def rho_interval(g: GmacSpec, h1g2, h2g1, h12, i12) -> RhoInterval:
    """Input correlations in ``[0, 1]`` compatible with the relaxed bounds.

    ``rho_max_*`` invert the per-user bounds, ``rho_min`` inverts the sum
    bound (0 when it already holds for independent inputs, ``inf`` when no
    correlation suffices) and ``lemma3_cap = sqrt(1 - 2^(-2 I(U1;U2)))``
    bounds the correlation attainable through ``X1 - U1 - U2 - X2``.
    """
    if min(h1g2, h2g1, h12, i12) < 0:
        raise InputError("entropy inputs must be nonnegative")
    r1 = _rho_cap_single(h1g2, g.P1, g.sigma_n2)
    r2 = _rho_cap_single(h2g1, g.P2, g.sigma_n2)
    need = (2.0 ** (2 * h12) - 1) * g.sigma_n2 - g.P1 - g.P2
    if need <= 0:
        rmin = 0.0
    else:
        rmin = need / (2 * math.sqrt(g.P1 * g.P2))
        if rmin > 1:
            rmin = math.inf
    cap = math.sqrt(max(0.0, 1 - 2.0 ** (-2 * i12)))
    feasible = (not math.isnan(r1) and not math.isnan(r2)
                and rmin <= min(r1, r2, cap))
    return RhoInterval(r1, r2, rmin, cap, bool(feasible))


# --------------------------------------------------------------------------
# amplify and forward
# --------------------------------------------------------------------------

def af_distortion(s: GaussianSourcePair, g: GmacSpec):
    """MMSE distortions when each user sends its scaled source sample."""
    denom = g.P1 + g.P2 + 2 * s.rho * math.sqrt(g.P1 * g.P2) + g.sigma_n2
    d1 = s.sigma1_2 * (g.P2 * (1 - s.rho ** 2) + g.sigma_n2) / denom
    d2 = s.sigma2_2 * (g.P1 * (1 - s.rho ** 2) + g.sigma_n2) / denom
    return d1, d2


def af_joint(s: GaussianSourcePair, g: GmacSpec) -> GaussianVector:
    """Joint law of ``(U1, U2, Y)`` under amplify and forward."""
    k = np.array([math.sqrt(g.P1 / s.sigma1_2), math.sqrt(g.P2 / s.sigma2_2)])
    cu = s.cov()
    cuy = cu @ k
    vy = k @ cu @ k + g.sigma_n2
    cov = np.zeros((3, 3))
    cov[:2, :2] = cu
    cov[:2, 2] = cov[2, :2] = cuy
    cov[2, 2] = vy
    return GaussianVector.zero_mean(cov)


# --------------------------------------------------------------------------
# separation based
# --------------------------------------------------------------------------

def sb_rate_symmetric(snr):
    """Per-user rate at the independent-input sum capacity, ``0.25 log2(1 + 2S)``."""
    return 0.25 * math.log2(1 + 2 * snr)


def wagner_distortion_symmetric(sigma2, rho, rate):
    """Symmetric distortion achievable when both Gaussian sources are coded at ``rate``."""
    return sigma2 * math.sqrt(2.0 ** (-4 * rate) * (1 - rho * rho) + rho * rho * 2.0 ** (-8 * rate))


def sb_distortion_symmetric(sigma2, rho, snr):
    if snr <= 0:
        raise InputError("SNR must be positive")
    return wagner_distortion_symmetric(sigma2, rho, sb_rate_symmetric(snr))


# --------------------------------------------------------------------------
# Lapidoth-Tinguely
# --------------------------------------------------------------------------

def lt_rho_tilde(rho, r1, r2):
    return rho * math.sqrt((1 - 2.0 ** (-2 * r1)) * (1 - 2.0 ** (-2 * r2)))


def lt_distortion(s: GaussianSourcePair, g: GmacSpec, r1, r2, *, tol=1e-12):
    """Distortions of the LT scheme at rates ``(r1, r2)`` and their feasibility.

    Returns ``(D1, D2, feasible)``; ``feasible`` checks the two per-user rate
    limits and the sum-rate limit for the induced input correlation.
    """
    if r1 < 0 or r2 < 0:
        raise InputError("rates must be nonnegative")
    rho = s.rho
    q1, q2 = 2.0 ** (-2 * r1), 2.0 ** (-2 * r2)
    rt = lt_rho_tilde(rho, r1, r2)
    den = 1 - rt * rt
    d1 = s.sigma1_2 * q1 * (1 - rho * rho * (1 - q2)) / den
    d2 = s.sigma2_2 * q2 * (1 - rho * rho * (1 - q1)) / den
    lim1 = 0.5 * math.log2(g.P1 / g.sigma_n2 + 1 / den)
    lim2 = 0.5 * math.log2(g.P2 / g.sigma_n2 + 1 / den)
    lim12 = 0.5 * math.log2((g.sigma_n2 + g.P1 + g.P2 + 2 * rt * math.sqrt(g.P1 * g.P2))
                            / (den * g.sigma_n2))
    feasible = r1 <= lim1 + tol and r2 <= lim2 + tol and r1 + r2 <= lim12 + tol
    return d1, d2, bool(feasible)


def lt_joint(s: GaussianSourcePair, r1, r2) -> GaussianVector:
    """Joint law of ``(U1, U2, W1, W2)`` for quantizers at rates ``(r1, r2)``."""
    x1, x2 = 1 - 2.0 ** (-2 * r1), 1 - 2.0 ** (-2 * r2)
    s1, s2 = math.sqrt(s.sigma1_2), math.sqrt(s.sigma2_2)
    c = s.rho * s1 * s2
    cov = np.array([
        [s.sigma1_2, c, s.sigma1_2 * x1, c * x2],
        [c, s.sigma2_2, c * x1, s.sigma2_2 * x2],
        [s.sigma1_2 * x1, c * x1, s.sigma1_2 * x1, c * x1 * x2],
        [c * x2, s.sigma2_2 * x2, c * x1 * x2, s.sigma2_2 * x2],
    ])
    return GaussianVector.zero_mean(cov)


@dataclass(frozen=True)
class LtSolution:
    rate: float
    rho_tilde: float
    distortion: float
    sum_residual: float
    boundary: bool = False


def _lt_sum_gap(rt, rho, snr):
    # 2R(rt) minus the sum-rate limit, with R from rt = rho (1 - 2^(-2R))
    rate = -0.5 * math.log2(1 - rt / rho)
    lim = 0.5 * math.log2((1 + 2 * snr * (1 + rt)) / (1 - rt * rt))
    return 2 * rate - lim


def lt_optimize_symmetric(sigma2, rho, snr) -> LtSolution:
    """Symmetric LT operating point where the sum-rate limit holds with equality."""
    if snr <= 0:
        raise InputError("SNR must be positive")
    if not 0 <= rho < 1:
        raise InputError("rho must lie in [0, 1)")
    if rho == 0:
        r = sb_rate_symmetric(snr)
        return LtSolution(r, 0.0, sigma2 * 2.0 ** (-2 * r), 0.0)
    hi = rho * (1 - 1e-15)
    if _lt_sum_gap(hi, rho, snr) <= 0:
        r = sb_rate_symmetric(snr)
        return LtSolution(r, 0.0, wagner_distortion_symmetric(sigma2, rho, r), math.nan, boundary=True)
    rt = brentq(_lt_sum_gap, 0.0, hi, args=(rho, snr), xtol=1e-15, rtol=4 * np.finfo(float).eps,
                maxiter=500)
    r = -0.5 * math.log2(1 - rt / rho)
    q = 2.0 ** (-2 * r)
    d = sigma2 * q * (1 - rho * rho * (1 - q)) / (1 - rt * rt)
    return LtSolution(r, rt, d, _lt_sum_gap(rt, rho, snr))


# --------------------------------------------------------------------------
# necessary condition
# --------------------------------------------------------------------------

def nc_breakpoint(rho):
    return rho / (1 - rho * rho)


def nc_bound_symmetric(sigma2, rho, snr):
    """Lower bound on the symmetric distortion of any scheme."""
    if snr <= 0:
        raise InputError("SNR must be positive")
    if snr <= nc_breakpoint(rho):
        return sigma2 * (snr * (1 - rho * rho) + 1) / (2 * snr * (1 + rho) + 1)
    return sigma2 * math.sqrt((1 - rho * rho) / (2 * snr * (1 + rho) + 1))


# --------------------------------------------------------------------------
# sweeps
# --------------------------------------------------------------------------

def scheme_point(scheme, sigma2, rho, snr) -> SchemePoint:
    scheme = scheme.lower()
    if scheme == "af":
        d, _ = af_distortion(GaussianSourcePair(sigma2, sigma2, rho), GmacSpec.symmetric(snr))
        return SchemePoint(snr, "af", d, d)
    if scheme == "sb":
        r = sb_rate_symmetric(snr)
        d = wagner_distortion_symmetric(sigma2, rho, r)
        return SchemePoint(snr, "sb", d, d, r, r, 0.0)
    if scheme == "lt":
        sol = lt_optimize_symmetric(sigma2, rho, snr)
        return SchemePoint(snr, "lt", sol.distortion, sol.distortion, sol.rate, sol.rate, sol.rho_tilde)
    if scheme == "nc":
        d = nc_bound_symmetric(sigma2, rho, snr)
        return SchemePoint(snr, "nc", d, d)
    raise InputError(f"unknown scheme {scheme!r}; choose from {SCHEMES}")


def sweep(schemes: Sequence[str], sigma2, rho, snr_grid) -> list:
    """Scheme distortions over an increasing SNR grid (linear scale).

    Rows are ordered by grid point, then by the order of ``schemes``.
    """
    grid = np.asarray(snr_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise InputError("SNR grid must be positive and strictly increasing")
    return [scheme_point(sc, sigma2, rho, float(snr)) for snr in grid for sc in schemes]
