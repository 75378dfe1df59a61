"""Correlated Gaussian sources over orthogonal channels ``Y_i = X_i + N_i``.

Covers the separation bounds, the TDMA specialization, AF and SB
distortions, AF for ``N`` exchangeable sources, and AF with side
information ``Z1 = s1 U2 + V1``, ``Z2 = s2 U1 + V2`` (unit-variance ``V_i``).
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InputError
from .gmac import GaussianSourcePair
from .probcore import GaussianVector, lmmse

MODES = ("none", "enc", "dec", "both")


@dataclass(frozen=True)
class OrthogonalSpec:
    P1: float
    P2: float
    sigma_n1_2: float
    sigma_n2_2: float

    def __post_init__(self):
        if min(self.P1, self.P2, self.sigma_n1_2, self.sigma_n2_2) <= 0:
            raise InputError("powers and noise variances must be positive")

    @classmethod
    def symmetric(cls, snr, sigma_n2=1.0):
        return cls(snr * sigma_n2, snr * sigma_n2, sigma_n2, sigma_n2)


@dataclass(frozen=True)
class SideInfoModel:
    s1: float
    s2: float

    def __post_init__(self):
        if self.s1 < 0 or self.s2 < 0:
            raise InputError("side-information gains must be nonnegative")


@dataclass(frozen=True)
class LinearCombiner:
    """Encoder ``i`` amplifies ``L_i = a_i U_i + b_i Z_i``."""

    a1: float = 1.0
    b1: float = 0.0
    a2: float = 1.0
    b2: float = 0.0

    @classmethod
    def from_ratios(cls, t1, t2):
        """Combiner with ``b_i / a_i = t_i``; ``inf`` sends ``Z_i`` alone."""
        def pair(t):
            return (0.0, 1.0) if math.isinf(t) else (1.0, float(t))
        (a1, b1), (a2, b2) = pair(t1), pair(t2)
        return cls(a1, b1, a2, b2)


def _capacity(p, n):
    return 0.5 * math.log2(1 + p / n)


def separation_bounds(spec: OrthogonalSpec):
    """``(C1, C2, C1 + C2)`` in bits."""
    c1 = _capacity(spec.P1, spec.sigma_n1_2)
    c2 = _capacity(spec.P2, spec.sigma_n2_2)
    return c1, c2, c1 + c2


def tdma_bounds(spec: OrthogonalSpec, alpha):
    """Rates when user 1 holds the channel a fraction ``alpha`` of the time."""
    if not 0 < alpha < 1:
        raise InputError("alpha must lie strictly between 0 and 1")
    b1 = 0.5 * alpha * math.log2(1 + spec.P1 / (alpha * spec.sigma_n1_2))
    b2 = 0.5 * (1 - alpha) * math.log2(1 + spec.P2 / ((1 - alpha) * spec.sigma_n2_2))
    return b1, b2, b1 + b2


def af_distortion_orth(s: GaussianSourcePair, spec: OrthogonalSpec):
    """MMSE distortions of AF at full power over the two orthogonal links."""
    p1, p2, n1, n2 = spec.P1, spec.P2, spec.sigma_n1_2, spec.sigma_n2_2
    r2 = s.rho ** 2
    den = p1 * p2 * (1 - r2) + n2 * p1 + n1 * p2 + n1 * n2
    d1 = s.sigma1_2 * n1 * (p2 * (1 - r2) + n2) / den
    d2 = s.sigma2_2 * n2 * (p1 * (1 - r2) + n1) / den
    return d1, d2


def af_distortion_orth_symmetric(rho, snr):
    return (snr * (1 - rho * rho) + 1) / (1 + 2 * snr + snr * snr * (1 - rho * rho))


def sb_distortion_orth_symmetric(rho, snr):
    """Symmetric SB distortion for unit-variance sources."""
    if snr <= 0:
        raise InputError("SNR must be positive")
    return math.sqrt((1 - rho * rho) / (1 + snr) ** 2 + rho * rho / (1 + snr) ** 4)


def af_multisource(n, rho, p, sigma_n2):
    """AF distortion of source 1 among ``n`` unit-variance sources with pairwise correlation ``rho``."""
    n = int(n)
    if n < 1:
        raise InputError("need at least one source")
    k = np.full((n, n), float(rho))
    np.fill_diagonal(k, 1.0)
    if np.linalg.eigvalsh(k).min() <= 0:
        raise InputError(f"correlation {rho} does not give a positive definite covariance for N={n}")
    c = math.sqrt(p) * k[0]
    d = 1.0 - c @ np.linalg.solve(p * k + sigma_n2 * np.eye(n), c)
    return float(min(max(d, 0.0), 1.0))


# --------------------------------------------------------------------------
# AF with side information
# --------------------------------------------------------------------------

# base vector order: U1, U2, V1, V2, N1, N2
# observation vector order: U1, U2, Z1, Z2, Y1, Y2

def af_si_linear_map(s: GaussianSourcePair, spec: OrthogonalSpec, si: Optional[SideInfoModel],
                     comb: Optional[LinearCombiner]):
    """Base covariance and the linear map to ``(U1, U2, Z1, Z2, Y1, Y2)``."""
    si = si or SideInfoModel(0.0, 0.0)
    comb = comb or LinearCombiner()
    base = np.zeros((6, 6))
    base[:2, :2] = s.cov()
    base[2, 2] = base[3, 3] = 1.0
    base[4, 4] = spec.sigma_n1_2
    base[5, 5] = spec.sigma_n2_2
    a = np.zeros((6, 6))
    a[0, 0] = a[1, 1] = 1.0
    a[2, 1], a[2, 2] = si.s1, 1.0
    a[3, 0], a[3, 3] = si.s2, 1.0
    l1 = comb.a1 * a[0] + comb.b1 * a[2]
    l2 = comb.a2 * a[1] + comb.b2 * a[3]
    var1, var2 = l1 @ base @ l1, l2 @ base @ l2
    if var1 <= 1e-14 or var2 <= 1e-14:
        raise InputError("degenerate linear combiner: a channel input has zero variance")
    a[4] = math.sqrt(spec.P1 / var1) * l1
    a[4, 4] += 1.0
    a[5] = math.sqrt(spec.P2 / var2) * l2
    a[5, 5] += 1.0
    return base, a


def af_si_joint(s, spec, si=None, comb=None) -> GaussianVector:
    base, a = af_si_linear_map(s, spec, si, comb)
    return GaussianVector.zero_mean(a @ base @ a.T)


def af_si_distortion(s: GaussianSourcePair, spec: OrthogonalSpec, si: Optional[SideInfoModel] = None,
                     comb: Optional[LinearCombiner] = None, decoder_si=False):
    """AF distortions with encoders sending ``L_i`` at full power.

    The decoder is the LMMSE estimator of ``(U1, U2)`` from ``(Y1, Y2)``,
    plus ``(Z1, Z2)`` when ``decoder_si`` is true.
    """
    g = af_si_joint(s, spec, si, comb)
    obs = [4, 5] + ([2, 3] if decoder_si else [])
    _, err = lmmse(g, [0, 1], obs, pinv=True)
    return float(err[0, 0]), float(err[1, 1])


@dataclass(frozen=True)
class SiOptimum:
    combiner: LinearCombiner
    ratios: tuple
    mean_distortion: float
    mode: str


def _objective(s, spec, si, decoder_si, t1, t2):
    try:
        d1, d2 = af_si_distortion(s, spec, si, LinearCombiner.from_ratios(t1, t2), decoder_si)
    except InputError:
        return math.inf
    return 0.5 * (d1 + d2)


def af_si_optimize(s: GaussianSourcePair, spec: OrthogonalSpec, si: SideInfoModel, mode="both",
                   *, span=10.0, coarse=41, resolution=1e-4) -> SiOptimum:
    """Minimize ``(D1 + D2) / 2`` over combiners ``b_i / a_i`` in ``[-span, span]``.

    ``mode`` selects the side information in use: ``none`` (plain AF),
    ``enc`` (combiners only), ``dec`` (decoder only, ``b = 0``) or ``both``.
    The search is a coarse grid plus the ``a_i = 0`` edges, followed by
    nested grid refinement around the incumbent until the step drops
    below ``resolution``. Ties keep the earliest grid point, scanned from
    ``b_i / a_i = 0`` outward.
    """
    if mode not in MODES:
        raise InputError(f"mode must be one of {MODES}")
    decoder_si = mode in ("dec", "both")
    if mode in ("none", "dec"):
        best = (0.0, 0.0)
        val = _objective(s, spec, si, decoder_si, 0.0, 0.0)
        return SiOptimum(LinearCombiner(), best, val, mode)

    grid = np.linspace(-span, span, coarse)
    grid = grid[np.argsort(np.abs(grid), kind="stable")]
    cands = list(grid) + [math.inf]
    best, val = (0.0, 0.0), _objective(s, spec, si, decoder_si, 0.0, 0.0)
    for t1 in cands:
        for t2 in cands:
            v = _objective(s, spec, si, decoder_si, t1, t2)
            if v < val - 1e-15:
                best, val = (t1, t2), v

    step = float(np.diff(np.sort(grid)).min()) if coarse > 1 else span
    while step > resolution:
        centers = [c if not math.isinf(c) else None for c in best]
        local = []
        for c in centers:
            if c is None:
                local.append([math.inf])
            else:
                pts = c + step * np.linspace(-1, 1, 11)
                pts = pts[np.argsort(np.abs(pts - c), kind="stable")]
                local.append(list(np.clip(pts, -span, span)))
        for t1 in local[0]:
            for t2 in local[1]:
                v = _objective(s, spec, si, decoder_si, t1, t2)
                if v < val - 1e-15:
                    best, val = (t1, t2), v
        step /= 5.0
    return SiOptimum(LinearCombiner.from_ratios(*best), tuple(float(b) for b in best), val, mode)


def orth_sweep(rho, snr_grid):
    """Rows ``(S, D_AF, D_SB)`` for the symmetric unit-variance case."""
    grid = np.asarray(snr_grid, dtype=float)
    if grid.ndim != 1 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise InputError("SNR grid must be positive and strictly increasing")
    return [(float(x), af_distortion_orth_symmetric(rho, x), sb_distortion_orth_symmetric(rho, x))
            for x in grid]
