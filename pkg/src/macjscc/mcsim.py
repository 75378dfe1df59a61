"""Seeded Monte Carlo checks of the closed-form amplify-and-forward distortions.

Every simulation splits its samples into batches. Batch ``b`` draws from the
substream keyed by ``(seed, b)`` and results are merged in batch order, so
the output does not depend on how many threads ran the batches.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ._rng import RunningStats, batch_sizes, default_seed, substream
from .errors import InputError, NumericalError
from .gmac import GaussianSourcePair, GmacSpec, af_distortion, af_joint
from .orthogonal import LinearCombiner, OrthogonalSpec, SideInfoModel, af_si_distortion, af_si_joint
from .probcore import lmmse

_LOG2E = 1.0 / math.log(2.0)


@dataclass(frozen=True)
class SimConfig:
    seed: int = 0
    n_samples: int = 10**6
    batch: int = 100_000
    threads: int = 1

    def __post_init__(self):
        if self.n_samples < 1000:
            raise InputError("n_samples must be at least 1000")
        if self.batch < 1 or self.threads < 1:
            raise InputError("batch and threads must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise InputError("seed must fit in 64 bits")

    @classmethod
    def from_env(cls, **kw):
        kw.setdefault("seed", default_seed())
        return cls(**kw)


@dataclass(frozen=True)
class SimResult:
    D1: float
    D2: float
    se1: float
    se2: float
    n: int
    closed_D1: float
    closed_D2: float

    @property
    def z1(self):
        return (self.D1 - self.closed_D1) / self.se1

    @property
    def z2(self):
        return (self.D2 - self.closed_D2) / self.se2

    def to_json(self):
        return {
            "D1": self.D1, "D2": self.D2, "se1": self.se1, "se2": self.se2, "n": self.n,
            "closed_D1": self.closed_D1, "closed_D2": self.closed_D2, "z1": self.z1, "z2": self.z2,
        }


def run_batches(cfg: SimConfig, fn: Callable, n_stats: int):
    """Evaluate ``fn(rng, size) -> tuple of arrays`` per batch and merge in batch order."""
    sizes = batch_sizes(cfg.n_samples, cfg.batch)

    def task(b):
        return fn(substream(cfg.seed, b), sizes[b])

    if cfg.threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            outputs = list(pool.map(task, range(len(sizes))))
    else:
        outputs = [task(b) for b in range(len(sizes))]
    stats = [RunningStats() for _ in range(n_stats)]
    for out in outputs:
        for st, values in zip(stats, out):
            st.push(values)
    return stats


def _source_draw(s: GaussianSourcePair, rng, n):
    if s.rho ** 2 >= 1:
        raise InputError("source correlation must satisfy |rho| < 1")
    return rng.standard_normal((n, 2)) @ np.linalg.cholesky(s.cov()).T


def simulate_af_gmac(s: GaussianSourcePair, g: GmacSpec, cfg: SimConfig) -> SimResult:
    """Empirical AF distortions over ``Y = X1 + X2 + N`` with the linear MMSE decoder."""
    k = np.array([math.sqrt(g.P1 / s.sigma1_2), math.sqrt(g.P2 / s.sigma2_2)])
    coef, _ = lmmse(af_joint(s, g), [0, 1], [2])
    coef = coef[:, 0]

    def batch(rng, n):
        u = _source_draw(s, rng, n)
        y = u @ k + math.sqrt(g.sigma_n2) * rng.standard_normal(n)
        err = u - y[:, None] * coef[None, :]
        return err[:, 0] ** 2, err[:, 1] ** 2

    st1, st2 = run_batches(cfg, batch, 2)
    d1, d2 = af_distortion(s, g)
    return SimResult(st1.mean, st2.mean, st1.stderr, st2.stderr, st1.n, d1, d2)


def simulate_af_orth(s: GaussianSourcePair, spec: OrthogonalSpec, si: Optional[SideInfoModel] = None,
                     comb: Optional[LinearCombiner] = None, decoder_si=False,
                     cfg: Optional[SimConfig] = None) -> SimResult:
    """Empirical AF distortions over orthogonal links, with optional side information.

    Side information ``Z1 = s1 U2 + V1`` and ``Z2 = s2 U1 + V2`` is drawn
    explicitly; encoder ``i`` sends ``L_i = a_i U_i + b_i Z_i`` scaled to its
    full power and the decoder applies the linear MMSE rule on
    ``(Y1, Y2)``, plus ``(Z1, Z2)`` when ``decoder_si`` is set. Without
    ``cfg`` the default configuration seeded from the environment is used.
    """
    cfg = cfg or SimConfig.from_env()
    si = si or SideInfoModel(0.0, 0.0)
    comb = comb or LinearCombiner()
    g = af_si_joint(s, spec, si, comb)
    obs = [4, 5] + ([2, 3] if decoder_si else [])
    coef, _ = lmmse(g, [0, 1], obs, pinv=True)
    # gains that put each combiner output at full power
    raw1 = comb.a1 ** 2 * s.sigma1_2 + comb.b1 ** 2 * (si.s1 ** 2 * s.sigma2_2 + 1.0) \
        + 2 * comb.a1 * comb.b1 * si.s1 * s.rho * math.sqrt(s.sigma1_2 * s.sigma2_2)
    raw2 = comb.a2 ** 2 * s.sigma2_2 + comb.b2 ** 2 * (si.s2 ** 2 * s.sigma1_2 + 1.0) \
        + 2 * comb.a2 * comb.b2 * si.s2 * s.rho * math.sqrt(s.sigma1_2 * s.sigma2_2)
    k1 = math.sqrt(spec.P1 / raw1)
    k2 = math.sqrt(spec.P2 / raw2)

    def batch(rng, n):
        u = _source_draw(s, rng, n)
        v = rng.standard_normal((n, 2))
        noise = rng.standard_normal((n, 2)) * np.sqrt([spec.sigma_n1_2, spec.sigma_n2_2])
        z1 = si.s1 * u[:, 1] + v[:, 0]
        z2 = si.s2 * u[:, 0] + v[:, 1]
        y1 = k1 * (comb.a1 * u[:, 0] + comb.b1 * z1) + noise[:, 0]
        y2 = k2 * (comb.a2 * u[:, 1] + comb.b2 * z2) + noise[:, 1]
        cols = [y1, y2] + ([z1, z2] if decoder_si else [])
        est = np.column_stack(cols) @ coef.T
        err = u - est
        return err[:, 0] ** 2, err[:, 1] ** 2

    st1, st2 = run_batches(cfg, batch, 2)
    d1, d2 = af_si_distortion(s, spec, si, comb, decoder_si)
    return SimResult(st1.mean, st2.mean, st1.stderr, st2.stderr, st1.n, d1, d2)


def estimate_entropy_mc(density: Callable, sampler: Callable, cfg: SimConfig, *, log_density=False):
    """Differential entropy in bits, ``-E[log2 p(X)]``, with its standard error.

    Parameters
    ----------
    density : callable
        Maps an array of samples to densities (or natural-log densities when
        ``log_density`` is true).
    sampler : callable
        ``sampler(rng, n)`` returns ``n`` samples.
    """
    def batch(rng, n):
        x = sampler(rng, n)
        val = np.asarray(density(x), dtype=float)
        if log_density:
            bad = ~np.isfinite(val)
        else:
            bad = ~(val > 0)
        if np.any(bad):
            i = int(np.argmax(bad))
            raise NumericalError(f"density is not positive at sample {np.asarray(x)[i]!r}")
        logs = val if log_density else np.log(val)
        return (-logs * _LOG2E,)

    (st,) = run_batches(cfg, batch, 1)
    return st.mean, st.stderr
