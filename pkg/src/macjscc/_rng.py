"""Keyed random substreams and a mergeable running mean/variance."""

import math
import os

import numpy as np

from .errors import InputError

DEFAULT_SEED = 0


def default_seed():
    """Seed from ``MACJSCC_SEED`` when set, else 0."""
    raw = os.environ.get("MACJSCC_SEED")
    if raw in (None, ""):
        return DEFAULT_SEED
    try:
        seed = int(raw)
    except ValueError:
        raise InputError(f"MACJSCC_SEED must be an integer, got {raw!r}") from None
    if seed < 0:
        raise InputError("MACJSCC_SEED must be nonnegative")
    return seed


def substream(seed, index):
    """Counter-based generator keyed by ``(seed, index)``.

    Streams for different indices are independent and do not depend on the
    order in which they are created, so batches can run in any schedule.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(ss))


def batch_sizes(n, batch):
    full, rest = divmod(int(n), int(batch))
    return [int(batch)] * full + ([rest] if rest else [])


class RunningStats:
    """One-pass mean and variance; batches merge with the pairwise update."""

    def __init__(self):
        self.n = 0
        self.mean = 0.0
        self.m2 = 0.0

    def push(self, values):
        x = np.asarray(values, dtype=float).ravel()
        nb = x.size
        if nb == 0:
            return self
        mb = float(x.mean())
        m2b = float(((x - mb) ** 2).sum())
        if self.n == 0:
            self.n, self.mean, self.m2 = nb, mb, m2b
            return self
        n = self.n + nb
        delta = mb - self.mean
        self.mean += delta * nb / n
        self.m2 += m2b + delta * delta * self.n * nb / n
        self.n = n
        return self

    @property
    def variance(self):
        return self.m2 / (self.n - 1) if self.n > 1 else 0.0

    @property
    def stderr(self):
        return math.sqrt(self.variance / self.n) if self.n > 0 else math.inf
