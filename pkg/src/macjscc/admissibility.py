"""Sufficient conditions for distributed lossy transmission over a discrete MAC.

A system is described by a source table over ``U1..UM, Z1..ZM, Z``, one
quantizer ``p(w_i | u_i, z_i)`` and one channel map ``p(x_i | w_i)`` per user,
and a channel ``p(y | x_1..x_M)``. For every nonempty user subset ``A`` the
checker compares

    I(U_A, Z_A; W_A | W_Ac, Z)   <   I(X_A; Y | X_Ac, W_Ac, Z)

by exact enumeration of the joint table, and builds the decoder
``(w_1..w_M, z) -> (u_1..u_M)`` that minimizes posterior expected distortion.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .errors import InputError
from .probcore import (
    Kernel,
    Pmf,
    binary_entropy,
    conditional_entropy,
    mutual_information,
    push_through,
)

STRICT_EPS = 1e-9
DISTORTION_SLACK = 1e-9
MAX_USERS = 6


# --------------------------------------------------------------------------
# distortion measures
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DistortionSpec:
    """Per-source distortion measures and limits.

    ``measures`` entries are ``"hamming"``, ``"squared_error"`` (on symbol
    indices) or an explicit ``(|U|, |U_hat|)`` table. ``joint_limit``, when
    given, bounds the expected sum of the per-source distortions.
    """

    measures: tuple
    limits: tuple
    joint_limit: Optional[float] = None

    def __post_init__(self):
        if len(self.measures) != len(self.limits):
            raise InputError("one limit per distortion measure is required")
        if any(float(d) < 0 for d in self.limits):
            raise InputError("distortion limits must be nonnegative")
        if self.joint_limit is not None and self.joint_limit < 0:
            raise InputError("joint distortion limit must be nonnegative")
        for m in self.measures:
            if isinstance(m, str):
                if m not in ("hamming", "squared_error"):
                    raise InputError(f"unknown distortion measure {m!r}")
            elif np.any(np.asarray(m, float) < 0):
                raise InputError("custom distortion tables must be nonnegative")

    @classmethod
    def hamming(cls, *limits):
        return cls(tuple("hamming" for _ in limits), tuple(float(d) for d in limits))

    def matrix(self, i, size):
        m = self.measures[i]
        if isinstance(m, str):
            u = np.arange(size)
            if m == "hamming":
                return (u[:, None] != u[None, :]).astype(float)
            return (u[:, None] - u[None, :]).astype(float) ** 2
        t = np.asarray(m, dtype=float)
        if t.ndim != 2 or t.shape[0] != size:
            raise InputError(f"distortion table {i} must have {size} rows")
        return t


# --------------------------------------------------------------------------
# systems
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SideInfoSystem:
    """Sources, side information, quantizers, channel maps and channel.

    Variable naming is fixed: sources ``U1..UM``, encoder side information
    ``Z1..ZM``, decoder side information ``Z``, quantizer outputs ``W1..WM``,
    channel inputs ``X1..XM`` and channel output ``Y``. Degenerate side
    information is a variable of alphabet size 1.
    """

    source: Pmf
    quantizers: tuple
    channel_maps: tuple
    channel: Kernel
    distortion: Optional[DistortionSpec] = None
    _joint: list = field(default_factory=list, init=False, repr=False, compare=False)

    def __post_init__(self):
        m = len(self.quantizers)
        if not 1 <= m <= MAX_USERS:
            raise InputError(f"between 1 and {MAX_USERS} users supported, got {m}")
        if len(self.channel_maps) != m:
            raise InputError("one channel map per quantizer is required")
        expected = [f"U{i}" for i in range(1, m + 1)] + [f"Z{i}" for i in range(1, m + 1)] + ["Z"]
        if sorted(self.source.names) != sorted(expected):
            raise InputError(f"source variables must be exactly {expected}, got {list(self.source.names)}")
        for i, q in enumerate(self.quantizers, start=1):
            if q.output_var[0] != f"W{i}":
                raise InputError(f"quantizer {i} must output W{i}")
            if not set(q.input_names) <= {f"U{i}", f"Z{i}"}:
                raise InputError(f"quantizer {i} may depend only on U{i}, Z{i}")
        for i, k in enumerate(self.channel_maps, start=1):
            if k.output_var[0] != f"X{i}":
                raise InputError(f"channel map {i} must output X{i}")
            if not set(k.input_names) <= {f"W{i}"}:
                raise InputError(f"channel map {i} may depend only on W{i}")
        if self.channel.output_var[0] != "Y":
            raise InputError("channel must output Y")
        if not set(self.channel.input_names) <= {f"X{i}" for i in range(1, m + 1)}:
            raise InputError("channel inputs must be among X1..XM")
        if self.distortion is not None and len(self.distortion.limits) != m:
            raise InputError("distortion spec must cover every source")

    @property
    def users(self):
        return len(self.quantizers)

    def joint(self) -> Pmf:
        """Joint table of all variables built along the factorization chain."""
        if not self._joint:
            p = self.source
            for k in self.quantizers:
                p = push_through(p, k)
            for k in self.channel_maps:
                p = push_through(p, k)
            p = push_through(p, self.channel)
            self._joint.append(p)
        return self._joint[0]


@dataclass(frozen=True)
class AdmissibilityReport:
    subsets: tuple
    lhs: tuple
    rhs: tuple
    margins: tuple
    distortions: tuple
    limits: tuple
    verdict: bool
    binding_constraint: int

    def to_json(self):
        return {
            "subsets": [list(s) for s in self.subsets],
            "lhs": list(self.lhs),
            "rhs": list(self.rhs),
            "margins": list(self.margins),
            "distortions": list(self.distortions),
            "limits": list(self.limits),
            "verdict": self.verdict,
            "binding_constraint": self.binding_constraint,
        }


def _subsets(m):
    users = range(1, m + 1)
    return [s for r in range(1, m + 1) for s in combinations(users, r)]


def _names(prefix, idx):
    return [f"{prefix}{i}" for i in idx]


def _rate_terms(joint, m, subsets):
    lhs, rhs = [], []
    for a in subsets:
        ac = [i for i in range(1, m + 1) if i not in a]
        lhs.append(mutual_information(
            joint, _names("U", a) + _names("Z", a), _names("W", a), _names("W", ac) + ["Z"]))
        rhs.append(mutual_information(
            joint, _names("X", a), ["Y"], _names("X", ac) + _names("W", ac) + ["Z"]))
    return lhs, rhs


def _report(subsets, lhs, rhs, distortions=(), limits=(), joint_limit=None, eps=STRICT_EPS):
    margins = [r - l for l, r in zip(lhs, rhs)]
    ok = all(mg > eps for mg in margins)
    ok = ok and all(d <= lim + DISTORTION_SLACK for d, lim in zip(distortions, limits))
    if joint_limit is not None:
        ok = ok and sum(distortions) <= joint_limit + DISTORTION_SLACK
    return AdmissibilityReport(
        subsets=tuple(tuple(s) for s in subsets),
        lhs=tuple(lhs),
        rhs=tuple(rhs),
        margins=tuple(margins),
        distortions=tuple(distortions),
        limits=tuple(limits),
        verdict=bool(ok),
        binding_constraint=int(np.argmin(margins)),
    )


def check_multisource(sys: SideInfoSystem, *, eps=STRICT_EPS) -> AdmissibilityReport:
    """Evaluate the subset constraints for every nonempty subset of users.

    Subsets are ordered by size, then lexicographically; for two users this
    is ``(1,), (2,), (1, 2)``.
    """
    joint = sys.joint()
    subsets = _subsets(sys.users)
    lhs, rhs = _rate_terms(joint, sys.users, subsets)
    if sys.distortion is None:
        return _report(subsets, lhs, rhs, eps=eps)
    dec = optimal_decoder(sys)
    return _report(subsets, lhs, rhs, dec.distortions, sys.distortion.limits,
                   sys.distortion.joint_limit, eps=eps)


def check_theorem1(sys: SideInfoSystem, *, eps=STRICT_EPS) -> AdmissibilityReport:
    """Two-user admissibility check: user 1, user 2 and sum constraints."""
    if sys.users != 2:
        raise InputError("check_theorem1 is the two-user case; use check_multisource")
    return check_multisource(sys, eps=eps)


# --------------------------------------------------------------------------
# decoder
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DecoderResult:
    """Per-source reconstruction tables indexed by ``(w_1, ..., w_M, z)``."""

    tables: tuple
    distortions: tuple


def _decoder_inputs(sys):
    return _names("W", range(1, sys.users + 1)) + ["Z"]


def _distortion_spec(sys):
    if sys.distortion is not None:
        return sys.distortion
    return DistortionSpec.hamming(*([0.0] * sys.users))


def optimal_decoder(sys: SideInfoSystem) -> DecoderResult:
    """Per-cell minimizer of posterior expected distortion.

    Ties are broken toward the lowest reconstruction index. Without a
    distortion spec, Hamming distortion is used.
    """
    joint = sys.joint()
    spec = _distortion_spec(sys)
    cond = _decoder_inputs(sys)
    tables, dists = [], []
    for i in range(1, sys.users + 1):
        size = joint.sizes[f"U{i}"]
        d = spec.matrix(i - 1, size)
        t = joint.marginal(cond + [f"U{i}"])
        risk = np.tensordot(t, d, axes=([t.ndim - 1], [0]))
        choice = np.argmin(risk, axis=-1)
        tables.append(choice)
        dists.append(float(np.take_along_axis(risk, choice[..., None], axis=-1).sum()))
    return DecoderResult(tuple(tables), tuple(dists))


def decoder_distortion(sys: SideInfoSystem, tables: Sequence[np.ndarray]) -> tuple:
    """Expected distortions of an arbitrary decoder given as index tables."""
    joint = sys.joint()
    spec = _distortion_spec(sys)
    cond = _decoder_inputs(sys)
    out = []
    for i in range(1, sys.users + 1):
        size = joint.sizes[f"U{i}"]
        d = spec.matrix(i - 1, size)
        t = joint.marginal(cond + [f"U{i}"])
        risk = np.tensordot(t, d, axes=([t.ndim - 1], [0]))
        choice = np.asarray(tables[i - 1], dtype=int)
        out.append(float(np.take_along_axis(risk, choice[..., None], axis=-1).sum()))
    return tuple(out)


# --------------------------------------------------------------------------
# special cases
# --------------------------------------------------------------------------

def lossless_conditions(pmf: Pmf, channel: Kernel, mappings: Sequence[Kernel],
                        *, eps=STRICT_EPS) -> AdmissibilityReport:
    """Lossless two-user conditions with channel inputs driven by the sources.

    Checks ``H(U1|U2) < I(X1;Y|X2,U2)``, ``H(U2|U1) < I(X2;Y|X1,U1)`` and
    ``H(U1,U2) < I(X1,X2;Y)``. Each mapping must be ``p(x_i | u_i)`` or an
    input-free distribution, so that ``X1 - U1 - U2 - X2`` is Markov.
    """
    if sorted(pmf.names) != ["U1", "U2"]:
        raise InputError("lossless_conditions expects a pmf over U1, U2")
    for i, k in enumerate(mappings, start=1):
        if k.output_var[0] != f"X{i}" or not set(k.input_names) <= {f"U{i}"}:
            raise InputError(f"mapping {i} must be p(X{i} | U{i})")
    joint = pmf
    for k in mappings:
        joint = push_through(joint, k)
    joint = push_through(joint, channel)
    lhs = [
        conditional_entropy(joint, ["U1"], ["U2"]),
        conditional_entropy(joint, ["U2"], ["U1"]),
        conditional_entropy(joint, ["U1", "U2"]),
    ]
    rhs = [
        mutual_information(joint, ["X1"], ["Y"], ["X2", "U2"]),
        mutual_information(joint, ["X2"], ["Y"], ["X1", "U1"]),
        mutual_information(joint, ["X1", "X2"], ["Y"]),
    ]
    return _report([(1,), (2,), (1, 2)], lhs, rhs, eps=eps)


def source_coding_region(sys: SideInfoSystem, r1: float, r2: float,
                         *, eps=STRICT_EPS) -> AdmissibilityReport:
    """Distributed source coding with side information over a noiseless link.

    The report's ``rhs`` is ``(R1, R2, R1 + R2)``; the verdict requires each
    rate to exceed its information requirement strictly.
    """
    if sys.users != 2:
        raise InputError("source_coding_region is a two-user check")
    if r1 < 0 or r2 < 0:
        raise InputError("rates must be nonnegative")
    p = sys.source
    for k in sys.quantizers:
        p = push_through(p, k)
    subsets = _subsets(2)
    lhs = []
    for a in subsets:
        ac = [i for i in (1, 2) if i not in a]
        lhs.append(mutual_information(
            p, _names("U", a) + _names("Z", a), _names("W", a), _names("W", ac) + ["Z"]))
    return _report(subsets, lhs, [r1, r2, r1 + r2], eps=eps)


def mixed_si_rate(pmf: Pmf, w_kernel: Kernel, source: str,
                  encoder_side: Sequence[str] = (), decoder_side: Sequence[str] = ()) -> float:
    """Rate ``I(X; W | Y, Z)`` with ``Y`` at encoder and decoder, ``Z`` at decoder only.

    ``w_kernel`` must depend only on the source and the encoder side
    information, which enforces ``W - (X, Y) - Z``.
    """
    allowed = {source, *encoder_side}
    if not set(w_kernel.input_names) <= allowed:
        raise InputError(f"W may depend only on {sorted(allowed)}")
    joint = push_through(pmf, w_kernel)
    return mutual_information(joint, [source], [w_kernel.output_var[0]],
                              list(encoder_side) + list(decoder_side))


def _check_prob(name, x, hi=0.5):
    if not 0.0 <= x <= hi:
        raise InputError(f"{name}={x} outside [0, {hi}]")


def wz_binary_rate(side_crossover: float, test_crossover: float) -> float:
    """Wyner-Ziv rate for a uniform binary source with BSC side information.

    Uses a BSC test channel with crossover ``test_crossover``; the side
    information sees the source through ``side_crossover``, so ``W`` and
    the side information are linked by the cascade of both channels.
    """
    p, d = float(side_crossover), float(test_crossover)
    _check_prob("side_crossover", p)
    _check_prob("test_crossover", d)
    cascade = p * (1 - d) + (1 - p) * d
    return float((1 - binary_entropy(d)) - (1 - binary_entropy(cascade)))


def hamming_rate_distortion(source_bias: float, d: float) -> float:
    """Rate-distortion function ``h(p) - h(d)`` of a Bernoulli(p) source."""
    p = float(source_bias)
    _check_prob("source_bias", p, hi=1.0)
    if not 0.0 <= d <= min(p, 1 - p):
        raise InputError(f"distortion {d} outside [0, min(p, 1-p)]")
    return max(float(binary_entropy(p) - binary_entropy(d)), 0.0)
