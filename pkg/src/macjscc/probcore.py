"""Exact finite probability tables and Gaussian covariance algebra.

All information quantities are in bits. Tables are dense numpy arrays with
one axis per named variable, in declaration order (row-major when flattened).
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError, NumericalError

MAX_STATES = 10**7
PROB_FLOOR = 1e-15
SUM_TOL = 1e-12


def _check_guard(sizes):
    total = 1
    for s in sizes:
        total *= int(s)
    if total > MAX_STATES:
        raise InputError(f"product alphabet has {total} states, limit is {MAX_STATES}")
    return total


class Pmf:
    """Joint probability table over named finite variables.

    Parameters
    ----------
    variables : sequence of (name, size)
        Variable names (unique) with positive alphabet sizes.
    probs : array_like
        Either a flat row-major table or an array already shaped by the sizes.
    """

    def __init__(self, variables, probs, *, normalize=False):
        variables = [(str(n), int(s)) for n, s in variables]
        names = [n for n, _ in variables]
        if len(set(names)) != len(names):
            raise InputError(f"duplicate variable names in {names}")
        if any(s < 1 for _, s in variables):
            raise InputError("alphabet sizes must be positive")
        shape = tuple(s for _, s in variables)
        _check_guard(shape)
        p = np.asarray(probs, dtype=float)
        if p.size != int(np.prod(shape, dtype=np.int64)):
            raise InputError(f"table has {p.size} entries, expected {int(np.prod(shape))}")
        p = p.reshape(shape)
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise InputError("probabilities must be finite and nonnegative")
        total = p.sum()
        if normalize:
            if total <= 0:
                raise InputError("cannot normalize an all-zero table")
            p = p / total
        elif abs(total - 1.0) > SUM_TOL:
            raise InputError(f"probabilities sum to {total!r}, not 1")
        p.setflags(write=False)
        self.variables = tuple(variables)
        self.probs = p

    @property
    def names(self):
        return tuple(n for n, _ in self.variables)

    @property
    def sizes(self):
        return dict(self.variables)

    def axes(self, names):
        idx = {n: i for i, n in enumerate(self.names)}
        try:
            return [idx[n] for n in names]
        except KeyError as exc:
            raise InputError(f"unknown variable {exc.args[0]!r}; have {self.names}") from None

    def marginal(self, names):
        """Marginal table over ``names`` (axes in the order given)."""
        names = list(names)
        if len(set(names)) != len(names):
            raise InputError(f"repeated names in {names}")
        keep = self.axes(names)
        drop = tuple(i for i in range(self.probs.ndim) if i not in keep)
        m = self.probs.sum(axis=drop) if drop else self.probs
        # sum() keeps remaining axes in original order; reorder to match names
        order = sorted(keep)
        return np.transpose(m, [order.index(k) for k in keep])

    def marginal_pmf(self, names):
        names = list(names)
        return Pmf([(n, self.sizes[n]) for n in names], self.marginal(names), normalize=True)

    def to_json(self):
        return {
            "vars": [{"name": n, "size": s} for n, s in self.variables],
            "probs": self.probs.ravel().tolist(),
        }

    @classmethod
    def from_json(cls, doc):
        try:
            variables = [(v["name"], v["size"]) for v in doc["vars"]]
            return cls(variables, doc["probs"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed pmf document: {exc}") from None

    def __repr__(self):
        return f"Pmf({list(self.variables)})"


class Kernel:
    """Conditional probability table ``p(output | inputs)``.

    ``rows`` holds one distribution per input configuration, row-major over
    the inputs; it may be flat ``(prod(inputs), out_size)`` or shaped
    ``(*input_sizes, out_size)``. An empty input list gives an unconditional
    distribution.
    """

    def __init__(self, input_vars, output_var, rows):
        input_vars = [(str(n), int(s)) for n, s in input_vars]
        out_name, out_size = str(output_var[0]), int(output_var[1])
        names = [n for n, _ in input_vars]
        if len(set(names)) != len(names) or out_name in names:
            raise InputError("kernel variable names must be distinct")
        shape = tuple(s for _, s in input_vars) + (out_size,)
        t = np.asarray(rows, dtype=float)
        if t.size != int(np.prod(shape, dtype=np.int64)):
            raise InputError(f"kernel table has {t.size} entries, expected {int(np.prod(shape))}")
        t = t.reshape(shape)
        if np.any(t < 0) or not np.all(np.isfinite(t)):
            raise InputError("kernel entries must be finite and nonnegative")
        if np.any(np.abs(t.sum(axis=-1) - 1.0) > SUM_TOL):
            raise InputError("every kernel row must sum to 1")
        t.setflags(write=False)
        self.input_vars = tuple(input_vars)
        self.output_var = (out_name, out_size)
        self.table = t

    @property
    def input_names(self):
        return tuple(n for n, _ in self.input_vars)

    @classmethod
    def deterministic(cls, input_vars, output_var, fn):
        """Kernel putting all mass on ``fn(*inputs)``."""
        input_vars = [(str(n), int(s)) for n, s in input_vars]
        shape = tuple(s for _, s in input_vars)
        t = np.zeros(shape + (int(output_var[1]),))
        for idx in np.ndindex(*shape):
            t[idx + (int(fn(*idx)),)] = 1.0
        return cls(input_vars, output_var, t)

    @classmethod
    def constant(cls, output_var, dist=None):
        size = int(output_var[1])
        dist = np.full(size, 1.0 / size) if dist is None else np.asarray(dist, float)
        return cls([], output_var, dist)

    def to_json(self):
        return {
            "inputs": [{"name": n, "size": s} for n, s in self.input_vars],
            "output": {"name": self.output_var[0], "size": self.output_var[1]},
            "rows": self.table.reshape(-1, self.output_var[1]).tolist(),
        }

    @classmethod
    def from_json(cls, doc):
        try:
            inputs = [(v["name"], v["size"]) for v in doc["inputs"]]
            out = (doc["output"]["name"], doc["output"]["size"])
            return cls(inputs, out, doc["rows"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed kernel document: {exc}") from None

    def __repr__(self):
        return f"Kernel({self.output_var[0]} | {', '.join(self.input_names) or '-'})"


def bsc(input_var, output_name, crossover):
    """Binary symmetric channel kernel."""
    p = float(crossover)
    return Kernel([(input_var, 2)], (output_name, 2), [[1 - p, p], [p, 1 - p]])


# --------------------------------------------------------------------------
# information measures
# --------------------------------------------------------------------------

def _entropy_of_table(t):
    p = t[t > PROB_FLOOR]
    return float(-np.sum(p * np.log2(p)))


def entropy(pmf: Pmf, subset: Sequence[str]) -> float:
    """Joint entropy in bits of the marginal over ``subset``."""
    subset = list(subset)
    if not subset:
        raise InputError("entropy needs a nonempty variable subset")
    return max(_entropy_of_table(pmf.marginal(subset)), 0.0)


def _h(pmf, names):
    return _entropy_of_table(pmf.marginal(names)) if names else 0.0


def conditional_entropy(pmf: Pmf, a: Sequence[str], c: Sequence[str] = ()) -> float:
    """``H(A | C)`` in bits."""
    a, c = list(a), list(c)
    if not a:
        raise InputError("conditional entropy needs a nonempty target set")
    if set(a) & set(c):
        raise InputError("target and conditioning sets overlap")
    return max(_h(pmf, a + c) - _h(pmf, c), 0.0)


def mutual_information(pmf: Pmf, a: Sequence[str], b: Sequence[str], c: Sequence[str] = ()) -> float:
    """Conditional mutual information ``I(A; B | C)`` in bits, clamped at 0."""
    a, b, c = list(a), list(b), list(c)
    if not a or not b:
        raise InputError("mutual information needs nonempty A and B")
    if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
        raise InputError("variable sets A, B, C must be pairwise disjoint")
    pmf.axes(a + b + c)
    val = _h(pmf, a + c) + _h(pmf, b + c) - _h(pmf, a + b + c) - _h(pmf, c)
    if val < -1e-9:
        raise NumericalError(f"mutual information evaluated to {val}")
    return max(val, 0.0)


def push_through(pmf: Pmf, kernel: Kernel) -> Pmf:
    """Extend ``pmf`` by a new variable drawn from ``kernel`` given its inputs."""
    out_name, out_size = kernel.output_var
    if out_name in pmf.names:
        raise InputError(f"variable {out_name!r} already present")
    axes = pmf.axes(kernel.input_names)
    for (n, s) in kernel.input_vars:
        if pmf.sizes[n] != s:
            raise InputError(f"kernel expects |{n}|={s}, pmf has {pmf.sizes[n]}")
    _check_guard(pmf.probs.shape + (out_size,))
    # broadcast kernel table onto the pmf axes
    order = np.argsort(axes)
    t = np.transpose(kernel.table, list(order) + [len(axes)])
    shape = [1] * pmf.probs.ndim + [out_size]
    for ax in axes:
        shape[ax] = pmf.probs.shape[ax]
    joint = pmf.probs[..., None] * t.reshape(shape)
    return Pmf(list(pmf.variables) + [(out_name, out_size)], joint, normalize=True)


# --------------------------------------------------------------------------
# Gaussian algebra
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianVector:
    """Multivariate normal described by its mean and covariance."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        cov = np.atleast_2d(np.asarray(self.cov, dtype=float))
        mean = np.zeros(cov.shape[0]) if self.mean is None else np.asarray(self.mean, float).ravel()
        if cov.shape[0] != cov.shape[1] or mean.shape[0] != cov.shape[0]:
            raise InputError("covariance must be square and match the mean length")
        if not np.allclose(cov, cov.T, atol=1e-10, rtol=0):
            raise InputError("covariance is not symmetric")
        if np.linalg.eigvalsh(0.5 * (cov + cov.T)).min() < -1e-10:
            raise InputError("covariance is not positive semidefinite")
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "mean", mean)

    @property
    def dim(self):
        return self.cov.shape[0]

    @classmethod
    def zero_mean(cls, cov):
        return cls(None, cov)


def lmmse(g: GaussianVector, targets, observed, *, pinv=False):
    """Linear MMSE estimate of ``targets`` from ``observed``.

    Returns
    -------
    coef : ndarray, shape (len(targets), len(observed))
        Estimator ``E[T | O] = mean_T + coef @ (O - mean_O)``.
    err : ndarray
        Error covariance ``S_TT - S_TO S_OO^-1 S_OT``.
    """
    t = list(targets)
    o = list(observed)
    s = g.cov
    stt = s[np.ix_(t, t)]
    if not o:
        return np.zeros((len(t), 0)), stt.copy()
    soo = s[np.ix_(o, o)]
    sto = s[np.ix_(t, o)]
    if np.linalg.eigvalsh(soo).min() <= 1e-12:
        if not pinv:
            raise NumericalError("observation covariance is singular; pass pinv=True")
        coef = sto @ np.linalg.pinv(soo, hermitian=True)
    else:
        coef = np.linalg.solve(soo, sto.T).T
    err = stt - coef @ sto.T
    err = 0.5 * (err + err.T)
    return coef, err


def binary_entropy(x):
    """``h(x) = -x log2 x - (1-x) log2 (1-x)`` with ``h(0) = h(1) = 0``."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = -x * np.log2(x) - (1 - x) * np.log2(1 - x)
    v = np.where((x <= 0) | (x >= 1), 0.0, v)
    return float(v) if v.ndim == 0 else v
