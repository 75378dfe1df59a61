"""Correlation-preserving Gaussian-mixture codebooks for two users.

Each user ``u`` maps its source symbol ``s`` to a one-dimensional Gaussian
mixture ``f_u(x | s)``. With ``(U1, U2) ~ p`` the induced joint density of
the channel inputs is

    g(x1, x2) = sum_{s1, s2} p(s1, s2) f_1(x1 | s1) f_2(x2 | s2),

and a fit drives ``g`` toward the standard bivariate normal ``f_rho`` with
correlation ``rho`` in the L2 sense, under zero-mean unit-power constraints
on each input. All integrals are closed form.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from . import _kernels
from ._rng import substream
from .errors import InputError, NumericalError
from .probcore import Pmf

SCHEMA = "mcb-1"
WEIGHT_TOL = 1e-9
VAR_FLOOR = 1e-4
MEAN_BOUND = 10.0
MOMENT_TOL = 1e-6
QUANTITIES = (
    "x1_y_given_x2",
    "x2_y_given_x1",
    "x1_y_given_x2_u2",
    "x2_y_given_x1_u1",
    "sum",
    "x1_x2",
)


@dataclass(frozen=True)
class SymbolMixture:
    """Mixture ``sum_i w_i N(mean_i, var_i)`` used for one source symbol."""

    w: np.ndarray
    mean: np.ndarray
    var: np.ndarray

    def __post_init__(self):
        for name in ("w", "mean", "var"):
            arr = np.array(getattr(self, name), dtype=float).ravel()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.w.shape == self.mean.shape == self.var.shape) or self.w.size == 0:
            raise InputError("mixture arrays must be nonempty and of equal length")
        if not np.all(np.isfinite(np.concatenate([self.w, self.mean, self.var]))):
            raise InputError("mixture parameters must be finite")
        if np.any(self.w < 0) or abs(self.w.sum() - 1) > WEIGHT_TOL:
            raise InputError("mixture weights must be nonnegative and sum to 1")
        if np.any(self.var < VAR_FLOOR * (1 - 1e-9)):
            raise InputError(f"mixture variances must be at least {VAR_FLOOR}")

    def to_json(self):
        return {"w": self.w.tolist(), "mean": self.mean.tolist(), "var": self.var.tolist()}


def _source_table(source):
    if isinstance(source, Pmf):
        if len(source.names) != 2:
            raise InputError("source pmf must be over exactly two variables")
        return np.array(source.probs, dtype=float)
    p = np.asarray(source, dtype=float)
    if p.ndim != 2 or np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
        raise InputError("source table must be a 2-D pmf")
    return p


class MixtureCodebook:
    """Per-user, per-symbol mixtures plus the source pmf over ``(U1, U2)``.

    Parameters
    ----------
    source : Pmf or array_like, shape (K1, K2)
        Joint pmf of the two source symbols.
    users : pair of sequences
        ``users[u][s]`` is the :class:`SymbolMixture` of user ``u + 1`` for
        symbol ``s``.
    """

    def __init__(self, source, users):
        self.source = _source_table(source)
        self.source.setflags(write=False)
        if len(users) != 2:
            raise InputError("a codebook has exactly two users")
        mixes = []
        for u, per_symbol in enumerate(users):
            per_symbol = tuple(m if isinstance(m, SymbolMixture) else SymbolMixture(*m) for m in per_symbol)
            if len(per_symbol) != self.source.shape[u]:
                raise InputError(f"user {u + 1} needs {self.source.shape[u]} symbol mixtures")
            mixes.append(per_symbol)
        self.users = tuple(mixes)

    @property
    def marginals(self):
        return self.source.sum(axis=1), self.source.sum(axis=0)

    def flat(self, u):
        """Flattened ``(symbol, w, mean, var)`` arrays for user index ``u`` (0 or 1)."""
        mixes = self.users[u]
        sym = np.concatenate([np.full(m.w.size, s) for s, m in enumerate(mixes)])
        w = np.concatenate([m.w for m in mixes])
        a = np.concatenate([m.mean for m in mixes])
        c = np.concatenate([m.var for m in mixes])
        return sym, w, a, c

    def moments(self):
        """Per-user ``(mean, second moment)`` of the induced channel inputs."""
        out = []
        for u, pu in enumerate(self.marginals):
            sym, w, a, c = self.flat(u)
            pi = pu[sym] * w
            out.append((float(pi @ a), float(pi @ (c + a * a))))
        return out

    def moment_residuals(self):
        return np.array([v for m, e in self.moments() for v in (m, e - 1.0)])

    def validate(self, tol=MOMENT_TOL):
        """Raise :class:`InputError` unless both inputs are zero-mean with unit power."""
        r = self.moment_residuals()
        if np.max(np.abs(r)) > tol:
            raise InputError(f"codebook moment residuals {r.tolist()} exceed {tol}")
        return r

    def to_json(self):
        k1, k2 = self.source.shape
        src = Pmf([("U1", k1), ("U2", k2)], self.source)
        return {
            "version": SCHEMA,
            "source": src.to_json(),
            "users": [[m.to_json() for m in mixes] for mixes in self.users],
        }

    @classmethod
    def from_json(cls, doc):
        if not isinstance(doc, dict) or doc.get("version") != SCHEMA:
            raise InputError(f"codebook document must carry version {SCHEMA!r}")
        try:
            source = Pmf.from_json(doc["source"])
            users = [[SymbolMixture(m["w"], m["mean"], m["var"]) for m in mixes] for mixes in doc["users"]]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed codebook document: {exc}") from None
        return cls(source, users)

    def __repr__(self):
        sizes = [[m.w.size for m in mixes] for mixes in self.users]
        return f"MixtureCodebook(source={self.source.shape}, components={sizes})"


# --------------------------------------------------------------------------
# analytic L2 objective
# --------------------------------------------------------------------------

def target_energy(rho):
    """``int f_rho^2`` for the unit-variance bivariate normal."""
    return 1.0 / (4.0 * math.pi * math.sqrt(1.0 - rho * rho))


def _cross_terms(a, c, b, d, rho):
    """``int N(x1; a, c) N(x2; b, d) f_rho`` plus its partial derivatives."""
    x = a[:, None]
    y = b[None, :]
    s11 = 1.0 + c[:, None]
    s22 = 1.0 + d[None, :]
    det = s11 * s22 - rho * rho
    q = (s22 * x * x - 2.0 * rho * x * y + s11 * y * y) / det
    val = np.exp(-0.5 * q) / (2.0 * math.pi * np.sqrt(det))
    dx = -val * (s22 * x - rho * y) / det
    dy = -val * (s11 * y - rho * x) / det
    dc = val * (q * s22 - y * y - s22) / (2.0 * det)
    dd = val * (q * s11 - x * x - s11) / (2.0 * det)
    return val, dx, dy, dc, dd


def _gram_grads(a, c, gram, m):
    """Derivatives of ``sum(m * gram)`` wrt means and variances (``m`` symmetric)."""
    z = a[:, None] - a[None, :]
    v = c[:, None] + c[None, :]
    ga = 2.0 * np.sum(m * gram * (-z / v), axis=1)
    gc = 2.0 * np.sum(m * gram * (0.5 * z * z / (v * v) - 0.5 / v), axis=1)
    return ga, gc


@dataclass
class _Layout:
    """Flattened parameter layout shared by the objective and the fit."""

    source: np.ndarray
    sym: tuple
    counts: tuple

    @classmethod
    def of(cls, source, counts):
        sym = tuple(np.concatenate([np.full(r, s) for s, r in enumerate(cu)]) for cu in counts)
        return cls(source, sym, tuple(tuple(int(r) for r in cu) for cu in counts))

    @property
    def sizes(self):
        return tuple(s.size for s in self.sym)

    def indicator(self, u):
        k = self.source.shape[u]
        return (self.sym[u][:, None] == np.arange(k)[None, :]).astype(float)


def _objective_parts(layout, w1, a1, c1, w2, a2, c2, rho, want_grad):
    s1, s2 = layout.indicator(0), layout.indicator(1)
    base = s1 @ layout.source @ s2.T
    wm = w1[:, None] * base * w2[None, :]
    g1 = _kernels.overlap_matrix(a1, c1, a1, c1)
    g2 = _kernels.overlap_matrix(a2, c2, a2, c2)
    gw = g1 @ wm @ g2
    b, bx, by, bc, bd = _cross_terms(a1, c1, a2, c2, rho)
    value = float(np.sum(wm * gw) - 2.0 * np.sum(wm * b) + target_energy(rho))
    if not want_grad:
        return value, None
    dw = 2.0 * gw - 2.0 * b
    gw1 = np.sum(dw * base * w2[None, :], axis=1)
    gw2 = np.sum(dw * base * w1[:, None], axis=0)
    ga1, gc1 = _gram_grads(a1, c1, g1, wm @ g2 @ wm.T)
    ga2, gc2 = _gram_grads(a2, c2, g2, wm.T @ g1 @ wm)
    ga1 = ga1 - 2.0 * np.sum(wm * bx, axis=1)
    gc1 = gc1 - 2.0 * np.sum(wm * bc, axis=1)
    ga2 = ga2 - 2.0 * np.sum(wm * by, axis=0)
    gc2 = gc2 - 2.0 * np.sum(wm * bd, axis=0)
    return value, ((gw1, ga1, gc1), (gw2, ga2, gc2))


def fit_objective(codebook: MixtureCodebook, target_rho, *, grad=False):
    """L2 distance ``int (g - f_rho)^2`` between the induced and target densities.

    With ``grad=True`` also returns per-user ``(d/dw, d/dmean, d/dvar)``
    arrays in the flattened component order of :meth:`MixtureCodebook.flat`,
    treating every weight as a free coordinate.
    """
    if not -1 < target_rho < 1:
        raise InputError("target correlation must lie in (-1, 1)")
    counts = [[m.w.size for m in mixes] for mixes in codebook.users]
    layout = _Layout.of(codebook.source, counts)
    _, w1, a1, c1 = codebook.flat(0)
    _, w2, a2, c2 = codebook.flat(1)
    value, grads = _objective_parts(layout, w1, a1, c1, w2, a2, c2, target_rho, grad)
    return (value, grads) if grad else value


# --------------------------------------------------------------------------
# fitting
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FitProblem:
    """Fit settings.

    ``counts[u][s]`` is the number of components for user ``u + 1`` and
    symbol ``s``; an int applies to every symbol.
    """

    target_rho: float
    source: object
    counts: object = 2
    starts: int = 20
    seed: int = 0
    max_outer: int = 40
    max_inner: int = 3000
    rel_tol: float = 1e-10
    source_table: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not -1 < self.target_rho < 1:
            raise InputError("target correlation must lie in (-1, 1)")
        if self.starts < 1:
            raise InputError("need at least one start")
        table = _source_table(self.source)
        object.__setattr__(self, "source_table", table)
        counts = self.counts
        if isinstance(counts, (int, np.integer)):
            counts = [[int(counts)] * k for k in table.shape]
        counts = [[int(r) for r in cu] for cu in counts]
        if [len(cu) for cu in counts] != list(table.shape) or min(min(cu) for cu in counts) < 1:
            raise InputError("component counts must be >= 1 for every user and symbol")
        object.__setattr__(self, "counts", counts)


@dataclass(frozen=True)
class FitResult:
    codebook: MixtureCodebook
    objective: float
    normalized_distortion: float
    constraint_residuals: np.ndarray
    start: int
    starts_converged: int


class _Fitter:
    def __init__(self, problem: FitProblem):
        self.p = problem
        self.layout = _Layout.of(problem.source_table, problem.counts)
        self.marg = (self.layout.source.sum(axis=1), self.layout.source.sum(axis=0))
        n1, n2 = self.layout.sizes
        self.slices = []
        off = 0
        for n in (n1, n2):
            self.slices.append((slice(off, off + n), slice(off + n, off + 2 * n), slice(off + 2 * n, off + 3 * n)))
            off += 3 * n
        self.dim = off
        lo, hi = [], []
        for n in (n1, n2):
            lo += [1e-9] * n + [-MEAN_BOUND] * n + [VAR_FLOOR * (1 + 1e-6)] * n
            hi += [None] * n + [MEAN_BOUND] * n + [None] * n
        self.bounds = list(zip(lo, hi))

    # parameter transforms ------------------------------------------------
    def _weights(self, u, s):
        sym = self.layout.sym[u]
        tot = np.bincount(sym, weights=s, minlength=self.layout.source.shape[u])
        return s / tot[sym], tot

    def _weight_chain(self, u, s, gw):
        sym = self.layout.sym[u]
        w, tot = self._weights(u, s)
        avg = np.bincount(sym, weights=w * gw, minlength=tot.size)
        return (gw - avg[sym]) / tot[sym]

    def unpack(self, theta):
        out = []
        for u, (ss, sa, sc) in enumerate(self.slices):
            w, _ = self._weights(u, theta[ss])
            out.append((w, theta[sa], theta[sc]))
        return out

    # objective and constraints ---------------------------------------------
    def objective(self, theta):
        (w1, a1, c1), (w2, a2, c2) = self.unpack(theta)
        val, grads = _objective_parts(self.layout, w1, a1, c1, w2, a2, c2, self.p.target_rho, True)
        g = np.empty(self.dim)
        for u, (ss, sa, sc) in enumerate(self.slices):
            gw, ga, gc = grads[u]
            g[ss] = self._weight_chain(u, theta[ss], gw)
            g[sa] = ga
            g[sc] = gc
        return val, g

    def constraints(self, theta):
        h = np.empty(4)
        jac = np.zeros((4, self.dim))
        for u, (ss, sa, sc) in enumerate(self.slices):
            w, _ = self._weights(u, theta[ss])
            a, c = theta[sa], theta[sc]
            pu = self.marg[u][self.layout.sym[u]]
            pi = pu * w
            h[2 * u] = pi @ a
            h[2 * u + 1] = pi @ (c + a * a) - 1.0
            jac[2 * u, ss] = self._weight_chain(u, theta[ss], pu * a)
            jac[2 * u, sa] = pi
            jac[2 * u + 1, ss] = self._weight_chain(u, theta[ss], pu * (c + a * a))
            jac[2 * u + 1, sa] = 2.0 * pi * a
            jac[2 * u + 1, sc] = pi
        return h, jac

    def normalize(self, theta):
        """Affine rescaling of each user's components to exact zero mean, unit power."""
        theta = theta.copy()
        for u, (ss, sa, sc) in enumerate(self.slices):
            w, _ = self._weights(u, theta[ss])
            pi = self.marg[u][self.layout.sym[u]] * w
            a, c = theta[sa], theta[sc]
            m = pi @ a
            var = pi @ (c + a * a) - m * m
            sd = math.sqrt(var)
            theta[sa] = (a - m) / sd
            theta[sc] = np.maximum(c / var, VAR_FLOOR)
        return theta

    # starts ----------------------------------------------------------------
    def start(self, k):
        n1, n2 = self.layout.sizes
        if k == 0:
            parts = [np.concatenate([np.ones(n), np.zeros(n), np.ones(n)]) for n in (n1, n2)]
            return np.concatenate(parts)
        rng = substream(self.p.seed, k)
        parts = []
        for n in (n1, n2):
            parts.append(np.concatenate([rng.uniform(0.2, 1.0, n), rng.uniform(-1.5, 1.5, n),
                                         rng.uniform(0.05, 1.0, n)]))
        return self.normalize(np.concatenate(parts))

    # augmented Lagrangian --------------------------------------------------
    def solve(self, theta):
        lam = np.zeros(4)
        mu = 10.0
        prev_h = math.inf
        prev_val = math.inf

        def lagr(x):
            val, g = self.objective(x)
            h, jac = self.constraints(x)
            return val + lam @ h + 0.5 * mu * h @ h, g + jac.T @ (lam + mu * h)

        for _ in range(self.p.max_outer):
            res = minimize(lagr, theta, jac=True, method="L-BFGS-B", bounds=self.bounds,
                           options={"maxiter": self.p.max_inner, "ftol": 1e-16, "gtol": 1e-12,
                                    "maxcor": 30})
            theta = res.x
            h, _ = self.constraints(theta)
            val, _ = self.objective(theta)
            hmax = float(np.max(np.abs(h)))
            done = hmax < 1e-10 and abs(val - prev_val) <= self.p.rel_tol * max(abs(val), 1e-12)
            if done:
                break
            lam = lam + mu * h
            if hmax > 0.25 * prev_h:
                mu = min(mu * 10.0, 1e10)
            prev_h, prev_val = hmax, val
        return self.normalize(theta)

    def codebook(self, theta):
        users = []
        for u, (w, a, c) in enumerate(self.unpack(theta)):
            sym = self.layout.sym[u]
            users.append([SymbolMixture(w[sym == s], a[sym == s], c[sym == s])
                          for s in range(self.layout.source.shape[u])])
        return MixtureCodebook(self.layout.source, users)


def fit(problem: FitProblem) -> FitResult:
    """Multi-start augmented-Lagrangian fit; the best start wins, ties to the lowest index."""
    fitter = _Fitter(problem)
    energy = target_energy(problem.target_rho)
    best = None
    best_resid = None
    converged = 0
    for k in range(problem.starts):
        theta = fitter.solve(fitter.start(k))
        h, _ = fitter.constraints(theta)
        val, _ = fitter.objective(theta)
        resid = float(np.max(np.abs(h)))
        if best_resid is None or resid < best_resid:
            best_resid = resid
        if not (math.isfinite(val) and resid < MOMENT_TOL):
            continue
        converged += 1
        if best is None or val < best[0] - 1e-15:
            best = (val, k, theta, h)
    if best is None:
        raise NumericalError(f"no start met the moment constraints; best residual {best_resid:.3e}")
    val, k, theta, h = best
    val = max(val, 0.0)
    return FitResult(fitter.codebook(theta), val, val / energy, h, k, converged)


# --------------------------------------------------------------------------
# sampling and Monte Carlo information estimates
# --------------------------------------------------------------------------

def _draw_components(codebook, u, symbols, rng):
    sym, w, a, c = codebook.flat(u)
    k = codebook.source.shape[u]
    offsets = np.concatenate(([0], np.cumsum([m.w.size for m in codebook.users[u]])))
    width = max(m.w.size for m in codebook.users[u])
    cum = np.ones((k, width))
    for s, m in enumerate(codebook.users[u]):
        cum[s, : m.w.size] = np.cumsum(m.w)
        cum[s, m.w.size - 1:] = np.inf
    r = rng.random(symbols.size)
    idx = np.sum(r[:, None] >= cum[symbols], axis=1)
    comp = offsets[symbols] + idx
    return a[comp] + np.sqrt(c[comp]) * rng.standard_normal(symbols.size)


def sample_pair(codebook: MixtureCodebook, rng, n):
    """Draw ``n`` tuples ``(u1, u2, x1, x2)`` by the sampling rule of the codebook.

    The source pair is drawn first, then each encoder picks a component of
    its symbol's mixture by weight and draws a Gaussian, independently of
    the other encoder.
    """
    k1, k2 = codebook.source.shape
    flat = rng.choice(k1 * k2, size=int(n), p=codebook.source.ravel())
    u1, u2 = np.divmod(flat, k2)
    x1 = _draw_components(codebook, 0, u1, rng)
    x2 = _draw_components(codebook, 1, u2, rng)
    return u1, u2, x1, x2


def _symbol_logpdf(codebook, u, x):
    """``log f_u(x | s)`` for every symbol ``s``; shape ``(n, K_u)``."""
    sym, w, a, c = codebook.flat(u)
    k = codebook.source.shape[u]
    out = np.empty((x.size, k))
    with np.errstate(divide="ignore"):
        for s in range(k):
            logw = np.where(sym == s, np.log(w), -np.inf)
            out[:, s] = _kernels.mixture_logpdf(x, logw[None, :], a, c)
    return out


def _posterior_logw(codebook, u, log_post):
    """Per-sample log weights over user ``u`` components from symbol log-posteriors."""
    sym, w, _, _ = codebook.flat(u)
    with np.errstate(divide="ignore"):
        return log_post[:, sym] + np.log(w)[None, :]


_LOG2E = 1.0 / math.log(2.0)


def _batch_information(codebook, quantity, p1, p2, sigma_n2, u1, u2, x1, x2, rng):
    n = x1.size
    y = math.sqrt(p1) * x1 + math.sqrt(p2) * x2 + math.sqrt(sigma_n2) * rng.standard_normal(n)
    with np.errstate(divide="ignore"):
        logp = np.log(codebook.source)
    h_noise_nats = 0.5 * math.log(2 * math.pi * math.e * sigma_n2)

    if quantity == "x1_x2":
        l1 = _symbol_logpdf(codebook, 0, x1)
        l2 = _symbol_logpdf(codebook, 1, x2)
        joint = logsumexp(logp[None, :, :] + l1[:, :, None] + l2[:, None, :], axis=(1, 2))
        with np.errstate(divide="ignore"):
            lp1, lp2 = np.log(codebook.marginals[0]), np.log(codebook.marginals[1])
        m1 = logsumexp(lp1[None, :] + l1, axis=1)
        m2 = logsumexp(lp2[None, :] + l2, axis=1)
        return (joint - m1 - m2) * _LOG2E

    if quantity == "sum":
        _, w1, a1, c1 = codebook.flat(0)
        s1, _, _, _ = codebook.flat(0)
        s2, w2, a2, c2 = codebook.flat(1)
        with np.errstate(divide="ignore"):
            logw = (logp[s1][:, s2] + np.log(w1)[:, None] + np.log(w2)[None, :]).ravel()
        means = (math.sqrt(p1) * a1[:, None] + math.sqrt(p2) * a2[None, :]).ravel()
        variances = (p1 * c1[:, None] + p2 * c2[None, :] + sigma_n2).ravel()
        logy = _kernels.mixture_logpdf(y, logw[None, :], means, variances)
        return (-logy - h_noise_nats) * _LOG2E

    # single-user conditional quantities: estimate h(Y | X_other [, U_other])
    if quantity.startswith("x1"):
        me, other_x, other_u, p_me, p_other = 0, x2, u2, p1, p2
    else:
        me, other_x, other_u, p_me, p_other = 1, x1, u1, p2, p1
    # log p(u_me, u_other) arranged as (K_me, K_other)
    joint = logp if me == 0 else logp.T
    if quantity.endswith("_u2") or quantity.endswith("_u1"):
        cond = joint[:, other_u].T
    else:
        lo = _symbol_logpdf(codebook, 1 - me, other_x)
        cond = logsumexp(joint[None, :, :] + lo[:, None, :], axis=2)
    log_post = cond - logsumexp(cond, axis=1, keepdims=True)
    logw = _posterior_logw(codebook, me, log_post)
    _, _, a, c = codebook.flat(me)
    resid = y - math.sqrt(p_other) * other_x
    logy = _kernels.mixture_logpdf(resid, logw, math.sqrt(p_me) * a, p_me * c + sigma_n2)
    return (-logy - h_noise_nats) * _LOG2E


def mutual_info_mc(codebook: MixtureCodebook, P1, P2, sigma_n2, quantity, n=100_000, seed=0,
                   batch=100_000, threads=1):
    """Monte Carlo estimate (bits) and standard error of an information quantity.

    ``quantity`` is one of :data:`QUANTITIES`. The channel quantities average
    ``-log2`` of the exact conditional output density (closed form from the
    codebook, with posterior weights over the unseen source symbols) and
    subtract the noise entropy. ``x1_x2`` estimates ``I(X1; X2)``.
    """
    from .mcsim import SimConfig, run_batches

    if quantity not in QUANTITIES:
        raise InputError(f"quantity must be one of {QUANTITIES}")
    if n < 10_000:
        raise InputError("n must be at least 10^4")
    if min(P1, P2) < 0 or sigma_n2 <= 0:
        raise InputError("powers must be nonnegative and the noise variance positive")

    def one_batch(rng, nb):
        u1, u2, x1, x2 = sample_pair(codebook, rng, nb)
        return (_batch_information(codebook, quantity, P1, P2, sigma_n2, u1, u2, x1, x2, rng),)

    (stats,) = run_batches(SimConfig(seed=seed, n_samples=n, batch=batch, threads=threads), one_batch, 1)
    return stats.mean, stats.stderr


def gaussian_reference(rho, P1, P2, sigma_n2, quantity):
    """Rates of jointly Gaussian inputs with correlation ``rho`` (no source conditioning)."""
    r2 = rho * rho
    if quantity == "x1_y_given_x2":
        return 0.5 * math.log2(1 + P1 * (1 - r2) / sigma_n2)
    if quantity == "x2_y_given_x1":
        return 0.5 * math.log2(1 + P2 * (1 - r2) / sigma_n2)
    if quantity == "sum":
        return 0.5 * math.log2(1 + (P1 + P2 + 2 * rho * math.sqrt(P1 * P2)) / sigma_n2)
    raise InputError(f"no Gaussian reference for {quantity!r}")
