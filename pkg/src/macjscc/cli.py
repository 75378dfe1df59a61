"""Command-line front end.

Every command produces either a table (written as CSV) or a JSON document.
When ``--out`` is given the result goes to that file and a run manifest is
written next to it as ``<out>.manifest.json``; ``macjscc replay`` re-runs a
manifest and checks that the outputs are byte-identical.

Exit codes: 0 on success (verdicts live in the output), 2 for invalid
input, 3 for numerical failures.
"""

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from . import admissibility as adm
from . import codebook as cbk
from . import fading, feedback, fixtures, gmac, mcsim, orthogonal
from ._rng import default_seed
from .errors import InputError, NumericalError
from .probcore import Kernel, Pmf, conditional_entropy, entropy, mutual_information

SWEEP_COLUMNS = ("snr_db", "S", "scheme", "D1", "D2", "R1", "R2", "rho_tilde")
EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


class Table:
    """Rows with a fixed header, serialized as CSV at 12 significant digits."""

    def __init__(self, columns, rows):
        self.columns = tuple(columns)
        self.rows = [tuple(r) for r in rows]

    def to_csv(self):
        lines = [",".join(self.columns)]
        lines += [",".join(_fmt(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"

    def to_json(self):
        return [dict(zip(self.columns, row)) for row in self.rows]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _dump_json(doc):
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"


# --------------------------------------------------------------------------
# argument helpers
# --------------------------------------------------------------------------

def parse_snr_db(text):
    """``min:max:step`` in dB, inclusive of ``max`` up to rounding."""
    try:
        lo, hi, step = (float(t) for t in text.split(":"))
    except ValueError:
        raise InputError(f"--snr-db expects min:max:step, got {text!r}") from None
    if step <= 0 or hi < lo:
        raise InputError("--snr-db needs max >= min and a positive step")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.array([lo + k * step for k in range(count)])


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _csv_floats(text):
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from None


def load_system(doc) -> adm.SideInfoSystem:
    """Build a :class:`SideInfoSystem` from its JSON document.

    The document holds ``source`` (pmf), ``quantizers`` and ``channel_maps``
    (lists of kernels), ``channel`` (kernel) and optionally ``distortion``
    with ``measures``, ``limits`` and ``joint_limit``.
    """
    try:
        dist = doc.get("distortion")
        spec = None
        if dist is not None:
            spec = adm.DistortionSpec(tuple(dist["measures"]), tuple(dist["limits"]), dist.get("joint_limit"))
        return adm.SideInfoSystem(
            source=Pmf.from_json(doc["source"]),
            quantizers=tuple(Kernel.from_json(k) for k in doc["quantizers"]),
            channel_maps=tuple(Kernel.from_json(k) for k in doc["channel_maps"]),
            channel=Kernel.from_json(doc["channel"]),
            distortion=spec,
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed system document: {exc}") from None


def _source_arg(args):
    if getattr(args, "pmf", None):
        pmf = Pmf.from_json(_load_json(args.pmf))
        if len(pmf.names) != 2:
            raise InputError("source pmf must be over two variables")
        return pmf
    return fixtures.source_pmf(args.fixture)


def _fading_model(args):
    return fading.FadingModel(args.family, args.users, value=args.value,
                              values=_csv_floats(args.values) if args.values else (),
                              probs=_csv_floats(args.probs) if args.probs else ())


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_region_check(args):
    system = load_system(_load_json(args.system))
    report = adm.check_theorem1(system) if args.two_user else adm.check_multisource(system)
    doc = report.to_json()
    if args.decoder:
        dec = adm.optimal_decoder(system)
        doc["decoder_distortions"] = list(dec.distortions)
    return doc


def _discrete_gmac_report(pmf, P1, P2, sigma_n2):
    names = pmf.names
    a, b = names[0], names[1]
    h1g2 = conditional_entropy(pmf, [a], [b])
    h2g1 = conditional_entropy(pmf, [b], [a])
    h12 = entropy(pmf, [a, b])
    i12 = mutual_information(pmf, [a], [b])
    g = gmac.GmacSpec(P1, P2, sigma_n2)
    iv = gmac.rho_interval(g, h1g2, h2g1, h12, i12)
    return {
        "H_U1_given_U2": h1g2, "H_U2_given_U1": h2g1, "H_U1U2": h12, "I_U1_U2": i12,
        "independent_sum_rhs": gmac.relaxed_bounds(g, 0.0)[2],
        "rho_max_1": iv.rho_max_1, "rho_max_2": iv.rho_max_2, "rho_min": iv.rho_min,
        "lemma3_cap": iv.lemma3_cap, "feasible": iv.feasible,
    }


def cmd_region_example(args):
    if args.name == "cover-example":
        system = fixtures.cover_example(args.side, args.inputs, args.crossover)
        doc = adm.check_theorem1(system).to_json()
        doc.update(fixture=args.name, decoder_side=args.side, inputs=args.inputs)
        return doc
    pmf = fixtures.source_pmf(args.name)
    ch = fixtures.GMAC_DISCRETE_CHANNEL
    doc = _discrete_gmac_report(pmf, ch["P1"], ch["P2"], ch["sigma_n2"])
    doc["fixture"] = args.name
    return doc


def cmd_gmac_sweep(args):
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    grid_db = parse_snr_db(args.snr_db)
    rows = []
    for db in grid_db:
        snr = 10.0 ** (db / 10.0)
        for pt in gmac.sweep(schemes, args.sigma2, args.rho, [snr]):
            rows.append((float(db), pt.snr, pt.scheme, pt.D1, pt.D2, pt.R1, pt.R2, pt.rho_tilde))
    return Table(SWEEP_COLUMNS, rows)


def cmd_gmac_bounds(args):
    b1, b2, b12 = gmac.relaxed_bounds(gmac.GmacSpec(args.P1, args.P2, args.sigma_n2), args.rho)
    return {"rho": args.rho, "B1": b1, "B2": b2, "B12": b12}


def cmd_gmac_rho_interval(args):
    pmf = _source_arg(args)
    ch = fixtures.GMAC_DISCRETE_CHANNEL
    p1 = args.P1 if args.P1 is not None else ch["P1"]
    p2 = args.P2 if args.P2 is not None else ch["P2"]
    n = args.sigma_n2 if args.sigma_n2 is not None else ch["sigma_n2"]
    return _discrete_gmac_report(pmf, p1, p2, n)


def cmd_codebook_fit(args):
    pmf = _source_arg(args)
    problem = cbk.FitProblem(args.rho, pmf, counts=args.components, starts=args.starts, seed=args.seed)
    res = cbk.fit(problem)
    return {
        "codebook": res.codebook.to_json(),
        "target_rho": args.rho,
        "objective": res.objective,
        "normalized_distortion": res.normalized_distortion,
        "constraint_residuals": res.constraint_residuals,
        "best_start": res.start,
        "starts_converged": res.starts_converged,
    }


def _codebook_doc(path):
    doc = _load_json(path)
    if isinstance(doc, dict) and "codebook" in doc and "version" not in doc:
        doc = doc["codebook"]
    return cbk.MixtureCodebook.from_json(doc)


def cmd_codebook_validate(args):
    cb = _codebook_doc(args.codebook)
    resid = cb.moment_residuals()
    doc = {"moment_residuals": resid, "valid": bool(np.max(np.abs(resid)) <= cbk.MOMENT_TOL)}
    if args.rho is not None:
        obj = cbk.fit_objective(cb, args.rho)
        doc.update(objective=obj, normalized_distortion=obj / cbk.target_energy(args.rho))
    return doc


def cmd_codebook_sample(args):
    from ._rng import substream

    cb = _codebook_doc(args.codebook)
    u1, u2, x1, x2 = cbk.sample_pair(cb, substream(args.seed, 0), args.n)
    return Table(("u1", "u2", "x1", "x2"), zip(u1.tolist(), u2.tolist(), x1.tolist(), x2.tolist()))


def cmd_codebook_mi(args):
    cb = _codebook_doc(args.codebook)
    quantities = cbk.QUANTITIES if args.quantity == "all" else (args.quantity,)
    rows = []
    for q in quantities:
        est, se = cbk.mutual_info_mc(cb, args.P1, args.P2, args.sigma_n2, q, args.n, args.seed,
                                     threads=args.threads)
        rows.append((q, est, se))
    return Table(("quantity", "bits", "stderr"), rows)


def cmd_orth_sweep(args):
    grid_db = parse_snr_db(args.snr_db)
    snrs = 10.0 ** (grid_db / 10.0)
    rows = []
    for db, (snr, d_af, d_sb) in zip(grid_db, orthogonal.orth_sweep(args.rho, snrs)):
        rows.append((float(db), snr, "af", d_af, d_af, None, None, None))
        rows.append((float(db), snr, "sb", d_sb, d_sb, None, None, None))
    return Table(SWEEP_COLUMNS, rows)


def cmd_orth_si_optimize(args):
    src = gmac.GaussianSourcePair(1.0, 1.0, args.rho)
    si = orthogonal.SideInfoModel(args.s1, args.s2)
    rows = []
    for db in parse_snr_db(args.snr_db):
        snr = 10.0 ** (db / 10.0)
        opt = orthogonal.af_si_optimize(src, orthogonal.OrthogonalSpec.symmetric(snr), si, args.mode,
                                        resolution=args.resolution)
        c = opt.combiner
        rows.append((float(db), snr, args.mode, c.a1, c.b1, c.a2, c.b2, opt.mean_distortion))
    return Table(("snr_db", "S", "mode", "a1", "b1", "a2", "b2", "D"), rows)


def cmd_orth_tdma(args):
    spec = orthogonal.OrthogonalSpec(args.P1, args.P2, args.sigma_n1_2, args.sigma_n2_2)
    b1, b2, b12 = orthogonal.tdma_bounds(spec, args.alpha)
    c1, c2, c12 = orthogonal.separation_bounds(spec)
    return {"alpha": args.alpha, "B1": b1, "B2": b2, "B12": b12, "C1": c1, "C2": c2, "C12": c12}


def cmd_fading_csir(args):
    res = fading.csir_sum_rate(_fading_model(args), args.P, args.sigma2, args.n_mc, args.seed)
    doc = {"rate": res.rate, "stderr": res.stderr, "upper_bound": res.upper_bound, "n": res.n}
    if args.subsets:
        sub = fading.csir_subset_rates(_fading_model(args), args.P, args.sigma2, args.n_mc, args.seed)
        doc["subsets"] = [{"users": list(k), "bound": v[0], "stderr": v[1]} for k, v in sub.items()]
    return doc


def cmd_fading_waterfill(args):
    model = _fading_model(args)
    lam = fading.waterfill_lambda(model, args.P_avg, args.sigma2)
    doc = {"lambda": lam, "residual": fading.average_power(model, lam, args.sigma2) - args.P_avg}
    if args.audit:
        mean, se = fading.power_audit(model, lam, args.sigma2, args.audit, args.seed)
        doc.update(audit_power=mean, audit_stderr=se)
    return doc


def cmd_fading_csit(args):
    model = _fading_model(args)
    return {"rate": fading.csit_sum_rate(model, args.P_avg, args.sigma2),
            "lambda": fading.waterfill_lambda(model, args.P_avg, args.sigma2)}


def cmd_feedback_region(args):
    grid = np.linspace(0.0, 1.0, args.points)
    rows = feedback.ozarow_boundary(args.P1, args.P2, args.sigma2, grid)
    return Table(("rho", "corner", "R1", "R2"), rows)


def _sim_config(args):
    return mcsim.SimConfig(seed=args.seed, n_samples=args.n, batch=args.batch, threads=args.threads)


def cmd_simulate_af_gmac(args):
    src = gmac.GaussianSourcePair(args.sigma2, args.sigma2, args.rho)
    rows = []
    for db in parse_snr_db(args.snr_db):
        snr = 10.0 ** (db / 10.0)
        r = mcsim.simulate_af_gmac(src, gmac.GmacSpec.symmetric(snr, args.sigma_n2), _sim_config(args))
        rows.append((float(db), snr, r.D1, r.D2, r.se1, r.se2, r.closed_D1, r.closed_D2, r.z1, r.z2))
    return Table(("snr_db", "S", "D1", "D2", "se1", "se2", "closed_D1", "closed_D2", "z1", "z2"), rows)


def cmd_simulate_af_orth(args):
    src = gmac.GaussianSourcePair(1.0, 1.0, args.rho)
    si = orthogonal.SideInfoModel(args.s1, args.s2)
    comb = orthogonal.LinearCombiner.from_ratios(args.t1, args.t2)
    rows = []
    for db in parse_snr_db(args.snr_db):
        snr = 10.0 ** (db / 10.0)
        r = mcsim.simulate_af_orth(src, orthogonal.OrthogonalSpec.symmetric(snr), si, comb,
                                   args.decoder_si, _sim_config(args))
        rows.append((float(db), snr, r.D1, r.D2, r.se1, r.se2, r.closed_D1, r.closed_D2, r.z1, r.z2))
    return Table(("snr_db", "S", "D1", "D2", "se1", "se2", "closed_D1", "closed_D2", "z1", "z2"), rows)


# --------------------------------------------------------------------------
# manifests
# --------------------------------------------------------------------------

def _sha256(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def manifest_path(out):
    return out + ".manifest.json"


def write_manifest(args, argv, out):
    params = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
    doc = {
        "command": " ".join(args.command_path),
        "argv": list(argv),
        "params": params,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "outputs": [{"path": out, "sha256": _sha256(out)}],
    }
    with open(manifest_path(out), "w") as fh:
        fh.write(_dump_json(doc))


def _replace_out(argv, new_out):
    argv = list(argv)
    for i, tok in enumerate(argv):
        if tok == "--out" and i + 1 < len(argv):
            argv[i + 1] = new_out
            return argv
        if tok.startswith("--out="):
            argv[i] = "--out=" + new_out
            return argv
    raise InputError("manifest argv has no --out")


def cmd_replay(args):
    doc = _load_json(args.manifest)
    try:
        argv, outputs = doc["argv"], doc["outputs"]
        recorded = outputs[0]["sha256"]
    except (KeyError, IndexError, TypeError):
        raise InputError("malformed manifest") from None
    if doc.get("version") != __version__:
        print(f"warning: manifest from version {doc.get('version')}, running {__version__}", file=sys.stderr)
    with tempfile.TemporaryDirectory() as tmp:
        out = os.path.join(tmp, "replay.out")
        code = _run(_replace_out(argv, out), write_manifests=False)
        if code != EXIT_OK:
            raise NumericalError(f"replayed command exited with {code}")
        digest = _sha256(out)
    return {"manifest": args.manifest, "identical": digest == recorded,
            "recorded_sha256": recorded, "replayed_sha256": digest}


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(f"{self.prog}: {message}")


def _common(p, seed=False):
    p.add_argument("--json", action="store_true", help="emit JSON instead of CSV/text")
    p.add_argument("--out", help="write the result to this file (plus a run manifest)")
    p.add_argument("--threads", type=int, default=1, help="worker cap for Monte Carlo batches")
    if seed:
        p.add_argument("--seed", type=int, default=default_seed(),
                       help="random seed (default: $MACJSCC_SEED or 0)")


def _fading_args(p):
    p.add_argument("--family", choices=fading.FAMILIES, default="rayleigh")
    p.add_argument("--users", "-M", type=int, default=1)
    p.add_argument("--value", type=float, default=1.0, help="fading power for the constant family")
    p.add_argument("--values", help="comma-separated fading powers for the discrete family")
    p.add_argument("--probs", help="comma-separated probabilities for the discrete family")
    p.add_argument("--sigma2", type=float, default=1.0)


def _source_args(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--fixture", choices=["gmac-discrete", "cover-example"], default="gmac-discrete")
    g.add_argument("--pmf", help="JSON pmf over two source variables")


def _sim_args(p):
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--snr-db", default="10:10:1")
    p.add_argument("--n", type=int, default=10**6)
    p.add_argument("--batch", type=int, default=100_000)


def build_parser():
    parser = _Parser(prog="macjscc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    top = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def group(name, help_text):
        g = top.add_parser(name, help=help_text)
        return g.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def leaf(sub, name, func, help_text, seed=False):
        p = sub.add_parser(name, help=help_text)
        _common(p, seed)
        p.set_defaults(func=func)
        return p

    # region
    sub = group("region", "admissibility checks for discrete systems")
    p = leaf(sub, "check", cmd_region_check, "check a system given as JSON")
    p.add_argument("--system", required=True)
    p.add_argument("--two-user", action="store_true", help="two-user conditions with strict slack")
    p.add_argument("--decoder", action="store_true", help="also report optimal decoder distortions")
    p = leaf(sub, "example", cmd_region_example, "named worked examples")
    p.add_argument("--name", choices=fixtures.FIXTURES, default="cover-example")
    p.add_argument("--side", choices=sorted(fixtures.DECODER_SIDE), default="full")
    p.add_argument("--inputs", choices=["independent", "identity"], default="independent")
    p.add_argument("--crossover", type=float, default=0.3)

    # gmac
    sub = group("gmac", "Gaussian MAC schemes and bounds")
    p = leaf(sub, "sweep", cmd_gmac_sweep, "distortion-vs-SNR sweep")
    p.add_argument("--schemes", default=",".join(gmac.SCHEMES))
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--snr-db", default="-10:30:1")
    p = leaf(sub, "bounds", cmd_gmac_bounds, "correlated-input rate bounds")
    p.add_argument("--P1", type=float, required=True)
    p.add_argument("--P2", type=float, required=True)
    p.add_argument("--sigma-n2", type=float, default=1.0)
    p.add_argument("--rho", type=float, default=0.0)
    p = leaf(sub, "rho-interval", cmd_gmac_rho_interval, "admissible input correlations")
    _source_args(p)
    p.add_argument("--P1", type=float)
    p.add_argument("--P2", type=float)
    p.add_argument("--sigma-n2", type=float)

    # codebook
    sub = group("codebook", "Gaussian-mixture codebooks")
    p = leaf(sub, "fit", cmd_codebook_fit, "fit a codebook to a target correlation", seed=True)
    _source_args(p)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--components", type=int, default=2)
    p.add_argument("--starts", type=int, default=20)
    p = leaf(sub, "validate", cmd_codebook_validate, "check moment constraints and fit quality")
    p.add_argument("--codebook", required=True)
    p.add_argument("--rho", type=float)
    p = leaf(sub, "sample", cmd_codebook_sample, "draw (u1, u2, x1, x2) samples", seed=True)
    p.add_argument("--codebook", required=True)
    p.add_argument("--n", type=int, default=1000)
    p = leaf(sub, "mi", cmd_codebook_mi, "Monte Carlo information quantities", seed=True)
    p.add_argument("--codebook", required=True)
    p.add_argument("--quantity", choices=("all",) + cbk.QUANTITIES, default="all")
    p.add_argument("--P1", type=float, default=3.0)
    p.add_argument("--P2", type=float, default=4.0)
    p.add_argument("--sigma-n2", type=float, default=1.0)
    p.add_argument("--n", type=int, default=200_000)

    # orthogonal
    sub = group("orthogonal", "orthogonal-channel schemes")
    p = leaf(sub, "sweep", cmd_orth_sweep, "AF and SB distortion sweep")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--snr-db", default="-10:30:1")
    p = leaf(sub, "si-optimize", cmd_orth_si_optimize, "optimal AF combiners with side information")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--s1", type=float, default=0.5)
    p.add_argument("--s2", type=float, default=0.5)
    p.add_argument("--mode", choices=orthogonal.MODES, default="both")
    p.add_argument("--snr-db", default="0:20:5")
    p.add_argument("--resolution", type=float, default=1e-4)
    p = leaf(sub, "tdma", cmd_orth_tdma, "time-sharing rate bounds")
    p.add_argument("--P1", type=float, required=True)
    p.add_argument("--P2", type=float, required=True)
    p.add_argument("--sigma-n1-2", type=float, default=1.0)
    p.add_argument("--sigma-n2-2", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.5)

    # fading
    sub = group("fading", "fading MAC rates")
    p = leaf(sub, "csir", cmd_fading_csir, "receiver-CSI sum rate by Monte Carlo", seed=True)
    _fading_args(p)
    p.add_argument("--P", type=float, required=True)
    p.add_argument("--n-mc", type=int, default=100_000)
    p.add_argument("--subsets", action="store_true")
    p = leaf(sub, "waterfill", cmd_fading_waterfill, "best-user water-filling threshold", seed=True)
    _fading_args(p)
    p.add_argument("--P-avg", type=float, required=True)
    p.add_argument("--audit", type=int, default=0, help="Monte Carlo power audit sample count")
    p = leaf(sub, "csit", cmd_fading_csit, "transmitter-CSI rate under best-user water-filling")
    _fading_args(p)
    p.add_argument("--P-avg", type=float, required=True)

    # feedback
    sub = group("feedback", "MAC with feedback")
    p = leaf(sub, "region", cmd_feedback_region, "pentagon corners over an input-correlation grid")
    p.add_argument("--P1", type=float, required=True)
    p.add_argument("--P2", type=float, required=True)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--points", type=int, default=101)

    # simulate
    sub = group("simulate", "Monte Carlo checks of closed forms")
    p = leaf(sub, "af-gmac", cmd_simulate_af_gmac, "AF over the Gaussian MAC", seed=True)
    _sim_args(p)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--sigma-n2", type=float, default=1.0)
    p = leaf(sub, "af-orth", cmd_simulate_af_orth, "AF over orthogonal channels", seed=True)
    _sim_args(p)
    p.add_argument("--s1", type=float, default=0.0)
    p.add_argument("--s2", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=0.0, help="combiner ratio b1/a1 (inf: side information only)")
    p.add_argument("--t2", type=float, default=0.0)
    p.add_argument("--decoder-si", action="store_true")

    # replay
    p = top.add_parser("replay", help="re-run a manifest and compare outputs")
    p.add_argument("manifest")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_replay, command=None)
    return parser


def _render(result, as_json):
    if isinstance(result, Table):
        return _dump_json(result.to_json()) if as_json else result.to_csv()
    if as_json:
        return _dump_json(result)
    lines = []
    for k, v in _jsonable(result).items():
        lines.append(f"{k}: {json.dumps(v) if isinstance(v, (list, dict)) else v}")
    return "\n".join(lines) + "\n"


def _attach_negative_values(argv):
    """Glue ``--snr-db -10:30:1`` into one token so argparse does not see a flag."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--snr-db" and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"--snr-db={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _run(argv, write_manifests=True):
    args = build_parser().parse_args(_attach_negative_values(argv))
    args.command_path = [args.group] + ([args.command] if args.command else [])
    if getattr(args, "threads", 1) < 1:
        raise InputError("--threads must be positive")
    result = args.func(args)
    # files always get a machine-readable document
    text = _render(result, args.json or (bool(args.out) and not isinstance(result, Table)))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        if write_manifests and args.func is not cmd_replay:
            write_manifest(args, argv, args.out)
    else:
        sys.stdout.write(text)
    if args.func is cmd_replay and not result["identical"]:
        return EXIT_NUMERIC
    return EXIT_OK


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        return _run(argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
