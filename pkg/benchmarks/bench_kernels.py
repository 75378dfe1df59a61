"""Compare the numba and numpy paths of the hot kernels.

Run with ``python3 benchmarks/bench_kernels.py [--n 1000000] [--repeat 5]``.
Prints the best wall time per kernel and path plus the largest absolute
difference between the two outputs.
"""

import argparse
import time

import numpy as np

from macjscc import _kernels


def best_time(fn, repeat):
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1_000_000, help="samples for the mixture density")
    ap.add_argument("--k", type=int, default=16, help="mixture components")
    ap.add_argument("--gram", type=int, default=400, help="side of the overlap matrix")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if not _kernels.HAVE_NUMBA:
        print("numba is not importable; only the numpy path can run")
        return

    rng = np.random.default_rng(0)
    x = rng.standard_normal(args.n) * 2.0
    logw = np.log(rng.dirichlet(np.ones(args.k)))[None, :].repeat(args.n, axis=0)
    means = rng.uniform(-3, 3, args.k)
    variances = rng.uniform(0.1, 2.0, args.k)
    a = rng.uniform(-3, 3, args.gram)
    c = rng.uniform(0.1, 2.0, args.gram)

    cases = {
        "mixture_logpdf": (_kernels._np_mixture_logpdf, _kernels._nb_mixture_logpdf, (x, logw, means, variances)),
        "normal_pdf_matrix": (_kernels._np_normal_pdf_matrix, _kernels._nb_normal_pdf_matrix,
                              (x[: args.n // 10], means, variances)),
        "overlap_matrix": (_kernels._np_overlap_matrix, _kernels._nb_overlap_matrix, (a, c, a, c)),
    }
    print(f"{'kernel':<20}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}{'max |diff|':>14}")
    for name, (np_fn, nb_fn, inputs) in cases.items():
        t_np = best_time(lambda: np_fn(*inputs), args.repeat)
        t_nb = best_time(lambda: nb_fn(*inputs), args.repeat)
        diff = float(np.max(np.abs(np_fn(*inputs) - nb_fn(*inputs))))
        print(f"{name:<20}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>10.2f}{diff:>14.3e}")


if __name__ == "__main__":
    main()
