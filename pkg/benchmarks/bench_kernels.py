"""Time the compiled kernels against their plain-numpy twins.

The three hot loops (grid evaluation of a Lorentzian sum, exact band
integrals, and the one-sided Simpson Fourier transform) each exist twice
in fewatom._kernels: a numba @njit version and a vectorized numpy
version, selected at import time. This script times both on workloads
shaped like the real ones — term counts matching the N = 4 and N = 5
one-coherence sectors, width-search grids, and the correlation traces the
integration cross-check produces — and checks they agree while at it.

Run from the repository root:

    python3 benchmarks/bench_kernels.py            # full workloads
    python3 benchmarks/bench_kernels.py --quick    # ~5x smaller

Numbers land on stdout as a plain table; the compiled path is warmed up
before timing so JIT compilation is not billed to the first row.
"""

import argparse
import sys
import time

import numpy as np

sys.path.insert(0, "src")

from fewatom import _kernels  # noqa: E402


def _spectrum_terms(rng, n_terms):
    """Synthetic term table with the spread real spectra show."""
    nu = rng.normal(scale=4.0, size=n_terms)
    gamma = rng.uniform(0.05, 3.0, size=n_terms)
    w_re = rng.normal(scale=0.1, size=n_terms) ** 2
    w_im = rng.normal(scale=0.02, size=n_terms)
    return nu, gamma, w_re, w_im


def _time(fn, args, repeat, number):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / number)
    return best


def _fmt(seconds):
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} us"
    return f"{seconds * 1e3:8.2f} ms"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5, help="timing repetitions, best-of")
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args()

    if _kernels.BACKEND != "numba":
        print(
            "compiled path unavailable (numba missing or FEWATOM_PURE_NUMPY set); "
            "timing the numpy implementations only"
        )

    rng = np.random.default_rng(42)
    shrink = 5 if args.quick else 1
    grid_small = np.linspace(-25.0, 25.0, 2001 // shrink)
    grid_large = np.linspace(-25.0, 25.0, 20001 // shrink)

    cases = []
    for n_terms, grid, label in (
        (56, grid_small, "sum_eval   56 terms x %5d pts"),
        (56, grid_large, "sum_eval   56 terms x %5d pts"),
        (210, grid_large, "sum_eval  210 terms x %5d pts"),
    ):
        nu, gamma, w_re, w_im = _spectrum_terms(rng, n_terms)
        cases.append(
            (
                label % grid.size,
                "_lorentzian_sum_eval",
                (nu, gamma, w_re, w_im, grid),
                max(1, 40 // shrink),
            )
        )

    nu, gamma, w_re, w_im = _spectrum_terms(rng, 210)
    cases.append(
        (
            "band_weight  210 terms",
            "_lorentzian_band_weight",
            (nu, gamma, w_re, w_im, -1.3, 2.7),
            2000 // shrink,
        )
    )

    n_tau = 2**14 // shrink + 1
    tau = 0.01 * np.arange(n_tau)
    g = np.exp((0.9j - 0.35) * tau) + 0.4 * np.exp((-2.1j - 0.8) * tau)
    omegas = np.linspace(-12.0, 12.0, 257)
    cases.append(
        (
            f"fourier  {n_tau} taus x {omegas.size} freqs",
            "_one_sided_fourier",
            (g, 0.01, omegas),
            max(1, 10 // shrink),
        )
    )

    have_numba = _kernels.BACKEND == "numba"
    header = f"{'workload':<34} {'numpy':>12}"
    if have_numba:
        header += f" {'numba':>12} {'speedup':>9} {'max |diff|':>11}"
    print(header)
    print("-" * len(header))

    for label, stem, call_args, number in cases:
        f_np = getattr(_kernels, stem + "_numpy")
        t_np = _time(f_np, call_args, args.repeat, number)
        row = f"{label:<34} {_fmt(t_np):>12}"
        if have_numba:
            f_nb = getattr(_kernels, stem + "_numba")
            f_nb(*call_args)  # warm the JIT cache outside the clock
            t_nb = _time(f_nb, call_args, args.repeat, number)
            a, b = np.asarray(f_np(*call_args)), np.asarray(f_nb(*call_args))
            row += f" {_fmt(t_nb):>12} {t_np / t_nb:>8.1f}x {np.max(np.abs(a - b)):>11.2e}"
        print(row)


if __name__ == "__main__":
    main()
