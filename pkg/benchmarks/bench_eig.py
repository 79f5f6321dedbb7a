"""Timing comparison of the two Jacobi eigensolver backends.

Run from the repository root:

    python3 benchmarks/bench_eig.py [--sizes 40,80,160] [--repeats 3]

Both backends implement the same cyclic complex Jacobi sweep; the
compiled one exists purely for speed, so this script is the evidence
that carrying it is worth the build step.  numpy.linalg.eigvalsh is
included as an accuracy reference (max eigenvalue deviation), not as a
competitor.
"""

import argparse
import time

import numpy as np

from momt import _jacobi_py

try:
    from momt import _jacobi
except ImportError:
    _jacobi = None


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2.0


def best_time(fn, arg, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(arg)
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="20,40,80,160",
                        help="comma-separated matrix sizes")
    parser.add_argument("--repeats", type=int, default=3,
                        help="repetitions per measurement (best is kept)")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if _jacobi is None:
        print("compiled backend not importable; timing the pure backend only")

    header = f"{'n':>6} {'pure (s)':>12} {'compiled (s)':>14} {'speedup':>9} {'max |dev|':>11}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        a = random_hermitian(n, seed=n)
        t_pure = best_time(lambda m: _jacobi_py.jacobi_eigh(m), a, args.repeats)
        reference = np.linalg.eigvalsh(a)
        values, _ = _jacobi_py.jacobi_eigh(a)
        dev = float(np.abs(np.asarray(values) - reference).max())
        if _jacobi is not None:
            t_comp = best_time(lambda m: _jacobi.jacobi_eigh(m), a, args.repeats)
            cvalues, _ = _jacobi.jacobi_eigh(a)
            dev = max(dev, float(np.abs(np.asarray(cvalues) - reference).max()))
            print(f"{n:>6} {t_pure:>12.4f} {t_comp:>14.4f} "
                  f"{t_pure / t_comp:>8.1f}x {dev:>11.2e}")
        else:
            print(f"{n:>6} {t_pure:>12.4f} {'-':>14} {'-':>9} {dev:>11.2e}")


if __name__ == "__main__":
    main()
