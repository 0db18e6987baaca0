"""Time the compiled eigensolver kernel against the pure-Python fallback.

Runs the cyclic Jacobi diagonalization on random Hermitian matrices of
increasing size with both kernels, checks they reconstruct the input to
the same accuracy, and prints a timing table with numpy's LAPACK-backed
eigh as a reference point.

Usage: python3 benchmarks/bench_backends.py [--dims 8,16,32,64,128] [--repeat 3]
"""

import argparse
import time

import numpy as np

from qsl_lab import _core_py
from qsl_lab.backend import available_backends

try:
    from qsl_lab import _core
except ImportError:
    _core = None


def random_hermitian(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2.0


def best_time(func, matrix, repeat):
    elapsed = []
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = func(matrix)
        elapsed.append(time.perf_counter() - start)
    return min(elapsed), result


def reconstruction_error(matrix, diag, vectors):
    approx = (vectors * diag) @ vectors.conj().T
    return float(np.max(np.abs(approx - matrix)))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dims", default="8,16,32,64,128",
                        help="comma-separated matrix sizes")
    parser.add_argument("--repeat", type=int, default=3,
                        help="timing repetitions; best of N is reported")
    parser.add_argument("--seed", type=int, default=67)
    args = parser.parse_args()
    dims = [int(d) for d in args.dims.split(",")]
    rng = np.random.default_rng(args.seed)

    print(f"available backends: {', '.join(available_backends())}")
    if _core is None:
        print("compiled kernel missing; timing the python fallback only\n")
    header = f"{'dim':>5} {'compiled [ms]':>14} {'python [ms]':>12} "
    header += f"{'speedup':>8} {'numpy eigh [ms]':>16} {'max |rebuild err|':>18}"
    print(header)
    print("-" * len(header))

    for dim in dims:
        matrix = random_hermitian(rng, dim)
        t_np, _ = best_time(np.linalg.eigh, matrix, args.repeat)
        t_py, (diag_py, vec_py, _) = best_time(
            _core_py.jacobi_diagonalize, matrix, args.repeat
        )
        err = reconstruction_error(matrix, diag_py, vec_py)
        if _core is not None:
            t_c, (diag_c, vec_c, _) = best_time(
                _core.jacobi_diagonalize, matrix, args.repeat
            )
            err = max(err, reconstruction_error(matrix, diag_c, vec_c))
            if not np.allclose(np.sort(diag_c), np.sort(diag_py), atol=1e-9):
                raise SystemExit(f"backend spectra disagree at dim {dim}")
            row = (f"{dim:>5} {t_c * 1e3:>14.3f} {t_py * 1e3:>12.3f} "
                   f"{t_py / t_c:>7.1f}x {t_np * 1e3:>16.3f} {err:>18.2e}")
        else:
            row = (f"{dim:>5} {'-':>14} {t_py * 1e3:>12.3f} "
                   f"{'-':>8} {t_np * 1e3:>16.3f} {err:>18.2e}")
        print(row)


if __name__ == "__main__":
    main()
