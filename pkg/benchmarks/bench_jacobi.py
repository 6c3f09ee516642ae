"""Compare the compiled and pure-Python Jacobi sweep kernels.

Run with ``python3 benchmarks/bench_jacobi.py [n_max ...]``.
"""

from __future__ import annotations

import sys
import time

import numpy as np

from chiralosc._kernels import _jacobi_py
from chiralosc.params import PhysicalParams
from chiralosc.spectrum import FockBasisSpec, build_zeeman_matrix

try:
    from chiralosc._kernels import _jacobi
except ImportError:
    _jacobi = None


def _time(kernel, H, repeats=3):
    best = np.inf
    for _ in range(repeats):
        a = H.copy()
        v = np.eye(a.shape[0])
        start = time.perf_counter()
        kernel(a, v, 1e-12 * np.linalg.norm(H), 50)
        best = min(best, time.perf_counter() - start)
    return best, np.sort(np.diag(a))


def main(argv=None):
    sizes = [int(s) for s in (argv or sys.argv[1:])] or [10, 20, 30]
    params = PhysicalParams()
    print(f"{'n_max':>5} {'dim':>5} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8} {'max |dE|':>10}")
    for n_max in sizes:
        H = build_zeeman_matrix(FockBasisSpec(n_max), 0.3, params)
        t_py, e_py = _time(_jacobi_py.jacobi_sweeps, H)
        if _jacobi is None:
            print(f"{n_max:>5} {H.shape[0]:>5} {t_py:>11.4f} {'n/a':>11} {'n/a':>8} {'n/a':>10}")
            continue
        t_cy, e_cy = _time(_jacobi.jacobi_sweeps, H)
        print(f"{n_max:>5} {H.shape[0]:>5} {t_py:>11.4f} {t_cy:>11.4f} {t_py / t_cy:>8.1f} "
              f"{np.max(np.abs(e_py - e_cy)):>10.2e}")


if __name__ == "__main__":
    main()
