"""Compare the compiled and pure-Python elimination kernels on boundary matrices.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

from squarebraid.grid import build_grid, enumerate_cells
from squarebraid.kernels import _kernels_py, compiled_available, eliminate_units

CASES = ((4, 4), (5, 5), (6, 5), (6, 6))


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not compiled_available():
        print("compiled kernel not built; only the Python path is available")
    print(f"{'grid':>6} {'k':>2} {'rows':>6} {'cols':>6} {'nnz':>7} {'python s':>9} {'compiled s':>10} {'speedup':>8}")
    for p, q in CASES:
        c = enumerate_cells(build_grid(p, q), p * q - 2)
        for k in (1, 2):
            m = c.boundary_matrix(k)
            colptr, rowidx, vals = m.csc()
            tp, rp = best_of(lambda: _kernels_py.eliminate_units(m.nrows, m.ncols, colptr, rowidx, vals),
                             args.repeat)
            if compiled_available():
                tc, rc = best_of(lambda: eliminate_units(m.nrows, m.ncols, colptr, rowidx, vals,
                                                         backend="compiled"), args.repeat)
                assert rc == rp, "kernels disagree"
                cs, sp = f"{tc:10.4f}", f"{tp / tc:8.1f}"
            else:
                cs, sp = f"{'-':>10}", f"{'-':>8}"
            print(f"{p}x{q:<4} {k:>2} {m.nrows:>6} {m.ncols:>6} {m.nnz():>7} {tp:9.4f} {cs} {sp}")


if __name__ == "__main__":
    main()
