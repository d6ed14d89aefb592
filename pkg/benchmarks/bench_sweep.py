"""Compare the compiled and pure-Python composition sweeps.

Usage: python benchmarks/bench_sweep.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

from gkm_forge import kernels
from gkm_forge._sweep_py import sweep as pure_sweep
from gkm_forge.cubic_db import load_database
from gkm_forge.skeleton import structure_matrix_int

CASES = [(4, 0), (6, 1), (8, 2)]  # (vertex count, database index)


def _run(fn, structure):
    hits = []
    start = time.perf_counter()
    nodes = fn(structure, 24, 2, lambda d: hits.append(d) or False)
    return time.perf_counter() - start, nodes, hits


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not kernels.COMPILED:
        print("compiled kernel unavailable; only the pure-Python sweep will run")
    db = load_database(sizes=[x for x, _ in CASES])
    print(f"{'graph':>8} {'nodes':>9} {'hits':>6} {'python s':>9} {'compiled s':>11} {'speedup':>8}")
    for x, i in CASES:
        structure = structure_matrix_int(db[x][i].edges)
        tp, nodes, hp = min((_run(pure_sweep, structure) for _ in range(args.repeat)), key=lambda r: r[0])
        if kernels.COMPILED:
            tc, nodes_c, hc = min((_run(kernels.sweep, structure) for _ in range(args.repeat)), key=lambda r: r[0])
            assert (nodes_c, hc) == (nodes, hp), "kernels disagree"
            print(f"{f'C{x}.{i + 1}':>8} {nodes:>9} {len(hp):>6} {tp:>9.3f} {tc:>11.4f} {tp / tc:>7.1f}x")
        else:
            print(f"{f'C{x}.{i + 1}':>8} {nodes:>9} {len(hp):>6} {tp:>9.3f} {'-':>11} {'-':>8}")


if __name__ == "__main__":
    main()
