"""Compare the homomorphism-search backends on growing workloads.

Run as a script:

    python3 benchmarks/bench_kernels.py

The backtrack backend is numba-compiled unless INJLOG_NO_JIT=1; the
numpy backend vectorizes over the full assignment space and is only
viable while target**source stays small.  Both must return identical
counts; the table reports wall time per workload.
"""

import time

import numpy as np

from injlog.graphs import Graph, clique, enumerate_graphs
from injlog.kernels import hom_count, hom_list, jit_active


def adj(g: Graph) -> np.ndarray:
    return g.adjacency


def workloads():
    yield "count  K3 -> K5", lambda b: hom_count(adj(clique(3)), adj(clique(5)), backend=b)
    yield "count  K4 -> K6", lambda b: hom_count(adj(clique(4)), adj(clique(6)), backend=b)
    cyc = Graph.of(3, [(0, 1), (1, 2), (2, 0)])
    yield "list   C3 -> K6", lambda b: len(hom_list(adj(cyc), adj(clique(6)), backend=b))

    small = [g.adjacency for g in enumerate_graphs(3)]
    k4 = adj(clique(4))

    def sweep(b):
        return sum(hom_count(k4, a, cap=1, backend=b) for a in small)

    yield "exists K4 -> all 3-node graphs", sweep


def timed(fn, backend, repeats=3):
    best, result = None, None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(backend)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def main():
    print(f"backtrack backend jit-compiled: {jit_active()}")
    header = f"{'workload':<34}{'backtrack':>12}{'numpy':>12}  agreement"
    print(header)
    print("-" * len(header))
    for name, fn in workloads():
        timed(fn, "backtrack")  # warm the jit cache before timing
        bt, bt_result = timed(fn, "backtrack")
        np_time, np_result = timed(fn, "numpy")
        mark = "ok" if bt_result == np_result else "MISMATCH"
        print(f"{name:<34}{bt * 1e3:>10.2f}ms{np_time * 1e3:>10.2f}ms  {mark}")


if __name__ == "__main__":
    main()
