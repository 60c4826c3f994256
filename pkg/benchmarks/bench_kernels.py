#!/usr/bin/env python3
"""Benchmark the traversal kernels: numba @njit vs the pure-numpy fallback.

Builds one large synthetic graph, then times capped BFS rows and batched
common-neighbor counts under each backend (selected via FRIENDSIM_BACKEND,
exactly as production code selects them). Run:

    python benchmarks/bench_kernels.py [--members 30000] [--mean-degree 30]
"""

import argparse
import os
import statistics
import time

import numpy as np

from friendsim import kernels
from friendsim.graph import GraphGenConfig, generate_graph


def timed(fn, repeats=5):
    best = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best.append(time.perf_counter() - start)
    return min(best), statistics.median(best)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--members", type=int, default=30_000)
    parser.add_argument("--mean-degree", type=float, default=30.0)
    parser.add_argument("--sources", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"generating graph: {args.members} members, mean degree {args.mean_degree}")
    graph = generate_graph(
        GraphGenConfig(
            member_count=args.members,
            target_mean_degree=args.mean_degree,
            interaction_rate=0.0,
            seed=args.seed,
        )
    )
    indptr, indices = graph.csr_adjacency()
    n = args.members
    rng = np.random.default_rng(1)
    sources = rng.integers(0, n, size=args.sources)
    targets = rng.integers(0, n, size=2_000).astype(np.int64)

    backends = ["numpy"]
    if kernels.HAVE_NUMBA:
        backends.insert(0, "numba")
    else:
        print("numba not importable; benchmarking the numpy fallback only")

    results = {}
    checks = {}
    for backend in backends:
        os.environ[kernels.ENV_BACKEND] = backend
        kernels.warmup()  # jit compile outside the timed region

        def run_bfs():
            for s in sources:
                kernels.bfs_levels(indptr, indices, int(s), 3)

        def run_counts():
            for s in sources:
                kernels.common_neighbor_counts(indptr, indices, int(s), targets)

        bfs_best, bfs_median = timed(run_bfs)
        cnt_best, cnt_median = timed(run_counts)
        results[backend] = (bfs_best, bfs_median, cnt_best, cnt_median)
        checks[backend] = (
            kernels.bfs_levels(indptr, indices, int(sources[0]), 3).sum(),
            kernels.common_neighbor_counts(indptr, indices, int(sources[0]), targets).sum(),
        )

    if len(checks) == 2 and checks["numba"] != checks["numpy"]:
        raise SystemExit("backend results disagree; refusing to report timings")

    print()
    header = f"{'backend':<8} {'bfs best':>10} {'bfs median':>12} {'counts best':>12} {'counts median':>14}"
    print(header)
    print("-" * len(header))
    for backend, (b1, b2, c1, c2) in results.items():
        print(f"{backend:<8} {b1:>9.3f}s {b2:>11.3f}s {c1:>11.3f}s {c2:>13.3f}s")
    if len(results) == 2:
        nb, np_ = results["numba"], results["numpy"]
        print()
        print(f"speedup (median): bfs x{np_[1] / nb[1]:.1f}, counts x{np_[3] / nb[3]:.1f}")


if __name__ == "__main__":
    main()
