#!/usr/bin/env python3
"""Compare the compiled inner-loop backend against the scipy fallback.

Times the stationary-measure power iteration (the hot loop of every rank
computation) on random graphs of growing size.

    python3 benchmarks/bench_backends.py [--n 100000] [--avg-degree 10]
"""

import argparse
import time

import numpy as np

from tpagerank import KernelConfig, WeightFunction, random_graph, normalize_dangling, uniform
from tpagerank._backend import backends
from tpagerank.kernel import _FrozenKernel


def bench(n, avg_degree, repeats=3, seed=0):
    rng = np.random.default_rng(seed)
    g = normalize_dangling(random_graph(n, avg_degree / n, rng))
    w = WeightFunction.identity()
    cfg = KernelConfig(t1=0.5, gamma=0.85)
    x = rng.dirichlet(np.ones(n))
    frozen = _FrozenKernel(g, w, cfg, x)
    results = {}
    for name, impl in backends():
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            v, iters, ok = impl.power_iterate(
                g.n, g.indptr, g.indices, frozen.p, cfg.gamma,
                frozen.teleport, uniform(n), 1e-12, 10_000, False)
            best = min(best, time.perf_counter() - t0)
        results[name] = (best, iters, v)
    return g, results


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=0, help="single size; 0 = sweep")
    ap.add_argument("--avg-degree", type=float, default=10.0)
    args = ap.parse_args()
    sizes = [args.n] if args.n else [1_000, 10_000, 100_000]
    print(f"{'n':>8} {'nnz':>10} {'backend':>9} {'time/iter':>12} {'speedup':>8}")
    for n in sizes:
        g, results = bench(n, args.avg_degree)
        base = results["pure"][0] / results["pure"][1]
        vs = [r[2] for r in results.values()]
        assert all(np.abs(v - vs[0]).max() < 1e-12 for v in vs), "backends disagree"
        for name, (t, iters, _) in results.items():
            per = t / iters
            print(f"{n:>8} {g.nnz:>10} {name:>9} {per * 1e6:>10.1f}us "
                  f"{base / per:>7.2f}x")


if __name__ == "__main__":
    main()
