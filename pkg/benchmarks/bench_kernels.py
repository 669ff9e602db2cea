#!/usr/bin/env python3
"""Hot-kernel timings: jitted path vs the pure-numpy/python fallback.

The parent process re-runs itself twice with PERCOLAB_NO_NUMBA toggled,
because the acceleration mode is fixed at import time.  Reported numbers
are best-of-N wall times after a warm-up call (which, in jitted mode,
absorbs the compile cost).

Usage: python benchmarks/bench_kernels.py [--n 50000] [--d 20] [--repeats 5]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def _measure(n: int, d: int, p: float, repeats: int) -> dict:
    from percolab.census import take_census
    from percolab.generators import GenSpec, generate
    from percolab.percolation import (
        CoinStream,
        PercolationSample,
        components_oracle,
        run_dfs,
    )

    g = generate(GenSpec("random_regular", n=n, d=d, seed=17))
    warm = run_dfs(g, CoinStream(g.n, p, 0))
    sample = PercolationSample.from_membership(p, 0, warm.accepted_mask())
    take_census(g, sample)
    components_oracle(g, sample)

    def best(fn):
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            fn()
            times.append(time.perf_counter() - t0)
        return min(times)

    streams = [CoinStream(g.n, p, r + 1) for r in range(repeats)]
    out = {"dfs_explore": best(lambda: run_dfs(g, streams.pop()))}
    out["union_find"] = best(lambda: components_oracle(g, sample))
    out["census"] = best(lambda: take_census(g, sample))
    return out


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=50_000)
    ap.add_argument("--d", type=int, default=20)
    ap.add_argument("--p", type=float, default=0.06)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.child:
        print(json.dumps(_measure(args.n, args.d, args.p, args.repeats)))
        return 0

    results = {}
    for label, flag in (("numba", "0"), ("fallback", "1")):
        env = dict(os.environ, PERCOLAB_NO_NUMBA=flag)
        cmd = [sys.executable, os.path.abspath(__file__), "--child",
               "--n", str(args.n), "--d", str(args.d),
               "--p", str(args.p), "--repeats", str(args.repeats)]
        proc = subprocess.run(cmd, capture_output=True, text=True, env=env)
        if proc.returncode != 0:
            sys.stderr.write(proc.stderr)
            return proc.returncode
        results[label] = json.loads(proc.stdout)

    print(f"n={args.n} d={args.d} p={args.p} best-of-{args.repeats}")
    print(f"{'kernel':<14} {'numba':>12} {'fallback':>12} {'speedup':>9}")
    for kernel in results["numba"]:
        fast = results["numba"][kernel]
        slow = results["fallback"][kernel]
        print(f"{kernel:<14} {fast:>11.4f}s {slow:>11.4f}s {slow / fast:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
