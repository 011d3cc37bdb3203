#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Micro-benchmarks time the three hot kernels directly on representative
read-matrix sizes; the end-to-end benchmark runs a full trust-region solve
in a subprocess per backend (backend selection happens at import time, so
each run gets a clean interpreter with HAPRTR_KERNELS pinned).
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from haprtr import kernels
from haprtr.pipeline import generate_instance

SIZES = ((50, 40), (100, 120), (250, 300))


def time_call(fn, *args, repeats=2000, min_seconds=0.2):
    fn(*args)  # warm up
    n = repeats
    while True:
        start = time.perf_counter()
        for _ in range(n):
            fn(*args)
        elapsed = time.perf_counter() - start
        if elapsed >= min_seconds:
            return elapsed / n
        n *= 4


def micro(repeats):
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)} (active: {kernels.BACKEND})")
    print(f"{'kernel':<12} {'m x n':<10} " + " ".join(f"{b + ' (us)':>10}" for b in backends)
          + ("   speedup" if len(backends) > 1 else ""))
    for m, n in SIZES:
        inst = generate_instance(m, n, 0.5, 0.3, seed=1)
        A = inst.reads.sampled
        rng = np.random.default_rng(0)
        x = rng.standard_normal(n)
        x /= np.linalg.norm(x)
        xi = rng.standard_normal(n)
        r = A @ x
        for name, args in (
            ("residuals", (A, x)),
            ("cost_grad", (A, x, 1e-6)),
            ("hess_apply", (A, r, xi, 1e-6)),
        ):
            per_call = {}
            for backend in backends:
                fn = getattr(kernels.get(backend), name)
                per_call[backend] = time_call(fn, *args, repeats=repeats)
            row = f"{name:<12} {f'{m}x{n}':<10} " + " ".join(
                f"{per_call[b] * 1e6:>10.2f}" for b in backends
            )
            if len(backends) > 1:
                row += f"   {per_call['py'] / per_call['c']:>6.2f}x"
            print(row)


_SOLVE_SNIPPET = """
import time
import haprtr
from haprtr import kernels
from haprtr.trustregion import RtrConfig

total = 0.0
for seed in range(20):
    inst = haprtr.generate_instance(100, 120, 0.5, 0.35, seed=seed)
    start = time.perf_counter()
    haprtr.solve_with_rtr(inst.reads, RtrConfig(spectral_init=True), attempts=3, seed=seed)
    total += time.perf_counter() - start
print(f"{kernels.BACKEND} {total:.3f}")
"""


def end_to_end():
    print("\nend-to-end: 20 trust-region solves (m=100, n=120, pd=0.5, err=0.35)")
    results = {}
    for backend in kernels.available_backends():
        env = dict(os.environ, HAPRTR_KERNELS=backend)
        out = subprocess.run(
            [sys.executable, "-c", _SOLVE_SNIPPET], env=env, capture_output=True, text=True
        )
        if out.returncode != 0:
            print(f"  {backend}: failed\n{out.stderr}")
            continue
        name, seconds = out.stdout.split()
        results[name] = float(seconds)
        print(f"  {backend}: {float(seconds):.3f} s")
    if len(results) == 2:
        print(f"  speedup: {results['py'] / results['c']:.2f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=2000, help="initial micro-bench repeats")
    parser.add_argument("--skip-solve", action="store_true", help="micro-benchmarks only")
    args = parser.parse_args()
    micro(args.repeats)
    if not args.skip_solve:
        end_to_end()


if __name__ == "__main__":
    main()
