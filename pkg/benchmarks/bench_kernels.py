"""Compare the GMP kernels with the pure-Python fallback.

Runs the same workloads through ``umbra._kernels`` and ``umbra._kernels_py``
and prints the best time of a few repeats for each. Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--end-to-end]
"""

import argparse
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

from umbra import _kernels_py

try:
    from umbra import _kernels
except ImportError:
    _kernels = None


def rand_fracs(rng, n, bits):
    return [Fraction(rng.getrandbits(bits) - (1 << (bits - 1)), rng.getrandbits(bits // 2) + 1) for _ in range(n)]


def workloads(rng):
    a, b = rand_fracs(rng, 120, 64), rand_fracs(rng, 120, 64)
    A = [rand_fracs(rng, rng.randint(1, 20), 48) for _ in range(24)]
    B = [rand_fracs(rng, rng.randint(1, 20), 48) for _ in range(24)]
    M1 = [rand_fracs(rng, 20, 40) for _ in range(20)]
    M2 = [rand_fracs(rng, 20, 40) for _ in range(20)]
    return [
        ("conv 120x120 (full)", "conv", (a, b, -1)),
        ("conv2 24 rows, exact inner", "conv2", (A, B, 23, -1)),
        ("conv2 24 rows, inner order 8", "conv2", (A, B, 23, 8)),
        ("matmul 20x20", "matmul", (M1, M2)),
    ]


def best_of(fn, args, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


END_TO_END = [
    ["verify", "--family", "builtin:qexp", "--json"],
    ["logderiv", "--family", "random:1", "--n", "8", "--H", "6", "--json"],
]


def end_to_end(repeat):
    """Run whole CLI commands once per backend in fresh interpreters."""
    print(f"\n{'command':<32} {'python':>10} {'gmp':>10} {'speedup':>8}")
    for argv in END_TO_END:
        times = {}
        outputs = {}
        for backend, flag in (("python", "1"), ("gmp", "0")):
            env = dict(os.environ, UMBRA_PURE_PYTHON=flag)
            best = float("inf")
            for _ in range(repeat):
                start = time.perf_counter()
                proc = subprocess.run(
                    [sys.executable, "-m", "umbra", *argv], env=env, capture_output=True, text=True
                )
                best = min(best, time.perf_counter() - start)
            times[backend], outputs[backend] = best, proc.stdout
        if outputs["python"] != outputs["gmp"]:
            raise SystemExit(f"{' '.join(argv)}: backends disagree")
        label = " ".join(argv[:3])
        print(f"{label:<32} {times['python']:>9.3f}s {times['gmp']:>9.3f}s {times['python'] / times['gmp']:>7.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--end-to-end", action="store_true", help="also time whole CLI commands")
    args = parser.parse_args()
    rng = random.Random(args.seed)
    print(f"{'workload':<32} {'python':>10} {'gmp':>10} {'speedup':>8}")
    for label, name, call_args in workloads(rng):
        t_py, r_py = best_of(getattr(_kernels_py, name), call_args, args.repeat)
        if _kernels is None:
            print(f"{label:<32} {t_py:>9.4f}s {'n/a':>10} {'':>8}")
            continue
        t_gmp, r_gmp = best_of(getattr(_kernels, name), call_args, args.repeat)
        if r_py != r_gmp:
            raise SystemExit(f"{label}: backends disagree")
        print(f"{label:<32} {t_py:>9.4f}s {t_gmp:>9.4f}s {t_py / t_gmp:>7.1f}x")
    if args.end_to_end:
        end_to_end(1)


if __name__ == "__main__":
    main()
