"""Compare the compiled modular elimination kernel with the numpy fallback.

Both backends are imported side by side, so one run reports both without
re-importing the package.  Timing uses integer nanoseconds only.

    python3 benchmarks/bench_fp_kernels.py [--sizes 64,128,256] [--repeat 5]
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from rectify_kit.exactlin import _fp_py

try:
    from rectify_kit.exactlin import _fpkernel
except ImportError:
    _fpkernel = None

PRIMES = (5, 65521)


def random_matrix(rng: random.Random, rows: int, cols: int, p: int) -> np.ndarray:
    return np.array(
        [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)], dtype=np.int64
    )


def time_ns(fn, repeat: int) -> int:
    best = None
    for _ in range(repeat):
        t0 = time.monotonic_ns()
        fn()
        dt = time.monotonic_ns() - t0
        best = dt if best is None or dt < best else best
    return best


def ratio_str(num_ns: int, den_ns: int) -> str:
    if den_ns == 0:
        return "inf"
    tenths = num_ns * 10 // den_ns
    return "%d.%dx" % divmod(tenths, 10)


def bench(sizes, repeat: int) -> None:
    if _fpkernel is None:
        print("compiled kernel not built; showing fallback only")
    header = "%-8s %-6s %-8s %12s %12s %9s" % ("op", "p", "size", "python", "compiled", "speedup")
    print(header)
    print("-" * len(header))
    for p in PRIMES:
        rng = random.Random(90125)
        for n in sizes:
            a = random_matrix(rng, n, n, p)
            b = random_matrix(rng, n, n, p)
            rhs = np.array([rng.randrange(p) for _ in range(n)], dtype=np.int64)
            cases = [
                ("rref", lambda impl: impl.rref(a.copy(), p)),
                ("rank", lambda impl: impl.rank(a.copy(), p)),
                ("kernel", lambda impl: impl.kernel(a.copy(), p)),
                ("solve", lambda impl: impl.solve(a.copy(), rhs.copy(), p)),
                ("matmul", lambda impl: impl.matmul(a, b, p)),
            ]
            for name, call in cases:
                py_ns = time_ns(lambda: call(_fp_py), repeat)
                if _fpkernel is None:
                    print("%-8s %-6d %-8s %9d us %12s %9s" % (name, p, "%dx%d" % (n, n), py_ns // 1000, "-", "-"))
                    continue
                c_ns = time_ns(lambda: call(_fpkernel), repeat)
                print(
                    "%-8s %-6d %-8s %9d us %9d us %9s"
                    % (name, p, "%dx%d" % (n, n), py_ns // 1000, c_ns // 1000, ratio_str(py_ns, c_ns))
                )


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="64,128,256")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",") if s]
    bench(sizes, args.repeat)


if __name__ == "__main__":
    main()
