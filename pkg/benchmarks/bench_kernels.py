"""Compare the compiled kernels against the pure-Python fallback.

Run with ``python benchmarks/bench_kernels.py``.  Each kernel is timed on
the same inputs under both backends and the results are checked to agree.
"""

from __future__ import annotations

import argparse
import random
import timeit

from designcoded import _kernels_py
from designcoded.gf import field_of_order

try:
    from designcoded import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None


def _cases(seed: int):
    rng = random.Random(seed)
    blob = rng.randbytes(4096)
    a, b = rng.randbytes(4096), rng.randbytes(4096)
    f = field_of_order(9)
    tables = (f.q, f.add_flat, f.mul_flat, f.inv_flat, f.neg_flat)
    rows = [[rng.randrange(f.q) for _ in range(10)] for _ in range(6)]
    return {
        "fnv1a64 (4 KiB)": lambda m: m.fnv1a64(blob),
        "xor_bytes (4 KiB)": lambda m: m.xor_bytes(a, b),
        "rref 6x10 over GF(9)": lambda m: m.rref(rows, 10, *tables),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--number", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _kernels_c is None:
        print("compiled extension not available; only the Python kernels can run")
    print(f"{'kernel':<24}{'python us':>12}{'cython us':>12}{'speedup':>10}")
    for name, call in _cases(args.seed).items():
        py = min(timeit.repeat(lambda: call(_kernels_py), number=args.number, repeat=3))
        py_us = py / args.number * 1e6
        if _kernels_c is None:
            print(f"{name:<24}{py_us:>12.2f}{'n/a':>12}{'n/a':>10}")
            continue
        assert call(_kernels_c) == call(_kernels_py), f"{name}: backends disagree"
        cy = min(timeit.repeat(lambda: call(_kernels_c), number=args.number, repeat=3))
        cy_us = cy / args.number * 1e6
        print(f"{name:<24}{py_us:>12.2f}{cy_us:>12.2f}{py_us / cy_us:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
