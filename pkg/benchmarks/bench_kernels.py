"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import random
import timeit

import numpy as np

from eqlines import _pycore

try:
    from eqlines import _core
except ImportError:
    _core = None


def random_adjacency(n: int, p: float, seed: int) -> list[int]:
    rng = random.Random(seed)
    adj = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    return adj


def cases():
    g40 = random_adjacency(40, 0.5, 1)
    g64 = random_adjacency(64, 0.8, 2)
    codes = np.arange(1 << 15, dtype=np.int64)
    return [
        ("max_clique_bits n=40 p=0.5", lambda k: k.max_clique_bits(g40)),
        ("max_clique_bits n=64 p=0.8", lambda k: k.max_clique_bits(g64)),
        ("orbit_representatives m=7", lambda k: k.orbit_representatives(7)),
        ("seidel_fill m=7, 32768 codes", lambda k: k.seidel_fill(7, codes)),
    ]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = [_pycore] + ([_core] if _core is not None else [])
    header = f"{'kernel':32s}" + "".join(f"{b.BACKEND:>12s}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    for name, fn in cases():
        times = [min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat)) for b in backends]
        results = [fn(b) for b in backends]
        if len(results) == 2:
            same = np.array_equal(np.asarray(results[0]), np.asarray(results[1]))
            assert same, f"backends disagree on {name}"
        row = f"{name:32s}" + "".join(f"{t * 1e3:10.1f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:9.1f}x"
        print(row)
    if _core is None:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
