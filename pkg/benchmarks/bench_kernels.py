"""Compare the jitted kernels with their numpy fallbacks.

Part one times each kernel pair in-process on fixed inputs, after a warm-up
call so compilation is excluded, and checks that both return the same thing.
Part two runs one CLI workload end to end twice (codes on the free group
up to index 16, dominated by the min-weight search), once with
``TRICHOTOMY_DISABLE_NUMBA=1`` set, to show what the flag costs in practice.

    python3 benchmarks/bench_kernels.py [--repeat N] [--skip-cli]
"""

import argparse
import os
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from trichotomy import kernels
from trichotomy.complexes import cover_of
from trichotomy.cosets import cyclic_quotient_table
from trichotomy.words import free_group

ROOT = Path(__file__).resolve().parents[1]


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def rref_case(rng):
    a = rng.integers(0, 3, size=(160, 200), dtype=np.int64)
    return (lambda f: f(a.copy(), 3, a.shape[1])), lambda x, y: np.array_equal(x, y)


def cut_case(rng):
    # random 4-regular multigraph on 20 vertices: two random perfect matchings doubled
    n = 20
    adj = [[] for _ in range(n)]
    for _ in range(2):
        perm = rng.permutation(n)
        for i in range(n):
            u, v = i, int(perm[i])
            if u != v:
                adj[u].append(v)
                adj[v].append(u)
    ptr = np.zeros(n + 1, np.int64)
    ptr[1:] = np.cumsum([len(x) for x in adj])
    nbr = np.array([v for x in adj for v in x], np.int64)

    def same(x, y):
        return all(np.array_equal(a, b) for a, b in zip(x, y))
    return (lambda f: f(n, ptr, nbr)), same


def weight_case(rng):
    k = cover_of(cyclic_quotient_table(free_group(2), 16, [1, 0]))
    basis = rng.integers(0, 2, size=(14, len(k.one_cells)), dtype=np.int64)
    c = rng.integers(0, 2, size=len(k.one_cells), dtype=np.int64)

    def same(x, y):
        return int(x[0]) == int(y[0]) and np.array_equal(x[1], y[1])
    return (lambda f: f(c, basis, 2, 0)), same


CASES = [
    ("rref 160x200 over F_3", rref_case, kernels.rref_numba, kernels.rref_numpy),
    ("cut profile, 20 vertices", cut_case, kernels.cut_profile_numba, kernels.cut_profile_numpy),
    ("min weight, 2^14 combos", weight_case, kernels.min_weight_numba, kernels.min_weight_numpy),
]


def run_cli(disable: bool) -> float:
    env = dict(os.environ)
    if disable:
        env["TRICHOTOMY_DISABLE_NUMBA"] = "1"
    else:
        env.pop("TRICHOTOMY_DISABLE_NUMBA", None)
    with tempfile.TemporaryDirectory() as tmp:
        cmd = [sys.executable, "-m", "trichotomy.cli", "codes",
               "--presentation", str(ROOT / "presentations" / "free2.txt"),
               "--strategy", "explicit:0,0,0,0", "--levels", "4", "--out", str(Path(tmp) / "r.json")]
        t = time.perf_counter()
        subprocess.run(cmd, env=env, check=True, capture_output=True)
        return time.perf_counter() - t


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-cli", action="store_true")
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    print(f"{'kernel':<28}{'numba s':>10}{'numpy s':>10}{'speedup':>9}  agree")
    for name, make, fast, slow in CASES:
        call, same = make(rng)
        agree = same(call(fast), call(slow))
        tf = best_of(lambda: call(fast), args.repeat)
        ts = best_of(lambda: call(slow), args.repeat)
        print(f"{name:<28}{tf:>10.4f}{ts:>10.4f}{ts / tf:>8.1f}x  {agree}")

    if not args.skip_cli:
        run_cli(False)  # populate the on-disk jit cache
        on, off = run_cli(False), run_cli(True)
        print(f"\ncodes on free2 up to index 16 (process wall time): numba {on:.2f}s, numpy fallback {off:.2f}s")


if __name__ == "__main__":
    main()
