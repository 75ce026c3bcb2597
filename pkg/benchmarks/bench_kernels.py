#!/usr/bin/env python3
"""Compare the compiled enumeration kernels against the pure-Python fallback.

Workloads mirror the verification hot paths: exhaustive two-world sweeps of
Boolean fault assignments over lowered gate programs.

Run:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from fmreason._kernels import pure

try:
    from fmreason._kernels import _fast as fast
except ImportError:
    fast = None


def lowered_voter_chain(n_vars: int, k: int):
    """An at-least-k-of-n voter followed by a chain of alternating gates,
    lowered to binary ops the way the oracle compiles models."""
    import itertools

    ops = []

    def emit(op, a, b=0):
        ops.append((op, a, b))
        return n_vars + len(ops) - 1

    def fold(op, slots):
        acc = slots[0]
        for s in slots[1:]:
            acc = emit(op, acc, s)
        return acc

    combos = [fold(pure.OP_AND, list(c))
              for c in itertools.combinations(range(n_vars), k)]
    out = fold(pure.OP_OR, combos)
    for i in range(4):
        out = emit(pure.OP_NOT, out) if i % 2 else emit(pure.OP_AND, out, i % n_vars)
    return ops, out


def encode_options(n_vars):
    # Every variable ranges over all four (reported, intended) pairs.
    flat, off = [], [0]
    for _ in range(n_vars):
        flat.extend([0, 1, 2, 3])
        off.append(len(flat))
    return np.asarray(flat, dtype=np.int8), np.asarray(off, dtype=np.int32)


def bench(fn, *args, repeats=2):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    print(f"{'workload':<34} {'samples':>10} {'pure':>10} {'compiled':>10} {'speedup':>8}")
    for n_vars, k in ((5, 2), (6, 2), (8, 2)):
        ops, out_slot = lowered_voter_chain(n_vars, k)
        ops_arr = np.asarray(ops, dtype=np.int32).reshape(len(ops), 3)
        flat, off = encode_options(n_vars)
        lit_vars = np.asarray(list(range(n_vars)), dtype=np.int32)
        lit_modes = np.asarray([pure.MODE_T] * n_vars, dtype=np.int8)
        term_off = np.asarray(list(range(n_vars + 1)), dtype=np.int32)
        samples = 4 ** n_vars

        for name, args in (
            ("certain sweep", (ops_arr, n_vars, flat, off, out_slot, pure.MODE_T, 0)),
            ("minimum sweep", (ops_arr, n_vars, flat, off, out_slot, pure.MODE_T,
                               lit_vars, lit_modes, term_off)),
        ):
            fn = pure.sweep_certain if name.startswith("certain") else pure.sweep_minimum
            t_pure, r_pure = bench(fn, *args)
            if fast is None:
                print(f"{name} n={n_vars:<2} ({len(ops)} ops)      {samples:>10} "
                      f"{t_pure:>9.3f}s {'n/a':>10} {'':>8}")
                continue
            ffn = fast.sweep_certain if name.startswith("certain") else fast.sweep_minimum
            t_fast, r_fast = bench(ffn, *args)
            assert r_pure == r_fast, f"backend mismatch on {name}: {r_pure} vs {r_fast}"
            label = f"{name} n={n_vars} ({len(ops)} ops)"
            print(f"{label:<34} {samples:>10} {t_pure:>9.3f}s {t_fast:>9.3f}s "
                  f"{t_pure / t_fast:>7.1f}x")


if __name__ == "__main__":
    main()
