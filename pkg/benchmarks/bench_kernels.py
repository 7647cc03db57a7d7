"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--skip-python-enumeration]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from topogs import _backend, _kernels_py
from topogs.choice import SocialChoiceFunction, profile_space, random_table
from topogs.enumeration import unanimity_preassignment


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(n, N):
    sp = profile_space(n, N)
    dictator = SocialChoiceFunction.dictatorship(0, n, N).values
    rand = random_table(n, N, 7).values
    forced = unanimity_preassignment(n, N)
    yield ("monotonic scan (dictatorship)",
           lambda k: k.monotonic_violation(dictator, sp.profile_orders, sp.improves))
    yield ("monotonic scan (random table)",
           lambda k: k.monotonic_violation(rand, sp.profile_orders, sp.improves))
    yield ("manipulation scan (dictatorship)",
           lambda k: k.manipulation_witness(dictator, sp.profile_orders, sp.positions))
    yield ("improvement lists",
           lambda k: k.improvement_lists(sp.profile_orders, sp.improves, n))
    lists = _backend.kernels.improvement_lists(sp.profile_orders, sp.improves, n)
    yield ("monotone completions",
           lambda k: k.monotone_completions(n, forced, *lists, 50_000_000)[1:])


def _same(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--instances", default="3:2,3:3,4:2")
    args = ap.parse_args()
    if not _backend.compiled_available():
        raise SystemExit("compiled kernels not built; run `pip install -e . --no-build-isolation`")
    from topogs import _kernels

    print(f"{'instance':<8} {'kernel':<34} {'python s':>10} {'compiled s':>11} {'speedup':>8} same")
    for inst in args.instances.split(","):
        n, N = map(int, inst.split(":"))
        for label, run in cases(n, N):
            tp, op = best_of(lambda: run(_kernels_py), args.repeat)
            tc, oc = best_of(lambda: run(_kernels), args.repeat)
            speed = tp / tc if tc > 0 else float("inf")
            print(f"({n},{N})    {label:<34} {tp:10.4f} {tc:11.4f} {speed:8.1f} {_same(op, oc)}")


if __name__ == "__main__":
    main()
