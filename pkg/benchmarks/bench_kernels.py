"""Compare the compiled and interpreted eigen/arc kernels.

    python3 benchmarks/bench_kernels.py [--points N] [--repeat R]

Times the batched arc kernel on a stack of random 4x4 unitaries and a full
default sweep, once through numba and once through the same source run by
the interpreter (``py_func``). The sweep comparison spawns a subprocess with
BURAU_SWITCH_DISABLE_JIT=1 so the whole package takes the fallback path.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from burau_switch import _kernels
from burau_switch._accel import JIT_ENABLED


def random_unitaries(n, dim, seed=0):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(n, dim, dim)) + 1j * rng.normal(size=(n, dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return np.ascontiguousarray(q * (d / np.abs(d))[:, None, :])


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def time_sweep(points, disable_jit):
    env = dict(os.environ)
    if disable_jit:
        env["BURAU_SWITCH_DISABLE_JIT"] = "1"
    code = (
        "import time; from burau_switch.config import RunConfig; from burau_switch.sweep import run_sweep;"
        f"cfg = RunConfig().with_points({points}); run_sweep(cfg.with_points(16));"
        "t0 = time.perf_counter(); run_sweep(cfg); print(time.perf_counter() - t0)"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True, capture_output=True, text=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=2001)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not JIT_ENABLED:
        sys.exit("numba is unavailable or disabled; nothing to compare")

    stack = random_unitaries(args.points, 4)
    _kernels.arcs_batch(stack[:2])  # compile / load cache
    fast = best_of(lambda: _kernels.arcs_batch(stack), args.repeat)
    slow = best_of(lambda: _kernels.arcs_batch.py_func(stack), 1)
    a_fast = _kernels.arcs_batch(stack)[0]
    a_slow = _kernels.arcs_batch.py_func(stack)[0]
    print(f"arcs_batch, {args.points} 4x4 unitaries")
    print(f"  numba      {fast * 1e3:9.2f} ms")
    print(f"  interpreted{slow * 1e3:9.2f} ms   ({slow / fast:.0f}x)")
    print(f"  max |arc difference| {np.max(np.abs(a_fast - a_slow)):.2e}")

    jit_sweep = time_sweep(args.points, False)
    py_sweep = time_sweep(args.points, True)
    print(f"run_sweep, default device, {args.points} points")
    print(f"  numba      {jit_sweep:9.3f} s")
    print(f"  numpy only {py_sweep:9.3f} s   ({py_sweep / jit_sweep:.1f}x)")


if __name__ == "__main__":
    main()
