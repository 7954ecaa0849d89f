"""Timing comparison of the numba and pure-numpy kernel backends.

The backend is fixed at import time by ELLIPTHETA_NUMBA, so the script
re-executes itself in a child process per backend and prints a table of
per-call times for the hot kernels at representative workload sizes.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

WORKLOADS = (
    ("theta_sum", {"n_z": 4096, "nmax": 40}),
    ("theta_dsum", {"n_z": 4096, "nmax": 40}),
    ("theta_level_sum", {"n_z": 4096, "nmax": 40}),
    ("omega_grid", {"n_t": 512, "cutoff": 40}),
)


def run_child(repeat: int) -> dict:
    from elliptheta import _kernels as K

    rng = np.random.default_rng(7)
    tau, sigma, eta = 0.9j, 1.1j, -0.04j
    out: dict[str, float] = {}
    for name, wl in WORKLOADS:
        if name == "omega_grid":
            t = rng.uniform(0, 1, wl["n_t"]) + 0.0j
            args = (t, tau, sigma, eta, wl["cutoff"], wl["cutoff"])
            fn = K.omega_grid
        else:
            z = rng.uniform(-1, 1, wl["n_z"]) + 1j * rng.uniform(-0.2, 0.2, wl["n_z"])
            if name == "theta_level_sum":
                args = (z, tau, 2, 5, wl["nmax"])
            else:
                args = (z, tau, wl["nmax"])
            fn = getattr(K, name)
        fn(*args)  # warm-up (includes jit compilation on the numba path)
        t0 = time.perf_counter()
        for _ in range(repeat):
            fn(*args)
        out[name] = (time.perf_counter() - t0) / repeat
    return out


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.child:
        print(json.dumps(run_child(args.repeat)))
        return 0

    results = {}
    for backend, flag in (("numpy", "0"), ("numba", "1")):
        env = dict(os.environ, ELLIPTHETA_NUMBA=flag)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--child",
             "--repeat", str(args.repeat)],
            env=env, capture_output=True, text=True)
        if proc.returncode != 0:
            print(f"{backend} backend failed:\n{proc.stderr}", file=sys.stderr)
            return 1
        results[backend] = json.loads(proc.stdout.strip().splitlines()[-1])

    print(f"{'kernel':<18} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>9}")
    for name, _ in WORKLOADS:
        tn = results["numpy"][name] * 1e3
        tb = results["numba"][name] * 1e3
        print(f"{name:<18} {tn:>12.3f} {tb:>12.3f} {tn / tb:>8.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
