#!/usr/bin/env python3
"""Benchmark the jitted trajectory kernel against its pure-Python fallback.

The compiled path is what ships by default; setting MOBIUSCS_NO_NUMBA=1
selects the interpreted fallback at import time.  Results from the two
backends must agree bit-for-bit (asserted below).

Usage:
    python benchmarks/bench_kernels.py [--t-end 20] [--dt 1e-3]
"""

import argparse
import time

import numpy as np

from mobiuscs._backend import HAVE_NUMBA, py_func
from mobiuscs.dynamics import MobiusState, _rk4_mobius, mobius_momenta


def run_kernel(kernel, s0, r, dt, n_steps):
    p_phi, L0 = mobius_momenta(s0, r)
    out = np.empty((n_steps + 1, 3))
    kernel(s0.phi, p_phi, s0.z0, L0, r, dt, n_steps, 1, out)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--t-end", type=float, default=20.0)
    ap.add_argument("--dt", type=float, default=1e-3)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    s0 = MobiusState(0.3, 1.1, 0.0, 0.4)
    r = 0.5
    n_steps = int(round(args.t_end / args.dt))

    kernels = []
    if HAVE_NUMBA:
        run_kernel(_rk4_mobius, s0, r, args.dt, 10)  # trigger compilation
        kernels.append(("numba @njit", _rk4_mobius))
        kernels.append(("python fallback", py_func(_rk4_mobius)))
    else:
        kernels.append(("python fallback (numba disabled)", _rk4_mobius))

    results = {}
    for name, kernel in kernels:
        best = np.inf
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            out = run_kernel(kernel, s0, r, args.dt, n_steps)
            best = min(best, time.perf_counter() - t0)
        results[name] = (best, out)
        rate = n_steps / best
        print(f"{name:32s} {best * 1e3:10.2f} ms   {rate / 1e6:8.3f} Msteps/s")

    if len(results) == 2:
        (n1, (t1, o1)), (n2, (t2, o2)) = results.items()
        assert np.array_equal(o1, o2), "backends disagree"
        print(f"\nbackends agree bit-for-bit; speedup x{t2 / t1:.1f}")


if __name__ == "__main__":
    main()
