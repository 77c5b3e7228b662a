#!/usr/bin/env python3
"""Compare the compiled and pure-NumPy sweep kernels.

Times one full transport sweep (forward + backward) at the reference
resolutions used by the convergence experiments and reports the speedup.
Run from the repository root:

    python benchmarks/benchmark_kernels.py
"""

import time

import numpy as np

from phonodiff import kernels


def time_sweep(backend, nx, nv, bins, repeats=3):
    rng = np.random.default_rng(12345)
    T = rng.random(nx)
    incoming = rng.random((nv // 2, bins))
    coef = np.full(bins, 16.0)
    vpos = (np.arange(nv // 2) + 0.5) * (2.0 / nv)
    wv = np.full(nv // 2, 1.0 / nv)
    wom = np.full(bins, 1.0 / bins)
    dx = 1.0 / nx

    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        contrib, trace = kernels.sweep_forward(T, incoming, coef, vpos, wv,
                                               wom, dx, backend=backend)
        kernels.sweep_backward(T, 0.5 * trace, coef, vpos, wv, wom, dx,
                               backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    cases = [
        ("example1 reference (2^-8)", 256, 512, 1),
        ("example1 reference (2^-10)", 1024, 2048, 1),
        ("example2 reference (2^-10)", 1024, 2048, 6),
        ("layer oracle (dz=2^-10)", 40960, 64, 1),
    ]
    backends = sorted(kernels.BACKENDS)
    print(f"active backend: {kernels.BACKEND}")
    header = f"{'case':32s}" + "".join(f"{b:>14s}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    for label, nx, nv, bins in cases:
        times = {b: time_sweep(b, nx, nv, bins) for b in backends}
        row = f"{label:32s}" + "".join(f"{times[b]*1e3:11.2f} ms"
                                       for b in backends)
        if len(backends) == 2:
            row += f"{times['python'] / times['compiled']:9.1f}x"
        print(row)
        updates = nx * nv * bins
        rates = ", ".join(f"{b}: {updates / times[b] / 1e6:.0f} M/s"
                          for b in backends)
        print(f"{'':32s}cell updates  {rates}")


if __name__ == "__main__":
    main()
