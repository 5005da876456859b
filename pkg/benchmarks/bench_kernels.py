#!/usr/bin/env python3
"""Benchmark the compiled stencil kernel against the NumPy fallback.

Times the method-of-lines right-hand side kernel on representative grids
(linear and semilinear variants), then a short end-to-end blow-up run with
each backend.  Run:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from kgblowup._kernels import _reference

try:
    from kgblowup._kernels import _stencil
except ImportError:
    _stencil = None


def time_kernel(fn, size, a_nl, repeats=400):
    rng = np.random.default_rng(7)
    u_re = rng.standard_normal(size)
    u_im = rng.standard_normal(size)
    acc_re = np.empty(size)
    acc_im = np.empty(size)
    idx = np.arange(size, dtype=float)
    idx[0] = 1.0
    cp = np.ascontiguousarray(1.0 + 1.0 / idx)
    cm = np.ascontiguousarray(1.0 - 1.0 / idx)
    fn(u_re, u_im, acc_re, acc_im, cp, cm, 1.0, 0.5, a_nl, 3.0, 3, True)  # warm up
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn(u_re, u_im, acc_re, acc_im, cp, cm, 1.0, 0.5, a_nl, 3.0, 3, True)
    return (time.perf_counter() - t0) / repeats


def bench_rhs():
    print("RHS kernel (per call):")
    header = f"{'nodes':>8} {'term':>10} {'numpy':>12} {'compiled':>12} {'speedup':>8}"
    print(header)
    for size in (512, 2048, 8192, 32768):
        for label, a_nl in (("linear", 0.0), ("semilinear", 1.0)):
            t_py = time_kernel(_reference.radial_accel, size, a_nl)
            if _stencil is None:
                print(f"{size:>8} {label:>10} {t_py * 1e6:>10.1f}us {'n/a':>12} {'':>8}")
                continue
            t_cy = time_kernel(_stencil.radial_accel, size, a_nl)
            print(
                f"{size:>8} {label:>10} {t_py * 1e6:>10.1f}us {t_cy * 1e6:>10.1f}us "
                f"{t_py / t_cy:>7.1f}x"
            )


def bench_run():
    import kgblowup as kg
    import kgblowup._kernels as kernels
    import kgblowup.pde as pde

    params = kg.CosmologyParams(n=1, c=1.0, a0=1.0, H=0.0, sigma=0.0, m_squared=0.0)
    geom = kg.ConeGeometry(params, 1.0)
    inputs = kg.TheoremInputs(
        geom=geom, N=2.0, epsilon=0.5, theta=0.5, lam=1.0, p=3.0, w0=16.0, w1=64.0
    )
    controls = pde.PdeControls(grid_h=2e-3, rel_tol=1e-8)
    print(f"\nend-to-end blow-up run (h=2e-3, backend={kernels.BACKEND}):")
    for name, fn in (("active backend", kernels.radial_accel),
                     ("numpy fallback", _reference.radial_accel)):
        kernels_backup = pde.radial_accel
        pde.radial_accel = fn
        try:
            t0 = time.perf_counter()
            run = pde.run_pde(inputs, 0.525, controls)
            dt = time.perf_counter() - t0
            print(f"  {name:>15}: {dt:6.2f}s  ({run.n_steps} steps, {run.termination.value})")
        finally:
            pde.radial_accel = kernels_backup


if __name__ == "__main__":
    bench_rhs()
    bench_run()
