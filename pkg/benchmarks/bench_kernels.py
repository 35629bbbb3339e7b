"""Benchmark the numba kernel path against the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py

The orchestrator re-invokes itself twice as a worker subprocess -- once with
the default environment (numba, if installed) and once with
HOLOMAT_NO_NUMBA=1 -- so that each path is measured in a fresh interpreter
with its own module state.  JIT compilation time is excluded by a warmup
call before timing.
"""

import json
import os
import subprocess
import sys
import time

import numpy as np


def _bench_worker():
    from holomat import _kernels as K
    from holomat.fiber import HermitianFiber
    from holomat.forms import FiberForm, wedge
    from holomat.kforms import random_tensor

    rng = np.random.default_rng(11)
    results = {"path": "numba" if K.USE_NUMBA else "numpy"}

    # quartic form evaluation / gradients: m = 4, batches of unit vectors
    t = random_tensor(4, rng)
    R = np.ascontiguousarray(t.R)
    X = rng.standard_normal((20000, 4)) + 1j * rng.standard_normal((20000, 4))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    K.quartic_values(R, X[:10])  # warmup (jit compile on the numba path)
    K.quartic_gradients(R, X[:10])
    reps = 5
    t0 = time.perf_counter()
    for _ in range(reps):
        v = K.quartic_values(R, X)
    results["quartic_values_s"] = (time.perf_counter() - t0) / reps
    t0 = time.perf_counter()
    for _ in range(reps):
        g = K.quartic_gradients(R, X)
    results["quartic_gradients_s"] = (time.perf_counter() - t0) / reps
    results["quartic_checksum"] = float(v.sum() + np.abs(g).sum())

    # wedge products of dense random forms on a rank-10 fiber
    fiber = HermitianFiber(10)
    f = FiberForm.zero(fiber)
    g2 = FiberForm.zero(fiber)
    idx = rng.integers(0, 10, size=(60, 4))
    for a, b, c, d in idx:
        holo = tuple(sorted({int(a), int(b)}))
        anti = tuple(sorted({int(c), int(d)}))
        f = f + FiberForm.monomial(fiber, holo, anti, rng.standard_normal())
        g2 = g2 + FiberForm.monomial(fiber, anti, holo, rng.standard_normal())
    wedge(f, g2)  # warmup
    t0 = time.perf_counter()
    for _ in range(reps):
        w = wedge(f, g2)
    results["wedge_s"] = (time.perf_counter() - t0) / reps
    results["wedge_checksum"] = float(np.abs(w.coeff).sum())

    print(json.dumps(results))


def main():
    here = os.path.abspath(__file__)
    rows = []
    for label, extra_env in (("numba", {}), ("numpy", {"HOLOMAT_NO_NUMBA": "1"})):
        env = dict(os.environ, **extra_env)
        out = subprocess.run(
            [sys.executable, here, "--worker"],
            env=env, capture_output=True, text=True, check=True,
        )
        rows.append(json.loads(out.stdout.strip().splitlines()[-1]))
    print(f"{'kernel':<22}{'numba (s)':>12}{'numpy (s)':>12}{'speedup':>10}")
    for key, name in (
        ("quartic_values_s", "quartic_values"),
        ("quartic_gradients_s", "quartic_gradients"),
        ("wedge_s", "wedge"),
    ):
        a, b = rows[0][key], rows[1][key]
        print(f"{name:<22}{a:>12.5f}{b:>12.5f}{b / a:>10.2f}x")
    for key in ("quartic_checksum", "wedge_checksum"):
        da = abs(rows[0][key] - rows[1][key]) / max(abs(rows[1][key]), 1.0)
        print(f"{key} relative difference: {da:.2e}")
    if rows[0]["path"] == rows[1]["path"]:
        print("note: numba unavailable; both runs used the numpy path")


if __name__ == "__main__":
    if "--worker" in sys.argv:
        _bench_worker()
    else:
        main()
