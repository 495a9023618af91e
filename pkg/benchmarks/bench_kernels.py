"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The first numba call includes compilation; it is timed separately.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from rcgen import _kernels as kern


def cases(rng: np.random.Generator) -> dict[str, tuple]:
    nodes = rng.uniform(-10.0, 10.0, 2000)
    weights = rng.standard_normal(2000) + 0j
    freqs = np.linspace(-50.0, 50.0, 400) + 0j
    values = rng.standard_normal(200_000)
    edges = np.arange(0, 200_001, 1000, dtype=np.int64)
    ns = np.arange(64, dtype=np.float64)
    log1m_u = np.log1p(-rng.uniform(0.0, 0.99, 4000))
    base = rng.standard_normal(4000)
    x = np.linspace(0.0, 1.0, 100_000)
    y = 3.0 * x + rng.standard_normal(x.size) * 1e-3
    return {
        "exp_sum": ((nodes, weights, freqs, 1.0), kern.exp_sum_numpy, kern._exp_sum_nb),
        "window_maxima": ((values, edges), kern.window_maxima_numpy, kern._window_maxima_nb),
        "log_moments": ((ns, log1m_u, base), kern.log_moments_numpy, kern._log_moments_nb),
        "lstsq_slope": ((x, y), kern.lstsq_slope_numpy, kern._lstsq_slope_nb),
    }


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not kern.HAS_NUMBA:
        raise SystemExit("numba is not installed")
    print(f"{'kernel':<15}{'numpy ms':>10}{'numba ms':>10}{'compile ms':>12}{'speedup':>9}{'max diff':>11}")
    for name, (inputs, np_fn, nb_fn) in cases(np.random.default_rng(args.seed)).items():
        t0 = timeit.default_timer()
        nb_out = nb_fn(*inputs)
        compile_ms = (timeit.default_timer() - t0) * 1e3
        np_out = np_fn(*inputs)
        t_np = min(timeit.repeat(lambda: np_fn(*inputs), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: nb_fn(*inputs), number=1, repeat=args.repeat)) * 1e3
        diff = float(np.max(np.abs(np.asarray(np_out) - np.asarray(nb_out))))
        print(f"{name:<15}{t_np:>10.2f}{t_nb:>10.2f}{compile_ms:>12.0f}{t_np / t_nb:>9.1f}{diff:>11.2e}")


if __name__ == "__main__":
    main()
