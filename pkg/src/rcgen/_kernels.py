"""Float64 hot loops, compiled with numba when available.

Every kernel has a numpy twin with the same signature.  ``RCGEN_DISABLE_NUMBA``
forces the numpy versions; so does a missing numba install.  The two variants
are checked against each other in the test suite and timed in
``benchmarks/bench_kernels.py``.
"""

from __future__ import annotations

import numpy as np

from .config import numba_disabled

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False


# -- numpy reference versions ------------------------------------------------


def exp_sum_numpy(nodes, weights, freqs, sign):
    """out[j] = sum_k weights[k] * exp(sign * 1j * freqs[j] * nodes[k])."""
    phase = np.multiply.outer(freqs, nodes) * (1j * sign)
    return np.exp(phase) @ weights


def window_maxima_numpy(values, edges):
    """Maximum of ``values[edges[i]:edges[i+1]]`` for each window."""
    out = np.full(len(edges) - 1, -np.inf)
    for i in range(len(edges) - 1):
        lo, hi = edges[i], edges[i + 1]
        if hi > lo:
            out[i] = np.max(values[lo:hi])
    return out


def log_moments_numpy(ns, log1m_u, base):
    """log sum_k exp(n * log1m_u[k] + base[k]) for each n (stable)."""
    expo = np.multiply.outer(ns, log1m_u) + base
    top = expo.max(axis=1)
    return top + np.log(np.exp(expo - top[:, None]).sum(axis=1))


def lstsq_slope_numpy(x, y):
    """Slope, intercept and rms residual of the least-squares line."""
    n = len(x)
    xm = x.mean()
    ym = y.mean()
    sxx = ((x - xm) ** 2).sum()
    if n < 2 or sxx == 0.0:
        return 0.0, ym, 0.0
    slope = ((x - xm) * (y - ym)).sum() / sxx
    icpt = ym - slope * xm
    res = y - (slope * x + icpt)
    return slope, icpt, float(np.sqrt((res**2).mean()))


# -- numba versions -----------------------------------------------------------

if HAS_NUMBA:

    @njit(cache=True, fastmath=False)
    def _exp_sum_nb(nodes, weights, freqs, sign):
        out = np.zeros(freqs.shape[0], dtype=np.complex128)
        for j in range(freqs.shape[0]):
            acc = 0j
            f = freqs[j]
            for k in range(nodes.shape[0]):
                acc += weights[k] * np.exp(sign * 1j * f * nodes[k])
            out[j] = acc
        return out

    @njit(cache=True)
    def _window_maxima_nb(values, edges):
        out = np.full(edges.shape[0] - 1, -np.inf)
        for i in range(edges.shape[0] - 1):
            best = -np.inf
            for k in range(edges[i], edges[i + 1]):
                if values[k] > best:
                    best = values[k]
            out[i] = best
        return out

    @njit(cache=True)
    def _log_moments_nb(ns, log1m_u, base):
        out = np.empty(ns.shape[0])
        for i in range(ns.shape[0]):
            n = ns[i]
            top = -np.inf
            for k in range(log1m_u.shape[0]):
                e = n * log1m_u[k] + base[k]
                if e > top:
                    top = e
            acc = 0.0
            for k in range(log1m_u.shape[0]):
                acc += np.exp(n * log1m_u[k] + base[k] - top)
            out[i] = top + np.log(acc)
        return out

    @njit(cache=True)
    def _lstsq_slope_nb(x, y):
        n = x.shape[0]
        xm = 0.0
        ym = 0.0
        for i in range(n):
            xm += x[i]
            ym += y[i]
        xm /= n
        ym /= n
        sxx = 0.0
        sxy = 0.0
        for i in range(n):
            sxx += (x[i] - xm) ** 2
            sxy += (x[i] - xm) * (y[i] - ym)
        if n < 2 or sxx == 0.0:
            return 0.0, ym, 0.0
        slope = sxy / sxx
        icpt = ym - slope * xm
        ss = 0.0
        for i in range(n):
            r = y[i] - (slope * x[i] + icpt)
            ss += r * r
        return slope, icpt, np.sqrt(ss / n)


def _select():
    if HAS_NUMBA and not numba_disabled():
        return _exp_sum_nb, _window_maxima_nb, _log_moments_nb, _lstsq_slope_nb, "numba"
    return exp_sum_numpy, window_maxima_numpy, log_moments_numpy, lstsq_slope_numpy, "numpy"


_EXP_SUM, _WINDOW_MAX, _LOG_MOMENTS, _LSTSQ, BACKEND = _select()


def exp_sum(nodes, weights, freqs, sign=1.0):
    nodes = np.ascontiguousarray(nodes, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.complex128)
    freqs = np.ascontiguousarray(np.atleast_1d(freqs), dtype=np.complex128)
    return _EXP_SUM(nodes, weights, freqs, float(sign))


def window_maxima(values, edges):
    return _WINDOW_MAX(
        np.ascontiguousarray(values, dtype=np.float64),
        np.ascontiguousarray(edges, dtype=np.int64),
    )


def log_moments(ns, log1m_u, base):
    return _LOG_MOMENTS(
        np.ascontiguousarray(ns, dtype=np.float64),
        np.ascontiguousarray(log1m_u, dtype=np.float64),
        np.ascontiguousarray(base, dtype=np.float64),
    )


def lstsq_slope(x, y):
    slope, icpt, rms = _LSTSQ(
        np.ascontiguousarray(x, dtype=np.float64),
        np.ascontiguousarray(y, dtype=np.float64),
    )
    return float(slope), float(icpt), float(rms)
