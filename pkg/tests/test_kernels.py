import os
import subprocess
import sys

import numpy as np
import pytest

from rcgen import _kernels as kern

needs_numba = pytest.mark.skipif(not kern.HAS_NUMBA, reason="numba not installed")


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@needs_numba
def test_exp_sum_variants_agree(rng):
    nodes = rng.uniform(-5, 5, 300)
    weights = rng.standard_normal(300) + 1j * rng.standard_normal(300)
    freqs = np.linspace(-20, 20, 41) + 0j
    a = kern.exp_sum_numpy(nodes, weights, freqs, -1.0)
    b = kern._exp_sum_nb(nodes, weights, freqs, -1.0)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


@needs_numba
def test_window_maxima_variants_agree(rng):
    values = rng.standard_normal(1000)
    edges = np.array([0, 10, 10, 500, 1000], dtype=np.int64)
    a = kern.window_maxima_numpy(values, edges)
    b = kern._window_maxima_nb(values, edges)
    assert np.array_equal(a, b)
    assert a[1] == -np.inf


@needs_numba
def test_log_moments_variants_agree(rng):
    ns = np.arange(40, dtype=np.float64)
    log1m_u = np.log1p(-rng.uniform(0, 0.9, 200))
    base = rng.standard_normal(200)
    assert np.allclose(kern.log_moments_numpy(ns, log1m_u, base), kern._log_moments_nb(ns, log1m_u, base), rtol=1e-13)


@needs_numba
def test_lstsq_variants_agree(rng):
    x = np.linspace(0, 1, 500)
    y = -2.5 * x + 1 + rng.standard_normal(500) * 1e-3
    a = kern.lstsq_slope_numpy(x, y)
    b = kern._lstsq_slope_nb(x, y)
    assert np.allclose(a, b, rtol=1e-12)
    assert a[0] == pytest.approx(-2.5, abs=1e-2)


def test_lstsq_exact_line():
    slope, icpt, rms = kern.lstsq_slope(np.array([0.0, 1.0, 2.0]), np.array([1.0, 3.0, 5.0]))
    assert (slope, icpt) == pytest.approx((2.0, 1.0))
    assert rms == pytest.approx(0.0, abs=1e-15)


def test_disable_switch_selects_numpy():
    env = dict(os.environ, RCGEN_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from rcgen import _kernels; print(_kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
