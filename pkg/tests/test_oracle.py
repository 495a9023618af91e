import mpmath
import pytest

from rcgen import oracle
from rcgen.hyperseries import exponential_series, series_from_expr


@pytest.mark.parametrize("scheme", ["tanh-sinh", "gauss-legendre", "scipy"])
def test_quad_linear(scheme):
    assert complex(oracle.quad_reference(lambda t: t, [0, 1], scheme=scheme).value) == pytest.approx(0.5, rel=1e-13)


def test_quad_gaussian():
    v = oracle.quad_reference(lambda t: mpmath.exp(-t * t / 2), [-40, 0, 40], tol=1e-20)
    assert abs(complex(v.value) - (2 * mpmath.pi) ** 0.5) < 1e-15


def test_fd_square():
    assert complex(oracle.fd_derivative(lambda t: t * t, 3, 1).value) == pytest.approx(6, rel=1e-12)


def test_fd_exp_fourth():
    assert complex(oracle.fd_derivative(mpmath.exp, 0, 4).value) == pytest.approx(1, rel=1e-8)


def test_scan_geometric_half(small_gauge):
    p = small_gauge.points[small_gauge.tail[0]]
    res = oracle.partial_sum_scan(series_from_expr(small_gauge, "(1/2)**n"), p)
    assert res.status == "plateau"
    assert complex(res.value) == pytest.approx(2, rel=1e-30)


def test_scan_exponential_at_log(small_gauge):
    p = small_gauge.points[small_gauge.tail[0]]
    res = oracle.partial_sum_scan(exponential_series(small_gauge, small_gauge.from_expr("-log(rho)")), p)
    assert res.status == "plateau"
    assert complex(res.value) == pytest.approx(float(1 / p.rho), rel=1e-14)


def test_scan_geometric_two_diverges(small_gauge):
    p = small_gauge.points[small_gauge.tail[0]]
    res = oracle.partial_sum_scan(series_from_expr(small_gauge, "2**n"), p, budget=4000)
    assert res.status == "diverges"
