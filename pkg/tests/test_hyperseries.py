import pytest

from rcgen.hypernat import HyperNatural
from rcgen.hyperseries import (SeriesSequence, UncertifiedSequence, check_moderate_over_hypersums,
                               check_negligible_pair, constant_series, direct_comparison,
                               exponential_series, geometric_series, hypersum, ratio_test, root_test,
                               series_from_expr, sum_hyperseries)


def certified(a):
    check_moderate_over_hypersums(a)
    return a


def test_hypersum_needs_certificate(gauge):
    with pytest.raises(UncertifiedSequence, match="uncertified"):
        hypersum(geometric_series(gauge, 0.5), 0, 3)


def test_hypersum_geometric_closed_form(gauge):
    a = certified(geometric_series(gauge, 0.5))
    N = HyperNatural.gauge_power(gauge, 1)
    s = hypersum(a, 0, N)
    for i in gauge.tail:
        m = gauge.points[i].m
        assert abs(s.value(i) - (1 - m.mpf(0.5) ** (N[i] + 1)) / 0.5) < m.mpf(10) ** -100


def telescoping(gauge):
    # 1/((n+1)(n+2)) sums to 1 - 1/(N+2)
    return SeriesSequence(gauge, lambda n, p: p.m.mpf(1) / ((n + 1) * (n + 2)), "telescoping",
                          partial=lambda N, p: 1 - p.m.mpf(1) / (N + 2))


def test_hypersum_single_term(gauge):
    a = certified(telescoping(gauge))
    N = HyperNatural.gauge_power(gauge, 1)
    s = hypersum(a, N, N)
    for i in gauge.tail:
        assert s.value(i) == pytest.approx(1 / ((N[i] + 1) * (N[i] + 2)), rel=1e-30)


def test_hypersum_split_identity(gauge):
    a = certified(telescoping(gauge))
    N = HyperNatural.gauge_power(gauge, 1)
    M = HyperNatural.constant(gauge, 1000)
    lhs = hypersum(a, 0, N + M) - hypersum(a, 0, N)
    rhs = hypersum(a, N + 1, N + M)
    assert (lhs - rhs).is_negligible()


def test_hypersum_empty_window(gauge):
    a = certified(geometric_series(gauge, 0.5))
    assert hypersum(a, 5, 4).value(0) == 0


def test_geometric_certified(gauge):
    cert = check_moderate_over_hypersums(geometric_series(gauge, 0.5))
    assert cert.status == "certified"
    assert cert.max_exponent == 1


def test_exponential_at_log_scale_certified_with_exponent(gauge):
    cert = check_moderate_over_hypersums(exponential_series(gauge, gauge.from_expr("-log(rho)")))
    assert cert.status == "certified"
    assert cert.max_exponent == 1


def test_representative_dependent_pair(gauge):
    a = SeriesSequence(gauge, lambda n, p: p.m.zero if p.eps < p.m.mpf(1) / (n + 1) else p.m.one, "step")
    b = SeriesSequence(gauge, lambda n, p: p.m.zero, "0")
    assert check_negligible_pair(a, b) is False


def test_sum_half_geometric(gauge):
    res = sum_hyperseries(geometric_series(gauge, 0.5))
    assert res.status == "converges"
    assert (res.value - 2).is_negligible()


def test_sum_rho_geometric(gauge):
    res = sum_hyperseries(geometric_series(gauge, gauge.d_rho(1)))
    assert res.status == "converges"
    target = gauge.net(lambda p: 1 / (1 - p.rho))
    assert (res.value - target).is_negligible()


def test_sum_two_geometric_diverges(gauge):
    assert sum_hyperseries(geometric_series(gauge, 2)).status == "diverges_pos"


def test_ratio_half(gauge):
    res = ratio_test(geometric_series(gauge, 0.5))
    assert res.status == "converges_absolutely"
    assert all(res.L.value(i) == 0.5 for i in gauge.tail)


def test_ratio_exponential_at_log_scale(gauge):
    res = ratio_test(exponential_series(gauge, gauge.from_expr("-log(rho)")))
    assert res.status == "converges_absolutely"
    assert all(res.L.value(i).real <= 0.5 for i in gauge.tail)


def test_ratio_all_ones_inconclusive(gauge):
    assert ratio_test(constant_series(gauge, 1)).status == "inconclusive"


def test_root_third(gauge):
    res = root_test(geometric_series(gauge, gauge.const(1) / 3))
    assert res.status == "converges_absolutely"
    for i in gauge.tail:
        assert res.L.value(i).real == pytest.approx(1 / 3, rel=1e-30)


def test_root_all_ones_inconclusive(gauge):
    assert root_test(constant_series(gauge, 1)).status == "inconclusive"


def test_direct_comparison_half(gauge):
    a = series_from_expr(gauge, "(1/2)**n / 2")
    b = geometric_series(gauge, 0.5)
    assert direct_comparison(a, b).verdict == "a converges"


def test_direct_comparison_divergence(gauge):
    a = constant_series(gauge, 1)
    b = SeriesSequence(gauge, lambda n, p: p.m.mpf(n + 1), "n+1",
                       partial=lambda N, p: p.m.mpf((N + 1) * (N + 2)) / 2)
    res = direct_comparison(a, b)
    assert res.order_holds
    assert res.verdict == "b diverges_pos"
