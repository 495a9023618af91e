import pytest

from rcgen.gauge_net import (NotComparable, NotInvertible, add, inv, mul, sharp_compare, sub,
                             valuation)


def test_exact_gauge_power_valuation(gauge):
    rep = valuation(gauge.d_rho(3))
    assert rep.slope == pytest.approx(3, abs=1e-9)
    assert rep.label == "moderate(0)"


def test_zero_is_negligible(gauge):
    assert valuation(gauge.const(0)).cls == "negligible"


def test_rho_to_inverse_eps_is_negligible(gauge):
    x = gauge.net(lambda p: p.rho ** (1 / p.eps), "rho^(1/eps)")
    assert valuation(x).cls == "negligible"


def test_negative_power_is_moderate_with_exponent(gauge):
    assert valuation(gauge.d_rho(-5)).label == "moderate(5)"


def test_beyond_moderate_cutoff(gauge):
    assert valuation(gauge.d_rho(-(gauge.Q_max + 1))).cls == "non_moderate"


def test_infinitesimal_less_than_one(gauge):
    assert sharp_compare(gauge.d_rho(1), 1, 1) == "less"


def test_equal_nets_equal_at_every_q(gauge):
    x = gauge.from_expr("3 + rho**(-2)")
    for q in (0, 1, 5, 10):
        assert sharp_compare(x, x, q) == "equal_up_to_q"


def test_alternating_subpoints_are_mixed(gauge):
    x = gauge.net(lambda p: p.m.mpf((-1) ** p.k), "(-1)^k")
    assert sharp_compare(x, 0, 1) == "mixed"


def test_compare_refuses_non_moderate(gauge):
    with pytest.raises(NotComparable):
        sharp_compare(gauge.net(lambda p: p.m.exp(1 / p.rho)), 0, 1)


def test_inverse_of_one_minus_rho(gauge):
    x = inv(sub(1, gauge.d_rho(1)))
    for i in gauge.tail:
        rho = gauge.points[i].rho
        assert x.value(i) == pytest.approx(1 / (1 - rho), rel=1e-30)
    assert x.is_moderate()


def test_rho_times_inverse_rho_is_one(gauge):
    x = mul(gauge.d_rho(1), gauge.d_rho(-1))
    assert (x - 1).is_negligible()
    assert sharp_compare(x, 1, gauge.q_max) == "equal_up_to_q"


def test_inverse_of_negligible_refused(gauge):
    x = gauge.net(lambda p: p.rho ** (1 / p.eps))
    with pytest.raises(NotInvertible):
        inv(x)


def test_add_is_pointwise(gauge):
    x = add(gauge.d_rho(1), gauge.d_rho(2))
    p = gauge.points[-1]
    assert x.value(p.index) == p.rho + p.rho**2


def test_report_serializes_horizon(gauge):
    d = valuation(gauge.d_rho(2)).to_dict()
    assert d["class"] == "moderate(0)"
    assert d["horizon"]["q_max"] == gauge.q_max
