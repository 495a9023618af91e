import pytest

from rcgen.hypernat import (HyperNatural, LeavesHypernaturals, NotNearInteger, checked_pow, embed, ni,
                            rni, rpi)


def test_tie_breaking():
    assert rpi(2.5) == 3
    assert rni(2.5) == 2
    assert rpi(7.0) == 7
    assert rni(7.0) == 7


def test_rpi_recovers_nearby_natural(gauge):
    for p in gauge.points:
        n = 2**p.k + 17
        assert rpi(n + p.rho * 0.9) == n
        assert rpi(n - p.rho * 0.9) == n


def test_ni_of_inverse_gauge(gauge):
    h = ni(gauge.d_rho(-1))
    for p in gauge.points:
        assert h[p.index] == rpi(1 / p.rho)


def test_ni_of_constant(gauge):
    assert ni(gauge.const(5)).values == (5,) * len(gauge)


def test_ni_repairs_one_minus_negligible(gauge):
    h = ni(gauge.net(lambda p: 1 - p.rho ** (1 / p.eps)))
    assert all(h[i] == 1 for i in gauge.tail)


def test_ni_rejects_half_integers(gauge):
    with pytest.raises(NotNearInteger):
        ni(gauge.const(2.5))


def test_checked_pow_constants(gauge):
    v = checked_pow(HyperNatural.constant(gauge, 2), HyperNatural.constant(gauge, 3))
    assert all(v.value(i) == 8 for i in range(len(gauge)))


def test_checked_pow_finite_exponent(gauge):
    m = HyperNatural.gauge_power(gauge, 1)
    v = checked_pow(m, 2)
    assert v.valuation().label == "moderate(2)"
    for i in gauge.tail:
        assert v.value(i) == m[i] ** 2


def test_checked_pow_infinite_exponent_refused(gauge):
    m = HyperNatural.gauge_power(gauge, 1)
    with pytest.raises(LeavesHypernaturals, match="leaves"):
        checked_pow(m, m)


def test_embed_round_trip(gauge):
    m = HyperNatural.gauge_power(gauge, 2)
    assert ni(embed(m)).values == m.values
