import pytest

from rcgen import hps
from rcgen.gauge_net import valuation
from rcgen.mollifier import get_mollifier


def coefficients(gauge, source):
    a = hps.HpsCoefficients.from_expr(gauge, source)
    a.cert_weak = hps.check_weak_moderate(a)
    return a


def test_ones_certificate(gauge):
    cert = hps.check_weak_moderate(hps.HpsCoefficients.from_expr(gauge, "1"))
    assert (cert.Q, cert.R) == (0, 0)


def test_polynomial_growth_certified(gauge):
    cert = hps.check_weak_moderate(hps.HpsCoefficients.from_expr(gauge, "n**3 + 1"))
    assert cert is not None
    assert cert.Q >= 1


def test_factorial_has_no_certificate(gauge):
    assert hps.check_weak_moderate(hps.HpsCoefficients.from_expr(gauge, "factorial(n)")) is None


def test_strong_equivalence_of_negligible_perturbation(gauge):
    a = hps.HpsCoefficients.from_expr(gauge, "1")
    b = hps.HpsCoefficients.from_expr(gauge, "1 + rho**(1/eps)")
    c = hps.HpsCoefficients.from_expr(gauge, "1 + rho")
    assert hps.check_strong_equiv(a, b)
    assert not hps.check_strong_equiv(a, c)


def test_geometric_radius_is_one(gauge):
    rep = hps.radius(hps.builtin("geometric", gauge))
    assert rep.cls == "finite"
    assert all(rep.net.value(i) == 1 for i in range(len(gauge)))


def test_exponential_radius_infinite(gauge):
    assert hps.radius(hps.builtin("exponential", gauge)).cls == "infinite"


def test_non_moderate_radius(gauge):
    a = coefficients(gauge, "rho**((n+1)/eps)")
    rep = hps.radius(a)
    assert rep.cls == "non_moderate"
    # (limsup |a_n|^(1/n))^-1 = rho^(-1/eps), up to the (n+1)/n factor of the last window
    for i in gauge.tail:
        p = gauge.points[i]
        ratio = p.m.log(rep.net.value(i).real) / p.m.log(1 / p.rho)
        assert float(ratio * p.eps) == pytest.approx(1, rel=1e-3)


def test_delta_radius_infinite_with_coefficient_bound(gauge):
    d = hps.builtin("dirac_delta", gauge)
    assert hps.radius(d).cls == "infinite"
    for i in gauge.tail:
        p = gauge.points[i]
        for n in range(65):
            assert abs(d.value(n, p)) <= p.rho ** (-2 * n - 2)


def test_geometric_membership_inside_unit_disk(gauge):
    a = hps.builtin("geometric", gauge)
    assert hps.setconv_membership(a, 0, 0.5).member
    assert hps.setconv_membership(a, 0, gauge.from_expr("1 - rho**(1/2)")).member


def test_exponential_membership(gauge):
    a = hps.builtin("exponential", gauge)
    assert hps.setconv_membership(a, 0, gauge.from_expr("-log(rho)")).member
    far = hps.setconv_membership(a, 0, gauge.d_rho(-1))
    assert not far.member
    assert not far.cond_formal


def test_delta_membership_near_origin(gauge):
    d = hps.builtin("dirac_delta", gauge)
    assert hps.setconv_membership(d, 0, gauge.d_rho(2) * 0.5).member
    assert hps.setconv_membership(d, 0, gauge.d_rho(3) * complex(0.3, -0.4)).member


def test_delta_partial_sums_blow_up_at_finite_point(gauge):
    # the hypersums pass through terms of size e^(|z|/rho) before cancelling
    far = hps.setconv_membership(hps.builtin("dirac_delta", gauge), 0, 0.5)
    assert not far.cond_formal
    assert far.cond_radius


def test_geometric_ball_radius(gauge):
    assert hps.nonempty_ball(hps.builtin("geometric", gauge), 0, samples=3, seed=0).q == 1


def test_delta_ball_from_builtin_certificate(gauge):
    d = hps.builtin("dirac_delta", gauge)
    assert (d.cert_weak.Q, d.cert_weak.R) == (2, 2)
    assert hps.nonempty_ball(d, 0, samples=3, seed=0).q == 3


def test_delta_eventually_bounded_near_origin(gauge):
    b = hps.eventually_bounded(hps.builtin("dirac_delta", gauge), 0, gauge.d_rho(2))
    assert b is not None
    assert b.Q == 2


def test_delta_not_eventually_bounded_at_finite_point(gauge):
    assert hps.eventually_bounded(hps.builtin("dirac_delta", gauge), 0, 0.5) is None


def test_geometric_eventually_bounded_by_one(gauge):
    b = hps.eventually_bounded(hps.builtin("geometric", gauge), 0, 0.5)
    assert b.Q == 0


def test_geometric_disk_expansion(gauge):
    res = hps.disk_expansion(hps.builtin("geometric", gauge), 0, 0.9, 0.5)
    assert res.converges


def test_exponential_sum_at_zero(gauge):
    s = hps.classical_sum(hps.builtin("exponential", gauge), 0, 0)
    assert all(s.value(i) == 1 for i in gauge.tail)


def test_delta_coefficients_match_moments(gauge):
    d = hps.builtin("dirac_delta", gauge)
    mol = get_mollifier()
    p = gauge.points[gauge.tail[0]]
    for n in (0, 2, 4):
        expected = p.m.mpf(complex(mol.mu_deriv_at_zero(n)).real) / p.m.factorial(n) * p.rho ** (-n - 2)
        assert d.value(n, p) == pytest.approx(expected, rel=1e-12)


def test_radius_slope_bounded_by_certificate(gauge):
    a = coefficients(gauge, "rho**(-2*n)")
    rep = hps.radius(a)
    assert rep.cls == "finite"
    assert valuation(rep.net).slope <= a.cert_weak.Q + 1e-6
