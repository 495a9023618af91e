"""Derived values: two oracle schemes agree, then the engine is held to the frozen value."""

import mpmath
import pytest

from oracle_cases import CASES, FROZEN, evaluate, relative_gap
from rcgen import ghf_analytic as ghf
from rcgen import hft, hps
from rcgen.gauge_net import NotInvertible, inv, valuation
from rcgen.hypernat import HyperNatural, LeavesHypernaturals, checked_pow
from rcgen.hyperseq import ExtensionError, HyperSequence, extend_ordinary, is_cauchy
from rcgen.hyperseries import exponential_series, root_test, series_from_expr, sum_hyperseries
from rcgen.mollifier import get_mollifier

ENGINE_TOL = 1e-12


@pytest.mark.parametrize("name", sorted(CASES))
def test_schemes_agree_and_match_frozen(name):
    a, b, tol = evaluate(name)
    assert relative_gap(a, b) <= tol
    assert relative_gap(b, FROZEN[name]) <= 1e-12


def index_of(gauge, k):
    return gauge.ks.index(k)


def test_inverse_of_rho_power_inv_eps_refused(gauge):
    x = gauge.net(lambda p: p.rho ** (1 / p.eps), "rho^(1/eps)")
    i = index_of(gauge, 23)
    assert float(gauge.m.log(x.value(i).real, 2)) == pytest.approx(FROZEN["inv_rho_pow_inv_eps"], rel=1e-12)
    assert valuation(x).cls == "negligible"
    with pytest.raises(NotInvertible):
        inv(x)


def test_checked_pow_of_infinite_exponent_refused(gauge):
    n = HyperNatural.gauge_power(gauge, 1)
    assert n[index_of(gauge, 23)] == 2**23
    with pytest.raises(LeavesHypernaturals):
        checked_pow(n, n)
    assert FROZEN["checked_pow_exponent"] > gauge.Q_max


def test_inverse_n_is_cauchy(gauge):
    seq = HyperSequence(gauge, lambda n, p: p.m.mpf(1) / n if n else p.m.zero, "1/n")
    assert is_cauchy(seq).is_cauchy is True


def test_factorial_does_not_extend(gauge):
    i = index_of(gauge, 23)
    p = gauge.points[i]
    assert float(p.m.loggamma(2**23 + 1)) == pytest.approx(FROZEN["log_factorial"], rel=1e-12)
    with pytest.raises(ExtensionError):
        extend_ordinary(gauge, lambda n, p: p.m.factorial(n), "n!")


def test_root_test_on_n_half_power(gauge):
    res = root_test(series_from_expr(gauge, "n * (1/2)**n"))
    assert res.status == "converges_absolutely"
    p = gauge.points[index_of(gauge, 23)]
    n = 2**23
    assert float((p.m.mpf(n) / p.m.mpf(2) ** n) ** (p.m.mpf(1) / n)) == pytest.approx(FROZEN["root_n_half"], rel=1e-12)


def test_mollifier_moments_match_quadrature():
    mol = get_mollifier("plateau")
    assert float(mol.integral()) == pytest.approx(FROZEN["bump_integral"], rel=ENGINE_TOL)
    assert complex(mol.mu_deriv_at_zero(2)) == pytest.approx(FROZEN["mu_second_moment"], rel=ENGINE_TOL)
    assert complex(mol.mu_deriv_at_zero(10)) == pytest.approx(FROZEN["mu_tenth_moment"], rel=ENGINE_TOL)
    assert complex(mol.mu_deriv_at_zero(3)) == 0
    assert complex(mol.mu_taylor(0, 2)) == pytest.approx(FROZEN["mu_second_derivative_at_zero"], rel=1e-9)


def test_delta_coefficients_from_moments(gauge):
    d = hps.dirac_delta(gauge)
    for n in (0, 2, 10):
        for i in gauge.tail:
            p = gauge.points[i]
            expected = p.m.mpf(complex(get_mollifier().mu_deriv_at_zero(n)).real) / p.m.factorial(n) * p.rho ** (-n - 2)
            assert abs(d.value(n, p) - expected) <= ENGINE_TOL * abs(expected)
    assert abs(complex(FROZEN["mu_tenth_moment"])) / mpmath.factorial(10) < 1
    assert hps.nonempty_ball(d, 0, samples=3, seed=0).q == 3


def test_moderate_family_ball(gauge):
    a = hps.HpsCoefficients.from_expr(gauge, "rho**(-5*n)")
    a.cert_weak = hps.check_weak_moderate(a)
    assert a.cert_weak.Q == 5
    ball = hps.nonempty_ball(a, 0, samples=10, seed=0)
    assert ball.q >= 6
    assert ball.verified
    p = gauge.points[index_of(gauge, 14)]
    z = p.rho**6 * p.m.mpc(0.3, -0.7)
    assert complex(hps.classical_sum(a, 0, gauge.const(z)).value(p.index)) == pytest.approx(
        FROZEN["moderate_family_scan"], rel=ENGINE_TOL)


def test_exponential_disk_expansion(gauge):
    e = hps.builtin("exponential", gauge)
    zhat = gauge.from_expr("-log(rho)")
    assert hps.disk_expansion(e, 0, zhat, zhat * 0.5).converges
    p = gauge.points[index_of(gauge, 14)]
    assert float(p.m.exp(p.m.log(1 / p.rho) / 2)) == pytest.approx(FROZEN["exp_majorant_scan"], rel=ENGINE_TOL)


def test_exponential_sum_at_log(gauge):
    res = sum_hyperseries(exponential_series(gauge, gauge.from_expr("-log(rho)")))
    i = index_of(gauge, 14)
    assert complex(res.value.value(i)) == pytest.approx(FROZEN["exp_scan_at_log"], rel=ENGINE_TOL)


def test_cos_liouville_decay(gauge):
    f = ghf.GhfNet(gauge, lambda w, p: p.m.cos(p.rho * w), "cos(rho w)")
    res = ghf.liouville_check(f, 2, radii=[gauge.d_rho(-0.25), gauge.d_rho(-0.5)])
    for row in res.decay:
        assert row["coefficients"][1]["class"] == "negligible"
    assert abs(complex(FROZEN["cos_contour_a1"])) < 1e-40
    p = gauge.points[index_of(gauge, 14)]
    assert float(p.m.cosh(p.rho**0.5)) == pytest.approx(FROZEN["cos_circle_max"], rel=ENGINE_TOL)


def test_zero_isolation_below_rho_scale(gauge):
    f = ghf.GhfNet(gauge, lambda w, p: w * (w - p.rho), "w(w-rho)")
    res = ghf.zero_isolation(f, 0)
    assert res.status == "isolated_on_subpoint"
    assert res.order == 1
    i = index_of(gauge, 14)
    assert res.radius.abs_upper(i) < FROZEN["quadratic_roots"]


def test_delta_far_from_origin_not_applicable(gauge):
    res = ghf.zero_isolation(ghf.delta(gauge), 4)
    assert res.status == "not_applicable"
    mol = get_mollifier()
    ref = abs(complex(FROZEN["mu_decay_at_64"]))
    assert float(mol.mu_bound(64)) >= ref
    assert abs(complex(mol.mu_float(64.0)[0])) == pytest.approx(ref, rel=1e-9)


def test_continuation_counterexample(gauge):
    f = ghf.GhfNet(gauge, lambda w, p: w * w, "w^2")
    zeros = HyperSequence(gauge, lambda n, p: p.rho**6 / (n + 1), "rho^6/(n+1)")
    res = ghf.identity_continuation(f, ghf.chain(gauge, [0], [0.5]), zeros)
    assert res.status == "conflict"
    p = gauge.points[index_of(gauge, 23)]
    assert float(f(p.rho**6 / 4, p).real) == pytest.approx(FROZEN["counterexample_value"], rel=ENGINE_TOL)


def test_gaussian_transform_at_zero(gauge):
    g = hft.gaussian(gauge)
    i = index_of(gauge, 14)
    c, r = hft.hft(g, 0).ball(i)
    assert abs(complex(c) - FROZEN["gaussian_hft_zero"]) <= float(r) + ENGINE_TOL


def test_gaussian_l2_norm(gauge):
    g = hft.gaussian(gauge)
    p = gauge.points[index_of(gauge, 14)]
    b = hft.l2_norm_sq(g, p)
    assert abs(complex(b.center) - FROZEN["gaussian_l2"]) <= float(b.radius) + ENGINE_TOL
    assert max(hft.plancherel_residual(g).values()) <= 1e-12


def test_delta1_transform_against_dirichlet_route(gauge):
    d = hft.delta1(gauge)
    i = index_of(gauge, 4)
    for order, key in ((0, "delta1_transform"), (1, "delta1_derivative_transform")):
        c, r = hft.hft(d, 1, order).ball(i)
        assert abs(complex(c) - FROZEN[key]) <= float(r)
    for w in (0, 1, 10):
        assert hft.derivative_rule_check(d, w).verdict == "negligible"


def test_exp_boundary_transform(gauge):
    f = hft.exp_boundary(gauge)
    i = index_of(gauge, 14)
    c, r = hft.hft(f, 1).ball(i)
    assert abs(complex(c) - FROZEN["exp_boundary_transform"]) <= float(r) + ENGINE_TOL
    check = hft.derivative_rule_check(f, 1)
    assert check.verdict == "negligible"
    assert valuation(hft.boundary_term(f, 1)).cls != "negligible"


def test_gaussian_riemann_lebesgue(gauge):
    g = hft.gaussian(gauge, halfwidth=hft.default_halfwidth(gauge) * 2)
    p = gauge.points[index_of(gauge, 14)]
    l1 = hft.derivative_l1(g, 2, p)
    assert float(l1) <= FROZEN["gaussian_second_derivative_l1"]
    assert float(l1) == pytest.approx(FROZEN["gaussian_second_derivative_l1"], rel=1e-5)
    res = hft.riemann_lebesgue(g, 2, 10)
    assert res.holds
