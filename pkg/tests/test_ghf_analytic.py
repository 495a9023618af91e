import pytest

from rcgen import ghf_analytic as ghf
from rcgen import hps
from rcgen.hyperseq import HyperSequence


def test_geometric_kernel_coefficients_are_one(small_gauge):
    res = ghf.goursat_coefficients(ghf.geometric_kernel(small_gauge), 0, 0.5, n_max=16)
    for n in range(17):
        for i in small_gauge.tail:
            assert abs(res.coefficients.at(n).value(i) - 1) <= 1e-10


def test_exponential_coefficients(small_gauge):
    res = ghf.goursat_coefficients(ghf.exponential(small_gauge), 0, 1, n_max=16)
    for n in range(17):
        i = small_gauge.tail[-1]
        m = small_gauge.points[i].m
        assert abs(res.coefficients.at(n).value(i) * m.factorial(n) - 1) <= 1e-10


def test_delta_coefficients_match_builtin(small_gauge):
    res = ghf.goursat_coefficients(ghf.delta(small_gauge), 0, n_max=12)
    known = hps.dirac_delta(small_gauge)
    for i in small_gauge.tail:
        p = small_gauge.points[i]
        for n in range(0, 13, 2):
            assert abs(res.coefficients.value(n, p) - known.value(n, p)) <= 1e-10 * abs(known.value(n, p))


def test_liouville_constant(small_gauge):
    f = ghf.GhfNet(small_gauge, lambda w, p: p.m.mpc(3, 4), "3+4i")
    res = ghf.liouville_check(f, 6)
    assert res.verdict == "constant"
    assert (res.a0 - complex(3, 4)).is_negligible()


def test_liouville_rejects_identity(small_gauge):
    res = ghf.liouville_check(ghf.GhfNet(small_gauge, lambda w, p: w, "w"), 6)
    assert res.verdict == "violated"
    assert res.witness["|f|"] > 6


def test_square_has_double_zero(small_gauge):
    res = ghf.zero_isolation(ghf.GhfNet(small_gauge, lambda w, p: w * w, "w^2"), 0)
    assert res.status == "isolated_on_subpoint"
    assert res.order == 2
    assert res.L == [small_gauge.points[i].k for i in small_gauge.tail]


def test_shifted_zero_isolated_below_rho(small_gauge):
    res = ghf.zero_isolation(ghf.GhfNet(small_gauge, lambda w, p: w * (w - p.rho)), 0)
    assert res.order == 1
    for i in small_gauge.tail:
        assert res.radius.value(i).real < small_gauge.points[i].rho


def test_delta_far_out_not_applicable(gauge):
    # delta(4) = rho^-2 mu(4/rho) is negligible only once 4/rho is deep in the decay of mu
    assert ghf.zero_isolation(ghf.delta(gauge), 4).status == "not_applicable"


def test_zero_net_null_along_chain(small_gauge):
    f = ghf.GhfNet(small_gauge, lambda w, p: p.m.mpc(0), "0")
    zeros = HyperSequence(small_gauge, lambda n, p: p.m.mpf(1) / (n + 2))
    res = ghf.identity_continuation(f, ghf.chain(small_gauge, [0, 0.5], [0.75, 0.75]), zeros)
    assert res.status == "null_along_chain"


def test_delta_near_one_null_but_not_back_to_origin(gauge):
    d = ghf.delta(gauge)
    zeros = HyperSequence(gauge, lambda n, p: 1 + p.rho**3 / (n + 2), "1+rho^3/(n+2)")
    near = ghf.identity_continuation(d, ghf.chain(gauge, [1], [gauge.d_rho(2)]), zeros)
    assert near.status == "null_along_chain"
    back = ghf.identity_continuation(d, ghf.chain(gauge, [1, 0], [1.5, gauge.d_rho(2)]), zeros)
    assert back.status == "obstructed"
    assert back.k == 1


def test_accumulating_zeros_of_nonzero_net_conflict(small_gauge):
    f = ghf.GhfNet(small_gauge, lambda w, p: w * w, "w^2")
    zeros = HyperSequence(small_gauge, lambda n, p: p.rho**6 / (n + 1))
    res = ghf.identity_continuation(f, ghf.chain(small_gauge, [0], [0.5]), zeros)
    assert res.status == "conflict"
    assert res.conflict["zero_isolation"]["order"] == 2


def test_chain_centers_must_stay_in_previous_ball(small_gauge):
    f = ghf.GhfNet(small_gauge, lambda w, p: p.m.mpc(0), "0")
    zeros = HyperSequence(small_gauge, lambda n, p: p.m.mpf(1) / (n + 2))
    with pytest.raises(ghf.ChainError):
        ghf.identity_continuation(f, ghf.chain(small_gauge, [0, 2], [0.5, 0.5]), zeros)


def test_cauchy_riemann_probe(small_gauge):
    for f in (ghf.exponential(small_gauge), ghf.delta(small_gauge), ghf.geometric_kernel(small_gauge)):
        assert ghf.cr_probe(f, [0.1, complex(0.2, -0.1)])["holomorphic"]
