import pytest

from rcgen.hypernat import rpi
from rcgen.hyperseq import ExtensionError, HyperSequence, extend_ordinary, hyperlimit, is_cauchy
from rcgen.hyperseries import geometric_series


def test_inverse_power_converges_to_zero_with_gauge_thresholds(gauge):
    k = 2
    res = hyperlimit(HyperSequence(gauge, lambda n, p: p.m.mpf(n) ** -k if n else p.m.zero, "1/n^2"))
    assert res.status == "converges"
    assert res.limit.is_negligible()
    for q, M in res.witnesses.items():
        for i in gauge.tail:
            p = gauge.points[i]
            assert M[i] <= rpi(p.rho ** (-p.m.mpf(q) / k)) + 1


def test_inverse_log_has_no_limit(gauge):
    seq = HyperSequence(gauge, lambda n, p: 1 / p.m.log(n) if n > 1 else p.m.one, "1/log n")
    assert hyperlimit(seq).status == "no_limit"


def test_constant_converges_to_itself(gauge):
    res = hyperlimit(HyperSequence(gauge, lambda n, p: p.m.mpc(3, 4), "3+4i"))
    assert res.status == "converges"
    assert (res.limit - complex(3, 4)).is_negligible()


def test_inverse_n_is_cauchy(gauge):
    assert is_cauchy(HyperSequence(gauge, lambda n, p: p.m.mpf(1) / n if n else p.m.zero)).is_cauchy is True


def test_alternating_sign_is_not_cauchy(gauge):
    assert is_cauchy(HyperSequence(gauge, lambda n, p: p.m.mpf((-1) ** n))).is_cauchy is False


def test_geometric_partial_sums_in_rho_are_cauchy(gauge):
    assert is_cauchy(geometric_series(gauge, gauge.d_rho(1)).partials()).is_cauchy is True


def test_sequence_of_infinities_extends(gauge):
    seq = extend_ordinary(gauge, lambda n, p: p.m.mpc(0, 1) / n + 1 / p.rho if n else 1 / p.rho)
    assert seq.at(5).is_moderate()


def test_identity_extends(gauge):
    seq = extend_ordinary(gauge, lambda n, p: p.m.mpf(n), "n")
    from rcgen.hypernat import HyperNatural
    N = HyperNatural.gauge_power(gauge, 1)
    v = seq.at(N)
    assert all(v.value(i) == N[i] for i in range(len(gauge)))


def test_factorial_does_not_extend(gauge):
    with pytest.raises(ExtensionError):
        extend_ordinary(gauge, lambda n, p: p.m.factorial(n), "n!")
