"""Fourier transform over [-h, h] for infinite h.

Generic nets are integrated with multiprecision Gauss-Legendre panels no wider
than ``min(1, pi / |Re omega|)``; two rules per panel give the error estimate.
The delta net, concentrated at scale rho, has a spectral route instead: its
transform is ``(i omega)^m beta(rho omega)`` up to a tail of mu beyond h/rho,
and off the real axis a power series in ``rho z`` with a bounded remainder.
Plancherel and inversion probes run in float64 on the shared ``exp_sum``
kernel.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Iterable, Sequence, TextIO

import numpy as np
from mpmath.calculus.quadrature import GaussLegendre

from . import _kernels
from .expr import compile_expr
from .gauge_net import Ball, Gauge, GenComplex, GridPoint, Unavailable, valuation
from .mollifier import get_mollifier

PANEL_BUDGET = 4096
# Gauss-Legendre rules 48 and 96 nodes; the difference is the error estimate
COARSE_DEGREE, FINE_DEGREE = 5, 6
FLOAT_NODES = 24
DEFAULT_Z = (0.5 + 0.5j, -1.0 + 0.25j, 0.3 - 0.8j, 1.5 + 0.0j)
EXP_TYPE_SLACK = 1.05


class QuadratureError(ArithmeticError):
    def __init__(self, message: str, estimate: Any = None):
        super().__init__(message)
        self.estimate = estimate


class PreconditionError(ValueError):
    pass


# -- nets -----------------------------------------------------------------------------


def default_halfwidth(gauge: Gauge, mode: str = "log") -> GenComplex:
    """h = c log(1/rho) (logarithmic type) or h = 1/rho (power type)."""
    c = gauge.settings.log_h_factor
    if mode == "log":
        return gauge.net(lambda p: c * p.log_rho_inv, f"{c}*log(1/rho)")
    if mode == "power":
        return gauge.net(lambda p: 1 / p.rho, "1/rho")
    raise ValueError(f"unknown halfwidth mode {mode!r}")


@dataclass
class TameCertificate:
    """|f^(j)(x)| <= C b^j on H for every j."""

    C: GenComplex
    b: GenComplex
    source: str = "declared"


class GsfNet:
    """Per-eps smooth functions on [-h_eps, h_eps].

    fn(x, p)               value at x (number or Ball)
    deriv(x, order, p)     derivative oracle; numerical differentiation when absent
    spectral(order, w, p)  transform of the order-th derivative at w, when known
    l2(p)                  int_H |f|^2 as a Ball, when known
    l1(p)                  a lower bound on int_H |f|, when known
    """

    def __init__(self, gauge: Gauge, fn: Callable[[Any, GridPoint], Any], label: str = "", *,
                 halfwidth: GenComplex | None = None, deriv: Callable | None = None,
                 spectral: Callable | None = None, spectral_float: Callable | None = None,
                 l2: Callable | None = None, l1: Callable | None = None,
                 tame: TameCertificate | None = None, scale: Callable | None = None):
        self.gauge = gauge
        self.fn = fn
        self.label = label
        self.halfwidth = halfwidth if halfwidth is not None else default_halfwidth(gauge)
        self._deriv = deriv
        self.spectral = spectral
        self.spectral_float = spectral_float
        self.l2 = l2
        self.l1 = l1
        self.tame = tame
        self.scale = scale
        self.deriv_l1 = None

    def __repr__(self) -> str:
        return f"GsfNet({self.label})"

    @classmethod
    def from_expr(cls, gauge: Gauge, source: str, label: str = "",
                  derivatives: Sequence[str] = (), **kwargs: Any) -> "GsfNet":
        variables = ("x", "eps", "rho", "k")
        expr = compile_expr(source, variables)
        forms = [compile_expr(d, variables) for d in derivatives]

        def fn(x, p):
            return expr(p.m, x=x, eps=p.eps, rho=p.rho, k=p.k)

        deriv = None
        if forms:
            def deriv(x, order, p):
                if order == 0:
                    return fn(x, p)
                if order > len(forms):
                    return _numeric_derivative(fn, x, order, p)
                return forms[order - 1](p.m, x=x, eps=p.eps, rho=p.rho, k=p.k)

        return cls(gauge, fn, label or source, deriv=deriv, **kwargs)

    def h(self, p: GridPoint):
        return self.halfwidth.value(p.index).real

    def ball(self, x, p: GridPoint, order: int = 0) -> Ball:
        m = p.m
        if order == 0:
            raw = self.fn(x, p)
        elif self._deriv is not None:
            raw = self._deriv(x, order, p)
        else:
            raw = _numeric_derivative(self.fn, x, order, p)
        if isinstance(raw, Ball):
            return Ball(m.mpc(raw.center), m.mpf(raw.radius))
        return Ball(m.mpc(raw), m.zero)

    def __call__(self, x, p: GridPoint, order: int = 0):
        return self.ball(x, p, order).center

    def at(self, x: Any, order: int = 0) -> GenComplex:
        x = self.gauge.const(x)
        tag = f"^({order})" if order else ""
        return self.gauge.net(lambda p: self.ball(x.value(p.index), p, order), f"{self.label}{tag}({x.label})")

    def combine(self, alpha: Any, other: "GsfNet", beta: Any) -> "GsfNet":
        """alpha f + beta g on the halfwidth of f."""
        g = self.gauge

        def lin(a, b):
            return a * alpha + b * beta

        def fn(x, p):
            return lin(self(x, p), other(x, p))

        def deriv(x, order, p):
            return lin(self(x, p, order), other(x, p, order))

        spectral = None
        if self.spectral or other.spectral:
            # termwise: a spike at scale rho cannot share panels with a smooth partner
            def spectral(order, w, p):
                a, b = hft_value(self, w, p, order), hft_value(other, w, p, order)
                return Ball(lin(a.center, b.center), abs(alpha) * a.radius + abs(beta) * b.radius)

        return GsfNet(g, fn, f"{alpha}*{self.label}+{beta}*{other.label}", halfwidth=self.halfwidth,
                      deriv=deriv, spectral=spectral)


def _numeric_derivative(fn, x, order, p):
    m = p.m

    def center(t):
        v = fn(t, p)
        return m.mpc(v.center if isinstance(v, Ball) else v)

    return m.diff(center, x, order)


# -- built-in nets ------------------------------------------------------------------------


def zero(gauge: Gauge, halfwidth: GenComplex | None = None) -> GsfNet:
    return GsfNet(gauge, lambda x, p: p.m.mpc(0), "0", halfwidth=halfwidth,
                  deriv=lambda x, order, p: p.m.mpc(0),
                  spectral=lambda order, w, p: Ball(p.m.mpc(0), p.m.zero),
                  spectral_float=lambda w, p: np.zeros_like(np.asarray(w, dtype=complex)),
                  l2=lambda p: Ball(p.m.mpc(0), p.m.zero), l1=lambda p: p.m.zero,
                  tame=TameCertificate(gauge.const(0), gauge.const(1), "exact"))


def one(gauge: Gauge, halfwidth: GenComplex | None = None) -> GsfNet:
    return GsfNet(gauge, lambda x, p: p.m.mpc(1), "1", halfwidth=halfwidth,
                  deriv=lambda x, order, p: p.m.mpc(1 if order == 0 else 0))


def _hermite_e(m, n: int, x):
    """Probabilists' Hermite polynomial He_n(x)."""
    prev, cur = m.one, x
    if n == 0:
        return prev
    for j in range(1, n):
        prev, cur = cur, x * cur - j * prev
    return cur


def gaussian(gauge: Gauge, halfwidth: GenComplex | None = None) -> GsfNet:
    def deriv(x, order, p):
        m = p.m
        return (-1) ** order * _hermite_e(m, order, m.mpc(x)) * m.exp(-m.mpc(x) ** 2 / 2)

    # Cramer: |He_j(x)| e^(-x^2/4) <= 1.0865 sqrt(j!), and sqrt(j!) <= rho^-j while j <= rho^-2
    tame = TameCertificate(gauge.const(1.0865), gauge.d_rho(-1), "Cramer bound, j <= rho^-2")
    return GsfNet(gauge, lambda x, p: p.m.exp(-p.m.mpc(x) ** 2 / 2), "gaussian",
                  halfwidth=halfwidth, deriv=deriv, tame=tame)


def exp_boundary(gauge: Gauge, halfwidth: GenComplex | None = None) -> GsfNet:
    """e^(x - h): every derivative equals 1 at x = h, so the boundary term survives."""
    net = GsfNet(gauge, lambda x, p: 0, "exp(x-h)", halfwidth=halfwidth)
    net.fn = lambda x, p: p.m.exp(p.m.mpc(x) - net.h(p))
    net._deriv = lambda x, order, p: net.fn(x, p)
    return net


def delta1(gauge: Gauge, halfwidth: GenComplex | None = None, mollifier: str = "plateau",
           tame_power: int = 2) -> GsfNet:
    """rho^-1 mu(x / rho).

    The declared tame certificate is C (rho^-tame_power)^j with
    C = rho^-1 int beta / 2 pi; any tame_power >= 1 is valid.
    """
    mol = get_mollifier(mollifier)
    halfwidth = halfwidth if halfwidth is not None else default_halfwidth(gauge)
    net = GsfNet(gauge, lambda x, p: 0, f"delta1[{mollifier}]", halfwidth=halfwidth,
                 scale=lambda p: p.rho)

    def deriv(x, order, p):
        m = p.m
        val, err = mol.mu(m.mpc(x) / p.rho, order, m)
        s = p.rho ** (-1 - order)
        return Ball(val * s, err * s)

    def cutoff(p):
        return net.h(p) / p.rho

    def spectral(order, w, p):
        m = p.m
        w = m.mpc(w)
        U = cutoff(p)
        if w.imag == 0:
            tail = p.rho ** -order * mol.tail_bound(U, order)
            return Ball((1j * w) ** order * mol.beta(p.rho * w.real, m), tail)
        if order:
            raise Unavailable("derivative transforms off the real axis are not implemented")
        return _delta1_series(mol, p, w, U)

    def l2(p):
        m = p.m
        U = cutoff(p)
        full = mol.square_integral() / (2 * m.pi)
        return Ball(m.mpc(full / p.rho), mol.mu_bound(U) * mol.tail_bound(U) / p.rho)

    @lru_cache(maxsize=None)
    def mu_l1(order):
        # lower bound: float quadrature of |mu^(order)| over |u| <= 40
        t = np.linspace(-40.0, 40.0, 4001)
        return float(np.trapezoid(np.abs(mol.mu_float(t, order)), t)) * (1 - 1e-4)

    def l1(p):
        return p.m.mpf(mu_l1(0))

    def deriv_l1(order, p):
        # int |delta1^(order)| = rho^-order int |mu^(order)|
        return p.m.mpf(mu_l1(order)) * p.rho ** -order

    const = gauge.net(lambda p: p.rho ** -1 * mol.integral() / (2 * p.m.pi), "rho^-1 int beta / 2 pi")
    net.fn = lambda x, p: deriv(x, 0, p)
    net._deriv = deriv
    net.spectral = spectral
    net.spectral_float = lambda w, p: mol.beta_float(float(p.rho) * np.real(np.asarray(w))).astype(complex)
    net.l2, net.l1, net.deriv_l1 = l2, l1, deriv_l1
    net.tame = TameCertificate(const, gauge.d_rho(-tame_power), f"|t|^j beta <= beta, b = rho^-{tame_power}")
    return net


def _delta1_series(mol, p: GridPoint, z, U):
    """F(z) = sum_n (-i rho z)^n / n! int_{|u|<U} u^n mu, for complex z.

    The full-line moments are i^n beta^(n)(0); each truncated one differs from
    it by at most the tail of |u|^n |mu| beyond U and is at most U^n int |mu|.
    """
    m = p.m
    xi = p.rho * z
    log_xi = float(m.log(abs(xi))) if xi != 0 else -math.inf
    log_u = float(m.log(U))
    log_l1 = mol.log_l1_bound()
    log_tiny = -(m.prec + 16) * math.log(2)
    target = float(abs(z)) * float(U * p.rho) * math.e + 40
    logs = []
    n = 0
    while True:
        trivial = n * log_u + log_l1
        tail = mol.log_tail_bound(U, 0, n) if n + 2 <= 240 else math.inf
        term = n * log_xi - math.lgamma(n + 1) + min(trivial, tail) if n else min(trivial, tail)
        logs.append(term)
        if n > target and term < log_tiny:
            break
        n += 1
        if n > 20000:
            raise Unavailable(f"series for the transform at |z|={float(abs(z)):.3g} does not settle")
    coeffs = mol.taylor_at_zero(len(logs), m)
    center = m.fsum(c * xi**j for j, c in enumerate(coeffs) if c)
    radius = m.exp(m.mpf(float(np.logaddexp.reduce(logs))))
    return Ball(center, radius)


BUILTINS = {"zero": zero, "one": one, "gaussian": gaussian, "exp": exp_boundary,
            "exp_boundary": exp_boundary, "delta": delta1, "delta1": delta1}


def builtin(name: str, gauge: Gauge, **params: Any) -> GsfNet:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown function net {name!r}; known: {sorted(BUILTINS)}") from None
    return factory(gauge, **params)


# -- quadrature ------------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _rule(prec: int, degree: int):
    from mpmath import MPContext

    ctx = MPContext()
    ctx.prec = prec
    return tuple(GaussLegendre(ctx).calc_nodes(degree, prec))


def _panels(m, a, b, width) -> list:
    n = max(1, int(m.ceil((b - a) / width)))
    if n > PANEL_BUDGET:
        raise QuadratureError(f"{n} panels exceed the budget of {PANEL_BUDGET}")
    step = (b - a) / n
    return [(a + j * step, a + (j + 1) * step) for j in range(n)]


def integrate(m, g: Callable[[Any], Any], a, b, width, rtol) -> Ball:
    """int_a^b g by Gauss-Legendre panels; radius |fine - coarse|."""
    coarse_rule, fine_rule = _rule(m.prec, COARSE_DEGREE), _rule(m.prec, FINE_DEGREE)
    coarse, fine, scale = [], [], []
    for lo, hi in _panels(m, m.mpf(a), m.mpf(b), width):
        half, mid = (hi - lo) / 2, (hi + lo) / 2
        fv = [(w, g(mid + half * x)) for x, w in fine_rule]
        fine.append(half * m.fsum(w * v for w, v in fv))
        scale.append(half * m.fsum(w * abs(v) for w, v in fv))
        coarse.append(half * m.fsum(w * g(mid + half * x) for x, w in coarse_rule))
    val, ref = m.fsum(fine), m.fsum(coarse)
    err, size = abs(val - ref), m.fsum(scale)
    if err > rtol * size and err > m.ldexp(1, -m.prec + 8) * size:
        raise QuadratureError(f"quadrature disagreement {m.nstr(err / size, 5)} relative", err)
    return Ball(val, err)


def _panel_width(m, w):
    freq = abs(m.mpc(w).real)
    return min(m.one, m.pi / freq) if freq else m.one


def _fourier(f: GsfNet, w, p: GridPoint, order: int, sign: int) -> Ball:
    m = p.m
    w = m.mpc(w)
    h = f.h(p)
    kernel = sign * 1j * w

    def g(x):
        return f(x, p, order) * m.exp(kernel * x)

    return integrate(m, g, -h, h, _panel_width(m, w), m.mpf(f.gauge.settings.quad_rtol))


def hft_value(f: GsfNet, w, p: GridPoint, order: int = 0) -> Ball:
    """F_h(f^(order))(w) at one grid point."""
    if f.spectral is not None:
        return f.spectral(order, w, p)
    return _fourier(f, w, p, order, -1)


def hft(f: GsfNet, omega: Any, order: int = 0) -> GenComplex:
    omega = f.gauge.const(omega)
    tag = f"^({order})" if order else ""
    return f.gauge.net(lambda p: hft_value(f, omega.value(p.index), p, order), f"F_h({f.label}{tag})({omega.label})")


def inverse_hft(f: GsfNet, x: Any) -> GenComplex:
    """(1 / 2 pi) int_{-h}^{h} f(w) e^{i x w} dw."""
    x = f.gauge.const(x)

    def fn(p):
        b = _fourier(f, x.value(p.index), p, 0, 1)
        return Ball(b.center / (2 * p.m.pi), b.radius / (2 * p.m.pi))

    return f.gauge.net(fn, f"F_h^-1({f.label})({x.label})")


def transform_net(f: GsfNet) -> GsfNet:
    """w -> F_h(f)(w) as a net on the same halfwidth."""
    return GsfNet(f.gauge, lambda w, p: hft_value(f, w, p), f"F_h({f.label})", halfwidth=f.halfwidth)


def boundary_term(f: GsfNet, w: Any) -> GenComplex:
    """[f(x) e^{-i x w}] from x = -h to x = h."""
    w = f.gauge.const(w)

    def fn(p):
        m = p.m
        h, om = f.h(p), w.value(p.index)
        top, bot = f.ball(h, p), f.ball(-h, p)
        e_top, e_bot = m.exp(-1j * h * om), m.exp(1j * h * om)
        return Ball(top.center * e_top - bot.center * e_bot, top.radius * abs(e_top) + bot.radius * abs(e_bot))

    return f.gauge.net(fn, f"Delta_h({f.label})({w.label})")


def l1_norm(f: GsfNet, p: GridPoint):
    """int_H |f|, or a lower bound for it."""
    if f.l1 is not None:
        return f.l1(p)
    m = p.m
    h = f.h(p)
    return integrate(m, lambda x: abs(f(x, p)), -h, h, m.one, m.mpf(1e-6)).center.real


def l2_norm_sq(f: GsfNet, p: GridPoint) -> Ball:
    if f.l2 is not None:
        return f.l2(p)
    m = p.m
    h = f.h(p)
    return integrate(m, lambda x: abs(f(x, p)) ** 2, -h, h, m.one, m.mpf(f.gauge.settings.quad_rtol))


# -- checks -------------------------------------------------------------------------------


@dataclass
class NetCheck:
    """A residual net with its classification and a per-point verdict."""

    name: str
    residual: GenComplex | None
    verdict: str
    detail: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        out = {"name": self.name, "verdict": self.verdict, **self.detail}
        if self.residual is not None:
            out["residual"] = self.residual.to_dict()
            out["residual_class"] = valuation(self.residual).label
        return out


def _negligible_verdict(net: GenComplex) -> str:
    rep = valuation(net)
    if rep.cls == "negligible":
        return "negligible"
    return "indeterminate" if rep.cls == "indeterminate" else "not_negligible"


def derivative_rule_check(f: GsfNet, omega: Any) -> NetCheck:
    """F_h(f') - i w F_h(f) - Delta_h f(w)."""
    g = f.gauge
    omega = g.const(omega)
    lhs = hft(f, omega, 1)
    core = hft(f, omega, 0)
    delta = boundary_term(f, omega)
    residual = lhs - omega * core * 1j - delta
    residual.label = f"derivative rule residual at {omega.label}"
    return NetCheck("derivative_rule", residual, _negligible_verdict(residual),
                    {"omega": omega.label, "boundary_class": valuation(delta).label})


def sharp_bound_check(f: GsfNet, omegas: Iterable[Any]) -> NetCheck:
    g = f.gauge
    failures = []
    for w in omegas:
        w = g.const(w)
        F = hft(f, w)
        for i in g.tail:
            p = g.points[i]
            if F.abs_upper(i) > l1_norm(f, p) * (1 + p.m.mpf(1e-12)):
                failures.append({"omega": w.label, "k": p.k})
    return NetCheck("sharp_bound", None, "holds" if not failures else "violated", {"failures": failures})


# -- support ------------------------------------------------------------------------------


@dataclass
class SupportReport:
    verdict: str  # supported_in | not_supported | indeterminate
    support_evidence: dict[str, Any]
    ext_points_tested: list[str]
    horizon: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "support_evidence": self.support_evidence,
            "ext_points_tested": self.ext_points_tested,
            "evidence_horizon": self.horizon,
        }


def exterior_probes(gauge: Gauge, r: GenComplex) -> list[GenComplex]:
    """Points at positive invertible distance from [-r, r], near and far."""
    gaps = [gauge.d_rho(3), gauge.d_rho(1), gauge.const(1), gauge.const(4)]
    out = []
    for d in gaps:
        for sign in (1, -1):
            out.append((r + d) * sign)
    out.append(r * 2 + 1)
    out.append(r + gauge.d_rho(-1))
    return out


def support_report(f: GsfNet | Callable, r: Any, orders: int = 2,
                   probes: Sequence[GenComplex] | None = None) -> SupportReport:
    """f restricted to the strong exterior of [-r, r] against zero, with derivatives."""
    g = f.gauge
    r = g.const(r)
    probes = list(probes) if probes is not None else exterior_probes(g, r)
    worst: dict[str, Any] = {}
    verdicts = []
    for x in probes:
        for order in range(orders + 1):
            val = f.at(x, order)
            rep = valuation(val)
            key = f"{x.label} (order {order})"
            worst[key] = rep.label
            if rep.cls == "negligible":
                verdicts.append("zero")
            elif rep.cls == "indeterminate":
                verdicts.append("unknown")
            elif all(val.abs_lower(i) > g.rho_power(i, g.q_max) for i in g.tail):
                verdicts.append("nonzero")
            else:
                verdicts.append("unknown")
    if "nonzero" in verdicts:
        verdict = "not_supported"
    elif all(v == "zero" for v in verdicts):
        verdict = "supported_in"
    else:
        verdict = "indeterminate"
    return SupportReport(verdict, worst, [x.label for x in probes], g.horizon())


# -- Riemann-Lebesgue -------------------------------------------------------------------


def verify_tame(f: GsfNet, N: int, samples: Sequence[Any] | None = None) -> dict[str, Any]:
    """Sampled |f^(j)(x)| <= C b^j for j <= N on H."""
    if f.tame is None:
        raise PreconditionError("no tame certificate")
    g = f.gauge
    cert = f.tame
    if samples is None:
        samples = [0, g.d_rho(1), 1, -1]
        hw = f.halfwidth
        samples += [hw * 0.5, hw * -0.5, hw, hw * -1]
    failures = []
    for x in samples:
        x = g.const(x)
        for j in range(N + 1):
            for i in g.tail:
                p = g.points[i]
                bound = abs(cert.C.value(i)) * abs(cert.b.value(i)) ** j
                b = f.ball(x.value(i), p, j)
                if abs(b.center) - b.radius > bound:
                    failures.append({"x": x.label, "j": j, "k": p.k})
    return {"holds": not failures, "failures": failures, "source": cert.source}


@dataclass
class RiemannLebesgueResult:
    holds: bool
    N: int
    omega: str
    lhs: GenComplex
    rhs: GenComplex
    Q: int | None
    support: SupportReport | None
    detail: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "holds": self.holds,
            "N": self.N,
            "omega": self.omega,
            "lhs": self.lhs.to_dict(),
            "rhs": self.rhs.to_dict(),
            "Q": self.Q,
            "support": self.support.to_dict() if self.support else None,
            **self.detail,
        }


def derivative_l1(f: GsfNet, N: int, p: GridPoint):
    """A lower bound on int_H |f^(N)|."""
    m = p.m
    if f.deriv_l1 is not None:
        return f.deriv_l1(N, p)
    h = f.h(p)
    # |f^(N)| has kinks at the zeros of f^(N); the panel disagreement is subtracted instead of enforced
    b = integrate(m, lambda x: abs(f(x, p, N)), -h, h, m.mpf(1) / 4, m.one)
    return max(b.center.real - b.radius, m.zero) * (1 - m.mpf(1e-6))


def riemann_lebesgue(f: GsfNet, N: int, omega: Any, support: SupportReport | None = None,
                     check_tame: bool = True) -> RiemannLebesgueResult:
    """|F_h(f)(w)| <= |w|^-N int_H |f^(N)| for invertible w, plus the support radius rho^-Q."""
    g = f.gauge
    omega = g.const(omega)
    if support is None:
        support = support_report(f, f.halfwidth)
    if support.verdict != "supported_in":
        raise PreconditionError(f"f is not supported in H ({support.verdict})")
    if f.tame is None:
        raise PreconditionError("no tame certificate")
    detail: dict[str, Any] = {}
    if check_tame:
        tame = verify_tame(f, N)
        detail["tame_check"] = tame
        if not tame["holds"]:
            raise PreconditionError("tame certificate fails at sampled points")
    lhs = abs(hft(f, omega))
    rhs = g.net(lambda p: derivative_l1(f, N, p) / abs(omega.value(p.index)) ** N, f"|w|^-{N} int |f^({N})|")
    holds = all(lhs.abs_upper(i) <= rhs.value(i).real for i in g.tail)
    b_rep = valuation(f.tame.b)
    Q = b_rep.Q + 1 if b_rep.cls == "moderate" else None
    return RiemannLebesgueResult(holds, N, omega.label, lhs, rhs, Q, support, detail)


def transform_support(f: GsfNet, Q: int) -> dict[str, Any]:
    """F_h(f) on the strong exterior of the closed ball of radius rho^-Q."""
    g = f.gauge
    radius = g.d_rho(-Q)
    probes = [radius + g.d_rho(2), (radius + g.d_rho(2)) * -1, radius + 1, radius * 2,
              radius * -2, g.d_rho(-Q - 1)]
    classes = {}
    ok = True
    for w in probes:
        rep = valuation(hft(f, w))
        classes[w.label] = rep.label
        ok = ok and rep.cls == "negligible"
    return {"Q": Q, "radius": radius.label, "probes": classes, "supported": ok}


# -- Paley-Wiener ---------------------------------------------------------------------


def _cr_residual(f: GsfNet, z, p: GridPoint):
    m = p.m
    step = m.ldexp(1, -(m.prec // 4))
    F = lambda w: hft_value(f, w, p).center  # noqa: E731
    fx = (F(z + step) - F(z - step)) / (2 * step)
    fy = (F(z + 1j * step) - F(z - 1j * step)) / (2 * step)
    scale = max(abs(fx), abs(F(z)), m.ldexp(1, -(m.prec // 2)))
    return abs(fx + 1j * fy) / scale


def _moments(f: GsfNet, p: GridPoint, count: int) -> list:
    """int_H f(x) x^n dx for n < count, on one set of nodes."""
    m = p.m
    h = f.h(p)
    rule = _rule(m.prec, FINE_DEGREE)
    acc = [m.mpc(0)] * count
    for lo, hi in _panels(m, -h, h, m.one):
        half, mid = (hi - lo) / 2, (hi + lo) / 2
        for x, w in rule:
            t = mid + half * x
            v = half * w * f(t, p)
            for n in range(count):
                acc[n] += v
                v *= t
    return acc


def taylor_representation(f: GsfNet, z, p: GridPoint) -> dict[str, Any]:
    """sum_n (-i z)^n / n! int_H f x^n against the direct transform at one point."""
    m = p.m
    z = m.mpc(z)
    direct = hft_value(f, z, p)
    if f.spectral is not None:
        # the spectral series route is this expansion already
        return {"direct": direct, "series": direct, "residual": direct.radius, "terms": None}
    h = f.h(p)
    # stop where |z|^n h^n / n! int |f| is below the working precision
    log_zh = float(m.log(abs(z) * h)) if z != 0 else -math.inf
    log_l1 = float(m.log(l1_upper(f, p) + m.ldexp(1, -m.prec)))
    count = 1
    while count * log_zh - math.lgamma(count + 1) + log_l1 > -(m.prec + 16) * math.log(2) or count < math.e * float(abs(z) * h):
        count += 1
    mom = _moments(f, p, count)
    terms = []
    term = m.mpc(1)
    for n in range(count):
        terms.append(term * mom[n])
        term *= -1j * z / (n + 1)
    series = m.fsum(terms)
    tail = abs(term) * h ** count * m.exp(log_l1) * 2
    return {"direct": direct, "series": Ball(series, tail), "residual": abs(series - direct.center) + tail + direct.radius,
            "terms": count}


def l1_upper(f: GsfNet, p: GridPoint):
    m = p.m
    h = f.h(p)
    return integrate(m, lambda x: abs(f(x, p)), -h, h, m.one, m.mpf(1e-6)).center.real * (1 + m.mpf(1e-6))


def _float_nodes(a: float, b: float, width: float):
    xg, wg = np.polynomial.legendre.leggauss(FLOAT_NODES)
    n = max(1, math.ceil((b - a) / width))
    edges = np.linspace(a, b, n + 1)
    lo, hi = edges[:-1, None], edges[1:, None]
    return ((hi - lo) / 2 * xg + (hi + lo) / 2).ravel(), ((hi - lo) / 2 * wg).ravel()


def _float_transform(f: GsfNet, p: GridPoint, omegas: np.ndarray, sign: float = -1.0) -> np.ndarray:
    if f.spectral_float is not None and sign < 0:
        return f.spectral_float(omegas, p)
    h = float(f.h(p))
    top = float(np.max(np.abs(omegas))) if len(omegas) else 0.0
    x, w = _float_nodes(-h, h, min(1.0, math.pi / top) if top else 1.0)
    fx = np.array([complex(f(p.m.mpf(float(t)), p)) for t in x])
    return _kernels.exp_sum(x, w * fx, omegas.astype(float), sign)


def plancherel_residual(f: GsfNet, indices: Iterable[int] | None = None) -> dict[int, float]:
    """Relative |int_H |F|^2 - 2 pi int_H |f|^2| per grid point, in float64."""
    g = f.gauge
    out = {}
    for i in (g.tail if indices is None else indices):
        p = g.points[i]
        h = float(f.h(p))
        om, wo = _float_nodes(-h, h, min(1.0, math.pi / h))
        F = _float_transform(f, p, om)
        lhs = float(np.sum(wo * np.abs(F) ** 2))
        rhs = 2 * math.pi * float(l2_norm_sq(f, p).center.real)
        out[p.k] = abs(lhs - rhs) / rhs if rhs else abs(lhs)
    return out


def inversion_probe(f: GsfNet, ys: Sequence[float], indices: Iterable[int] | None = None) -> dict[int, float]:
    """max_y |F^-1(F_h f)(y) - f(y)| per grid point, in float64 with the same h."""
    g = f.gauge
    out = {}
    for i in (g.tail if indices is None else indices):
        p = g.points[i]
        h = float(f.h(p))
        om, wo = _float_nodes(-h, h, min(1.0, math.pi / max(h, 1.0)))
        F = _float_transform(f, p, om)
        back = _kernels.exp_sum(om, wo * F, np.asarray(ys, dtype=float), 1.0) / (2 * math.pi)
        target = np.array([complex(f(p.m.mpf(y), p)) for y in ys])
        out[p.k] = float(np.max(np.abs(back - target)))
    return out


@dataclass
class PaleyWienerReport:
    is_ghf: bool
    entire_if_log_h: bool | None
    plancherel_residual: dict[int, float]
    plancherel_ok: bool
    exp_type_C: dict[int, float]
    exp_type_measured: dict[int, float]
    exp_type_ok: bool
    detail: dict[str, Any] = field(default_factory=dict)
    horizon: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "is_ghf": self.is_ghf,
            "entire_if_log_h": self.entire_if_log_h,
            "plancherel_residual": self.plancherel_residual,
            "plancherel_ok": self.plancherel_ok,
            "exp_type_C": self.exp_type_C,
            "exp_type_measured": self.exp_type_measured,
            "exp_type_ok": self.exp_type_ok,
            **self.detail,
            "evidence_horizon": self.horizon,
        }


def is_log_type(h: GenComplex) -> bool:
    g = h.gauge
    ratio = g.net(lambda p: h.value(p.index) / p.log_rho_inv, "h / log(1/rho)")
    return valuation(ratio).cls in ("moderate", "negligible") and valuation(ratio).Q in (0, None)


def paley_wiener_suite(f: GsfNet, zs: Sequence[complex] = DEFAULT_Z, cr_tol: float = 1e-12,
                       plancherel_tol: float = 1e-8) -> PaleyWienerReport:
    g = f.gauge
    detail: dict[str, Any] = {}
    cr = 0.0
    for i in g.tail:
        p = g.points[i]
        for z in zs:
            try:
                cr = max(cr, float(_cr_residual(f, p.m.mpc(z), p)))
            except (Unavailable, QuadratureError) as exc:
                detail.setdefault("cr_indeterminate", []).append(f"k={p.k}, z={z}: {exc}")
    detail["cr_max_residual"] = cr
    is_ghf = cr <= cr_tol and "cr_indeterminate" not in detail

    entire = None
    if is_log_type(f.halfwidth):
        worst = []
        for z in zs:
            res = g.net(lambda p, z=z: Ball(p.m.mpc(0), taylor_representation(f, z, p)["residual"]), f"taylor residual at {z}")
            worst.append(valuation(res).cls)
        entire = all(c == "negligible" for c in worst)
        detail["taylor_residual_classes"] = worst

    try:
        planch = plancherel_residual(f)
        planch_ok = all(v <= plancherel_tol for v in planch.values())
    except (QuadratureError, Unavailable) as exc:
        planch, planch_ok = {}, False
        detail["plancherel_indeterminate"] = str(exc)

    C, measured = {}, {}
    for i in g.tail:
        p = g.points[i]
        m = p.m
        h = f.h(p)
        c = m.sqrt(l2_norm_sq(f, p).center.real) * m.sqrt(2 * h)
        worst = m.zero
        for z in zs:
            b = hft_value(f, m.mpc(z), p)
            worst = max(worst, (abs(b.center) + b.radius) * m.exp(-h * abs(m.mpc(z))))
        C[p.k], measured[p.k] = float(c), float(worst)
    exp_ok = all(measured[k] <= C[k] * EXP_TYPE_SLACK for k in C)
    return PaleyWienerReport(is_ghf, entire, planch, planch_ok, C, measured, exp_ok, detail, g.horizon())


# -- output ---------------------------------------------------------------------------


def write_csv(f: GsfNet, omegas: Sequence[float], out: TextIO, indices: Iterable[int] | None = None) -> int:
    """Rows k, eps, omega, |F|, Re F, Im F, radius; returns the row count."""
    g = f.gauge
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["k", "eps", "omega", "abs", "re", "im", "radius"])
    rows = 0
    for i in (g.tail if indices is None else indices):
        p = g.points[i]
        for w in omegas:
            b = hft_value(f, p.m.mpf(w), p)
            writer.writerow([p.k, f"{float(p.eps):.17g}", f"{w:.17g}", f"{float(abs(b.center)):.17g}",
                             f"{float(b.center.real):.17g}", f"{float(b.center.imag):.17g}", f"{float(b.radius):.6g}"])
            rows += 1
    return rows
