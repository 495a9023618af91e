"""Hyper-power series: coefficient nets, radius of convergence, set of convergence.

Coefficients are a two-index net ``a(n, eps)``.  Weak moderateness is
certified on the sample ``n = 0..64`` together with the gauge ladder
``rpi(rho^-j)``, ``j <= Q_max + 1``; the latter is what exposes factorial
growth.  Radii come from a registered exact limsup when the family has one,
otherwise from window maxima of ``log|a_n| / n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import _kernels
from .expr import compile_expr
from .gauge_net import Ball, Gauge, GenComplex, GridPoint, Unavailable, valuation
from .hypernat import rpi
from .hyperseq import CONVERGES
from .hyperseries import (
    ConvergenceResult, SeriesSequence, check_moderate_over_hypersums, hyper_ladder, sum_hyperseries,
)
from .mollifier import get_mollifier

SAMPLE_DENSE = 64


class PreconditionError(ValueError):
    pass


@dataclass
class WeakCertificate:
    Q: int
    R: int
    source: str = "sampled"
    samples: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {"Q": self.Q, "R": self.R, "source": self.source, "samples": self.samples}


class HpsCoefficients:
    """Coefficient net ``coeff(n, p)`` with optional analytic side information.

    term(n, y, p)            a_n y^n, when a stabler form than the product exists
    sum_fn(y, p)             classical sum of a_n y^n (number or Ball)
    deriv_fn(y, p)           classical sum of n a_n y^(n-1)
    tail_majorant(n, t, p)   bound on sum_{j>n} |a_j| t^j, or None while not valid
    partial(N, y, p)         closed-form partial sum up to N
    exact_limsup(p)          limsup |a_n|^(1/n)
    max_index                last known coefficient for table families
    """

    def __init__(self, gauge: Gauge, coeff: Callable[[int, GridPoint], Any], label: str = "", *,
                 cert_weak: WeakCertificate | None = None,
                 term: Callable | None = None, sum_fn: Callable | None = None,
                 deriv_fn: Callable | None = None, tail_majorant: Callable | None = None,
                 partial: Callable | None = None, exact_limsup: Callable | None = None,
                 max_index: int | None = None):
        self.gauge = gauge
        self.coeff = coeff
        self.label = label
        self.cert_weak = cert_weak
        self._term = term
        self.sum_fn = sum_fn
        self.deriv_fn = deriv_fn
        self.tail_majorant = tail_majorant
        self.partial = partial
        self.exact_limsup = exact_limsup
        self.max_index = max_index
        self.radius_net: RadiusReport | None = None

    def __repr__(self) -> str:
        return f"HpsCoefficients({self.label})"

    @classmethod
    def from_expr(cls, gauge: Gauge, source: str, label: str = "") -> "HpsCoefficients":
        expr = compile_expr(source, ("n", "eps", "rho", "k"))
        return cls(gauge, lambda n, p: expr(p.m, n=n, eps=p.eps, rho=p.rho, k=p.k), label or source)

    def value(self, n: int, p: GridPoint):
        if self.max_index is not None and n > self.max_index:
            raise Unavailable(f"coefficient {n} beyond table end {self.max_index}")
        return p.m.mpc(self.coeff(n, p))

    def log_abs(self, n: int, p: GridPoint) -> float:
        v = abs(self.value(n, p))
        return -math.inf if v == 0 else float(p.m.log(v))

    def term(self, n: int, y, p: GridPoint):
        if self._term is not None:
            return p.m.mpc(self._term(n, y, p))
        return self.value(n, p) * y**n

    def at(self, n: int) -> GenComplex:
        return self.gauge.net(lambda p: self.value(n, p), f"{self.label}[{n}]")


# -- weak moderateness ----------------------------------------------------------


def coefficient_samples(gauge: Gauge, p: GridPoint, top: int | None = None) -> list[int]:
    top = gauge.Q_max + 1 if top is None else top
    pts = set(range(SAMPLE_DENSE + 1))
    for j in range(1, top + 1):
        n = rpi(p.rho ** -j)
        pts |= {n, n + 1}
    return sorted(pts)


def _exponents(a: HpsCoefficients, index: int) -> list[tuple[int, float, float]]:
    """(n, log|a_n| / log rho^-1 - n Q, resolution) over the sample at one grid point, per Q.

    The exponent is formed at working precision; `resolution` is its absolute uncertainty,
    which grows with n because only the relative error of log|a_n| is controlled.
    """
    g = a.gauge
    p = g.points[index]
    m = p.m
    ulp = m.ldexp(1, -m.prec + 16)
    out = []
    for n in coefficient_samples(g, p):
        if a.max_index is not None and n > a.max_index:
            continue
        v = abs(a.value(n, p))
        if v == 0:
            out.append((n, None, 0.0))
            continue
        e = m.log(v) / p.log_rho_inv
        out.append((n, e, float(abs(e) * ulp)))
    return out


def check_weak_moderate(a: HpsCoefficients) -> WeakCertificate | None:
    """Smallest sampled (Q, R) with |a_n| <= rho^(-nQ-R) at every tail point, or None."""
    g = a.gauge
    rows = [row for i in g.tail for row in _exponents(a, i)]
    finite = [(n, e, tol) for n, e, tol in rows if e is not None]
    if any(not g.m.isfinite(e) for _, e, _ in finite):
        return None
    for Q in range(g.Q_max + 1):
        worst = max((float(e - n * Q) - tol for n, e, tol in finite), default=0.0)
        R = max(0, math.ceil(worst - 1e-9))
        if R <= g.Q_max:
            return WeakCertificate(Q, R, "sampled", len(rows))
    return None


def verify_bound(a: HpsCoefficients, Q: int, R: int, n_max: int = 64) -> dict[str, Any]:
    """Check |a_n| <= rho^(-nQ-R) for n <= n_max at every grid point."""
    g = a.gauge
    failures = []
    for p in g.points:
        for n in range(n_max + 1):
            if abs(a.value(n, p)) > p.rho ** -(n * Q + R):
                failures.append({"k": p.k, "n": n})
    return {"Q": Q, "R": R, "n_max": n_max, "holds": not failures, "failures": failures[:10]}


def check_strong_equiv(a: HpsCoefficients, b: HpsCoefficients) -> bool:
    """|a_n - b_n| <= rho^(n q + r) with q = r = q_max on the sample and tail."""
    g = a.gauge
    q = g.q_max
    for i in g.tail:
        p = g.points[i]
        for n in coefficient_samples(g, p, g.q_max + 1):
            if a.max_index is not None and n > a.max_index:
                continue
            if abs(a.value(n, p) - b.value(n, p)) > p.rho ** (n * q + q):
                return False
    return True


# -- radius ----------------------------------------------------------------------


@dataclass
class RadiusReport:
    net: GenComplex
    cls: str  # finite | infinite | mixed_subpoints | non_moderate
    limsup_cutoff: dict[int, Any] = field(default_factory=dict)
    routes: dict[int, str] = field(default_factory=dict)
    valuation: Any = None
    horizon: dict[str, Any] = field(default_factory=dict)

    def infinite_at(self, index: int) -> bool:
        return self.net.value(index).real == self.net.gauge.m.inf

    def to_dict(self) -> dict[str, Any]:
        return {
            "class": self.cls,
            "net": self.net.to_dict(),
            "limsup_cutoff": self.limsup_cutoff,
            "routes": self.routes,
            "valuation": self.valuation.to_dict() if self.valuation is not None else None,
            "evidence_horizon": self.horizon,
        }


WINDOWS = 6


def _estimate_log_limsup(a: HpsCoefficients, p: GridPoint, budget: int) -> tuple[float, tuple[int, int], str]:
    n_max = max(16, min(rpi(1 / p.rho), budget))
    if a.max_index is not None:
        n_max = min(n_max, a.max_index)
    n_min = max(1, n_max // 4)
    ns = np.arange(n_min, n_max + 1)
    logs = np.array([a.log_abs(int(n), p) / n for n in ns])
    edges = np.linspace(0, len(ns), WINDOWS + 1).astype(np.int64)
    maxima = _kernels.window_maxima(logs, edges)
    route = "estimated"
    finite = maxima[np.isfinite(maxima)]
    if len(finite) == WINDOWS and np.all(np.diff(finite) < 0) and np.exp(finite[-1] - finite[0]) < 0.5:
        route = "estimated: window maxima decrease towards 0"
        return -math.inf, (n_min, n_max), route
    return float(maxima[-1]), (n_min, n_max), route


def radius(a: HpsCoefficients) -> RadiusReport:
    g = a.gauge
    budget = g.settings.radius_budget
    cut: dict[int, Any] = {}
    routes: dict[int, str] = {}
    values = []
    for p in g.points:
        m = p.m
        if a.exact_limsup is not None:
            L = m.mpf(a.exact_limsup(p))
            r = m.inf if L == 0 else 1 / L
            cut[p.k], routes[p.k] = "exact", "registered limsup"
        else:
            logL, window, route = _estimate_log_limsup(a, p, budget)
            r = m.inf if logL == -math.inf else m.exp(-m.mpf(logL))
            cut[p.k], routes[p.k] = list(window), route
        values.append(r)
    net = g.from_values(values, f"rad({a.label})")
    tail_inf = [values[i] == g.m.inf for i in g.tail]
    rep = None
    if all(tail_inf):
        cls = "infinite"
    elif any(tail_inf):
        cls = "mixed_subpoints"
    else:
        rep = valuation(net)
        cls = "finite" if rep.cls in ("moderate", "negligible") else "non_moderate"
        if cls == "finite" and valuation(g.net(lambda p: 1 / values[p.index])).cls == "non_moderate":
            cls = "non_moderate"
    out = RadiusReport(net, cls, cut, routes, rep, g.horizon())
    a.radius_net = out
    return out


def radius_between(q: GenComplex, r: GenComplex, power: int) -> GenComplex:
    """s = min(r, q + 2 rho^power): a net with q < s <= r once rho^power is below r - q."""
    return q.gauge.net(
        lambda p: Ball(min(r.value(p.index).real, q.value(p.index).real + 2 * p.rho**power),
                       max(q.error(p.index), r.error(p.index))),
        f"min({r.label}, {q.label}+2rho^{power})",
    )


# -- classical per-eps sums ----------------------------------------------------------


def _running_sum(a: HpsCoefficients, y, p: GridPoint, deriv: bool) -> Ball:
    m = p.m
    t = abs(y)
    budget = a.gauge.settings.partial_sum_budget
    floor = m.ldexp(1, -(m.prec - 16))
    small = p.rho ** (a.gauge.q_max + 4)
    acc = m.mpc(0)
    quiet = 0
    for n in range(budget + 1):
        if deriv:
            term = n * a.term(n, y, p) / y if n and y != 0 else (a.value(1, p) if n == 1 else 0)
        else:
            term = a.term(n, y, p)
        acc += term
        scale = floor * max(abs(acc), small)
        if a.tail_majorant is not None and not deriv:
            tb = a.tail_majorant(n, t, p)
            if tb is not None and tb <= scale:
                return Ball(acc, tb)
        if a.max_index is not None and n >= a.max_index:
            tb = a.tail_majorant(n, t, p, deriv) if a.tail_majorant is not None else None
            if tb is None:
                raise Unavailable(f"table ends at n={n} without a tail bound (k={p.k})")
            return Ball(acc, tb)
        quiet = quiet + 1 if abs(term) <= scale else 0
        if n >= 32 and quiet >= 16:
            return Ball(acc, abs(term) * 16)
        if not m.isfinite(abs(acc)):
            break
    raise Unavailable(f"classical sum did not settle within {budget} terms at k={p.k}")


def classical_sum(a: HpsCoefficients, c: Any, z: Any) -> GenComplex:
    """Net of per-eps sums sum_n a_n (z - c)^n."""
    g = a.gauge
    c, z = g.const(c), g.const(z)

    def fn(p: GridPoint):
        y = z.value(p.index) - c.value(p.index)
        if a.sum_fn is not None:
            return a.sum_fn(y, p)
        return _running_sum(a, y, p, deriv=False)

    return g.net(fn, f"sum {a.label}")


def classical_derivative(a: HpsCoefficients, c: Any, z: Any) -> GenComplex:
    g = a.gauge
    c, z = g.const(c), g.const(z)

    def fn(p: GridPoint):
        y = z.value(p.index) - c.value(p.index)
        if a.deriv_fn is not None:
            return a.deriv_fn(y, p)
        return _running_sum(a, y, p, deriv=True)

    return g.net(fn, f"d/dz sum {a.label}")


hps_eval = classical_sum


def hps_series(a: HpsCoefficients, c: Any, z: Any) -> SeriesSequence:
    """The hyperseries with terms a_n (z - c)^n."""
    g = a.gauge
    c, z = g.const(c), g.const(z)
    ys: dict[int, Any] = {}

    def y_of(p: GridPoint):
        y = ys.get(p.index)
        if y is None:
            y = ys[p.index] = z.value(p.index) - c.value(p.index)
        return y

    tail = None
    if a.tail_majorant is not None:
        tail = lambda n, p: a.tail_majorant(n, abs(y_of(p)), p)
    elif a.cert_weak is not None:
        Q, R = a.cert_weak.Q, a.cert_weak.R

        def tail(n, p):
            x = abs(y_of(p)) * p.rho**-Q
            return p.rho**-R * x ** (n + 1) / (1 - x) if x <= 0.5 else None

    partial = None
    if a.partial is not None:
        partial = lambda N, p: a.partial(N, y_of(p), p)
    return SeriesSequence(g, lambda n, p: a.term(n, y_of(p), p), f"{a.label}(z-c)^n",
                          partial=partial, tail_bound=tail)


# -- set of convergence -------------------------------------------------------------


@dataclass
class SetConvMembership:
    cond_radius: bool
    cond_formal: bool
    cond_sum: bool
    cond_deriv: bool
    witnesses: dict[str, Any] = field(default_factory=dict)
    value: GenComplex | None = None
    horizon: dict[str, Any] = field(default_factory=dict)

    @property
    def member(self) -> bool:
        return self.cond_radius and self.cond_formal and self.cond_sum and self.cond_deriv

    def to_dict(self) -> dict[str, Any]:
        return {
            "member": self.member,
            "cond_radius": self.cond_radius,
            "cond_formal": self.cond_formal,
            "cond_sum": self.cond_sum,
            "cond_deriv": self.cond_deriv,
            "witnesses": self.witnesses,
            "value": self.value.to_dict() if self.value is not None else None,
            "evidence_horizon": self.horizon,
        }


def _inside_radius(a: HpsCoefficients, dist: GenComplex) -> tuple[bool, list[int]]:
    rad = a.radius_net or radius(a)
    g = a.gauge
    bad = []
    for i in g.tail:
        r = rad.net.value(i).real
        if r == g.m.inf:
            continue
        if not dist.abs_upper(i) + g.rho_power(i, g.Q_max) <= r:
            bad.append(g.points[i].k)
    return not bad, bad


def setconv_membership(a: HpsCoefficients, c: Any, z: Any) -> SetConvMembership:
    g = a.gauge
    if a.cert_weak is None:
        raise PreconditionError("coefficients carry no weak moderateness certificate")
    c, z = g.const(c), g.const(z)
    dist = abs(z - c)
    w: dict[str, Any] = {}
    ok_rad, bad = _inside_radius(a, dist)
    w["radius"] = {"class": a.radius_net.cls, "failing_k": bad}

    series = hps_series(a, c, z)
    cert = check_moderate_over_hypersums(series)
    ok_formal = bool(cert)
    w["formal"] = {"status": cert.status, "witness": cert.witness, "exponents": cert.exponents}

    ok_sum, value = False, None
    if ok_formal:
        res = sum_hyperseries(series)
        w["sum"] = {"status": res.status, "method": res.witnesses.get("partial_sum_method")}
        if res.status == CONVERGES:
            classical = classical_sum(a, c, z)
            try:
                agree = (res.value - classical).is_negligible()
            except Unavailable as exc:
                agree = False
                w["sum"]["classical"] = str(exc)
            ok_sum, value = agree, res.value
            w["sum"]["agrees_with_classical"] = agree
    else:
        w["sum"] = {"status": "skipped: not a formal HPS"}

    deriv = classical_derivative(a, c, z)
    rep = valuation(deriv)
    ok_deriv = rep.cls in ("moderate", "negligible")
    w["deriv"] = {"class": rep.label}
    if ok_deriv:
        w["deriv"]["representative_independence"] = _independence_probe(a, c, z, rep.Q or 0)
    return SetConvMembership(ok_rad, ok_formal, ok_sum, ok_deriv, w, value, g.horizon())


def _independence_probe(a: HpsCoefficients, c: GenComplex, z: GenComplex, q_deriv: int) -> bool | None:
    """Re-evaluate the classical sum at z + rho^(q_max + Q' + 1) and compare."""
    g = a.gauge
    shift = g.q_max + q_deriv + 1
    z2 = z + g.net(lambda p: p.rho**shift * p.m.expjpi(p.m.mpf(1) / 4), f"rho^{shift}")
    try:
        return (classical_sum(a, c, z2) - classical_sum(a, c, z)).is_negligible()
    except Unavailable:
        return None


# -- balls, bounds and disks ------------------------------------------------------------


@dataclass
class NonEmptyBall:
    q: int
    q_radius: int
    verified: bool
    points: list[dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {"q": self.q, "q_radius": self.q_radius, "verified": self.verified, "points": self.points}


def nonempty_ball(a: HpsCoefficients, c: Any = 0, samples: int = 10, seed: int | None = None) -> NonEmptyBall:
    """q = max(1 + Q, q1) with rad >= rho^q1, checked by membership at random z in B_{rho^q}(c)."""
    g = a.gauge
    if a.cert_weak is None:
        raise PreconditionError("coefficients carry no weak moderateness certificate")
    rad = a.radius_net or radius(a)
    q1 = 0
    for i in g.tail:
        r = rad.net.value(i).real
        if r == g.m.inf:
            continue
        while q1 <= g.Q_max and r < g.rho_power(i, q1):
            q1 += 1
    q = max(1 + a.cert_weak.Q, q1)
    rng = np.random.default_rng(g.settings.seed if seed is None else seed)
    c = g.const(c)
    pts, ok = [], True
    for _ in range(samples):
        mod, arg = 0.95 * math.sqrt(rng.random()), 2 * math.pi * rng.random()
        u = complex(mod * math.cos(arg), mod * math.sin(arg))
        z = c + g.net(lambda p, u=u: p.rho**q * p.m.mpc(u), f"rho^{q}*{u:.3f}")
        mem = setconv_membership(a, c, z)
        pts.append({"u": [u.real, u.imag], "member": mem.member})
        ok = ok and mem.member
    return NonEmptyBall(q, q1, ok, pts)


@dataclass
class EventualBound:
    K: GenComplex
    Q: int
    sup: GenComplex

    def to_dict(self) -> dict[str, Any]:
        return {"K": f"rho^-{self.Q}", "Q": self.Q, "sup": self.sup.to_dict()}


def eventually_bounded(a: HpsCoefficients, c: Any, z: Any) -> EventualBound | None:
    """K = rho^-Q with |a_n (z - c)^n| <= K on the sample, Q smallest; None if no moderate K."""
    g = a.gauge
    c, z = g.const(c), g.const(z)

    def sup(p: GridPoint):
        y = z.value(p.index) - c.value(p.index)
        best = p.m.zero
        for n in coefficient_samples(g, p):
            if a.max_index is not None and n > a.max_index:
                continue
            best = max(best, abs(a.term(n, y, p)))
        return best

    s = g.net(sup, f"sup_n |a_n (z-c)^n|")
    rep = valuation(s)
    if rep.cls == "negligible":
        Q = 0
    elif rep.cls == "moderate":
        Q = rep.Q
    else:
        return None
    return EventualBound(g.d_rho(-Q), Q, s)


def disk_expansion(a: HpsCoefficients, c: Any, z_hat: Any, z: Any, samples: int = 8) -> ConvergenceResult:
    """Absolute convergence at z from eventual boundedness at z_hat, via the majorant K h^n."""
    g = a.gauge
    c, z_hat, z = g.const(c), g.const(z_hat), g.const(z)
    rad_hat, rad_z = abs(z_hat - c), abs(z - c)
    ratio = {}
    for i in g.tail:
        big = rad_hat.abs_lower(i)
        h = rad_z.abs_upper(i) / big if big > 0 else g.m.inf
        if not h < 1:
            raise PreconditionError(f"h = |z-c|/|z_hat-c| is not < 1 at k={g.points[i].k}")
        ratio[i] = h
    bound = eventually_bounded(a, c, z_hat)
    if bound is None:
        raise PreconditionError("terms at z_hat are not eventually bounded")

    def h_of(p: GridPoint):
        return abs(z.value(p.index) - c.value(p.index)) / abs(z_hat.value(p.index) - c.value(p.index))

    Q = bound.Q
    series = hps_series(a, c, z)
    majorant = lambda n, p: p.rho**-Q * h_of(p) ** (n + 1) / (1 - h_of(p))
    series.tail_bound = majorant
    series._sums.state.clear()
    out = sum_hyperseries(series)
    if out.status == CONVERGES:
        out.status = "converges_absolutely"
    out.method = "geometric majorant K h^n from eventual boundedness"
    out.witnesses["K"] = f"rho^-{Q}"
    out.witnesses["uniform_on_circle"] = _uniform_evidence(a, c, rad_z, majorant, samples)
    out.witnesses["interior_radius"] = (rad_hat - rad_z).to_dict()
    return out


def _uniform_evidence(a: HpsCoefficients, c: GenComplex, rad: GenComplex, majorant: Callable, samples: int) -> dict[str, Any]:
    """First ladder N where sup over circle points of |S_N - S| is below rho^q_max."""
    g = a.gauge
    for N in hyper_ladder(g):
        good = True
        for i in g.tail:
            p = g.points[i]
            if majorant(N[i], p) > g.rho_power(i, g.q_max):
                good = False
                break
        if good:
            worst = {}
            for i in g.tail:
                p, m = g.points[i], g.points[i].m
                sup = m.zero
                if N[i] > 4096:
                    continue
                for j in range(samples):
                    y = rad.value(i) * m.expjpi(m.mpf(2 * j) / samples)
                    part = m.fsum(a.term(n, y, p) for n in range(N[i] + 1))
                    sup = max(sup, abs(part - _point_sum(a, y, p)))
                worst[p.k] = float(sup)
            return {"N": N.label, "majorant_below_rho^q_max": True, "sampled_sup": worst}
    return {"N": None, "majorant_below_rho^q_max": False}


def _point_sum(a: HpsCoefficients, y, p: GridPoint):
    if a.sum_fn is not None:
        v = a.sum_fn(y, p)
        return v.center if isinstance(v, Ball) else p.m.mpc(v)
    return _running_sum(a, y, p, deriv=False).center


# -- built-in families ------------------------------------------------------------------


def geometric(gauge: Gauge) -> HpsCoefficients:
    def tail(n, t, p, deriv=False):
        return t ** (n + 1) / (1 - t) if t < 1 else None

    def partial(N, y, p):
        return (1 - y ** (N + 1)) / (1 - y) if y != 1 else N + 1

    return HpsCoefficients(
        gauge, lambda n, p: 1, "geometric",
        cert_weak=WeakCertificate(0, 0, "closed form"),
        sum_fn=lambda y, p: 1 / (1 - y), deriv_fn=lambda y, p: 1 / (1 - y) ** 2,
        tail_majorant=tail, partial=partial, exact_limsup=lambda p: 1,
    )


def _exp_term(n, y, p):
    m = p.m
    if n == 0:
        return m.mpc(1)
    if y == 0:
        return m.mpc(0)
    return m.exp(n * m.log(y) - m.loggamma(n + 1))


def exponential(gauge: Gauge) -> HpsCoefficients:
    def tail(n, t, p, deriv=False):
        r = t / (n + 2)
        if r >= 0.5:
            return None
        return abs(_exp_term(n + 1, t, p)) / (1 - r)

    return HpsCoefficients(
        gauge, lambda n, p: p.m.exp(-p.m.loggamma(n + 1)), "exponential",
        cert_weak=WeakCertificate(0, 0, "closed form"),
        term=_exp_term, sum_fn=lambda y, p: p.m.exp(y), deriv_fn=lambda y, p: p.m.exp(y),
        tail_majorant=tail, exact_limsup=lambda p: 0,
    )


def delta_value(p: GridPoint, w, order: int = 0, mollifier: str = "plateau") -> Ball:
    """delta_eps^(order)(w) = rho^(-2-order) mu^(order)(w / rho)."""
    m = p.m
    mol = get_mollifier(mollifier)
    val, err = mol.mu(m.mpc(w) / p.rho, order, m)
    scale = p.rho ** (-2 - order)
    return Ball(val * scale, err * scale)


def dirac_delta(gauge: Gauge, mollifier: str = "plateau") -> HpsCoefficients:
    """Taylor coefficients at 0 of delta_eps(w) = rho^-2 mu(w / rho)."""
    mol = get_mollifier(mollifier)

    def coeff(n, p):
        m = p.m
        if n % 2:
            return m.mpc(0)
        return mol.mu_deriv_at_zero(n, m) * m.exp(-(n + 2) * m.log(p.rho) - m.loggamma(n + 1))

    def term(n, y, p):
        m = p.m
        if n % 2:
            return m.mpc(0)
        if n == 0:
            return coeff(0, p)
        if y == 0:
            return m.mpc(0)
        return mol.mu_deriv_at_zero(n, m) * m.exp(n * m.log(y / p.rho) - 2 * m.log(p.rho) - m.loggamma(n + 1))

    def tail(n, t, p, deriv=False):
        # |mu^(j)(0)| <= m_j / 2pi <= 1 / (pi (j + 1))
        m = p.m
        x = t / p.rho
        r = x / (n + 2)
        if r >= 0.5:
            return None
        head = p.rho**-2 / m.pi * m.exp((n + 1) * m.log(x) - m.loggamma(n + 2)) if x > 0 else m.zero
        return head / (1 - r)

    return HpsCoefficients(
        gauge, coeff, f"delta[{mollifier}]",
        cert_weak=WeakCertificate(2, 2, "analytic bound rho^(-2n-2)"),
        term=term,
        sum_fn=lambda y, p: delta_value(p, y, 0, mollifier),
        deriv_fn=lambda y, p: delta_value(p, y, 1, mollifier),
        tail_majorant=tail, exact_limsup=lambda p: 0,
    )


BUILTINS = {"geometric": geometric, "exponential": exponential, "exp": exponential,
            "dirac_delta": dirac_delta, "delta": dirac_delta}


def builtin(name: str, gauge: Gauge, **params: Any) -> HpsCoefficients:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; known: {sorted(BUILTINS)}") from None
    return factory(gauge, **params)
