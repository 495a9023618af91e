"""Nets of holomorphic functions: contour coefficients, Liouville, zeros, continuation.

Taylor coefficients come from the trapezoidal rule on the circle
``z0 + R e^{2 pi i j / M}``.  The node count doubles from
``contour_nodes_min`` until the scaled coefficients ``|a_n| R^n`` of two
successive rules agree to ``min(contour_rtol, rho^(q_max+1))`` relative to
the largest sampled ``|f|``.  Truncated series are re-evaluated through the
geometric closed form of ``sum_n (y / (R w_j))^n``, so no coefficient table
larger than the node count is ever formed.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .expr import compile_expr
from .gauge_net import Ball, Gauge, GenComplex, GridPoint, Unavailable, valuation
from .hps import HpsCoefficients, PreconditionError, WeakCertificate, check_weak_moderate, delta_value
from .hyperseq import CONVERGES, HyperSequence, hyperlimit
from .hypernat import rpi
from .mollifier import get_mollifier


class ContourError(ArithmeticError):
    pass


class ChainError(ValueError):
    pass


class GhfNet:
    """Per-eps holomorphic functions ``fn(w, p)`` on the disk ``|w - center| < radius``.

    ``scale(p)`` is a natural contour radius for nets concentrated at a
    small scale (the delta net uses rho).
    """

    def __init__(self, gauge: Gauge, fn: Callable[[Any, GridPoint], Any], label: str = "", *,
                 center: Any = 0, radius: Callable[[GridPoint], Any] | None = None,
                 scale: Callable[[GridPoint], Any] | None = None):
        self.gauge = gauge
        self.fn = fn
        self.label = label
        self.center = center
        self.radius = radius
        self.scale = scale

    def __repr__(self) -> str:
        return f"GhfNet({self.label})"

    @classmethod
    def from_expr(cls, gauge: Gauge, source: str, label: str = "", **kwargs: Any) -> "GhfNet":
        expr = compile_expr(source, ("w", "eps", "rho", "k"))
        return cls(gauge, lambda w, p: expr(p.m, w=w, eps=p.eps, rho=p.rho, k=p.k), label or source, **kwargs)

    def ball(self, w, p: GridPoint) -> Ball:
        raw = self.fn(p.m.mpc(w), p)
        if isinstance(raw, Ball):
            return Ball(p.m.mpc(raw.center), p.m.mpf(raw.radius))
        return Ball(p.m.mpc(raw), p.m.zero)

    def __call__(self, w, p: GridPoint):
        return self.ball(w, p).center

    def at(self, z: Any) -> GenComplex:
        z = self.gauge.const(z)
        return self.gauge.net(lambda p: self.ball(z.value(p.index), p), f"{self.label}({z.label})")

    def domain_radius(self, p: GridPoint):
        return p.m.inf if self.radius is None else p.m.mpf(self.radius(p))

    def inside(self, w, r, p: GridPoint) -> bool:
        """Closed disk of radius r around w inside the domain."""
        c = self.gauge.const(self.center).value(p.index)
        return abs(p.m.mpc(w) - c) + r < self.domain_radius(p)


# -- built-in nets -------------------------------------------------------------------


def geometric_kernel(gauge: Gauge) -> GhfNet:
    return GhfNet(gauge, lambda w, p: 1 / (1 - w), "1/(1-w)", radius=lambda p: 1)


def exponential(gauge: Gauge) -> GhfNet:
    return GhfNet(gauge, lambda w, p: p.m.exp(w), "exp")


def delta(gauge: Gauge, mollifier: str = "plateau") -> GhfNet:
    return GhfNet(gauge, lambda w, p: delta_value(p, w, 0, mollifier), f"delta[{mollifier}]",
                  scale=lambda p: p.rho)


def heaviside(gauge: Gauge, mollifier: str = "plateau") -> GhfNet:
    """w -> int_{-inf}^{w/rho} mu, the step smoothed at scale rho."""
    mol = get_mollifier(mollifier)

    def fn(w, p):
        val, err = mol.mu_antiderivative(p.m.mpc(w) / p.rho, p.m)
        return Ball(val, err)

    return GhfNet(gauge, fn, f"H[{mollifier}]", scale=lambda p: p.rho)


BUILTINS = {"geometric": geometric_kernel, "exp": exponential, "exponential": exponential,
            "delta": delta, "heaviside": heaviside}


def builtin(name: str, gauge: Gauge, **params: Any) -> GhfNet:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown function net {name!r}; known: {sorted(BUILTINS)}") from None
    return factory(gauge, **params)


# -- holomorphy probe ----------------------------------------------------------------


def cr_residual(f: GhfNet, w, p: GridPoint):
    """|f_x + i f_y| relative to max(|f_x|, |f|), by central differences."""
    m = p.m
    w = m.mpc(w)
    h = m.ldexp(1, -(m.prec // 3)) * max(1, abs(w))
    fx = (f(w + h, p) - f(w - h, p)) / (2 * h)
    fy = (f(w + 1j * h, p) - f(w - 1j * h, p)) / (2 * h)
    scale = max(abs(fx), abs(f(w, p)), m.ldexp(1, -m.prec // 2))
    return abs(fx + 1j * fy) / scale


def cr_probe(f: GhfNet, points: Sequence[Any], tol: float = 1e-12) -> dict[str, Any]:
    g = f.gauge
    worst = 0.0
    for i in g.tail:
        p = g.points[i]
        for w in points:
            worst = max(worst, float(cr_residual(f, g.const(w).value(i), p)))
    return {"max_residual": worst, "holomorphic": worst <= tol}


# -- Goursat coefficients -----------------------------------------------------------


class _Contour:
    """Trapezoidal rule on one circle at one grid point, refined by node doubling."""

    def __init__(self, f: GhfNet, z0, R, p: GridPoint, n_max: int):
        g = f.gauge
        s = g.settings
        self.f, self.p, self.m = f, p, p.m
        self.z0, self.R = p.m.mpc(z0), p.m.mpf(R)
        self.tol = min(p.m.mpf(s.contour_rtol), p.rho ** (g.q_max + 1))
        self.nodes_max = s.contour_nodes_max
        self.M = s.contour_nodes_min
        self.fvals: dict[tuple[int, int], Ball] = {}
        self.n_max = n_max
        self.disagreement = None
        self._refine()

    def _values(self, M: int) -> list[Ball]:
        m = self.m
        out = []
        for j in range(M):
            # key by the reduced fraction j / M so doubling reuses every other node
            gcd = math.gcd(j, M)
            key = (j // gcd, M // gcd)
            v = self.fvals.get(key)
            if v is None:
                w = self.z0 + self.R * m.expjpi(m.mpf(2 * j) / M)
                v = self.fvals[key] = self.f.ball(w, self.p)
            out.append(v)
        return out

    def coefficients(self, M: int, n_top: int) -> list:
        m = self.m
        vals = [v.center for v in self._values(M)]
        rot = [m.expjpi(m.mpf(-2 * j) / M) for j in range(M)]
        cur = [m.mpc(1)] * M
        out = []
        for n in range(n_top + 1):
            out.append(m.fsum(a * b for a, b in zip(vals, cur)) / M / self.R**n)
            cur = [a * b for a, b in zip(cur, rot)]
        return out

    def fmax(self, M: int | None = None):
        vals = self._values(M or self.M)
        return max(abs(v.center) + v.radius for v in vals)

    def _refine(self) -> None:
        m = self.m
        prev = self.coefficients(self.M, self.n_max) if self.M >= 2 * self.n_max + 2 else None
        while True:
            nxt = 2 * self.M
            if nxt > self.nodes_max:
                raise ContourError(
                    f"contour quadrature did not settle by {self.nodes_max} nodes at k={self.p.k}"
                    f" (disagreement {m.nstr(self.disagreement or m.inf, 5)})")
            cur = self.coefficients(nxt, self.n_max)
            if prev is not None:
                scale = self.fmax(nxt)
                diff = max(abs(a - b) * self.R**n for n, (a, b) in enumerate(zip(prev, cur)))
                self.disagreement = diff / scale if scale else diff
                if diff <= self.tol * scale:
                    self.M = nxt
                    return
            self.M, prev = nxt, cur

    def ensure(self, n: int) -> None:
        while self.M < 2 * n + 2:
            if 2 * self.M > self.nodes_max:
                raise Unavailable(f"coefficient {n} needs more than {self.nodes_max} nodes")
            self.M *= 2

    def truncated_sum(self, y, N: int, deriv: bool = False):
        """sum_{n<=N} a_n y^n (or its y-derivative) from the M-node rule in closed form."""
        m = self.m
        self.ensure(N)
        M = self.M
        vals = [v.center for v in self._values(M)]
        acc = m.mpc(0)
        for j, fj in enumerate(vals):
            w = self.R * m.expjpi(m.mpf(2 * j) / M)
            q = y / w
            if q == 1:
                acc += fj * ((N * (N + 1) / 2) / w if deriv else N + 1)
                continue
            qn = q ** (N + 1)
            if deriv:
                # d/dy sum_{n<=N} q^n = (1/w) d/dq (1 - q^{N+1}) / (1 - q)
                num = 1 - (N + 1) * q**N + N * qn
                acc += fj * num / ((1 - q) ** 2 * w)
            else:
                acc += fj * (1 - qn) / (1 - q)
        return acc / M


@dataclass
class GoursatResult:
    coefficients: HpsCoefficients
    nodes: dict[int, int] = field(default_factory=dict)
    disagreement: dict[int, float] = field(default_factory=dict)
    certificate: WeakCertificate | None = None
    warnings: list[str] = field(default_factory=list)
    horizon: dict[str, Any] = field(default_factory=dict)
    contour: Callable[[GridPoint], Any] | None = field(default=None, repr=False)

    def table(self, n_max: int) -> list[GenComplex]:
        return [self.coefficients.at(n) for n in range(n_max + 1)]

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.coefficients.label,
            "nodes": self.nodes,
            "disagreement": self.disagreement,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "warnings": self.warnings,
            "evidence_horizon": self.horizon,
        }


def goursat_coefficients(f: GhfNet, z0: Any = 0, R: Any = None, n_max: int = 32,
                         certify: bool = True) -> GoursatResult:
    """Taylor coefficients of f at z0 from the Cauchy integral over |w - z0| = R."""
    g = f.gauge
    z0 = g.const(z0)
    if R is None:
        R = g.net(lambda p: f.scale(p), "scale") if f.scale else g.const(0.5)
    R = g.const(R)
    contours: dict[int, _Contour] = {}
    lock = threading.Lock()

    def contour(p: GridPoint) -> _Contour:
        with lock:
            c = contours.get(p.index)
        if c is None:
            zc, rc = z0.value(p.index), R.value(p.index).real
            if not rc > 0:
                raise PreconditionError(f"contour radius not positive at k={p.k}")
            if not f.inside(zc, rc, p):
                raise PreconditionError(f"closed disk of radius R leaves the domain at k={p.k}")
            c = _Contour(f, zc, rc, p, n_max)
            with lock:
                contours.setdefault(p.index, c)
        return contours[p.index]

    def coeff(n, p):
        c = contour(p)
        c.ensure(n)
        cache = c.__dict__.setdefault("cache", {})
        key = (c.M, n)
        if key not in cache:
            top = max(n, c.n_max)
            for j, v in enumerate(c.coefficients(c.M, top)):
                cache[(c.M, j)] = v
        return cache[key]

    def _tail(N, t, p, deriv=False):
        c = contour(p)
        x = t / c.R
        if x >= 1:
            return None
        fmax = c.fmax()
        if deriv:
            return fmax / c.R * (N + 2) * x ** (N + 1) / (1 - x) ** 2
        return fmax * x ** (N + 1) / (1 - x)

    def _sum(y, p, deriv=False):
        c = contour(p)
        m = p.m
        x = abs(y) / c.R
        if x >= 1:
            raise Unavailable(f"|z - z0| is not inside the contour at k={p.k}")
        fmax = c.fmax()
        goal = p.rho ** (g.q_max + 4) * max(fmax, 1)
        N = 0 if x == 0 else max(c.n_max, int(m.ceil(m.log(goal * (1 - x) / fmax) / m.log(x))) + 1) if fmax else 0
        N = min(N, c.nodes_max // 2 - 1)
        val = c.truncated_sum(m.mpc(y), N, deriv)
        quad = (c.disagreement or 0) * fmax / (1 - x) ** (2 if deriv else 1)
        return Ball(val, _tail(N, abs(y), p, deriv) + quad)

    coeffs = HpsCoefficients(
        g, coeff, f"goursat({f.label})",
        sum_fn=lambda y, p: _sum(y, p), deriv_fn=lambda y, p: _sum(y, p, True),
        tail_majorant=_tail, max_index=g.settings.contour_nodes_max // 2 - 1,
    )
    out = GoursatResult(coeffs, horizon=g.horizon())
    out.contour = contour
    for p in g.points:
        c = contour(p)
        out.nodes[p.k] = c.M
        out.disagreement[p.k] = float(c.disagreement) if c.disagreement is not None else 0.0
    if certify:
        cert = check_weak_moderate(_bounded_table(coeffs, n_max))
        if cert is None:
            out.warnings.append("coefficients are not certified weakly moderate")
        coeffs.cert_weak = cert
        out.certificate = cert
    return out


def _bounded_table(a: HpsCoefficients, n_max: int) -> HpsCoefficients:
    return HpsCoefficients(a.gauge, a.coeff, a.label, max_index=n_max)


# -- Liouville -------------------------------------------------------------------------


@dataclass
class LiouvilleResult:
    verdict: str  # constant | violated | inconclusive
    a0: GenComplex | None = None
    witness: dict[str, Any] | None = None
    decay: list[dict[str, Any]] = field(default_factory=list)
    horizon: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "a0": self.a0.to_dict() if self.a0 is not None else None,
            "witness": self.witness,
            "decay": self.decay,
            "evidence_horizon": self.horizon,
        }


def liouville_check(f: GhfNet, M_bound: Any, radii: Sequence[Any] | None = None,
                    n_check: int = 4, samples: int = 16) -> LiouvilleResult:
    """Bounded on the sampled circles, then coefficients a_1..a_n_check at growing radii."""
    g = f.gauge
    M_bound = g.const(M_bound)
    if radii is None:
        radii = [g.d_rho(-j) for j in range(g.q_max + 2)]
    radii = [g.const(r) for r in radii]
    out = LiouvilleResult("inconclusive", horizon=g.horizon())
    for r in radii:
        for i in g.tail:
            p, m = g.points[i], g.points[i].m
            bound = M_bound.value(i).real
            for j in range(samples):
                w = r.value(i).real * m.expjpi(m.mpf(2 * j) / samples)
                val = f.ball(w, p)
                if abs(val.center) - val.radius > bound:
                    out.verdict = "violated"
                    out.witness = {"k": p.k, "w": complex(w), "|f|": float(abs(val.center)), "M": float(bound)}
                    return out
    last = None
    for r in radii:
        res = goursat_coefficients(f, 0, r, n_max=n_check, certify=False)
        row = {"radius": r.label, "coefficients": {}}
        for n in range(1, n_check + 1):
            rep = valuation(res.coefficients.at(n))
            bound_rep = valuation(M_bound * g.net(lambda p, r=r, n=n: r.value(p.index) ** -n))
            row["coefficients"][n] = {"class": rep.label, "cauchy_bound": bound_rep.label}
        out.decay.append(row)
        last = res
    assert last is not None
    if all(valuation(last.coefficients.at(n)).cls == "negligible" for n in range(1, n_check + 1)):
        out.verdict = "constant"
        out.a0 = last.coefficients.at(0)
    return out


# -- zeros -------------------------------------------------------------------------------


@dataclass
class IsolationResult:
    status: str  # isolated_on_subpoint | not_applicable
    order: int | None = None
    L: list[int] = field(default_factory=list)
    radius: GenComplex | None = None
    witnesses: dict[str, Any] = field(default_factory=dict)
    horizon: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "order": self.order,
            "L": self.L,
            "radius": self.radius.to_dict() if self.radius is not None else None,
            "witnesses": self.witnesses,
            "evidence_horizon": self.horizon,
        }


def _default_radius(f: GhfNet, z0: GenComplex) -> GenComplex:
    g = f.gauge
    if f.scale is not None:
        return g.net(lambda p: f.scale(p), "scale")

    def fn(p):
        c = g.const(f.center).value(p.index)
        room = f.domain_radius(p) - abs(z0.value(p.index) - c)
        return min(p.m.mpf(1), room / 2)

    return g.net(fn, "min(1, room/2)")


def zero_isolation(f: GhfNet, z0: Any, R: Any = None, n_probe: int | None = None) -> IsolationResult:
    g = f.gauge
    n_probe = g.settings.n_probe if n_probe is None else n_probe
    z0 = g.const(z0)
    if not f.at(z0).is_negligible():
        raise PreconditionError("f(z0) is not negligible")
    R = _default_radius(f, z0) if R is None else g.const(R)
    res = goursat_coefficients(f, z0, R, n_max=n_probe, certify=False)
    a = res.coefficients
    out = IsolationResult("not_applicable", horizon=g.horizon())
    classes = {}
    order = None
    for n in range(1, n_probe + 1):
        cls = valuation(a.at(n)).cls
        classes[n] = cls
        if cls != "negligible":
            order = n
            break
    out.witnesses["derivative_classes"] = classes
    if order is None:
        out.witnesses["note"] = f"derivatives up to order {n_probe} are negligible: locally null to horizon"
        return out
    lead = a.at(order)
    L = [g.points[i].k for i in g.tail if lead.abs_lower(i) >= g.rho_power(i, g.Q_max)]

    def radius_fn(p):
        c = res.contour(p)
        # |g(z) - a_m| <= fmax / R^m * x / (1 - x) with x = r / R; ask for <= |a_m| / 2
        x = abs(lead.value(p.index)) * c.R**order / (2 * c.fmax())
        return c.R * x / (1 + x)

    radius = g.net(radius_fn, "isolation radius")
    out.status, out.order, out.L, out.radius = "isolated_on_subpoint", order, L, radius
    out.witnesses["leading_coefficient"] = valuation(lead).label
    out.witnesses["radius_class"] = valuation(radius).label
    return out


# -- identity principle ---------------------------------------------------------------


@dataclass
class ContinuationChain:
    centers: list[GenComplex]
    radii: list[GenComplex]

    def validate(self) -> None:
        if not self.centers or len(self.centers) != len(self.radii):
            raise ChainError("a chain needs as many radii as centers, at least one")
        g = self.centers[0].gauge
        for k, r in enumerate(self.radii, start=1):
            for i in g.tail:
                if not r.abs_lower(i) > 0 or r.value(i).imag != 0:
                    raise ChainError(f"radius {k} is not positive at k={g.points[i].k}")
        for k in range(len(self.centers) - 1):
            dist = abs(self.centers[k + 1] - self.centers[k])
            for i in g.tail:
                if not dist.abs_upper(i) + g.rho_power(i, g.Q_max) <= self.radii[k].value(i).real:
                    raise ChainError(f"center {k + 2} is not inside ball {k + 1} at k={g.points[i].k}")


def chain(gauge: Gauge, centers: Sequence[Any], radii: Sequence[Any]) -> ContinuationChain:
    return ContinuationChain([gauge.const(c) for c in centers], [gauge.const(r) for r in radii])


def _ball_points(c: GenComplex, r: GenComplex, samples: int = 8) -> list[GenComplex]:
    g = c.gauge
    pts = [c]
    for frac in (0.5, 0.9):
        for j in range(samples):
            pts.append(g.net(
                lambda p, frac=frac, j=j: c.value(p.index) + frac * r.value(p.index) * p.m.expjpi(p.m.mpf(2 * j) / samples),
                f"{c.label}+{frac}r e^(2pi i {j}/{samples})"))
    return pts


def ball_in_setconv(f: GhfNet, c: GenComplex, r: GenComplex, samples: int = 16) -> dict[str, Any]:
    """Cauchy majorant on |w - c| = 2r: the HPS at c converges on B_r(c) with terms below fmax 2^-n."""
    g = f.gauge

    def fmax(p):
        m = p.m
        best = m.zero
        cc, rr = c.value(p.index), 2 * r.value(p.index).real
        if not f.inside(cc, rr, p):
            return m.inf
        for j in range(samples):
            v = f.ball(cc + rr * m.expjpi(m.mpf(2 * j) / samples), p)
            best = max(best, abs(v.center) + v.radius)
        return best

    net = g.net(fmax, f"max |f| on |w-c|=2r")
    rep = valuation(net)
    return {"inside": rep.cls in ("negligible", "moderate"), "majorant_class": rep.label}


@dataclass
class ContinuationResult:
    status: str  # null_along_chain | obstructed | conflict
    k: int | None = None
    balls: list[dict[str, Any]] = field(default_factory=list)
    zeros: dict[str, Any] = field(default_factory=dict)
    conflict: dict[str, Any] | None = None
    horizon: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status if self.status != "obstructed" else f"obstructed({self.k})",
            "k": self.k,
            "balls": self.balls,
            "zeros": self.zeros,
            "conflict": self.conflict,
            "evidence_horizon": self.horizon,
        }


def _check_zeros(f: GhfNet, c1: GenComplex, zeros: HyperSequence) -> dict[str, Any]:
    g = f.gauge
    lim = hyperlimit(zeros)
    converges = lim.status == CONVERGES and lim.limit is not None and (lim.limit - c1).is_negligible()
    probes = [1, 2, 10] + [rpi(g.points[g.tail[-1]].rho ** -j) for j in (1, 2)]
    zero_ok, apart = True, True
    for n in probes:
        zn = zeros.at(n)
        zero_ok = zero_ok and f.at(zn).is_negligible()
        apart = apart and all(abs(zn - c1).abs_lower(i) > 0 for i in g.tail)
    return {"converges_to_c1": converges, "f_negligible_at_zeros": zero_ok, "apart_from_c1": apart}


def identity_continuation(f: GhfNet, path: ContinuationChain, zeros: HyperSequence) -> ContinuationResult:
    """Case I on the first ball, then ball by ball along the chain."""
    path.validate()
    g = f.gauge
    out = ContinuationResult("null_along_chain", horizon=g.horizon())
    out.zeros = _check_zeros(f, path.centers[0], zeros)
    if not all(out.zeros.values()):
        raise PreconditionError(f"zero sequence does not meet the hypotheses: {out.zeros}")
    for k, (c, r) in enumerate(zip(path.centers, path.radii), start=1):
        pre = ball_in_setconv(f, c, r)
        row = {"ball": k, "center": c.label, "radius": r.label, **pre}
        out.balls.append(row)
        if not pre["inside"]:
            out.status, out.k = "obstructed", k
            return out
        null = [f.at(w).is_negligible() for w in _ball_points(c, r)]
        row["null_on_samples"] = all(null)
        if not all(null):
            out.status, out.k = "conflict", k
            try:
                iso = zero_isolation(f, c)
                out.conflict = {"zero_isolation": iso.to_dict()}
            except PreconditionError as exc:
                out.conflict = {"zero_isolation": f"not run: {exc}"}
            return out
    return out
