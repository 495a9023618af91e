"""Sequences for hyperseries, hyperfinite sums and convergence tests.

Partial sums ``S_N = a_0 + ... + a_N`` are taken from a closed form when the
sequence registers one.  Otherwise they are accumulated per grid point and,
once a registered tail bound drops below working precision, frozen: every
larger ``N`` reuses the settled value.  Without a tail bound a plateau
heuristic is used and flagged; past the budget the point is unavailable.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Callable

from .gauge_net import (
    EQUAL, LESS, Ball, Gauge, GenComplex, GridPoint, NotInvertible, Unavailable,
    sharp_compare, valuation,
)
from .hypernat import HyperNatural
from .hyperseq import (
    CONVERGES, DIV_NEG, DIV_POS, INDETERMINATE, NO_LIMIT, HyperSequence, hyperlimit, ladder,
)

Term = Callable[[int, GridPoint], Any]


class UncertifiedSequence(ValueError):
    pass


@dataclass
class ModerateCertificate:
    status: str  # certified | failed | indeterminate
    max_exponent: int | None = None
    uniform: bool = False
    ladder: list[str] = field(default_factory=list)
    witness: str | None = None
    exponents: dict[str, int | None] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.status == "certified"


class SeriesSequence:
    """A two-index net ``a(n, eps)`` with optional analytic side information.

    partial(N, p)      closed-form partial sum a_0 + ... + a_N
    tail_bound(n, p)   bound on sum_{j>n} |a_j|, or None while not yet valid
    ratio_bound(k, p)  bound on sup_{n>=k} |a_{n+1}/a_n|
    root_bound(k, p)   bound on sup_{n>=k} |a_n|^(1/n)
    thresholds         {"ratio"|"root": p -> k_eps}
    """

    def __init__(self, gauge: Gauge, term: Term, label: str = "", *,
                 partial: Callable[[int, GridPoint], Any] | None = None,
                 tail_bound: Callable[[int, GridPoint], Any] | None = None,
                 ratio_bound: Callable[[int, GridPoint], Any] | None = None,
                 root_bound: Callable[[int, GridPoint], Any] | None = None,
                 thresholds: dict[str, Callable[[GridPoint], int]] | None = None,
                 nonnegative: bool = False):
        self.gauge = gauge
        self.term = term
        self.label = label
        self.partial = partial
        self.tail_bound = tail_bound
        self.ratio_bound = ratio_bound
        self.root_bound = root_bound
        self.thresholds = thresholds or {}
        self.nonnegative = nonnegative
        self.cert_moderate_over_hypersums: ModerateCertificate | None = None
        self.cert_uniform: ModerateCertificate | None = None
        self._sums = _PartialSums(self)

    def __repr__(self) -> str:
        return f"SeriesSequence({self.label})"

    def value(self, n: int, p: GridPoint):
        return p.m.mpc(self.term(n, p))

    def partial_sum(self, N: int, p: GridPoint) -> Ball:
        if N < 0:
            return Ball(p.m.mpc(0), p.m.zero)
        if self.partial is not None:
            return Ball(p.m.mpc(self.partial(N, p)), p.m.zero)
        return self._sums.at(N, p)

    def sum_method(self, p: GridPoint) -> str:
        if self.partial is not None:
            return "closed form"
        return self._sums.method(p)

    def terms(self) -> HyperSequence:
        return HyperSequence(self.gauge, self.term, f"a({self.label})")

    def partials(self) -> HyperSequence:
        return HyperSequence(self.gauge, lambda N, p: self.partial_sum(N, p).center, f"S({self.label})")

    # -- derived sequences --------------------------------------------------------

    def combine(self, other: "SeriesSequence", sign: int, label: str = "") -> "SeriesSequence":
        partial = None
        if self.partial is not None and other.partial is not None:
            partial = lambda N, p: self.partial(N, p) + sign * other.partial(N, p)
        tail = None
        if self.tail_bound is not None and other.tail_bound is not None:
            def tail(n, p):
                ta, tb = self.tail_bound(n, p), other.tail_bound(n, p)
                return None if ta is None or tb is None else ta + tb
        return SeriesSequence(
            self.gauge, lambda n, p: self.value(n, p) + sign * other.value(n, p),
            label or f"({self.label}{'+' if sign > 0 else '-'}{other.label})",
            partial=partial, tail_bound=tail,
        )

    def __sub__(self, other: "SeriesSequence") -> "SeriesSequence":
        return self.combine(other, -1)

    def __add__(self, other: "SeriesSequence") -> "SeriesSequence":
        return self.combine(other, 1)

    def absolute(self) -> "SeriesSequence":
        return SeriesSequence(self.gauge, lambda n, p: abs(self.value(n, p)), f"|{self.label}|",
                              tail_bound=self.tail_bound, ratio_bound=self.ratio_bound,
                              root_bound=self.root_bound, thresholds=self.thresholds, nonnegative=True)

    def shifted(self, shift: int) -> "SeriesSequence":
        partial = None
        if self.partial is not None:
            partial = lambda N, p: self.partial(N + shift, p) - self.partial(shift - 1, p) if shift else self.partial(N, p)
        tail = None
        if self.tail_bound is not None:
            tail = lambda n, p: self.tail_bound(n + shift, p)
        return SeriesSequence(self.gauge, lambda n, p: self.term(n + shift, p), f"{self.label}[+{shift}]",
                              partial=partial, tail_bound=tail, nonnegative=self.nonnegative)


class _PartialSums:
    """Per-point running sums with tail-bound or plateau settling."""

    PLATEAU_RUN = 16

    def __init__(self, seq: SeriesSequence):
        self.seq = seq
        self.state: dict[int, dict[str, Any]] = {}
        self.lock = threading.Lock()

    def _state(self, p: GridPoint) -> dict[str, Any]:
        with self.lock:
            st = self.state.get(p.index)
            if st is None:
                st = {"cum": [], "settled": None, "quiet": 0}
                self.state[p.index] = st
            return st

    def method(self, p: GridPoint) -> str:
        st = self._state(p)
        if st["settled"] is None:
            return "running sum"
        return st["settled"][3]

    def at(self, N: int, p: GridPoint) -> Ball:
        st = self._state(p)
        m = p.m
        cum = st["cum"]
        budget = self.seq.gauge.settings.partial_sum_budget
        floor = m.ldexp(1, -(m.prec - 16))
        small = p.rho ** (self.seq.gauge.q_max + 4)
        while st["settled"] is None and len(cum) <= N and len(cum) <= budget:
            n = len(cum)
            a = m.mpc(self.seq.term(n, p))
            s = (cum[-1] if cum else m.mpc(0)) + a
            cum.append(s)
            scale = floor * max(abs(s), small)
            if self.seq.tail_bound is not None:
                tb = self.seq.tail_bound(n, p)
                if tb is not None and tb <= scale:
                    st["settled"] = (n, s, m.mpf(tb), "certified tail bound")
            else:
                st["quiet"] = st["quiet"] + 1 if abs(a) <= scale else 0
                st["last"] = abs(a)
        if N < len(cum):
            return Ball(cum[N], m.zero)
        if st["settled"] is None:
            # a quiet run is only trusted past the budget: terms may switch on at n ~ 1/eps
            if self.seq.tail_bound is None and len(cum) > 32 and st["quiet"] >= self.PLATEAU_RUN:
                st["settled"] = (len(cum) - 1, cum[-1], st["last"] * self.PLATEAU_RUN, "heuristic plateau")
            else:
                raise Unavailable(f"partial-sum budget {budget} exhausted at k={p.k}")
        n_cut, s_cut, tb, _ = st["settled"]
        return Ball(s_cut, tb)


# -- hypersums and certificates ----------------------------------------------------


def hyper_ladder(gauge: Gauge) -> list[HyperNatural]:
    out = [HyperNatural.constant(gauge, n) for n in (0, 1, 2, 10)]
    top = gauge.q_max + gauge.settings.ceiling_margin + 1
    out += [HyperNatural.gauge_power(gauge, j) for j in range(1, top + 1)]
    return out


def _as_hypernat(gauge: Gauge, n: HyperNatural | int) -> HyperNatural:
    return n if isinstance(n, HyperNatural) else HyperNatural.constant(gauge, int(n))


def _window(a: SeriesSequence, N: HyperNatural, M: HyperNatural, label: str) -> GenComplex:
    def fn(p: GridPoint):
        lo, hi = N[p.index], M[p.index]
        if hi < lo:
            return 0
        top, bottom = a.partial_sum(hi, p), a.partial_sum(lo - 1, p)
        return Ball(top.center - bottom.center, top.radius + bottom.radius)

    return a.gauge.net(fn, label)


def hypersum(a: SeriesSequence, N: HyperNatural | int, M: HyperNatural | int) -> GenComplex:
    """Net eps -> a_{N_eps} + ... + a_{M_eps} (zero when M < N)."""
    if not a.cert_moderate_over_hypersums:
        raise UncertifiedSequence("uncertified sequence: run check_moderate_over_hypersums first")
    g = a.gauge
    N, M = _as_hypernat(g, N), _as_hypernat(g, M)
    return _window(a, N, M, f"sum_{N.label}^{M.label} {a.label}")


def check_moderate_over_hypersums(a: SeriesSequence) -> ModerateCertificate:
    g = a.gauge
    lad = hyper_ladder(g)
    cert = ModerateCertificate("certified", ladder=[n.label for n in lad])
    for N in lad:
        rep = valuation(HyperSequence(g, a.term).at(N))
        if rep.cls == "non_moderate":
            cert.status, cert.witness = "failed", f"single term a_N at N={N.label} is non-moderate"
            break
    if cert.status == "certified":
        zero = HyperNatural.constant(g, 0)
        for N in lad:
            rep = valuation(_window(a, zero, N, f"S_{N.label}"))
            cert.exponents[N.label] = rep.Q if rep.cls == "moderate" else (0 if rep.cls == "negligible" else None)
            if rep.cls == "indeterminate":
                cert.status, cert.witness = "indeterminate", f"S_N at N={N.label}: {'; '.join(rep.diagnostics)}"
                break
            if rep.cls == "non_moderate":
                cert.status, cert.witness = "failed", f"S_N at N={N.label} is non-moderate"
                break
    if cert.status == "certified":
        exps = list(cert.exponents.values())
        cert.max_exponent = max(exps)
        powers = exps[4:]
        cert.uniform = all(e <= powers[0] for e in powers) if powers else True
    a.cert_moderate_over_hypersums = cert
    a.cert_uniform = cert if cert.uniform else None
    return cert


def check_negligible_pair(a: SeriesSequence, b: SeriesSequence) -> bool | None:
    """Whether every sampled hypersum of a - b is negligible (None if undecidable)."""
    diff = a - b
    zero = HyperNatural.constant(a.gauge, 0)
    for N in hyper_ladder(a.gauge):
        cls = valuation(_window(diff, zero, N, "")).cls
        if cls == "indeterminate":
            return None
        if cls != "negligible":
            return False
    return True


# -- convergence -----------------------------------------------------------------


@dataclass
class ConvergenceResult:
    status: str
    value: GenComplex | None = None
    method: str = ""
    L: GenComplex | None = None
    witnesses: dict[str, Any] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)
    horizon: dict[str, Any] = field(default_factory=dict)

    @property
    def converges(self) -> bool:
        return self.status in (CONVERGES, "converges_absolutely")

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "value": self.value.to_dict() if self.value is not None else None,
            "method": self.method,
            "L": self.L.to_dict() if self.L is not None else None,
            "witnesses": {k: (v.to_dict() if hasattr(v, "to_dict") else v) for k, v in self.witnesses.items()},
            "diagnostics": self.diagnostics,
            "evidence_horizon": self.horizon,
        }


def terms_tend_to_zero(a: SeriesSequence) -> bool:
    res = hyperlimit(a.terms())
    return res.status == CONVERGES and res.limit is not None and res.limit.is_negligible()


def sum_hyperseries(a: SeriesSequence, gauge: Gauge | None = None) -> ConvergenceResult:
    g = gauge or a.gauge
    cert = a.cert_moderate_over_hypersums or check_moderate_over_hypersums(a)
    out = ConvergenceResult(INDETERMINATE, method="hyperlimit of partial sums", horizon=g.horizon())
    if not cert:
        out.diagnostics.append(f"not moderate over hypersums: {cert.witness}")
    filter_ok = terms_tend_to_zero(a)
    if not filter_ok:
        out.diagnostics.append("terms do not tend to 0")
    res = hyperlimit(a.partials(), g)
    out.status = res.status
    out.diagnostics += res.diagnostics
    out.witnesses = {f"M({q})": w for q, w in res.witnesses.items()}
    if res.status == CONVERGES:
        if not filter_ok:
            out.status = NO_LIMIT
            out.diagnostics.append("partial sums settle on the ladder but the term filter fails")
        else:
            out.value = res.limit
    methods = {a.sum_method(g.points[i]) for i in g.tail}
    out.witnesses["partial_sum_method"] = sorted(methods)
    return out


def _threshold(a: SeriesSequence, kind: str, threshold: Any, p: GridPoint) -> int:
    if threshold is None:
        fn = a.thresholds.get(kind)
        return int(fn(p)) if fn else 0
    if isinstance(threshold, HyperNatural):
        return threshold[p.index]
    if callable(threshold):
        return int(threshold(p))
    return int(threshold)


def _sample_indices(a: SeriesSequence, p: GridPoint, start: int, dense: int = 64) -> list[int]:
    pts = set(range(start, start + dense + 1))
    pts |= {n for n in ladder(a.gauge, p.index, start)}
    return sorted(pts)


def _sup_test(a: SeriesSequence, kind: str, threshold: Any) -> ConvergenceResult:
    g = a.gauge
    thresholds: dict[int, int] = {}

    def L_fn(p: GridPoint):
        m = p.m
        k = _threshold(a, kind, threshold, p)
        if kind == "root":
            k = max(k, 1)
        thresholds[p.index] = k
        best = m.zero
        for n in _sample_indices(a, p, k):
            an = abs(a.value(n, p))
            if kind == "ratio":
                if an == 0:
                    raise NotInvertible(f"a_n = 0 at n={n}, k={p.k}", [p.k])
                val = abs(a.value(n + 1, p)) / an
            else:
                val = an ** (m.one / n)
            best = max(best, val)
        bound = a.ratio_bound if kind == "ratio" else a.root_bound
        if bound is not None:
            best = max(best, m.mpf(bound(k, p)))
        return best

    L = g.net(L_fn, f"L_{kind}({a.label})")
    for p in g.points:
        L.value(p.index)
    method = f"{kind} test, sup over sampled n >= k" + (" plus analytic tail bound" if (a.ratio_bound if kind == "ratio" else a.root_bound) else "")
    out = ConvergenceResult("inconclusive", method=method, L=L, horizon=g.horizon())
    out.witnesses["k"] = HyperNatural(g, [thresholds[p.index] for p in g.points], "exact", "k")
    verdict = sharp_compare(L, 1, g.Q_max)
    out.witnesses["L_vs_1"] = verdict
    if verdict == LESS:
        out.status = "converges_absolutely"
    elif verdict == EQUAL:
        out.diagnostics.append("L = 1")
    return out


def ratio_test(a: SeriesSequence, threshold: Any = None) -> ConvergenceResult:
    return _sup_test(a, "ratio", threshold)


def root_test(a: SeriesSequence, threshold: Any = None) -> ConvergenceResult:
    return _sup_test(a, "root", threshold)


@dataclass
class ComparisonResult:
    verdict: str
    order_holds: bool
    shift: int | None = None
    counterexample: dict[str, Any] | None = None
    b_result: ConvergenceResult | None = None
    a_result: ConvergenceResult | None = None
    horizon: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "order_holds": self.order_holds,
            "shift": self.shift,
            "counterexample": self.counterexample,
            "a": self.a_result.to_dict() if self.a_result else None,
            "b": self.b_result.to_dict() if self.b_result else None,
            "evidence_horizon": self.horizon,
        }


def order_counterexample(a: SeriesSequence, b: SeriesSequence) -> dict[str, Any] | None:
    """First sampled window [N, M] with sum a > sum b beyond negligible slack."""
    g = a.gauge
    lad = hyper_ladder(g)
    for i, N in enumerate(lad):
        for M in lad[i:]:
            wa = _window(a, N, M, "")
            wb = _window(b, N, M, "")
            for t in g.tail:
                x, y = wa.value(t).real, wb.value(t).real
                if x > y + g.rho_power(t, g.q_max):
                    return {"N": N.label, "M": M.label, "k": g.points[t].k}
    return None


def direct_comparison(a: SeriesSequence, b: SeriesSequence, max_shift: int = 8) -> ComparisonResult:
    g = a.gauge
    bad = None
    for shift in range(max_shift + 1):
        bad = order_counterexample(a.shifted(shift), b.shifted(shift))
        if bad is None:
            break
    if bad is not None:
        return ComparisonResult("inconclusive", False, None, bad, horizon=g.horizon())
    out = ComparisonResult("inconclusive", True, shift, horizon=g.horizon())
    out.b_result = sum_hyperseries(b)
    if out.b_result.status == CONVERGES:
        out.verdict = "a converges"
        return out
    out.a_result = sum_hyperseries(a)
    if out.a_result.status == DIV_POS:
        out.verdict = "b diverges_pos"
    return out


# -- families ------------------------------------------------------------------------


def _point_value(gauge: Gauge, x: Any) -> Callable[[GridPoint], Any]:
    net = gauge.const(x)
    return lambda p: net.value(p.index)


def geometric_series(gauge: Gauge, k: Any) -> SeriesSequence:
    """a_n = k^n with its closed-form partial sums."""
    kv = _point_value(gauge, k)
    label = getattr(k, "label", repr(k))

    def partial(N, p):
        x = kv(p)
        return N + 1 if x == 1 else (1 - x ** (N + 1)) / (1 - x)

    def tail_bound(n, p):
        r = abs(kv(p))
        return r ** (n + 1) / (1 - r) if r < 1 else None

    return SeriesSequence(gauge, lambda n, p: kv(p) ** n, f"{label}^n", partial=partial,
                          tail_bound=tail_bound, ratio_bound=lambda j, p: abs(kv(p)),
                          root_bound=lambda j, p: abs(kv(p)))


def exponential_series(gauge: Gauge, z: Any) -> SeriesSequence:
    """a_n = z^n / n!; the ratio test starts at 2|z|, the root test at 2e|z|."""
    zv = _point_value(gauge, z)
    label = getattr(z, "label", repr(z))

    def term(n, p):
        m = p.m
        x = m.mpc(zv(p))
        if n == 0:
            return m.mpc(1)
        if x == 0:
            return m.mpc(0)
        return m.exp(n * m.log(x) - m.loggamma(n + 1))

    def tail_bound(n, p):
        r = abs(zv(p)) / (n + 2)
        return abs(term(n + 1, p)) / (1 - r) if r < 0.5 else None

    def root_bound(j, p):
        # (n!)^(1/n) >= n / e
        return p.m.e * abs(zv(p)) / max(j, 1)

    return SeriesSequence(gauge, term, f"({label})^n/n!", tail_bound=tail_bound,
                          ratio_bound=lambda j, p: abs(zv(p)) / (j + 1), root_bound=root_bound,
                          thresholds={"ratio": lambda p: int(2 * abs(zv(p))) + 1,
                                      "root": lambda p: int(2 * p.m.e * abs(zv(p))) + 1})


def constant_series(gauge: Gauge, c: Any = 1) -> SeriesSequence:
    cv = _point_value(gauge, c)
    return SeriesSequence(gauge, lambda n, p: cv(p), f"{getattr(c, 'label', repr(c))}",
                          partial=lambda N, p: (N + 1) * cv(p),
                          ratio_bound=lambda j, p: p.m.one, root_bound=lambda j, p: p.m.one)


def series_from_expr(gauge: Gauge, source: str, **bound: Any) -> SeriesSequence:
    """a_n from an expression in n, eps, rho, k and any named nets in `bound`."""
    from .expr import compile_expr

    expr = compile_expr(source, ("n", "eps", "rho", "k") + tuple(bound))
    nets = {name: gauge.const(v) for name, v in bound.items()}

    def term(n, p):
        extra = {name: net.value(p.index) for name, net in nets.items()}
        return expr(p.m, n=n, eps=p.eps, rho=p.rho, k=p.k, **extra)

    return SeriesSequence(gauge, term, source)


FAMILIES = {"geometric": geometric_series, "exp": exponential_series,
            "exponential": exponential_series, "constant": constant_series}
