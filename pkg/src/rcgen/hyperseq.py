"""Hypersequences, hyperlimits and the Cauchy criterion on a sampled index ladder.

Per grid point the ladder is ``{1, 2, 4, ...} u {rpi(rho^-j)}`` up to a second
ceiling, together with each ladder index plus one so that parity effects are
seen.  The candidate limit is the value at the first ceiling
``C1 = rpi(rho^-(q_max + margin))``; the tail ``[M, C2]`` must stay within
``rho^q`` of it with ``M <= C1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from .gauge_net import Gauge, GenComplex, GridPoint, Unavailable, valuation
from .hypernat import HyperNatural, rpi

CONVERGES, NO_LIMIT, DIV_POS, DIV_NEG, INDETERMINATE = (
    "converges", "no_limit", "diverges_pos", "diverges_neg", "indeterminate",
)
GAUGE_CHANGE = "gauge change required"


class HyperSequence:
    """``term(n, point)`` for naturals ``n`` beyond an optional threshold."""

    def __init__(self, gauge: Gauge, term: Callable[[int, GridPoint], Any], label: str = "",
                 threshold: HyperNatural | int | None = None):
        self.gauge = gauge
        self.term = term
        self.label = label
        self.threshold = threshold
        self.domain_note = "all of rhoN" if threshold is None else f"n >= {getattr(threshold, 'label', threshold)}"

    def __repr__(self) -> str:
        return f"HyperSequence({self.label})"

    def value(self, n: int, index: int):
        p = self.gauge.points[index]
        return p.m.mpc(self.term(n, p))

    def at(self, n: HyperNatural | int) -> GenComplex:
        if isinstance(n, int):
            n = HyperNatural.constant(self.gauge, n)
        vals = n.values
        return self.gauge.net(lambda p: self.term(vals[p.index], p), f"{self.label}[{n.label}]")

    def _binary(self, other: "HyperSequence", op: Callable, sym: str) -> "HyperSequence":
        return HyperSequence(self.gauge, lambda n, p: op(self.term(n, p), other.term(n, p)), f"({self.label}{sym}{other.label})")

    def __add__(self, other: "HyperSequence") -> "HyperSequence":
        return self._binary(other, lambda a, b: a + b, "+")

    def __mul__(self, other: "HyperSequence") -> "HyperSequence":
        return self._binary(other, lambda a, b: a * b, "*")

    def map(self, fn: Callable[[Any, Any], Any], label: str = "") -> "HyperSequence":
        return HyperSequence(self.gauge, lambda n, p: fn(p.m, p.m.mpc(self.term(n, p))), label or f"f({self.label})")

    @property
    def real(self) -> "HyperSequence":
        return HyperSequence(self.gauge, lambda n, p: p.m.mpc(self.term(n, p)).real, f"re {self.label}")

    @property
    def imag(self) -> "HyperSequence":
        return HyperSequence(self.gauge, lambda n, p: p.m.mpc(self.term(n, p)).imag, f"im {self.label}")


def ceilings(gauge: Gauge, index: int) -> tuple[int, int]:
    p = gauge.points[index]
    j = gauge.q_max + gauge.settings.ceiling_margin
    return rpi(p.rho ** -j), rpi(p.rho ** -(j + 1))


def ladder(gauge: Gauge, index: int, start: int = 0) -> list[int]:
    p = gauge.points[index]
    c1, c2 = ceilings(gauge, index)
    pts = {c1, c2}
    n = 1
    while n <= c2:
        pts.add(n)
        n *= 2
    for j in range(1, gauge.q_max + gauge.settings.ceiling_margin + 2):
        pts.add(rpi(p.rho ** -j))
    pts |= {n + 1 for n in pts if n + 1 <= c2}
    return sorted(n for n in pts if start <= n <= c2)


def _start(seq: HyperSequence, index: int) -> int:
    t = seq.threshold
    if t is None:
        return 0
    return t[index] if isinstance(t, HyperNatural) else int(t)


@dataclass
class HyperLimitResult:
    status: str
    limit: GenComplex | None = None
    witnesses: dict[int, HyperNatural | None] = field(default_factory=dict)
    point_status: dict[int, str] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)
    horizon: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "limit": self.limit.to_dict() if self.limit is not None else None,
            "witnesses": {str(q): (w.to_dict() if w else None) for q, w in self.witnesses.items()},
            "point_status": self.point_status,
            "diagnostics": self.diagnostics,
            "horizon": self.horizon,
        }


class _PointScan:
    """Ladder values of one sequence at one grid point, with cached evaluation."""

    def __init__(self, seq: HyperSequence, index: int):
        self.seq = seq
        self.index = index
        self.p = seq.gauge.points[index]
        self.c1, self.c2 = ceilings(seq.gauge, index)
        self.ns = ladder(seq.gauge, index, _start(seq, index))
        self.cache: dict[int, Any] = {}
        self.vals = [self(n) for n in self.ns]

    def __call__(self, n: int):
        v = self.cache.get(n)
        if v is None:
            v = self.p.m.mpc(self.seq.term(n, self.p))
            self.cache[n] = v
        return v

    def first_suffix(self, ok: Callable[[Any], bool]) -> int | None:
        """Ladder position from which ``ok`` holds up to C2, or None."""
        pos = None
        for j in range(len(self.ns) - 1, -1, -1):
            if not ok(self.vals[j]):
                break
            pos = j
        return pos

    def refine(self, pos: int, ok: Callable[[Any], bool]) -> int:
        """Smallest integer in (ns[pos-1], ns[pos]] passing ``ok``, by bisection."""
        hi = self.ns[pos]
        if pos == 0:
            return hi
        lo = self.ns[pos - 1]
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ok(self(mid)):
                hi = mid
            else:
                lo = mid
        return hi


def _moderate_bound(p: GridPoint, Q_max: int):
    return p.rho ** -Q_max


def _scan_limit(scan: _PointScan, q_max: int, Q_max: int) -> tuple[str, dict[int, int], Any]:
    m, p = scan.p.m, scan.p
    limit = scan(scan.c1)
    if not m.isfinite(abs(limit)):
        limit = None
    thresholds: dict[int, int] = {}
    if limit is not None:
        for q in range(1, q_max + 1):
            tol = p.rho**q
            ok = lambda v, tol=tol: m.isfinite(abs(v)) and abs(v - limit) < tol
            pos = scan.first_suffix(ok)
            if pos is None or scan.ns[pos] > scan.c1:
                break
            thresholds[q] = scan.refine(pos, ok)
        else:
            return CONVERGES, thresholds, limit
    for sign, status in ((1, DIV_POS), (-1, DIV_NEG)):
        big: dict[int, int] = {}
        for q in range(1, q_max + 1):
            bound = p.rho**-q
            huge = _moderate_bound(p, Q_max)

            def ok(v, bound=bound, huge=huge):
                if not m.isfinite(abs(v)):
                    return True
                return sign * v.real >= bound or abs(v) > huge and sign * v.real > 0

            pos = scan.first_suffix(ok)
            if pos is None or scan.ns[pos] > scan.c1:
                break
            big[q] = scan.refine(pos, ok)
        else:
            return status, big, None
    return NO_LIMIT, thresholds, limit


def _slow_decay(scan: _PointScan, gauge: Gauge) -> bool:
    """Successive differences on the rpi(rho^-j) ladder shrink but never settle."""
    p = scan.p
    js = range(1, gauge.q_max + gauge.settings.ceiling_margin + 2)
    vals = [scan(rpi(p.rho**-j)) for j in js]
    diffs = [abs(b - a) for a, b in zip(vals, vals[1:])]
    return len(diffs) > 2 and all(d2 < d1 for d1, d2 in zip(diffs, diffs[1:])) and diffs[-1] >= p.rho


def hyperlimit(seq: HyperSequence, gauge: Gauge | None = None) -> HyperLimitResult:
    g = gauge or seq.gauge
    q_max, Q_max = g.q_max, g.Q_max
    result = HyperLimitResult(INDETERMINATE, horizon=g.horizon())
    per_point: dict[int, tuple[str, dict[int, int], Any]] = {}
    scans: dict[int, _PointScan] = {}
    for p in g.points:
        try:
            scans[p.index] = scan = _PointScan(seq, p.index)
            per_point[p.index] = _scan_limit(scan, q_max, Q_max)
        except Unavailable as exc:
            per_point[p.index] = (INDETERMINATE, {}, None)
            if p.index in g.tail:
                result.diagnostics.append(f"k={p.k}: {exc}")
    result.point_status = {g.points[i].k: st for i, (st, _, _) in per_point.items()}
    tail_status = {per_point[i][0] for i in g.tail}

    if tail_status == {INDETERMINATE} or INDETERMINATE in tail_status:
        return result
    if len(tail_status) > 1:
        result.status = NO_LIMIT
        result.diagnostics.append(f"grid tail splits into {sorted(tail_status)} ({'grid-subpoint evidence'})")
        return result
    status = tail_status.pop()
    result.status = status
    if status in (CONVERGES, DIV_POS, DIV_NEG):
        for q in range(1, q_max + 1):
            vals = []
            for p in g.points:
                th = per_point[p.index][1]
                vals.append(th.get(q, scans[p.index].c1) if p.index in scans else 0)
            result.witnesses[q] = HyperNatural(g, vals, "rounded", f"M({q})")
    if status == CONVERGES:
        limits = {i: per_point[i][2] for i in per_point if per_point[i][2] is not None}
        result.limit = g.net(lambda p: limits[p.index] if p.index in limits else _raise(p), f"lim {seq.label}")
        for i in g.tail:
            second = scans[i](scans[i].c2)
            if not abs(second - limits[i]) < g.points[i].rho ** q_max:
                result.status = NO_LIMIT
                result.diagnostics.append(f"k={g.points[i].k}: second ceiling disagrees with the candidate limit")
                break
    if result.status == NO_LIMIT and all(_slow_decay(scans[i], g) for i in g.tail):
        result.diagnostics.append(GAUGE_CHANGE)
    return result


def _raise(p: GridPoint):
    raise Unavailable(f"no candidate limit at k={p.k}")


@dataclass
class CauchyResult:
    is_cauchy: bool | None
    witnesses: dict[int, HyperNatural | None] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)
    horizon: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.is_cauchy)

    def to_dict(self) -> dict[str, Any]:
        return {
            "is_cauchy": self.is_cauchy,
            "witnesses": {str(q): (w.to_dict() if w else None) for q, w in self.witnesses.items()},
            "diagnostics": self.diagnostics,
            "horizon": self.horizon,
        }


def _suffix_diameters(scan: _PointScan) -> list:
    """(lower, upper) bounds on diam{a_n : n >= ns[j]} from suffix extrema of re and im."""
    m = scan.p.m
    out = [(m.inf, m.inf)] * len(scan.ns)
    rmax = rmin = imax = imin = None
    for j in range(len(scan.ns) - 1, -1, -1):
        v = scan.vals[j]
        if not m.isfinite(abs(v)):
            break
        if rmax is None:
            rmax = rmin = v.real
            imax = imin = v.imag
        else:
            rmax, rmin = max(rmax, v.real), min(rmin, v.real)
            imax, imin = max(imax, v.imag), min(imin, v.imag)
        dre, dim = rmax - rmin, imax - imin
        out[j] = (max(dre, dim), m.sqrt(dre**2 + dim**2))
    return out


def _exact_diameter(vals: list) -> Any:
    return max((abs(a - b) for i, a in enumerate(vals) for b in vals[i + 1:]), default=0)


def is_cauchy(seq: HyperSequence, gauge: Gauge | None = None) -> CauchyResult:
    g = gauge or seq.gauge
    res = CauchyResult(None, horizon=g.horizon())
    thresholds: dict[int, dict[int, int]] = {}
    verdicts = []
    for i in g.tail:
        p = g.points[i]
        try:
            scan = _PointScan(seq, i)
        except Unavailable as exc:
            res.diagnostics.append(f"k={p.k}: {exc}")
            return res
        if len(scan.ns) < 4:
            res.diagnostics.append(f"k={p.k}: ceiling too small")
            return res
        diam = _suffix_diameters(scan)
        th: dict[int, int] = {}
        ok_all = True
        for q in range(1, g.q_max + 1):
            tol = p.rho**q
            pos = None
            for j in range(len(scan.ns)):
                if scan.ns[j] > scan.c1:
                    break
                low, high = diam[j]
                if high < tol or (low < tol and _exact_diameter(scan.vals[j:]) < tol):
                    pos = j
                    break
            if pos is None:
                ok_all = False
                break
            th[q] = scan.ns[pos]
        thresholds[i] = th
        verdicts.append(ok_all)
    res.is_cauchy = all(verdicts)
    if res.is_cauchy:
        for q in range(1, g.q_max + 1):
            vals = [thresholds.get(p.index, {}).get(q, 0) for p in g.points]
            res.witnesses[q] = HyperNatural(g, vals, "rounded", f"M({q})")
    else:
        bad = [g.points[i].k for i, v in zip(g.tail, verdicts) if not v]
        res.diagnostics.append(f"no Cauchy threshold below the ceiling at k = {bad}")
    return res


class ExtensionError(ValueError):
    pass


def extend_ordinary(gauge: Gauge, term: Callable[[int, GridPoint], Any], label: str = "") -> HyperSequence:
    """Extend an ordinary sequence of nets to hypernatural indices, checking moderateness."""
    seq = HyperSequence(gauge, term, label)
    probes = [HyperNatural.constant(gauge, n) for n in (0, 1, 2, 10)]
    probes += [HyperNatural.gauge_power(gauge, j) for j in range(1, gauge.q_max + 1)]
    for n in probes:
        rep = valuation(seq.at(n))
        if rep.cls not in ("negligible", "moderate"):
            raise ExtensionError(f"a_n is {rep.label} at n = {n.label}")
    return seq
