"""Gauges, generalized complex numbers as lazy nets, valuation and comparison.

A :class:`Gauge` fixes the grid ``eps_k = 2**-k``, the net ``rho(eps)`` and a
private mpmath context.  A :class:`GenComplex` is a deterministic callback
``GridPoint -> value`` with a memo table.  Callbacks may return a plain
number or a :class:`Ball` ``(center, radius)`` when only an enclosure is
known; radii propagate through the ring operations and every decision
(negligible, moderate, invertible, ordered) uses the pessimistic side of
the ball.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, NamedTuple, Sequence

from mpmath.ctx_mp import MPContext

from . import _kernels
from .config import Settings, ceil_half
from .expr import compile_expr

SUBPOINT_NOTE = "grid-subpoint evidence"


class Unavailable(Exception):
    """Raised by a callback when a grid point cannot be evaluated (budget etc.)."""


class NotComparable(ValueError):
    pass


class NotInvertible(ArithmeticError):
    def __init__(self, message: str, indices: Sequence[int]):
        super().__init__(message)
        self.indices = list(indices)


class Ball(NamedTuple):
    center: Any
    radius: Any


@dataclass(frozen=True)
class GridPoint:
    index: int
    k: int
    eps: Any
    rho: Any
    m: Any

    @property
    def log_rho_inv(self):
        return -self.m.log(self.rho)


class Gauge:
    """Grid, gauge net and working precision shared by all nets built on it."""

    def __init__(self, settings: Settings | None = None, rho: str | Callable | None = None):
        self.settings = settings or Settings()
        s = self.settings
        src = s.rho if rho is None else rho
        self.rho_source = src if isinstance(src, str) else getattr(src, "__name__", "callable")
        rho_fn = (lambda m, eps: compile_expr(src, ("eps",))(m, eps=eps)) if isinstance(src, str) else src
        ks = list(range(s.k_min, s.k_max + 1))

        probe = MPContext()
        probe.prec = 128
        probe_rho = [probe.mpf(rho_fn(probe, probe.ldexp(1, -k))) for k in ks]
        for k, r in zip(ks, probe_rho):
            if not (0 < r < 1):
                raise ValueError(f"rho(2^-{k}) = {r} is not in (0,1)")
        if any(b > a for a, b in zip(probe_rho, probe_rho[1:])):
            raise ValueError("rho must be nonincreasing along the grid")
        if not probe_rho[-1] < probe_rho[0]:
            raise ValueError("rho must decrease towards 0 along the grid")

        if s.precision is not None:
            prec = s.precision
        else:
            bits = float(-probe.log(probe_rho[-1], 2))
            prec = max(80, math.ceil(bits * (s.q_max + 4)) + 64)
        self.precision = prec
        self.m = MPContext()
        self.m.prec = prec
        m = self.m
        self.points = tuple(
            GridPoint(i, k, m.ldexp(1, -k), m.mpf(rho_fn(m, m.ldexp(1, -k))), m)
            for i, k in enumerate(ks)
        )
        size = len(self.points)
        self.tail = tuple(range(size - ceil_half(size), size))

    # -- grid ------------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.points)

    @property
    def ks(self) -> list[int]:
        return [p.k for p in self.points]

    @property
    def q_max(self) -> int:
        return self.settings.q_max

    @property
    def Q_max(self) -> int:
        return self.settings.Q_max

    def horizon(self) -> dict[str, Any]:
        s = self.settings
        return {
            "q_max": s.q_max,
            "Q_max": s.Q_max,
            "grid": f"eps=2^-k, k={s.k_min}..{s.k_max}",
            "tail": f"k={self.points[self.tail[0]].k}..{self.points[-1].k}",
            "rho": self.rho_source,
            "precision_bits": self.precision,
            "partial_sum_budget": s.partial_sum_budget,
            "radius_budget": s.radius_budget,
        }

    # -- constructors ----------------------------------------------------------

    def net(self, fn: Callable[[GridPoint], Any], label: str = "") -> "GenComplex":
        return GenComplex(self, fn, label)

    def const(self, c: Any) -> "GenComplex":
        if isinstance(c, GenComplex):
            return c
        return GenComplex(self, lambda p: c, label=repr(c))

    def d_rho(self, power: Any = 1) -> "GenComplex":
        return GenComplex(self, lambda p: p.rho ** p.m.mpf(power), label=f"rho^{power}")

    def from_expr(self, source: str, **bound: Any) -> "GenComplex":
        expr = compile_expr(source, ("eps", "rho", "k") + tuple(bound))

        def fn(p: GridPoint) -> Any:
            extra = {name: (v.value(p.index) if isinstance(v, GenComplex) else v) for name, v in bound.items()}
            return expr(p.m, eps=p.eps, rho=p.rho, k=p.k, **extra)

        return GenComplex(self, fn, label=source)

    def from_values(self, values: Sequence[Any], label: str = "table") -> "GenComplex":
        if len(values) != len(self.points):
            raise ValueError(f"table has {len(values)} entries, grid has {len(self.points)}")
        vals = list(values)
        return GenComplex(self, lambda p: vals[p.index], label=label)

    def rho_power(self, index: int, q: Any):
        p = self.points[index]
        return p.rho ** p.m.mpf(q)


def _to_ball(m, raw: Any) -> tuple[Any, Any]:
    if isinstance(raw, Ball):
        return m.mpc(raw.center), m.mpf(abs(raw.radius))
    if isinstance(raw, GenComplex):
        raise TypeError("callback returned a GenComplex, expected a number")
    return m.mpc(raw), m.zero


class GenComplex:
    """Lazy, memoized net of complex values on the grid of a gauge."""

    __hash__ = None  # equality is negligibility of the difference

    def __init__(self, gauge: Gauge, fn: Callable[[GridPoint], Any], label: str = ""):
        self.gauge = gauge
        self._fn = fn
        self.label = label
        self._memo: dict[int, tuple[Any, Any, str | None]] = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"GenComplex({self.label or 'net'})"

    # -- evaluation ------------------------------------------------------------

    def _eval(self, index: int) -> tuple[Any, Any, str | None]:
        hit = self._memo.get(index)
        if hit is not None:
            return hit
        p = self.gauge.points[index]
        m = p.m
        try:
            center, radius = _to_ball(m, self._fn(p))
            note = None
        except Unavailable as exc:
            center, radius, note = None, None, f"unavailable: {exc}"
        except (ZeroDivisionError, OverflowError) as exc:
            center, radius, note = m.mpc(m.nan), m.inf, f"{type(exc).__name__}: {exc}"
        out = (center, radius, note)
        with self._lock:
            self._memo.setdefault(index, out)
        return self._memo[index]

    def ball(self, index: int) -> tuple[Any, Any]:
        c, r, note = self._eval(index)
        if c is None:
            raise Unavailable(note)
        return c, r

    def value(self, index: int):
        return self.ball(index)[0]

    def error(self, index: int):
        return self.ball(index)[1]

    def values(self, indices: Iterable[int] | None = None) -> list:
        idx = range(len(self.gauge)) if indices is None else indices
        return [self.value(i) for i in idx]

    def note(self, index: int) -> str | None:
        return self._eval(index)[2]

    def usable(self, index: int) -> bool:
        return self._eval(index)[0] is not None

    def abs_upper(self, index: int):
        c, r = self.ball(index)
        return abs(c) + r

    def abs_lower(self, index: int):
        c, r = self.ball(index)
        return abs(c) - r

    def materialize(self, label: str | None = None) -> "GenComplex":
        """Freeze all usable grid values into a table net."""
        table = {i: self._eval(i) for i in range(len(self.gauge))}

        def fn(p: GridPoint):
            c, r, note = table[p.index]
            if c is None:
                raise Unavailable(note)
            return Ball(c, r)

        return GenComplex(self.gauge, fn, label or self.label)

    # -- arithmetic ------------------------------------------------------------

    def _lift(self, other: Any) -> "GenComplex":
        if isinstance(other, GenComplex):
            if other.gauge is not self.gauge:
                raise ValueError("nets live on different gauges")
            return other
        return self.gauge.const(other)

    def _binary(self, other: Any, op: Callable, label: str) -> "GenComplex":
        rhs = self._lift(other)
        lhs = self

        def fn(p: GridPoint):
            a, ea = lhs.ball(p.index)
            b, eb = rhs.ball(p.index)
            return op(p.m, a, ea, b, eb)

        return GenComplex(self.gauge, fn, label)

    def __add__(self, other):
        return self._binary(other, lambda m, a, ea, b, eb: Ball(a + b, ea + eb), f"({self.label}+{_lbl(other)})")

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda m, a, ea, b, eb: Ball(a - b, ea + eb), f"({self.label}-{_lbl(other)})")

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        return self._binary(
            other,
            lambda m, a, ea, b, eb: Ball(a * b, abs(a) * eb + abs(b) * ea + ea * eb),
            f"({self.label}*{_lbl(other)})",
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __truediv__(self, other):
        return self * inv(self._lift(other))

    def __rtruediv__(self, other):
        return self._lift(other) * inv(self)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise TypeError("only integer powers of nets")
        if exponent < 0:
            return inv(self) ** (-exponent)
        base = self

        def fn(p: GridPoint):
            a, ea = base.ball(p.index)
            val = a**exponent
            if ea == 0:
                return val
            # |(a+e)^n - a^n| <= (|a|+e)^n - |a|^n
            return Ball(val, (abs(a) + ea) ** exponent - abs(a) ** exponent)

        return GenComplex(self.gauge, fn, f"{self.label}^{exponent}")

    def map(self, fn: Callable[[Any, Any], Any], label: str = "") -> "GenComplex":
        """Pointwise ``fn(m, value)``; error radii are not propagated."""
        base = self
        return GenComplex(self.gauge, lambda p: fn(p.m, base.value(p.index)), label or self.label)

    @property
    def real(self) -> "GenComplex":
        base = self
        return GenComplex(self.gauge, lambda p: Ball(base.value(p.index).real, base.error(p.index)), f"re {self.label}")

    @property
    def imag(self) -> "GenComplex":
        base = self
        return GenComplex(self.gauge, lambda p: Ball(base.value(p.index).imag, base.error(p.index)), f"im {self.label}")

    def conj(self) -> "GenComplex":
        base = self
        return GenComplex(self.gauge, lambda p: Ball(p.m.conj(base.value(p.index)), base.error(p.index)), f"conj {self.label}")

    def __abs__(self) -> "GenComplex":
        base = self
        return GenComplex(self.gauge, lambda p: Ball(abs(base.value(p.index)), base.error(p.index)), f"|{self.label}|")

    # -- classification shortcuts ---------------------------------------------

    def valuation(self) -> "ValuationReport":
        return valuation(self, self.gauge)

    def is_negligible(self) -> bool:
        return self.valuation().cls == "negligible"

    def is_moderate(self) -> bool:
        return self.valuation().cls in ("negligible", "moderate")

    def __eq__(self, other: Any) -> bool:  # type: ignore[override]
        return (self - self._lift(other)).is_negligible()

    def __ne__(self, other: Any) -> bool:  # type: ignore[override]
        return not self.__eq__(other)

    def to_dict(self) -> dict[str, Any]:
        rows = []
        for p in self.gauge.points:
            c, r, note = self._eval(p.index)
            rows.append({"k": p.k, "value": c, "error": r, "note": note})
        return {"label": self.label, "grid": rows}


def _lbl(x: Any) -> str:
    return x.label if isinstance(x, GenComplex) else repr(x)


def inv(x: GenComplex) -> GenComplex:
    """Multiplicative inverse, refused unless ``|x| >= rho^Q`` on the tail for some Q <= Q_max."""
    g = x.gauge
    bad = []
    for i in g.tail:
        try:
            low = x.abs_lower(i)
        except Unavailable:
            bad.append(g.points[i].k)
            continue
        if not (low >= g.rho_power(i, g.Q_max)):
            bad.append(g.points[i].k)
    if bad:
        raise NotInvertible(f"not invertible: |x| < rho^{g.Q_max} at k = {bad}", bad)

    def fn(p: GridPoint):
        a, ea = x.ball(p.index)
        if a == 0:
            raise ZeroDivisionError("zero value")
        if ea == 0:
            return 1 / a
        low = abs(a) - ea
        if low <= 0:
            raise ZeroDivisionError("enclosure contains zero")
        return Ball(1 / a, ea / (abs(a) * low))

    return GenComplex(g, fn, f"1/{x.label}")


def add(x: Any, y: Any) -> GenComplex:
    return _net(x, y) + y


def sub(x: Any, y: Any) -> GenComplex:
    return _net(x, y) - y


def mul(x: Any, y: Any) -> GenComplex:
    return _net(x, y) * y


def _net(x: Any, y: Any) -> GenComplex:
    if isinstance(x, GenComplex):
        return x
    if isinstance(y, GenComplex):
        return y.gauge.const(x)
    raise TypeError("at least one argument must be a GenComplex")


# -- valuation -------------------------------------------------------------------


@dataclass
class ValuationReport:
    cls: str
    Q: int | None
    slope: float
    fit_residual: float
    subpoint_flags: list[dict[str, Any]] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)
    horizon: dict[str, Any] = field(default_factory=dict)

    @property
    def label(self) -> str:
        return f"moderate({self.Q})" if self.cls == "moderate" else self.cls

    def to_dict(self) -> dict[str, Any]:
        return {
            "class": self.label,
            "Q": self.Q,
            "slope": self.slope,
            "fit_residual": self.fit_residual,
            "subpoint_flags": self.subpoint_flags,
            "subpoint_note": SUBPOINT_NOTE,
            "diagnostics": self.diagnostics,
            "horizon": self.horizon,
        }


def _below(g: Gauge, i: int, upper, q) -> bool:
    # half-precision slack so nets sitting exactly on a gauge power are not pushed past it by rounding
    return upper <= g.rho_power(i, q) * (1 + g.m.ldexp(1, -(g.m.prec // 2)))


def _point_class(g: Gauge, i: int, upper) -> str:
    if _below(g, i, upper, g.q_max):
        return "negligible"
    if _below(g, i, upper, -g.Q_max):
        return "moderate"
    return "non_moderate"


def valuation(x: GenComplex, g: Gauge | None = None) -> ValuationReport:
    g = g or x.gauge
    m = g.m
    flags: list[dict[str, Any]] = []
    diagnostics: list[str] = []
    uppers: dict[int, Any] = {}
    for p in g.points:
        i = p.index
        c, r, note = x._eval(i)
        if c is None:
            flags.append({"k": p.k, "class": "unusable"})
            if i in g.tail:
                diagnostics.append(f"k={p.k}: {note}")
            continue
        up = abs(c) + r
        if not m.isfinite(up):
            flags.append({"k": p.k, "class": "non_finite"})
            diagnostics.append(f"k={p.k}: overflow or NaN ({note or 'non-finite value'})")
            uppers[i] = m.inf
            continue
        uppers[i] = up
        flags.append({"k": p.k, "class": _point_class(g, i, up)})

    tail = [i for i in g.tail if i in uppers]
    slope, resid = _fit_slope(g, x, tail)
    report = ValuationReport("indeterminate", None, slope, resid, flags, diagnostics, g.horizon())
    if len(tail) < 4:
        diagnostics.append(f"only {len(tail)} usable tail points")
        return report
    if any(not m.isfinite(uppers[i]) for i in tail):
        report.cls = "non_moderate"
        return report
    if all(_below(g, i, uppers[i], g.q_max) for i in tail):
        report.cls = "negligible"
        return report
    for Q in range(g.Q_max + 1):
        if all(_below(g, i, uppers[i], -Q) for i in tail):
            report.cls, report.Q = "moderate", Q
            return report
    report.cls = "non_moderate"
    return report


def _fit_slope(g: Gauge, x: GenComplex, tail: list[int]) -> tuple[float, float]:
    xs, ys = [], []
    for i in tail:
        v = abs(x.value(i))
        if v == 0 or not g.m.isfinite(v):
            continue
        xs.append(float(g.m.log(g.points[i].rho)))
        ys.append(float(g.m.log(v)))
    if not xs:
        return math.inf, 0.0
    if len(xs) == 1:
        return ys[0] / xs[0], 0.0
    import numpy as np

    slope, _, rms = _kernels.lstsq_slope(np.array(xs), np.array(ys))
    scale = max(1.0, abs(float(np.mean(ys))))
    return slope, rms / scale


# -- order -----------------------------------------------------------------------

LESS, GREATER, EQUAL, MIXED = "less", "greater", "equal_up_to_q", "mixed"


def point_verdicts(x: GenComplex, y: GenComplex, q: int) -> list[str]:
    g = x.gauge
    out = []
    for i in g.tail:
        a, ea = x.ball(i)
        b, eb = y.ball(i)
        a, b = a.real, b.real
        tol = g.rho_power(i, q)
        slack = ea + eb
        if abs(a - b) + slack <= tol:
            out.append(EQUAL)
        elif a + tol + slack <= b:
            out.append(LESS)
        elif b + tol + slack <= a:
            out.append(GREATER)
        else:
            out.append("undecided")
    return out


def sharp_compare(x: Any, y: Any, q: int) -> str:
    """Order of real moderate nets at resolution ``rho^q`` over the grid tail."""
    x = _net(x, y)
    y = x._lift(y)
    for side, net in (("left", x), ("right", y)):
        rep = net.valuation()
        if rep.cls not in ("negligible", "moderate"):
            raise NotComparable(f"not comparable: {side} operand is {rep.label}")
        if net.imag.valuation().cls != "negligible":
            raise NotComparable(f"not comparable: {side} operand is not real")
    verdicts = point_verdicts(x, y, q)
    first = verdicts[0]
    if first != "undecided" and all(v == first for v in verdicts):
        return first
    return MIXED
