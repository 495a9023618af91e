"""Hypernatural numbers: natural-valued nets, nearest-integer rounding, powers."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Callable, Sequence

from .gauge_net import Gauge, GenComplex, GridPoint, valuation


class NotNearInteger(ValueError):
    def __init__(self, message: str, ks: Sequence[int]):
        super().__init__(message)
        self.ks = list(ks)


class LeavesHypernaturals(ArithmeticError):
    pass


def rpi(x: Any) -> int:
    """Nearest integer, ties rounded up: floor(x + 1/2)."""
    if isinstance(x, (int, Fraction)):
        return math.floor(Fraction(x) + Fraction(1, 2))
    return _floor(x + 0.5)


def rni(x: Any) -> int:
    """Nearest integer, ties rounded down: ceil(x - 1/2)."""
    if isinstance(x, (int, Fraction)):
        return math.ceil(Fraction(x) - Fraction(1, 2))
    return -_floor(0.5 - x)


def _floor(v: Any) -> int:
    # int() truncates towards zero for floats and mpf alike
    t = int(v)
    return t - 1 if t > v else t


class HyperNatural:
    """A net of naturals, one per grid point."""

    def __init__(self, gauge: Gauge, values: Sequence[int], origin: str = "exact", label: str = ""):
        vals = [int(v) for v in values]
        if len(vals) != len(gauge):
            raise ValueError("one natural per grid point required")
        if any(v < 0 for v in vals):
            raise ValueError("hypernaturals are nonnegative")
        self.gauge = gauge
        self.values = tuple(vals)
        self.origin = origin
        self.label = label or origin

    def __repr__(self) -> str:
        return f"HyperNatural({self.label})"

    def __getitem__(self, index: int) -> int:
        return self.values[index]

    @classmethod
    def constant(cls, gauge: Gauge, n: int) -> "HyperNatural":
        return cls(gauge, [n] * len(gauge), "exact", str(n))

    @classmethod
    def from_fn(cls, gauge: Gauge, fn: Callable[[GridPoint], Any], label: str = "") -> "HyperNatural":
        return cls(gauge, [rpi(fn(p)) for p in gauge.points], "rounded", label)

    @classmethod
    def gauge_power(cls, gauge: Gauge, j: Any) -> "HyperNatural":
        """rpi(rho^-j)."""
        return cls.from_fn(gauge, lambda p: p.rho ** (-p.m.mpf(j)), f"rpi(rho^-{j})")

    def as_gen(self) -> GenComplex:
        vals = self.values
        return self.gauge.net(lambda p: p.m.mpf(vals[p.index]), self.label)

    def _combine(self, other: Any, op: Callable[[int, int], int], sym: str) -> "HyperNatural":
        rhs = other.values if isinstance(other, HyperNatural) else [int(other)] * len(self.gauge)
        olbl = other.label if isinstance(other, HyperNatural) else str(other)
        return HyperNatural(self.gauge, [op(a, b) for a, b in zip(self.values, rhs)], self.origin, f"({self.label}{sym}{olbl})")

    def __add__(self, other: Any) -> "HyperNatural":
        return self._combine(other, lambda a, b: a + b, "+")

    __radd__ = __add__

    def __mul__(self, other: Any) -> "HyperNatural":
        return self._combine(other, lambda a, b: a * b, "*")

    __rmul__ = __mul__

    def maximum(self, other: "HyperNatural") -> "HyperNatural":
        """Pointwise max: an upper bound of both, so (rhoN, <=) is directed."""
        return self._combine(other, max, " v ")

    def equals(self, other: "HyperNatural") -> bool:
        return (self.as_gen() - other.as_gen()).is_negligible()

    def to_dict(self) -> dict[str, Any]:
        return {"label": self.label, "origin": self.origin, "values": dict(zip(self.gauge.ks, self.values))}


def ni(x: GenComplex) -> HyperNatural:
    """Nearest-integer hypernatural of a real moderate net within rho of the naturals."""
    g = x.gauge
    rep = valuation(x)
    if rep.cls not in ("negligible", "moderate"):
        raise NotNearInteger(f"ni needs a moderate net, got {rep.label}", [])
    if x.imag.valuation().cls != "negligible":
        raise NotNearInteger("ni needs a real net", [])
    values, bad = [], []
    for p in g.points:
        v = x.value(p.index).real
        if v < -0.5:
            bad.append(p.k)
            values.append(0)
            continue
        n = rpi(v)
        values.append(n)
        if p.index in g.tail and not abs(v - n) <= p.rho:
            bad.append(p.k)
    bad_tail = [k for k in bad if k >= g.points[g.tail[0]].k]
    if bad_tail:
        raise NotNearInteger(f"not within rho of a natural at k = {bad_tail}", bad_tail)
    return HyperNatural(g, values, "rounded", f"ni({x.label})")


def embed(n: HyperNatural) -> GenComplex:
    return n.as_gen()


def checked_pow(base: HyperNatural, exponent: HyperNatural | int) -> GenComplex:
    """Net base^exponent, refused when it is not moderate."""
    g = base.gauge
    if not isinstance(exponent, HyperNatural):
        exponent = HyperNatural.constant(g, exponent)
    b, e = base.values, exponent.values
    net = g.net(lambda p: p.m.mpf(b[p.index]) ** e[p.index], f"{base.label}^{exponent.label}")
    rep = valuation(net)
    if rep.cls not in ("negligible", "moderate"):
        raise LeavesHypernaturals(f"m^n leaves rhoN: {net.label} is {rep.label}")
    return net
