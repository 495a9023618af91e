"""Brute-force references for the test suite.

Nothing here shares code paths with the engine beyond the grid points it is
handed: quadrature goes through mpmath (tanh-sinh, Gauss-Legendre) or scipy's
QUADPACK, derivatives through Richardson-extrapolated central differences, and
partial sums through a plain running sum of the term callback.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import mpmath
from scipy import integrate as sp_integrate

from .gauge_net import GridPoint


class OracleBudgetError(ArithmeticError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    precision: int = 200
    quad_atol: float = 1e-30
    quad_rtol: float = 1e-25
    fd_ladder: tuple[float, ...] = (2.0**-4, 2.0**-5, 2.0**-6, 2.0**-7, 2.0**-8, 2.0**-9)
    partial_sum_budget: int = 200000

    def context(self):
        """The global mpmath context at the oracle precision; integrands that call
        mpmath.* functions see the same precision."""
        return mpmath.workprec(self.precision)


DEFAULT = OracleConfig()


@dataclass
class OracleValue:
    value: Any
    error: float
    scheme: str

    def agrees(self, other: "OracleValue | complex | float", tol: float) -> bool:
        ref = other.value if isinstance(other, OracleValue) else other
        scale = max(abs(complex(ref)), 1e-300)
        return abs(complex(self.value) - complex(ref)) <= tol * max(scale, 1.0)


def quad_reference(integrand: Callable[[Any], Any], interval: Sequence[float], tol: float | None = None,
                   scheme: str = "tanh-sinh", config: OracleConfig = DEFAULT) -> OracleValue:
    """int over interval (breakpoints allowed) to tol; raises when the estimate misses it.

    scheme: "tanh-sinh" or "gauss-legendre" (mpmath), or "scipy" (QUADPACK, float64).
    """
    tol = config.quad_rtol if tol is None else tol
    if scheme == "scipy":
        total, err = 0.0 + 0.0j, 0.0
        for a, b in zip(interval[:-1], interval[1:]):
            re, e1 = sp_integrate.quad(lambda t: complex(integrand(t)).real, float(a), float(b),
                                       epsabs=0.0, epsrel=max(tol, 1e-13), limit=500)
            im, e2 = sp_integrate.quad(lambda t: complex(integrand(t)).imag, float(a), float(b),
                                       epsabs=0.0, epsrel=max(tol, 1e-13), limit=500)
            total += complex(re, im)
            err += e1 + e2
        if err > max(tol, 1e-13) * max(abs(total), 1.0) * 10:
            raise OracleBudgetError(f"scipy quad error estimate {err:.3g} above tolerance")
        return OracleValue(total, err, "scipy")
    ctx = mpmath.mp
    method = {"tanh-sinh": "tanh-sinh", "gauss-legendre": "gauss-legendre"}[scheme]
    with config.context():
        val, err = ctx.quad(integrand, [ctx.mpf(x) for x in interval], method=method, error=True, maxdegree=10)
        val = +val
    scale = max(abs(val), 1)
    if err > max(tol * scale, config.quad_atol):
        raise OracleBudgetError(f"{scheme} error estimate {ctx.nstr(err, 5)} above tolerance {tol:g}")
    return OracleValue(val, float(err), scheme)


def fd_derivative(f: Callable[[Any], Any], x: Any, order: int, ladder: Sequence[float] | None = None,
                  config: OracleConfig = DEFAULT) -> OracleValue:
    """Central differences on a step ladder, Richardson-extrapolated in h^2.

    f is evaluated inside the oracle precision, so mpmath.* calls in f see it.
    """
    ctx = mpmath.mp
    ladder = config.fd_ladder if ladder is None else ladder
    with config.context():
        return _richardson(ctx, f, ctx.mpmathify(x), order, ladder)


def _richardson(ctx, f, x, order, ladder) -> OracleValue:

    def central(h):
        h = ctx.mpf(h)
        return ctx.fsum(
            (-1) ** j * ctx.binomial(order, j) * ctx.mpmathify(f(x + (order / 2 - j) * h))
            for j in range(order + 1)
        ) / h**order

    table = [[central(h)] for h in ladder]
    for i in range(1, len(ladder)):
        for j in range(1, i + 1):
            ratio = (ctx.mpf(ladder[i - j]) / ladder[i]) ** 2
            table[i].append(table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (ratio - 1))
    best = table[-1][-1]
    err = abs(best - table[-1][-2]) if len(ladder) > 1 else ctx.inf
    if len(ladder) > 2 and err > abs(table[-2][-1] - table[-1][-2]) * 10 and err > 1e-8 * max(abs(best), 1):
        raise OracleBudgetError("Richardson ladder does not settle")
    return OracleValue(best, float(err), "richardson")


@dataclass
class ScanResult:
    status: str  # plateau | diverges | budget
    value: Any = None
    last_index: int = 0
    profile: list[tuple[int, float]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {"status": self.status, "value": complex(self.value) if self.value is not None else None,
                "last_index": self.last_index, "profile": self.profile}


def partial_sum_scan(term: Callable[[int, GridPoint], Any], p: GridPoint, budget: int | None = None,
                     stable: int = 64, config: OracleConfig = DEFAULT) -> ScanResult:
    """Running sum of term(n, p); plateau once `stable` consecutive terms fall below the working ulp.

    `term` may be a SeriesSequence, in which case only its term callback is used.
    """
    fn = getattr(term, "term", term)
    budget = config.partial_sum_budget if budget is None else budget
    m = p.m
    acc = m.mpc(0)
    quiet = 0
    profile = []
    for n in range(budget):
        t = m.mpc(fn(n, p))
        acc += t
        if n & (n + 1) == 0:
            profile.append((n, float(m.log10(abs(acc))) if acc else float("-inf")))
        if not m.isfinite(abs(acc)):
            return ScanResult("diverges", None, n, profile)
        if abs(t) <= m.ldexp(abs(acc), -m.prec - 4):
            quiet += 1
            if quiet >= stable:
                return ScanResult("plateau", acc, n, profile)
        else:
            quiet = 0
    grows = len(profile) >= 3 and profile[-1][1] > profile[-2][1] + 0.3
    return ScanResult("diverges" if grows else "budget", None if grows else acc, budget - 1, profile)
