"""Bump functions, their inverse Fourier transforms and moment tables.

``beta`` is an even test function on [-1, 1] with ``beta(0) = 1``; ``mu`` is
its inverse Fourier transform ``mu(s) = (1/2pi) int beta(t) e^{its} dt``, an
entire function with ``int mu = 1``.  Derivatives at zero come from the
moments ``m_n = int t^n beta``: ``mu^(n)(0) = i^n m_n / 2pi``.

Three evaluation routes for ``mu^(j)(s)``:

* Taylor series with 512-bit moments, for ``|s| <= TAYLOR_RADIUS``;
* float64 Gauss-Legendre quadrature of the defining integral;
* an integration-by-parts bound for large ``|s|``, returned as a ball
  centred at 0.
"""

from __future__ import annotations

import math
import threading
from functools import lru_cache

import numpy as np
from mpmath.ctx_mp import MPContext

from . import _kernels

TAYLOR_RADIUS = 40
MOMENT_PREC = 512
MOMENT_COUNT = 400
BOUND_ORDER = 240
NORM_NODES = 6000
LOGISTIC_SPAN = 14.0

_mp = MPContext()
_mp.prec = MOMENT_PREC


def _gap_beta_mp(m, gap):
    """Plateau bump as a function of the distance ``gap = 1 - |t|`` (mpmath)."""
    if gap <= 0:
        return m.zero
    if gap >= 0.5:
        return m.one
    x = 2 * gap
    expo = 1 / x - 1 / (1 - x)
    if expo > 4 * m.prec:
        return m.exp(-expo)
    return 1 / (1 + m.exp(expo))


def _gap_gevrey_mp(m, gap):
    if gap <= 0:
        return m.zero
    t = 1 - gap
    return m.exp(1 - 1 / (gap * (1 + t)))


class Mollifier:
    """An even bump ``beta`` and its transform ``mu``, with memoized tables."""

    def __init__(self, name: str = "plateau"):
        if name not in ("plateau", "gevrey"):
            raise ValueError(f"unknown mollifier {name!r}")
        self.name = name
        # the plateau bump is identically 1 on [-1/2, 1/2]
        self.flat = 0.5 if name == "plateau" else 0.0
        self._gap = _gap_beta_mp if name == "plateau" else _gap_gevrey_mp
        self._lock = threading.RLock()
        self._moments = None
        self._log_nodes = None
        self._deriv_norms = None
        self._leibniz_cache: dict = {}

    def __repr__(self) -> str:
        return f"Mollifier({self.name})"

    # -- beta -------------------------------------------------------------------

    def beta(self, t, m=None):
        m = m or _mp
        return self._gap(m, 1 - abs(m.mpf(t)))

    def beta_float(self, t):
        t = np.abs(np.asarray(t, dtype=float))
        gap = 1.0 - t
        out = np.zeros_like(gap)
        inside = gap > 0
        g = gap[inside]
        if self.name == "plateau":
            x = np.minimum(2 * g, 1.0)
            with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
                expo = np.where(x < 1.0, 1 / x - 1 / (1 - x), -np.inf)
                val = np.where(expo > 700, 0.0, 1 / (1 + np.exp(np.minimum(expo, 700))))
            out[inside] = val
        else:
            out[inside] = np.exp(1 - 1 / (g * (2 - g)))
        return out

    # -- high-precision moments --------------------------------------------------

    def _ts_nodes(self, a, b, level: int = 7):
        """Tanh-sinh nodes on [a, b] as (t, gap_to_b, weight), at MOMENT_PREC."""
        m = _mp
        h = m.ldexp(1, -level)
        half = (m.mpf(b) - a) / 2
        out = []
        k = 0
        while True:
            v = k * h
            u = m.pi / 2 * m.sinh(v)
            w = m.pi / 2 * h * m.cosh(v) / m.cosh(u) ** 2
            if k and w < m.ldexp(1, -MOMENT_PREC - 40):
                break
            one_minus = 2 / (1 + m.exp(2 * u))  # 1 - tanh(u)
            one_plus = 2 - one_minus
            for x_gap_b, x_gap_a, sign in ((one_minus, one_plus, 1), (one_plus, one_minus, -1)):
                if k == 0 and sign < 0:
                    continue
                t = a + half * x_gap_a
                out.append((t, half * x_gap_b, half * w))
            k += 1
        return out

    def moments(self):
        """m_n = int_{-1}^{1} t^n beta(t) dt for n < MOMENT_COUNT (odd ones vanish)."""
        with self._lock:
            if self._moments is None:
                self._moments = self._compute_moments()
            return self._moments

    def _compute_moments(self):
        m = _mp
        lo = self.flat
        nodes = self._ts_nodes(lo, 1)
        ts = [t for t, _, _ in nodes]
        pw = [w * self._gap(m, gap) for t, gap, w in nodes]
        sq = [t * t for t in ts]
        flat = m.mpf(lo)
        flat_sq = flat * flat
        flat_pow = flat
        out = []
        for n in range(MOMENT_COUNT):
            if n % 2:
                out.append(m.zero)
                continue
            acc = m.fsum(pw)
            if lo:
                acc += flat_pow / (n + 1)
                flat_pow *= flat_sq
            out.append(2 * acc)
            pw = [a * b for a, b in zip(pw, sq)]
        return out

    def integral(self):
        return self.moments()[0]

    def square_integral(self):
        """int beta^2, by the same tanh-sinh rule."""
        m = _mp
        nodes = self._ts_nodes(self.flat, 1)
        acc = m.fsum(w * self._gap(m, gap) ** 2 for t, gap, w in nodes)
        return 2 * (acc + self.flat)

    # -- float64 log-moments for large n -----------------------------------------

    def _log_moment_nodes(self):
        with self._lock:
            if self._log_nodes is None:
                # Gauss-Legendre panels in log(gap) from 1e-170 up to the flat part
                xg, wg = np.polynomial.legendre.leggauss(16)
                top = math.log(1 - self.flat) if self.flat else 0.0
                edges = np.linspace(math.log(1e-170), top, 601)
                us, ws = [], []
                for a, b in zip(edges[:-1], edges[1:]):
                    y = (b - a) / 2 * xg + (a + b) / 2
                    us.append(np.exp(y))
                    ws.append((b - a) / 2 * wg * np.exp(y))
                u = np.concatenate(us)
                w = np.concatenate(ws)
                with np.errstate(divide="ignore"):
                    logb = np.log(self.beta_float(1 - u))
                if self.name == "plateau":
                    x = 2 * u
                    logb = -np.logaddexp(0.0, 1 / x - 1 / (1 - x))
                else:
                    logb = 1 - 1 / (u * (2 - u))
                self._log_nodes = (np.log1p(-u), np.log(w) + logb)
            return self._log_nodes

    def log_moment(self, ns):
        """log m_n in float64 for even n (any size); odd n give -inf."""
        ns = np.atleast_1d(np.asarray(ns, dtype=float))
        log1m, base = self._log_moment_nodes()
        tail = _kernels.log_moments(ns, log1m, base)
        if self.flat:
            flat = (ns + 1) * math.log(self.flat) - np.log(ns + 1)
            tail = np.logaddexp(tail, flat)
        out = math.log(2) + tail
        out[ns % 2 == 1] = -np.inf
        return out

    # -- mu: Taylor route ------------------------------------------------------

    def mu_deriv_at_zero(self, n: int, m=None):
        m = m or _mp
        if n % 2:
            return m.mpc(0)
        mom = self.moments()[n] if n < MOMENT_COUNT else m.exp(m.mpf(float(self.log_moment(n)[0])))
        return m.mpc(m.mpf(mom) * (-1) ** (n // 2) / (2 * m.pi))

    def mu_taylor(self, s, order: int = 0, m=None):
        """mu^(order)(s) by its Taylor series at 0; valid for |s| <= TAYLOR_RADIUS."""
        m = m or _mp
        mom = self.moments()
        s = m.mpc(s)
        acc = m.mpc(0)
        term_scale = m.one
        tiny = m.ldexp(1, -m.prec - 8)
        n = 0
        while order + n < MOMENT_COUNT:
            j = order + n
            if j % 2 == 0:
                coeff = m.mpf(mom[j]) * (-1) ** (j // 2) / (2 * m.pi)
                acc += coeff * term_scale
            term_scale = term_scale * s / (n + 1)
            n += 1
            if n > abs(s) * 3 + 8 and abs(term_scale) < tiny:
                break
        else:
            raise ArithmeticError(f"Taylor route for mu needs more than {MOMENT_COUNT} moments at |s|={abs(s)}")
        return acc

    def mu_antiderivative(self, s, m=None):
        """(value, radius) for int_{-inf}^{s} mu, the smoothed Heaviside step."""
        m = m or _mp
        s = m.mpc(s)
        if abs(s) <= TAYLOR_RADIUS:
            mom = self.moments()
            acc = m.mpc(m.mpf(1) / 2)
            term_scale = s
            tiny = m.ldexp(1, -m.prec - 8)
            for j in range(MOMENT_COUNT - 1):
                if j % 2 == 0:
                    acc += m.mpf(mom[j]) * (-1) ** (j // 2) / (2 * m.pi) * term_scale
                term_scale = term_scale * s / (j + 2)
                if j > abs(s) * 3 + 8 and abs(term_scale) < tiny:
                    return acc, m.zero
            raise ArithmeticError(f"Taylor route for the step needs more moments at |s|={abs(s)}")
        re, im = s.real, abs(s.imag)
        if abs(re) <= TAYLOR_RADIUS:
            base, err = self.mu_antiderivative(re, m)
        else:
            base, err = m.mpc(1 if re > 0 else 0), m.mpf(self.tail_bound(abs(re)))
        if im:
            err += im * m.mpf(self.mu_bound(max(abs(re), 1), 0, float(im)))
        return base, err

    # -- mu: bound route -----------------------------------------------------

    def log_derivative_norms(self):
        """log of L1 norms of beta^(k), k <= BOUND_ORDER, times 4 (both halves, safety 2)."""
        with self._lock:
            if self._deriv_norms is None:
                self._deriv_norms = self._compute_log_norms()
            return self._deriv_norms

    def _compute_log_norms(self):
        # nodes in the transition variable x in (0, 1), logistic spacing towards
        # both ends; jets in the local variable u with x = x0 + h u, h = dist / 4
        v = np.linspace(-LOGISTIC_SPAN, LOGISTIC_SPAN, NORM_NODES)
        x = 1 / (1 + np.exp(-v))
        dx = x * (1 - x) * (v[1] - v[0])
        if self.name == "plateau":
            h = np.minimum(x, 1 - x) / 4
            log_abs, keep = self._plateau_jets(x, h)
            # beta(t) = F(x), x = 2(1 - t): d/dt = -2 d/dx, dt = dx / 2
            log_scale_t, log_w = math.log(2.0), np.log(dx / 2)
        else:
            # x is the gap 1 - t
            h = x / 4
            log_abs, keep = self._gevrey_jets(x, h)
            log_scale_t, log_w = 0.0, np.log(dx)
        ks = np.arange(BOUND_ORDER + 1)
        log_fact = np.array([math.lgamma(k + 1) for k in ks])
        logs = log_abs + log_fact - np.outer(np.log(h), ks) + ks * log_scale_t + log_w[:, None]
        logs[~keep] = -np.inf
        total = np.logaddexp.reduce(logs, axis=0)
        out = total + math.log(4.0)
        out[0] = max(out[0], math.log(float(self.integral())))
        return out

    def _plateau_jets(self, x, h):
        """log|Taylor coefficients| of F(x0 + h u) in u, F = 1/(1 + e^g), g = 1/x - 1/(1-x)."""
        xs = _jet_var(x, BOUND_ORDER)
        xs[:, 1] = h
        g = _jet_recip(xs) - _jet_recip(_jet_shift(-xs, 1.0))
        g0 = g[:, 0].copy()
        keep = np.abs(g0) < 1500
        sign = np.where(g0 > 0, 1.0, -1.0)[:, None]
        # E = exp(-|g|) = e^{-|g0|} exp(-sign (g - g0)); F = H or 1 - H with H = E / (1 + E)
        centred = -sign * g
        centred[:, 0] = 0.0
        centred[~keep] = 0.0
        e_hat = _jet_exp(centred)
        scale = np.exp(-np.abs(g0))[:, None]
        h_norm = _jet_mul(e_hat, _jet_recip(_jet_shift(scale * e_hat, 1.0)))
        with np.errstate(divide="ignore"):
            log_abs = np.log(np.abs(h_norm)) - np.abs(g0)[:, None]
        # F = 1 - H on the plateau side only shifts the order-0 coefficient
        log_abs[g0 <= 0, 0] = 0.0
        return log_abs, keep

    def _gevrey_jets(self, gap, h):
        """Same for beta = exp(1 - 1/(gap (2 - gap)))."""
        gs = _jet_var(gap, BOUND_ORDER)
        gs[:, 1] = h
        expo = -_jet_recip(_jet_mul(gs, _jet_shift(-gs, 2.0)))
        e0 = expo[:, 0].copy()
        keep = e0 > -1500
        expo[:, 0] = 0.0
        expo[~keep] = 0.0
        e_hat = _jet_exp(expo)
        with np.errstate(divide="ignore"):
            log_abs = np.log(np.abs(e_hat)) + (1 + e0)[:, None]
        return log_abs, keep

    def _log_leibniz_norm(self, order: int, j: int) -> float:
        """log of a bound on || d^j/dt^j (t^order beta) ||_1 over [-1, 1]."""
        key = (order, j)
        hit = self._leibniz_cache.get(key)
        if hit is None:
            norms = self.log_derivative_norms()
            terms = [
                math.log(math.comb(j, i)) + math.lgamma(order + 1) - math.lgamma(order - i + 1) + norms[j - i]
                for i in range(min(j, order) + 1)
            ]
            hit = self._leibniz_cache[key] = float(np.logaddexp.reduce(terms))
        return hit

    def log_mu_bound(self, s_abs, order: int = 0, imag: float = 0.0) -> float:
        """log of an upper bound on |mu^(order)(s)| with |s| = s_abs, |Im s| = imag."""
        log_s = math.log(float(s_abs)) if s_abs > 0 else -math.inf
        best = self._log_leibniz_norm(order, 0)
        if log_s > 0:
            for j in range(1, BOUND_ORDER + 1):
                best = min(best, self._log_leibniz_norm(order, j) - j * log_s)
        return best + abs(float(imag)) - math.log(2 * math.pi)

    def mu_bound(self, s_abs, order: int = 0, imag: float = 0.0):
        return _mp.exp(self.log_mu_bound(s_abs, order, imag))

    def log_tail_bound(self, S: float, order: int = 0, power: int = 0) -> float:
        """log of a bound on int_{|u|>S} |u|^power |mu^(order)(u)| du for real u."""
        log_S = math.log(float(S))
        best = math.inf
        for j in range(power + 2, BOUND_ORDER + 1):
            val = (self._log_leibniz_norm(order, j) - math.log(math.pi)
                   + (power + 1 - j) * log_S - math.log(j - power - 1))
            best = min(best, val)
        return best

    def tail_bound(self, S: float, order: int = 0, power: int = 0):
        return _mp.exp(self.log_tail_bound(S, order, power))

    def log_l1_bound(self) -> float:
        """log of a bound on int |mu| from |mu| <= min(||beta||_1, ||beta''||_1 / s^2) / 2 pi."""
        return (math.log(2 / math.pi)
                + 0.5 * (self._log_leibniz_norm(0, 0) + self._log_leibniz_norm(0, 2)))

    def taylor_at_zero(self, count: int, m=None) -> list:
        """Taylor coefficients of beta at 0."""
        m = m or _mp
        if self.name == "plateau":
            return [m.one] + [m.zero] * (count - 1)
        # beta = exp(-sum_{k>=1} t^(2k)); exp of a series by the usual recurrence
        g = [m.zero] + [-m.one if n % 2 == 0 else m.zero for n in range(1, count)]
        b = [m.one]
        for n in range(1, count):
            b.append(m.fsum(k * g[k] * b[n - k] for k in range(1, n + 1)) / n)
        return b

    # -- mu: float quadrature ---------------------------------------------------------

    def _t_nodes(self):
        xg, wg = np.polynomial.legendre.leggauss(24)
        edges = np.linspace(-1.0, 1.0, 2 * 640 + 1)
        a, b = edges[:-1, None], edges[1:, None]
        t = ((b - a) / 2 * xg + (a + b) / 2).ravel()
        w = ((b - a) / 2 * wg).ravel()
        return t, w

    def mu_float(self, s, order: int = 0):
        """mu^(order)(s) in float64 by direct quadrature of the defining integral."""
        t, w = self._t_nodes()
        weights = (w * self.beta_float(t)).astype(complex) * (1j * t) ** order
        return _kernels.exp_sum(t, weights, np.atleast_1d(np.asarray(s, dtype=complex)), 1.0) / (2 * np.pi)

    # -- mu: dispatch --------------------------------------------------------

    def mu(self, s, order: int = 0, m=None):
        """(value, radius) for mu^(order)(s), picking the route by |s|."""
        m = m or _mp
        s = m.mpc(s)
        if abs(s) <= TAYLOR_RADIUS:
            return self.mu_taylor(s, order, m), m.zero
        return m.mpc(0), m.mpf(self.mu_bound(abs(s), order, float(abs(s.imag))))


@lru_cache(maxsize=None)
def get_mollifier(name: str = "plateau") -> Mollifier:
    return Mollifier(name)


# -- truncated Taylor series, vectorized over sample points -----------------------


def _jet_var(t, order):
    j = np.zeros((len(t), order + 1))
    j[:, 0] = t
    if order:
        j[:, 1] = 1.0
    return j


def _jet_shift(a, c):
    out = a.copy()
    out[:, 0] += c
    return out


def _jet_scale(a, c):
    return a * c


def _jet_mul(a, b):
    n = a.shape[1]
    out = np.zeros_like(a)
    for i in range(n):
        out[:, i:] += a[:, i:i + 1] * b[:, : n - i]
    return out


def _jet_recip(a):
    n = a.shape[1]
    out = np.zeros_like(a)
    out[:, 0] = 1 / a[:, 0]
    for k in range(1, n):
        acc = np.einsum("ij,ij->i", a[:, 1 : k + 1], out[:, k - 1 :: -1][:, :k])
        out[:, k] = -acc * out[:, 0]
    return out


def _jet_exp(a):
    n = a.shape[1]
    out = np.zeros_like(a)
    with np.errstate(over="ignore", under="ignore"):
        out[:, 0] = np.exp(a[:, 0])
    ks = np.arange(1, n)
    for k in range(1, n):
        acc = np.einsum("ij,ij->i", (ks[:k] * a[:, 1 : k + 1]), out[:, k - 1 :: -1][:, :k])
        out[:, k] = acc / k
    return out
