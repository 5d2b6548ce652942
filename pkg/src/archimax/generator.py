"""Archimedean generators derived from Williamson measures.

psi(z) = F(1/z) - z * M1(1/z) where F is the distribution function of the
Williamson measure and M1 its partial first moment; the left derivative is
-M1(1/z). The pseudo-inverse phi is obtained by bracketed root finding on a
knot table that contains every kink of psi.
"""
from __future__ import annotations

import math
from bisect import bisect_left

import numpy as np
from scipy.optimize import brentq

from .measures import ExponentialWilliamson, validate_williamson

INF = math.inf


# extended-real helpers: a*inf = inf (a > 0), a/inf = 0, a/0 = inf
def xdiv(a: float, b: float) -> float:
    if b == 0.0:
        return INF if a > 0 else 0.0
    if b == INF:
        return 0.0 if a != INF else 1.0
    return a / b


def xmul(a: float, b: float) -> float:
    if a == INF or b == INF:
        return 0.0 if (a == 0.0 or b == 0.0) else INF
    return a * b


class Generator:
    """Generator psi, pseudo-inverse phi and left derivative from a Williamson measure."""

    def __init__(self, measure, check: bool = True):
        if check:
            rep = validate_williamson(measure)
            if not rep.ok:
                raise ValueError("invalid Williamson measure:\n" + rep.describe())
        self.measure = measure
        low = measure.inf_support()
        self.strict = low == 0.0
        self.phi_zero = INF if self.strict else 1.0 / low
        zk = {0.0}
        for k in measure.knots():
            if k > 0:
                zk.add(1.0 / k)
        if not self.strict:
            zk = {z for z in zk if z <= self.phi_zero}
            zk.add(self.phi_zero)
        self._zk = sorted(zk)
        self._yk = [self.psi(z) for z in self._zk]
        # psi decreases along the knots; negate for ascending search
        self._neg_yk = [-y for y in self._yk]
        self._zk_np = np.asarray(self._zk)
        self._neg_yk_np = np.asarray(self._neg_yk)

    @classmethod
    def exponential(cls) -> "ExponentialGenerator":
        return ExponentialGenerator()

    def __repr__(self):
        return f"Generator({self.measure!r})"

    def is_strict(self) -> bool:
        return self.strict

    # -- psi ------------------------------------------------------------------
    def psi(self, z):
        if np.ndim(z) != 0:
            return self._psi_array(np.asarray(z, dtype=float))
        z = float(z)
        if z <= 0.0:
            return 1.0
        if z >= self.phi_zero:
            return 0.0
        c = 1.0 / z
        m = self.measure
        v = m.cdf(c) - z * m.partial_first_moment(c)
        return min(max(v, 0.0), 1.0)

    def _psi_array(self, z: np.ndarray) -> np.ndarray:
        m = self.measure
        with np.errstate(divide="ignore", invalid="ignore"):
            zs = np.where((z > 0) & np.isfinite(z), z, 1.0)
            c = 1.0 / zs
            v = m.cdf(c) - zs * m.partial_first_moment(c)
        v = np.clip(v, 0.0, 1.0)
        v = np.where(z <= 0, 1.0, v)
        return np.where(z >= self.phi_zero, 0.0, v)

    # -- phi ------------------------------------------------------------------
    def phi(self, y):
        """phi(y) = inf{z : psi(z) = y}."""
        if np.ndim(y) != 0:
            return self._phi_array(np.asarray(y, dtype=float))
        y = float(y)
        if y >= 1.0:
            return 0.0
        if y <= 0.0:
            return self.phi_zero
        i = bisect_left(self._neg_yk, -y)
        if i < len(self._zk) and self._yk[i] == y:
            return self._zk[i]
        if i == len(self._zk):
            lo = self._zk[-1]
            hi = max(2.0 * lo, 1.0)
            while self.psi(hi) > y:
                lo, hi = hi, 2.0 * hi
        else:
            lo, hi = self._zk[i - 1], self._zk[i]
        return brentq(lambda z: self.psi(z) - y, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=500)

    def _phi_array(self, y: np.ndarray) -> np.ndarray:
        shape = y.shape
        y = y.ravel()
        out = np.empty_like(y)
        top = y >= 1.0
        bot = y <= 0.0
        mid = ~(top | bot)
        out[top] = 0.0
        out[bot] = self.phi_zero
        ym = y[mid]
        if ym.size:
            i = np.searchsorted(self._neg_yk_np, -ym, "left")
            nk = len(self._zk)
            exact = (i < nk) & (self._neg_yk_np[np.minimum(i, nk - 1)] == -ym)
            lo = self._zk_np[np.clip(i - 1, 0, nk - 1)]
            hi = np.where(i < nk, self._zk_np[np.minimum(i, nk - 1)], np.nan)
            beyond = i >= nk
            if beyond.any():
                lo = np.where(beyond, self._zk_np[-1], lo)
                hb = np.full(int(beyond.sum()), max(2.0 * self._zk[-1], 1.0))
                yb = ym[beyond]
                for _ in range(2000):
                    over = self._psi_array(hb) > yb
                    if not over.any():
                        break
                    hb = np.where(over, 2.0 * hb, hb)
                hi = hi.copy()
                hi[beyond] = hb
                lo_b = lo[beyond]
                lo_b = np.where(self._psi_array(hb / 2.0) > yb, np.maximum(lo_b, hb / 2.0), lo_b)
                lo[beyond] = lo_b
            # bisection: keep psi(lo) >= y > psi(hi)
            for _ in range(200):
                m = 0.5 * (lo + hi)
                pm = self._psi_array(m)
                right = pm > ym
                lo = np.where(right, m, lo)
                hi = np.where(right, hi, m)
                if np.all(hi - lo <= 1e-15 * np.maximum(1.0, hi)):
                    break
            res = 0.5 * (lo + hi)
            res = np.where(exact, self._zk_np[np.minimum(i, nk - 1)], res)
            out[mid] = res
        return out.reshape(shape)

    # -- derivatives ------------------------------------------------------------
    def dminus_psi(self, z):
        """Left derivative -M1(1/z); left-continuous, 0 beyond phi(0)."""
        return self._deriv(z, closed=True)

    def dplus_psi(self, z):
        """Right derivative -M1 over [0, 1/z); the right limit of dminus_psi."""
        return self._deriv(z, closed=False)

    def _deriv(self, z, closed: bool):
        m = self.measure
        f = m.partial_first_moment if closed else m.partial_first_moment_open
        if np.ndim(z) != 0:
            z = np.asarray(z, dtype=float)
            with np.errstate(divide="ignore"):
                c = np.where(z > 0, 1.0 / np.where(z > 0, z, 1.0), np.inf)
            return -f(c)
        z = float(z)
        if z <= 0.0:
            return -m.mean()
        if z == INF:
            return 0.0
        return -f(1.0 / z)

    def beta(self, t):
        """beta(t) = D^-psi(phi(t)) * phi(t) with the boundary conventions."""
        return self._beta(t, left=False)

    def beta_left(self, t):
        """Left limit beta(t-), using the right derivative at phi(t)."""
        return self._beta(t, left=True)

    def _beta(self, t, left: bool):
        t = float(t)
        if t >= 1.0:
            # phi(t) -> 0 while D^-psi stays bounded, so both one-sided values vanish
            return 0.0
        if t <= 0.0:
            if left:
                return 0.0
            if self.strict:
                return 0.0
            return self.dminus_psi(self.phi_zero) * self.phi_zero
        return self._beta_interior(t, left)

    def _beta_interior(self, t: float, left: bool) -> float:
        p = self.phi(t)
        if p == 0.0:
            return 0.0
        d = self.dplus_psi(p) if left else self.dminus_psi(p)
        return d * p


class ExponentialGenerator(Generator):
    """psi(z) = exp(-z) in closed form."""

    def __init__(self):
        self.measure = ExponentialWilliamson()
        self.strict = True
        self.phi_zero = INF
        self._zk = [0.0]
        self._yk = [1.0]

    def __repr__(self):
        return "ExponentialGenerator()"

    def psi(self, z):
        if np.ndim(z) != 0:
            z = np.asarray(z, dtype=float)
            return np.where(z <= 0, 1.0, np.exp(-np.maximum(z, 0.0)))
        z = float(z)
        return 1.0 if z <= 0.0 else math.exp(-z)

    def phi(self, y):
        if np.ndim(y) != 0:
            y = np.asarray(y, dtype=float)
            with np.errstate(divide="ignore"):
                return np.where(y >= 1, 0.0, -np.log(np.clip(y, 0.0, 1.0)))
        y = float(y)
        if y >= 1.0:
            return 0.0
        if y <= 0.0:
            return INF
        return -math.log(y)

    def _deriv(self, z, closed: bool):
        if np.ndim(z) != 0:
            return -np.exp(-np.maximum(np.asarray(z, dtype=float), 0.0))
        z = float(z)
        return -math.exp(-max(z, 0.0)) if z != INF else 0.0

    def _beta(self, t, left: bool):
        t = float(t)
        if t <= 0.0 or t >= 1.0:
            return 0.0
        return t * math.log(t)
