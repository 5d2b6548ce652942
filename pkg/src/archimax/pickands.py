"""Pickands dependence functions derived from Pickands dependence measures."""
from __future__ import annotations

import math
from functools import cached_property

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .measures import validate_pickands

INF = math.inf


class PickandsFunction:
    """A(t) = 1 - t + 2 * integral of F over [0, t], and its companions.

    The integral of F is taken by parts, t F(t) - M1(t), so no quadrature is
    needed for any supported measure.
    """

    def __init__(self, measure, check: bool = True):
        if check:
            rep = validate_pickands(measure)
            if not rep.ok:
                raise ValueError("invalid Pickands measure:\n" + rep.describe())
        self.measure = measure
        # L = sup{F = 0} is the lowest support point, R = inf{F = 1} the highest
        self.L = min(max(measure.inf_support(), 0.0), 0.5)
        self.R = max(min(measure.sup_support(), 1.0), 0.5)
        self._tail = (1.0 - self.L) / self.L if self.L > 0 else INF
        self._knots = sorted({k for k in measure.knots() if 0.0 <= k <= 1.0} | {self.L, self.R})

    def __repr__(self):
        return f"PickandsFunction({self.measure!r})"

    def L_R(self):
        return self.L, self.R

    def knots(self):
        return list(self._knots)

    # -- A and its right derivative -------------------------------------------------
    def A(self, t):
        m = self.measure
        if np.ndim(t) != 0:
            t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
            v = 1.0 - t + 2.0 * (t * m.cdf(t) - m.partial_first_moment(t))
            return np.clip(v, np.maximum(t, 1.0 - t), 1.0)
        t = min(max(float(t), 0.0), 1.0)
        v = 1.0 - t + 2.0 * (t * m.cdf(t) - m.partial_first_moment(t))
        return min(max(v, t, 1.0 - t), 1.0)

    def dplusA(self, t):
        """2 F(t) - 1; at t = 1 the left derivative is returned."""
        m = self.measure
        if np.ndim(t) != 0:
            t = np.asarray(t, dtype=float)
            return np.where(t >= 1.0, 2.0 * m.cdf_left(1.0) - 1.0, 2.0 * m.cdf(t) - 1.0)
        t = float(t)
        if t >= 1.0:
            return 2.0 * m.cdf_left(1.0) - 1.0
        return 2.0 * m.cdf(t) - 1.0

    # -- h and its pseudo-inverse ---------------------------------------------------------
    def h(self, t):
        """A(t)/t with h(0) = inf."""
        if np.ndim(t) != 0:
            t = np.asarray(t, dtype=float)
            with np.errstate(divide="ignore", invalid="ignore"):
                v = self.A(t) / t
            return np.where(t <= 0, INF, np.maximum(v, 1.0))
        t = float(t)
        if t <= 0.0:
            return INF
        return max(self.A(t) / t, 1.0)

    def h_pseudo_inverse(self, z):
        """Inverse of h on (0, R); R at z = 1, 0 at z = inf, 1/(z+1) on the linear tail."""
        if np.ndim(z) != 0:
            return self._h_inv_array(np.asarray(z, dtype=float))
        z = float(z)
        if z < 1.0 - 1e-9:
            raise ValueError(f"h_pseudo_inverse needs z >= 1, got {z}")
        if z <= 1.0:
            return self.R
        if z == INF:
            return 0.0
        if z >= self._tail:
            return 1.0 / (z + 1.0)
        # A >= 1 - t gives h(1/(z+1)) >= z; A <= 1 gives h(1/z) <= z
        lo, hi = 1.0 / (z + 1.0), min(self.R, 1.0 / z)
        for k in self._knots:
            if lo < k < hi:
                if self.h(k) >= z:
                    lo = k
                else:
                    hi = k
        flo = self.h(lo) - z
        if flo <= 0.0:
            return lo
        fhi = self.h(hi) - z
        if fhi >= 0.0:
            return hi
        return brentq(lambda t: self.h(t) - z, lo, hi, xtol=1e-16, rtol=8.9e-16, maxiter=500)

    def _h_inv_array(self, z: np.ndarray) -> np.ndarray:
        shape = z.shape
        z = z.ravel()
        if np.any(z < 1.0 - 1e-9):
            raise ValueError("h_pseudo_inverse needs z >= 1")
        out = np.empty_like(z)
        one = z <= 1.0
        inf = np.isinf(z)
        tail = (~one) & (~inf) & (z >= self._tail)
        mid = ~(one | inf | tail)
        out[one] = self.R
        out[inf] = 0.0
        out[tail] = 1.0 / (z[tail] + 1.0)
        zm = z[mid]
        if zm.size:
            lo = 1.0 / (zm + 1.0)
            hi = np.minimum(self.R, 1.0 / zm)
            for _ in range(100):
                m = 0.5 * (lo + hi)
                above = self.h(m) >= zm
                lo = np.where(above, m, lo)
                hi = np.where(above, hi, m)
                if np.all(hi - lo <= 2e-16 * hi):
                    break
            out[mid] = 0.5 * (lo + hi)
        return out.reshape(shape)

    # -- G ----------------------------------------------------------------------------------
    def G(self, t):
        """A(t) + D+A(t)(1 - t); 0 on [0, L), 1 on [R, 1]."""
        return self._G(t, left=False)

    def G_left(self, t):
        """Left limit G(t-), with G(0-) = 0."""
        return self._G(t, left=True)

    def _G(self, t, left: bool):
        m = self.measure
        F = m.cdf_left if left else m.cdf
        if np.ndim(t) != 0:
            t = np.asarray(t, dtype=float)
            v = self.A(t) + (2.0 * F(np.clip(t, 0.0, 1.0)) - 1.0) * (1.0 - t)
            v = np.clip(v, 0.0, 1.0)
            if left:
                v = np.where(t <= self.L, 0.0, v)
                return np.where(t > self.R, 1.0, v)
            v = np.where(t < self.L, 0.0, v)
            return np.where(t >= self.R, 1.0, v)
        t = float(t)
        if left:
            if t <= self.L:
                return 0.0
            if t > self.R:
                return 1.0
        else:
            if t < self.L:
                return 0.0
            if t >= self.R:
                return 1.0
        v = self.A(t) + (2.0 * F(t) - 1.0) * (1.0 - t)
        return min(max(v, 0.0), 1.0)

    # -- Kendall's tau of the extreme-value copula ---------------------------------------------
    @cached_property
    def tau_ev(self) -> float:
        """2 * integral of t(1-t)/A(t) against the Pickands measure."""
        return self._tau_ev()[0]

    @cached_property
    def tau_ev_error(self) -> float:
        return self._tau_ev()[1]

    def _tau_ev(self):
        m = self.measure
        total, err = 0.0, 0.0
        for a, w in m.atoms:
            total += a * (1.0 - a) / self.A(a) * w
        for s in m.segments:
            val, e = quad(lambda t: t * (1.0 - t) / self.A(t) * float(s.density(t)),
                          s.lo, s.hi, epsabs=1e-12, epsrel=1e-12, limit=200)
            total += val
            err += e
        if m.singular is not None:
            sp = m.singular
            fine = self._cantor_stieltjes(sp, 14)
            coarse = self._cantor_stieltjes(sp, 12)
            total += fine
            err += abs(fine - coarse)
        return min(max(2.0 * total, 0.0), 1.0), 2.0 * err

    def _cantor_stieltjes(self, sp, level: int) -> float:
        # level-k Cantor intervals each carry 2^-k of the mass; midpoint rule
        left = np.zeros(1)
        for k in range(1, level + 1):
            left = np.concatenate((left, left + 2.0 * 3.0 ** -k))
        mid = sp.lo + sp.width * (left + 0.5 * 3.0 ** -level)
        f = mid * (1.0 - mid) / self.A(mid)
        return float(sp.mass * f.mean())
