"""Bivariate Archimax copulas built from a Williamson and a Pickands measure.

C(x, y) = psi((phi(x) + phi(y)) * A(s)) with s = phi(x) / (phi(x) + phi(y)).

Conditional distributions are handled in the angular coordinate s, which is
increasing in y for fixed x. In that coordinate the kernel factorises as

    K(x, s) = H(x, s) * G(s),   H(x, s) = M1(1 / (phi(x) h(s))) / M1(1 / phi(x)),

so every jump is either a Williamson atom (jump of H) or an interior Pickands
atom (jump of G). Jump points are evaluated symbolically, with closed and
half-open partial moments instead of epsilon differencing.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .generator import Generator
from .pickands import PickandsFunction

log = logging.getLogger(__name__)

INF = math.inf
SNAP_TOL = 1e-11       # match a kernel argument to a known jump location
COINCIDE_TOL = 1e-12   # two atom curves are treated as one kernel atom
GAMMA_ATOM = "gammaAtom"
THETA_ATOM = "thetaAtom"
COINCIDENT = "coincident"

_GL_CACHE: dict = {}


def gauss_legendre(n: int):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _adaptive_panel_quad(f, edges, order: int, tol: float, max_rounds: int = 40):
    """Split panels whose order-n and order-2n Gauss-Legendre values disagree.

    Returns (integral, error estimate). Panels are processed in fixed order so
    the result is deterministic.
    """
    n1, w1 = gauss_legendre(order)
    n2, w2 = gauss_legendre(2 * order)
    a = np.asarray(edges[:-1], float)
    b = np.asarray(edges[1:], float)
    total, err = 0.0, 0.0
    for _ in range(max_rounds):
        if a.size == 0:
            break
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        p1 = mid[:, None] + half[:, None] * n1[None, :]
        p2 = mid[:, None] + half[:, None] * n2[None, :]
        q1 = half * (f(p1.ravel()).reshape(p1.shape) @ w1)
        q2 = half * (f(p2.ravel()).reshape(p2.shape) @ w2)
        e = np.abs(q2 - q1)
        # local tolerance proportional to panel width, with an absolute floor
        done = (e <= tol * np.maximum(b - a, 1e-3)) | (b - a < 1e-12)
        total += float(q2[done].sum())
        err += float(e[done].sum())
        a, b = a[~done], b[~done]
        a, b = np.concatenate((a, mid[~done])), np.concatenate((mid[~done], b))
        order_idx = np.argsort(a, kind="stable")
        a, b = a[order_idx], b[order_idx]
    if a.size:
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        p1 = mid[:, None] + half[:, None] * n1[None, :]
        p2 = mid[:, None] + half[:, None] * n2[None, :]
        q1 = half * (f(p1.ravel()).reshape(p1.shape) @ w1)
        q2 = half * (f(p2.ravel()).reshape(p2.shape) @ w2)
        total += float(q2.sum())
        err += float(np.abs(q2 - q1).sum())
    return total, err


def _panel_quad(f, edges, order: int):
    """Composite Gauss-Legendre over consecutive edges; f is vectorized."""
    nodes, weights = gauss_legendre(order)
    edges = np.asarray(edges, dtype=float)
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    pts = (0.5 * (a + b))[:, None] + half[:, None] * nodes[None, :]
    vals = f(pts.ravel()).reshape(pts.shape)
    return float(np.sum(half[:, None] * weights[None, :] * vals))


@dataclass
class KernelAtom:
    y: float
    mass: float
    kind: str
    source: float  # Williamson atom location, Pickands atom location, or nan

    def to_dict(self):
        return {"y": self.y, "mass": self.mass, "kind": self.kind, "source": self.source}


@dataclass
class KernelAtomList:
    x: float
    entries: list = field(default_factory=list)

    @property
    def total_mass(self) -> float:
        return sum(e.mass for e in self.entries)

    def locations(self):
        return [e.y for e in self.entries]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


@dataclass
class LevelSetDescription:
    t: float
    kind: str                  # graph, hook, region, axes or point
    points: list               # sampled polyline of the curve part
    vertical: tuple | None     # (x, y_low, y_high) or None
    is_graph_only: bool
    curve: object = None       # callable x -> y on the curve part

    def rows(self):
        """(x, y, segment) rows for CSV output."""
        out = [(x, y, "curve") for x, y in self.points]
        if self.vertical is not None:
            x0, lo, hi = self.vertical
            out += [(x0, lo, "vertical"), (x0, hi, "vertical")]
        return out


@dataclass
class ComponentMasses:
    abs: float
    dis: float
    sing: float
    error: float
    tol: float

    @property
    def tolerance_met(self) -> bool:
        return self.error <= self.tol

    def to_dict(self):
        return {"abs": self.abs, "dis": self.dis, "sing": self.sing,
                "error": self.error, "tol": self.tol, "toleranceMet": self.tolerance_met}


class ArchimaxCopula:
    """Archimax copula from a generator and a Pickands dependence function."""

    def __init__(self, generator: Generator, pickands: PickandsFunction):
        self.gen = generator
        self.pick = pickands
        self.gamma = generator.measure
        self.theta = pickands.measure
        self.L, self.R = pickands.L_R()
        self.strict = generator.strict
        self.phi_zero = generator.phi_zero
        self._gatoms = [(a, m) for a, m in sorted(self.gamma.atoms) if a > 0 and m > 0]
        self._tatoms = self.theta.interior_atoms()
        self._tloc = [r for r, _ in self._tatoms]

    @classmethod
    def from_measures(cls, gamma, theta) -> "ArchimaxCopula":
        from .measures import ExponentialWilliamson
        gen = Generator.exponential() if isinstance(gamma, ExponentialWilliamson) else Generator(gamma)
        return cls(gen, PickandsFunction(theta))

    def __repr__(self):
        return f"ArchimaxCopula({self.gen!r}, {self.pick!r})"

    @property
    def tau_A(self) -> float:
        return self.pick.tau_ev

    # ------------------------------------------------------------------
    # distribution function
    # ------------------------------------------------------------------
    def cdf(self, x, y):
        if np.ndim(x) != 0 or np.ndim(y) != 0:
            x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
            return self._cdf_from_phi(x, y, self.gen.phi(x), self.gen.phi(y))
        x, y = float(x), float(y)
        if x <= 0.0 or y <= 0.0:
            return 0.0
        if x >= 1.0:
            return min(y, 1.0)
        if y >= 1.0:
            return x
        px, py = self.gen.phi(x), self.gen.phi(y)
        total = px + py
        return self.gen.psi(total * self.pick.A(px / total))

    def cdf_grid(self, xs, ys):
        """Matrix C(xs[i], ys[j])."""
        xs = np.asarray(xs, float)
        ys = np.asarray(ys, float)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        PX, PY = np.meshgrid(self.gen.phi(xs), self.gen.phi(ys), indexing="ij")
        return self._cdf_from_phi(X, Y, PX, PY)

    def _cdf_from_phi(self, x, y, px, py):
        with np.errstate(invalid="ignore", divide="ignore"):
            total = px + py
            ok = np.isfinite(total) & (total > 0)
            tsafe = np.where(ok, total, 1.0)
            s = np.where(ok, px / tsafe, 0.5)
            v = self.gen.psi(np.where(ok, tsafe * self.pick.A(s), INF))
        v = np.where((x <= 0) | (y <= 0), 0.0, v)
        v = np.where(x >= 1, np.minimum(y, 1.0), v)
        v = np.where((y >= 1) & (x < 1), np.maximum(x, 0.0), v)
        return v

    # ------------------------------------------------------------------
    # Markov kernel
    # ------------------------------------------------------------------
    def kernel_cdf(self, x: float, y: float) -> float:
        """K(x, [0, y])."""
        return self._kernel(float(x), float(y), left=False)

    def kernel_cdf_left(self, x: float, y: float) -> float:
        """lim K(x, [0, y']) as y' increases to y."""
        return self._kernel(float(x), float(y), left=True)

    def _kernel(self, x: float, y: float, left: bool) -> float:
        if x <= 0.0 or x >= 1.0:
            return 0.0 if (left and y <= 0.0) else 1.0
        if y <= 0.0 and left:
            return 0.0
        if y > 1.0:
            return 1.0
        px = self.gen.phi(x)
        py = self.gen.phi(y)
        s = 0.0 if py == INF else px / (px + py)
        return self._kernel_at_s(px, s, left)

    def _kernel_at_s(self, px: float, s: float, left: bool) -> float:
        if s <= 0.0:
            return 0.0
        D = self.gamma.partial_first_moment(1.0 / px)
        z = px * self.pick.h(s)
        c = 1.0 / z
        m = self.gamma
        a = m.nearest_atom(c, SNAP_TOL) if self._gatoms else None
        if a is not None:
            H = m.partial_first_moment_open(a) if (left and s <= self.R) else m.partial_first_moment(a)
        else:
            H = m.partial_first_moment(c)
        r = self._near_theta_atom(s)
        if r is not None:
            G = self.pick.G_left(r) if left else self.pick.G(r)
        else:
            G = self.pick.G(s)
        return min(max(H / D * G, 0.0), 1.0)

    def _near_theta_atom(self, s: float):
        for r in self._tloc:
            if abs(s - r) <= SNAP_TOL:
                return r
        return None

    def _kernel_s_array(self, px, D, s):
        """Kernel in the angular coordinate, vectorized, no jump snapping."""
        with np.errstate(divide="ignore", invalid="ignore"):
            z = px * self.pick.h(s)
            c = np.where(np.isfinite(z) & (z > 0), 1.0 / np.where(z > 0, z, 1.0), 0.0)
            c = np.where(z <= 0, INF, c)
            H = self.gamma.partial_first_moment(c) / D
        K = H * self.pick.G(s)
        return np.clip(np.where(s <= 0, 0.0, K), 0.0, 1.0)

    def kernel_cdf_array(self, xs, y: float):
        """K(x, [0, y]) for an array of x and one y (no snapping at jumps)."""
        xs = np.asarray(xs, float)
        K = self.kernel_cdf_phi_array(self.gen.phi(xs), y)
        return np.where((xs <= 0) | (xs >= 1), 1.0, K)

    def kernel_cdf_phi_array(self, px, y: float):
        """Kernel CDF with the conditioning point given as phi(x), for 0 < x < 1."""
        px = np.asarray(px, float)
        if y >= 1.0:
            return np.ones_like(px)
        py = self.gen.phi(float(y))
        with np.errstate(divide="ignore", invalid="ignore"):
            D = self.gamma.partial_first_moment(np.where(px > 0, 1.0 / np.where(px > 0, px, 1.0), INF))
            if py == INF:
                s = np.zeros_like(px)
            else:
                s = np.where(np.isfinite(px), px / (px + py), 1.0)
        return self._kernel_s_array(px, np.where(D > 0, D, 1.0), s)

    # ------------------------------------------------------------------
    # kernel atoms
    # ------------------------------------------------------------------
    def _candidates(self, px: float):
        """Jump points of s -> K(x, s): (s, kind, source, jump)."""
        m = self.gamma
        D = m.partial_first_moment(1.0 / px)
        out = []
        for a, w in self._gatoms:
            zt = 1.0 / (a * px)
            if zt < 1.0 - 1e-12:
                continue
            s = self.pick.h_pseudo_inverse(max(zt, 1.0))
            jump = (m.partial_first_moment(a) - m.partial_first_moment_open(a)) / D * self.pick.G(s)
            out.append((s, GAMMA_ATOM, a, jump))
        for r, w in self._tatoms:
            c = 1.0 / (px * self.pick.h(r))
            H = m.partial_first_moment(c) / D
            jump = H * (self.pick.G(r) - self.pick.G_left(r))
            out.append((r, THETA_ATOM, r, jump))
        return out

    def kernel_atoms(self, x: float) -> KernelAtomList:
        """Point masses of K(x, .) located on the level and ray curves."""
        x = float(x)
        res = KernelAtomList(x)
        if not 0.0 < x < 1.0:
            return res
        px = self.gen.phi(x)
        raw = []
        for s, kind, src, jump in self._candidates(px):
            y = self.gen.psi(px * (1.0 / s - 1.0))
            raw.append(KernelAtom(y, jump, kind, src))
        raw.sort(key=lambda e: e.y)
        groups: list = []
        for e in raw:
            if groups and abs(e.y - groups[-1][-1].y) < COINCIDE_TOL:
                groups[-1].append(e)
            else:
                groups.append([e])
        for g in groups:
            if len(g) == 1:
                e = g[0]
            else:
                y = g[0].y
                jump = self.kernel_cdf(x, y) - self.kernel_cdf_left(x, y)
                log.info("coincident kernel atoms at x=%r, y=%r", x, y)
                e = KernelAtom(y, jump, COINCIDENT, math.nan)
            if e.mass > 0.0:
                res.entries.append(e)
        return res

    # ------------------------------------------------------------------
    # conditional quantile
    # ------------------------------------------------------------------
    def kernel_quantile(self, x: float, u: float) -> float:
        return float(self.kernel_quantile_array(np.array([float(x)]), np.array([float(u)]))[0])

    def kernel_quantile_array(self, x, u):
        """inf{y : K(x, [0, y]) >= u}, snapped exactly onto atom curves."""
        x = np.asarray(x, float).ravel()
        u = np.asarray(u, float).ravel()
        y = np.zeros_like(x)
        inner = (x > 0) & (x < 1)
        if inner.any():
            y[inner] = self._quantile_inner(x[inner], u[inner])
        return y

    def _quantile_inner(self, x, u):
        n = x.size
        m = self.gamma
        px = self.gen.phi(x)
        D = m.partial_first_moment(1.0 / px)
        s_lo = np.zeros(n) if self.strict else px / (px + self.phi_zero)
        cols = []  # (s, valid, K at s, K left of s)
        g_cols = []
        for a, w in self._gatoms:
            zt = 1.0 / (a * px)
            valid = zt >= 1.0 - 1e-12
            s = np.where(valid, self.pick.h_pseudo_inverse(np.maximum(zt, 1.0)), INF)
            Hc = m.partial_first_moment(a) / D
            Ho = m.partial_first_moment_open(a) / D
            g_cols.append([s, valid, Hc, Ho])
        t_cols = []
        for r, w in self._tatoms:
            s = np.full(n, r)
            valid = s > s_lo
            with np.errstate(divide="ignore"):
                c = 1.0 / (px * self.pick.h(r))
            Hc = m.partial_first_moment(c) / D
            t_cols.append([s, valid, Hc, Hc.copy(), self.pick.G(r), self.pick.G_left(r)])
        for tc in t_cols:
            for gc in g_cols:
                co = gc[1] & tc[1] & (np.abs(gc[0] - tc[0]) <= SNAP_TOL)
                if co.any():
                    tc[2] = np.where(co, gc[2], tc[2])
                    tc[3] = np.where(co, gc[3], tc[3])
                    gc[1] = gc[1] & ~co
        for s, valid, Hc, Ho in g_cols:
            Gs = self.pick.G(np.where(valid, s, 0.5))
            cols.append((np.where(valid, s, INF), valid, Hc * Gs, Ho * Gs))
        for s, valid, Hc, Ho, Gc, Gl in t_cols:
            cols.append((np.where(valid, s, INF), valid, Hc * Gc, Ho * Gl))

        lo = s_lo.copy()
        hi = np.ones(n)
        snapped = np.zeros(n, bool)
        s_out = np.zeros(n)
        if cols:
            S = np.stack([c[0] for c in cols], axis=1)
            V = np.stack([c[1] for c in cols], axis=1)
            KC = np.stack([c[2] for c in cols], axis=1)
            KL = np.stack([c[3] for c in cols], axis=1)
            order = np.argsort(S, axis=1, kind="stable")
            S = np.take_along_axis(S, order, 1)
            V = np.take_along_axis(V, order, 1)
            KC = np.take_along_axis(KC, order, 1)
            KL = np.take_along_axis(KL, order, 1)
            hit = V & (KC >= u[:, None])
            has = hit.any(axis=1)
            j = np.argmax(hit, axis=1)
            rows = np.arange(n)
            sj = S[rows, j]
            klj = KL[rows, j]
            snapped = has & (klj < u)
            s_out = np.where(snapped, sj, 0.0)
            # bracket for the continuous stretch containing the quantile
            prev = np.where(j > 0, S[rows, np.maximum(j - 1, 0)], -INF)
            nvalid = V.sum(axis=1)
            last = np.where(nvalid > 0, S[rows, np.maximum(nvalid - 1, 0)], -INF)
            lo = np.where(has, np.maximum(lo, prev), np.maximum(lo, last))
            hi = np.where(has, sj, 1.0)
        todo = ~snapped
        if todo.any():
            lo_t, hi_t = lo[todo], hi[todo]
            ut, pxt, Dt = u[todo], px[todo], D[todo]
            for _ in range(64):
                mid = 0.5 * (lo_t + hi_t)
                up = self._kernel_s_array(pxt, Dt, mid) >= ut
                hi_t = np.where(up, mid, hi_t)
                lo_t = np.where(up, lo_t, mid)
                if np.all(hi_t - lo_t <= 1e-16):
                    break
            s_out[todo] = hi_t
        with np.errstate(divide="ignore"):
            arg = np.where(s_out > 0, px * (1.0 / np.where(s_out > 0, s_out, 1.0) - 1.0), INF)
        return self.gen.psi(arg)

    # ------------------------------------------------------------------
    # curves
    # ------------------------------------------------------------------
    def f_level(self, t: float, x: float) -> float:
        """Level curve f^t(x) on [t, 1]."""
        t, x = float(t), float(x)
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"level t={t} outside [0, 1]")
        if t >= 1.0:
            if x >= 1.0:
                return 1.0
            raise ValueError("the level-1 curve is defined at x = 1 only")
        if not (t - 1e-15 <= x <= 1.0):
            raise ValueError(f"x={x} outside [t, 1] = [{t}, 1]")
        if t == 0.0 and self.strict:
            return 0.0
        if x >= 1.0:
            return t
        pt = self.gen.phi(t)
        px = self.gen.phi(x)
        ratio = pt / px
        if self.L > 0.0 and ratio >= (1.0 - self.L) / self.L:
            return t
        s = self.pick.h_pseudo_inverse(max(ratio, 1.0))
        return max(self.gen.psi((1.0 / s - 1.0) * px), t)

    def g_curve(self, t: float, x):
        """Ray curve g^t(x) = psi((1/t - 1) phi(x)); g^0 = 0 and g^1 = 1."""
        t = float(t)
        if np.ndim(x) != 0:
            x = np.asarray(x, float)
            if t <= 0.0:
                return np.zeros_like(x)
            if t >= 1.0:
                return np.ones_like(x)
            px = self.gen.phi(x)
            with np.errstate(invalid="ignore"):
                arg = np.where(px == 0, 0.0, (1.0 / t - 1.0) * px)
            return self.gen.psi(arg)
        x = float(x)
        if t <= 0.0:
            return 0.0
        if t >= 1.0:
            return 1.0
        px = self.gen.phi(x)
        if px == 0.0:
            return 1.0
        return self.gen.psi((1.0 / t - 1.0) * px)

    def f_zero(self, x: float) -> float:
        return 0.0 if self.strict else self.f_level(0.0, x)

    def envelope(self, x: float):
        """(lower, upper) bounds of the support envelope at x."""
        return max(self.f_zero(x), self.g_curve(self.L, x)), self.g_curve(self.R, x)

    def in_support_envelope(self, x: float, y: float, tol: float = 0.0) -> bool:
        lo, hi = self.envelope(x)
        return lo - tol <= y <= hi + tol

    def support_report(self) -> dict:
        inf_g = self.gamma.inf_support()
        exact = bool(self.gamma.support_interval_covers(inf_g, INF)
                     or self.theta.support_interval_covers(self.L, self.R))
        necessary = self.strict and self.L == 0.0 and self.R == 1.0
        if not necessary:
            full = False
        elif self.gamma.support_is_full_halfline() or self.theta.support_interval_covers(0.0, 1.0):
            full = True
        else:
            full = None  # neither sufficient condition is available
        return {
            "envelope": {
                "L": self.L, "R": self.R, "strict": self.strict,
                "phiZero": None if self.phi_zero == INF else self.phi_zero,
                "lower": "max(f0(x), gL(x))", "upper": "gR(x)",
            },
            "isExact": exact,
            "isFull": full,
        }

    # ------------------------------------------------------------------
    # level sets
    # ------------------------------------------------------------------
    def level_curve_break(self, t: float):
        """x beyond which f^t is flat at t (only when L > 0)."""
        if self.L <= 0.0 or t <= 0.0 and self.strict:
            return None
        pt = self.gen.phi(t)
        return self.gen.psi(self.L * pt / (1.0 - self.L))

    def level_set(self, t: float, n: int = 512) -> LevelSetDescription:
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"level t={t} outside [0, 1]")
        if t >= 1.0:
            return LevelSetDescription(1.0, "point", [(1.0, 1.0)], None, True, lambda x: 1.0)
        if t == 0.0:
            return self.zero_level_set(n)
        xs = set(np.linspace(t, 1.0, n).tolist())
        b = self.level_curve_break(t)
        if b is not None and t < b < 1.0:
            xs.add(b)
        xs = sorted(xs)
        pts = [(x, self.f_level(t, x)) for x in xs]
        vertical = (t, self.g_curve(self.R, t), 1.0) if self.R < 1.0 else None
        kind = "graph" if vertical is None else "hook"
        return LevelSetDescription(t, kind, pts, vertical, vertical is None,
                                   lambda x, _t=t: self.f_level(_t, x))

    def zero_level_set(self, n: int = 512) -> LevelSetDescription:
        xs = np.linspace(0.0, 1.0, n).tolist()
        if self.strict:
            return LevelSetDescription(0.0, "axes", [(x, 0.0) for x in xs], (0.0, 0.0, 1.0),
                                       False, lambda x: 0.0)
        b = self.level_curve_break(0.0)
        if b is not None and 0.0 < b < 1.0:
            xs = sorted(set(xs) | {b})
        pts = [(x, self.f_level(0.0, x)) for x in xs]
        vertical = (0.0, self.g_curve(self.R, 0.0), 1.0)
        return LevelSetDescription(0.0, "region", pts, vertical, False,
                                   lambda x: self.f_level(0.0, x))

    # ------------------------------------------------------------------
    # Kendall distribution and masses
    # ------------------------------------------------------------------
    def kendall_cdf(self, t: float) -> float:
        t = float(t)
        if t < 0.0:
            return 0.0
        if t >= 1.0:
            return 1.0
        v = t + self.gen.beta(t) * (self.tau_A - 1.0)
        return min(max(v, 0.0), 1.0)

    def kendall_cdf_left(self, t: float) -> float:
        t = float(t)
        if t <= 0.0:
            return 0.0
        if t > 1.0:
            return 1.0
        v = t + self.gen.beta_left(t) * (self.tau_A - 1.0)
        return min(max(v, 0.0), 1.0)

    def kendall_cdf_array(self, t, left: bool = False):
        """Vectorized kendall_cdf (or its left limit when `left`)."""
        t = np.asarray(t, dtype=float)
        p = self.gen.phi(np.clip(t, 0.0, 1.0))
        d = self.gen.dplus_psi(p) if left else self.gen.dminus_psi(p)
        with np.errstate(invalid="ignore"):
            beta = np.where((p == 0) | np.isinf(p), 0.0, d * p)
        v = np.clip(t + beta * (self.tau_A - 1.0), 0.0, 1.0)
        v = np.where(t <= 0 if left else t < 0, 0.0, v)
        return np.where(t >= 1, 1.0, v)

    def gamma_atom_levels(self):
        """(level t = psi(1/a), atom a, mass) for every Williamson atom."""
        return [(self.gen.psi(1.0 / a), a, w) for a, w in self._gatoms]

    def kendall_jumps(self):
        return [(t, self.level_set_mass(t)) for t, _, _ in self.gamma_atom_levels()]

    def level_set_mass(self, t: float) -> float:
        t = float(t)
        p = self.gen.phi(t)
        if p == 0.0 or p == INF:
            return 0.0
        return self.gamma.atom_mass(1.0 / p) * (1.0 - self.tau_A)

    def graph_mass(self, t: float) -> float:
        t = float(t)
        if not 0.0 < t < 1.0:
            return 0.0
        w = self.theta.atom_mass(t)
        if w == 0.0:
            return 0.0
        return 2.0 * t * (1.0 - t) / self.pick.A(t) * w

    def theta_graph_levels(self):
        return [(r, w) for r, w in self._tatoms]

    # ------------------------------------------------------------------
    # Kendall's tau
    # ------------------------------------------------------------------
    def tau(self, method: str = "kendallIntegral", n: int = 100_000, seed: int = 0) -> float:
        if method == "kendallIntegral":
            return self._tau_integral()
        if method == "monteCarlo":
            return self.tau_monte_carlo(n, seed)[0]
        raise ValueError(f"unknown method {method!r}")

    def _tau_integral(self) -> float:
        ta = self.tau_A
        if ta >= 1.0:
            return 1.0
        cuts = {0.0, 1.0}
        for b in self.gamma.knots():
            if b > 0:
                cuts.add(self.gen.psi(1.0 / b))
        cuts = sorted(c for c in cuts if 0.0 <= c <= 1.0)
        total = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            if b > a:
                total += quad(self.gen.beta, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
        return 1.0 - 4.0 * (ta - 1.0) * total

    def tau_monte_carlo(self, n: int, seed: int):
        """4 E[C(X, Y)] - 1 with its standard error."""
        from .sampler import sample
        b = sample(self, n, seed)
        w = self.cdf(b.x, b.y)
        return 4.0 * float(np.mean(w)) - 1.0, 4.0 * float(np.std(w, ddof=1)) / math.sqrt(n)

    # ------------------------------------------------------------------
    # decomposition into absolutely continuous, discrete and singular parts
    # ------------------------------------------------------------------
    def x_breakpoints(self):
        """x where some atom curve enters, leaves or changes its mass formula."""
        gk = [b for b in self.gamma.knots() if b > 0]
        ek = [e for e in set(self.pick.knots()) | {self.L, self.R} if e > 0]
        pts = set()
        for b in gk:
            for e in ek:
                pts.add(self.gen.psi(1.0 / (b * self.pick.h(e))))
        return sorted(p for p in pts if 0.0 < p < 1.0)

    def _s_breakpoints(self, px: float):
        lo = 0.0 if self.strict else px / (px + self.phi_zero)
        pts = {lo, self.R}
        for e in self.pick.knots():
            if lo < e < self.R:
                pts.add(e)
        for b in self.gamma.knots():
            if b > 0:
                zt = 1.0 / (b * px)
                if zt >= 1.0:
                    s = self.pick.h_pseudo_inverse(zt)
                    if lo < s < self.R:
                        pts.add(s)
        return sorted(pts)

    def abs_density_s(self, px: float, D: float, s):
        """Derivative of the absolutely continuous part of s -> K(x, s)."""
        s = np.asarray(s, float)
        A = self.pick.A(s)
        dA = self.pick.dplusA(s)
        with np.errstate(divide="ignore", invalid="ignore"):
            c = s / (px * A)
            dc = (A - s * dA) / (px * A * A)
            dH = c * self.gamma.density(c) * dc / D
            H = self.gamma.partial_first_moment(c) / D
        G = self.pick.G(s)
        k = dH * G + H * 2.0 * (1.0 - s) * self.theta.density(s)
        return np.where(np.isfinite(k) & (s > 0), k, 0.0)

    def abs_mass_at(self, x: float, order: int = 8, tol: float = 1e-10):
        """Mass of the absolutely continuous part of K(x, .) and an error estimate."""
        px = self.gen.phi(float(x))
        if px == 0.0 or px == INF:
            return 0.0, 0.0
        D = self.gamma.partial_first_moment(1.0 / px)
        edges = self._s_breakpoints(px)
        if len(edges) < 2:
            return 0.0, 0.0
        return _adaptive_panel_quad(lambda s: self.abs_density_s(px, D, s), edges, order, tol)

    def abs_mass_at_fd(self, x: float, step: float = 1e-7, order: int = 12) -> float:
        """Cross-check: central differences of the jump-free part of y -> K(x, y)."""
        x = float(x)
        atoms = self.kernel_atoms(x)
        locs = sorted(e.y for e in atoms)
        lo, hi = self.envelope(x)
        edges = sorted({lo, hi} | {y for y in locs if lo < y < hi})
        if hi <= lo:
            return 0.0

        def cont(y):
            return self.kernel_cdf(x, y) - sum(e.mass for e in atoms if e.y <= y)

        def dens(ys):
            out = []
            for y in ys:
                a, b = max(y - step, lo), min(y + step, hi)
                out.append((cont(b) - cont(a)) / (b - a) if b > a else 0.0)
            return np.asarray(out)

        return _panel_quad(dens, edges, order)

    def component_masses(self, x_grid: int = 64, tol: float = 1e-6, order: int = 8) -> ComponentMasses:
        if x_grid < 16:
            raise ValueError("x_grid must be at least 16")
        edges = sorted(set(np.linspace(0.0, 1.0, x_grid + 1).tolist()) | set(self.x_breakpoints()))
        edges = np.asarray(edges)
        cache: dict = {}

        def per_x(xs):
            out_a, out_d, out_e = [], [], []
            for xv in xs:
                key = float(xv)
                if key not in cache:
                    a, e = self.abs_mass_at(key)
                    d = self.kernel_atoms(key).total_mass
                    cache[key] = (a, d, e)
                a, d, e = cache[key]
                out_a.append(a)
                out_d.append(d)
                out_e.append(e)
            return np.asarray(out_a), np.asarray(out_d), np.asarray(out_e)

        def integrate(k):
            nodes, weights = gauss_legendre(k)
            a, b = edges[:-1], edges[1:]
            half = 0.5 * (b - a)
            pts = (0.5 * (a + b))[:, None] + half[:, None] * nodes[None, :]
            va, vd, ve = per_x(pts.ravel())
            w = (half[:, None] * weights[None, :]).ravel()
            return float(w @ va), float(w @ vd), float(w @ ve)

        a1, d1, _ = integrate(order)
        a2, d2, e2 = integrate(2 * order)
        err = abs(a2 - a1) + abs(d2 - d1) + e2
        sing = max(0.0, 1.0 - a2 - d2)
        cm = ComponentMasses(abs=a2, dis=d2, sing=sing, error=err, tol=tol)
        if not cm.tolerance_met:
            log.warning("component masses: error estimate %.3g exceeds tol %.3g", err, tol)
        return cm
