"""One-dimensional probability measures with atoms, polynomial densities and
an optional affine middle-thirds Cantor component.

Two roles are served by the same representation: Williamson measures live on
the half-line ``[0, inf)`` and Pickands dependence measures on ``[0, 1]``.
Every query accepts either a Python scalar (fast pure-Python path) or a numpy
array (vectorized path).
"""
from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

ATOM_REL_TOL = 1e-14
MASS_TOL = 1e-10
PICKANDS_MEAN_TOL = 1e-9
CANTOR_DIGITS = 60

HALF_LINE = "halfLine"
UNIT_INTERVAL = "unitInterval"


# ---------------------------------------------------------------------------
# Standard Cantor function and its antiderivative
# ---------------------------------------------------------------------------

def _triple_dd(hi, lo):
    """3*(hi + lo) as an unevaluated sum, exact in the leading part (TwoSum of 2hi + hi)."""
    s = 2.0 * hi + hi
    bb = s - 2.0 * hi
    err = (2.0 * hi - (s - bb)) + (hi - bb)
    return s, err + 3.0 * lo


def cantor_cdf(u):
    """Cantor function on [0, 1], via ternary digits (at most 60 digits).

    The ternary remainder is carried as a double-double so digits stay exact
    near triadic rationals. Elements leave the digit loop as soon as they hit
    a middle third, so the average cost is a few digits per element.
    """
    if np.ndim(u) == 0:
        return _cantor_cdf_scalar(float(u))
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    out = np.where(u >= 1.0, 1.0, 0.0)
    idx = np.flatnonzero((u > 0.0) & (u < 1.0))
    hi = u.ravel()[idx]
    lo = np.zeros_like(hi)
    acc = np.zeros_like(hi)
    flat = out.ravel()
    scale = 1.0
    for _ in range(CANTOR_DIGITS):
        if idx.size == 0:
            break
        s, e = _triple_dd(hi, lo)
        d = np.minimum(np.floor(s), 2.0)
        d = np.where((s == d) & (e < 0.0), d - 1.0, d)
        acc = acc + np.where(d >= 1.0, 0.5 * scale, 0.0)
        fin = d == 1.0
        flat[idx[fin]] = acc[fin]
        keep = ~fin
        r = s - d
        nhi = r + e
        nlo = e - (nhi - r)
        idx, hi, lo, acc = idx[keep], nhi[keep], nlo[keep], acc[keep]
        scale *= 0.5
    flat[idx] = acc
    return flat.reshape(u.shape)


def _cantor_cdf_scalar(u: float) -> float:
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    hi, lo = u, 0.0
    acc, scale = 0.0, 1.0
    for _ in range(CANTOR_DIGITS):
        s, e = _triple_dd(hi, lo)
        d = min(math.floor(s), 2)
        if s == d and e < 0.0:
            d -= 1
        if d == 1:
            return acc + 0.5 * scale
        if d == 2:
            acc += 0.5 * scale
        r = s - d
        hi = r + e
        lo = e - (hi - r)
        scale *= 0.5
    return acc


def cantor_integral(u):
    """Integral of the Cantor function from 0 to u, by self-similarity.

    On the left third the function is a half-scaled copy, on the middle third
    it is constant 1/2, on the right third it is 1/2 plus a half-scaled copy.
    """
    if np.ndim(u) == 0:
        return _cantor_integral_scalar(float(u))
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    flat = np.where(u >= 1.0, 0.5, 0.0).ravel()
    idx = np.flatnonzero((u > 0.0) & (u < 1.0))
    w = u.ravel()[idx]
    acc = np.zeros_like(w)
    mult = np.ones_like(w)
    for _ in range(CANTOR_DIGITS):
        if idx.size == 0:
            break
        w3 = 3.0 * w
        d = np.minimum(np.floor(w3), 2.0)
        fin = d == 1.0
        flat[idx[fin]] = acc[fin] + mult[fin] * (1.0 / 12.0 + 0.5 * (w[fin] - 1.0 / 3.0))
        hi = d == 2.0
        acc = acc + np.where(hi, mult * (0.25 + 0.5 * (w - 2.0 / 3.0)), 0.0)
        keep = ~fin
        idx, w, acc, mult = idx[keep], (w3 - d)[keep], acc[keep], mult[keep] / 6.0
    flat[idx] = acc
    return flat.reshape(u.shape)


def _cantor_integral_scalar(u: float) -> float:
    if u <= 0.0:
        return 0.0
    acc, mult = 0.0, 1.0
    for _ in range(CANTOR_DIGITS):
        if u >= 1.0:
            return acc + 0.5 * mult
        u3 = 3.0 * u
        d = min(int(u3), 2)
        if d == 0:
            mult /= 6.0
            u = u3
        elif d == 1:
            return acc + mult * (1.0 / 12.0 + 0.5 * (u - 1.0 / 3.0))
        else:
            acc += mult * (0.25 + 0.5 * (u - 2.0 / 3.0))
            mult /= 6.0
            u = u3 - 2.0
    return acc


# ---------------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensitySegment:
    """Polynomial density ``sum c_k t^k`` on ``[lo, hi)``."""

    lo: float
    hi: float
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        c = np.asarray(self.coeffs, dtype=float)
        object.__setattr__(self, "_p", c)
        # antiderivatives of p(t) and t*p(t)
        object.__setattr__(self, "_P", npoly.polyint(c))
        object.__setattr__(self, "_Q", npoly.polyint(np.concatenate(([0.0], c))))
        object.__setattr__(self, "_Pl", list(self._P))
        object.__setattr__(self, "_Ql", list(self._Q))

    def density(self, t):
        return npoly.polyval(t, self._p)

    def mass_to(self, t: float) -> float:
        return _horner(self._Pl, t) - _horner(self._Pl, self.lo)

    def moment_to(self, t: float) -> float:
        return _horner(self._Ql, t) - _horner(self._Ql, self.lo)

    @property
    def mass(self) -> float:
        return self.mass_to(self.hi)

    @property
    def moment(self) -> float:
        return self.moment_to(self.hi)

    def has_mass(self) -> bool:
        return any(c != 0.0 for c in self.coeffs) and self.hi > self.lo


@dataclass(frozen=True)
class CantorPart:
    """Middle-thirds Cantor measure mapped affinely onto ``[lo, hi]``."""

    lo: float
    hi: float
    mass: float

    @property
    def width(self) -> float:
        return self.hi - self.lo


def _horner(coeffs, t):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


@dataclass
class Violation:
    invariant: str
    measured: float
    expected: float
    detail: str = ""


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(
            f"{v.invariant}: measured {v.measured!r}, expected {v.expected!r}"
            + (f" ({v.detail})" if v.detail else "")
            for v in self.violations
        )


# ---------------------------------------------------------------------------
# The measure
# ---------------------------------------------------------------------------

class MixedMeasure1D:
    """Atoms + piecewise-polynomial density + optional Cantor part.

    Parameters
    ----------
    atoms : iterable of (location, mass)
    segments : iterable of (lo, hi, coeffs) or DensitySegment
    singular : (lo, hi, mass) or CantorPart or None
    domain : "halfLine" or "unitInterval"
    """

    def __init__(self, atoms=(), segments=(), singular=None, domain=HALF_LINE):
        self.atoms = tuple((float(a), float(m)) for a, m in atoms)
        self.segments = tuple(
            s if isinstance(s, DensitySegment) else DensitySegment(float(s[0]), float(s[1]), tuple(s[2]))
            for s in segments
        )
        if singular is not None and not isinstance(singular, CantorPart):
            singular = CantorPart(*(float(v) for v in singular))
        self.singular = singular
        if domain not in (HALF_LINE, UNIT_INTERVAL):
            raise ValueError(f"unknown domain {domain!r}")
        self.domain = domain

        order = sorted(self.atoms)
        self._aloc = [a for a, _ in order]
        self._acum = [0.0]
        self._amom = [0.0]
        for a, m in order:
            self._acum.append(self._acum[-1] + m)
            self._amom.append(self._amom[-1] + a * m)
        self._aloc_np = np.asarray(self._aloc, dtype=float)
        self._acum_np = np.asarray(self._acum)
        self._amom_np = np.asarray(self._amom)
        self._amass = {a: m for a, m in order}

    # -- identity ---------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, MixedMeasure1D)
            and self.atoms == other.atoms
            and self.segments == other.segments
            and self.singular == other.singular
            and self.domain == other.domain
        )

    def __repr__(self):
        return (
            f"MixedMeasure1D(atoms={list(self.atoms)}, segments={len(self.segments)}, "
            f"singular={self.singular}, domain={self.domain!r})"
        )

    # -- distribution function ----------------------------------------------
    def cdf(self, x):
        """m([0, x]), right-continuous."""
        return self._dist(x, closed=True, moment=False)

    def cdf_left(self, x):
        """m([0, x)), the left limit of the distribution function."""
        return self._dist(x, closed=False, moment=False)

    def partial_first_moment(self, c):
        """M1(c) = integral of t over [0, c]; c may be +inf."""
        return self._dist(c, closed=True, moment=True)

    def partial_first_moment_open(self, c):
        """Integral of t over [0, c)."""
        return self._dist(c, closed=False, moment=True)

    def _dist(self, x, closed: bool, moment: bool):
        if np.ndim(x) == 0:
            return self._dist_scalar(float(x), closed, moment)
        return self._dist_array(np.asarray(x, dtype=float), closed, moment)

    def _dist_scalar(self, x: float, closed: bool, moment: bool) -> float:
        if x != x:
            return math.nan
        if x == math.inf:
            total = self._amom[-1] if moment else self._acum[-1]
            for s in self.segments:
                total += s.moment if moment else s.mass
            if self.singular is not None:
                sp = self.singular
                total += sp.mass * (0.5 * (sp.lo + sp.hi) if moment else 1.0)
            return total if moment else min(total, 1.0)
        if x < 0.0:
            return 0.0
        tol = ATOM_REL_TOL * abs(x)
        k = bisect_right(self._aloc, x + tol) if closed else bisect_left(self._aloc, x - tol)
        total = self._amom[k] if moment else self._acum[k]
        for s in self.segments:
            if x <= s.lo:
                continue
            t = x if x < s.hi else s.hi
            total += s.moment_to(t) if moment else s.mass_to(t)
        sp = self.singular
        if sp is not None and x > sp.lo:
            total += _cantor_part_scalar(sp, x, moment)
        if moment:
            return total
        return min(max(total, 0.0), 1.0)

    def _dist_array(self, x: np.ndarray, closed: bool, moment: bool) -> np.ndarray:
        xc = np.where(np.isinf(x), np.inf, x)
        if closed:
            k = np.searchsorted(self._aloc_np, xc + ATOM_REL_TOL * np.abs(np.where(np.isinf(xc), 0, xc)), "right")
            k = np.where(np.isposinf(xc), len(self._aloc), k)
        else:
            k = np.searchsorted(self._aloc_np, xc - ATOM_REL_TOL * np.abs(np.where(np.isinf(xc), 0, xc)), "left")
            k = np.where(np.isposinf(xc), len(self._aloc), k)
        total = (self._amom_np if moment else self._acum_np)[k].astype(float)
        for s in self.segments:
            t = np.clip(xc, s.lo, s.hi)
            poly = s._Q if moment else s._P
            total = total + (npoly.polyval(t, poly) - npoly.polyval(s.lo, poly))
        sp = self.singular
        if sp is not None:
            cc = np.clip(xc, sp.lo, sp.hi)
            u = (cc - sp.lo) / sp.width
            cu = cantor_cdf(u)
            if moment:
                total = total + sp.mass * (cc * cu - sp.width * cantor_integral(u))
            else:
                total = total + sp.mass * cu
        total = np.where(xc < 0, 0.0, total)
        if not moment:
            total = np.clip(total, 0.0, 1.0)
        return np.where(np.isnan(x), np.nan, total)

    # -- atoms ------------------------------------------------------------------
    def atom_mass(self, x: float) -> float:
        """m({x}); matches listed locations within a relative 1e-14."""
        x = float(x)
        tol = ATOM_REL_TOL * abs(x)
        i = bisect_left(self._aloc, x - tol)
        if i < len(self._aloc) and self._aloc[i] <= x + tol:
            return self._amass[self._aloc[i]]
        return 0.0

    def nearest_atom(self, x: float, rel_tol: float):
        """Listed atom location within ``rel_tol`` (relative) of x, or None."""
        if not self._aloc:
            return None
        tol = rel_tol * max(abs(x), 1e-300)
        i = bisect_left(self._aloc, x - tol)
        if i < len(self._aloc) and self._aloc[i] <= x + tol:
            return self._aloc[i]
        return None

    @property
    def atom_locations(self):
        return list(self._aloc)

    def density(self, x):
        """Density of the absolutely continuous part (0 off the segments)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for s in self.segments:
            inside = (x >= s.lo) & (x < s.hi)
            out = np.where(inside, out + s.density(x), out)
        return out if out.ndim else float(out)

    # -- moments ------------------------------------------------------------------
    def total_mass(self) -> float:
        total = self._acum[-1] + sum(s.mass for s in self.segments)
        if self.singular is not None:
            total += self.singular.mass
        return total

    def mean(self) -> float:
        return self.partial_first_moment(math.inf)

    # -- support ------------------------------------------------------------------
    def _pieces(self):
        """Closed intervals making up the support (atoms as degenerate ones)."""
        out = [(a, a) for a, m in self.atoms if m > 0]
        out += [(s.lo, s.hi) for s in self.segments if s.has_mass()]
        if self.singular is not None and self.singular.mass > 0:
            out.append((self.singular.lo, self.singular.hi))
        return out

    def inf_support(self) -> float:
        pieces = self._pieces()
        return min(p[0] for p in pieces) if pieces else math.inf

    def sup_support(self) -> float:
        pieces = self._pieces()
        return max(p[1] for p in pieces) if pieces else -math.inf

    def support_interval_covers(self, a: float, b: float) -> bool:
        """Whether [a, b] lies inside the support with no gaps."""
        if a > b:
            return True
        if a == b:
            return any(lo <= a <= hi for lo, hi in self._pieces())
        # only segments cover intervals; atoms fill single points; Cantor sets have gaps
        ivals = sorted((s.lo, s.hi) for s in self.segments if s.has_mass())
        reach = a
        for lo, hi in ivals:
            if lo > reach:
                break
            reach = max(reach, hi)
            if reach >= b:
                return True
        return reach >= b

    def support_is_full_halfline(self) -> bool:
        return self.support_interval_covers(0.0, math.inf)

    def knots(self):
        """All locations where the distribution function is not smooth."""
        pts = set(self._aloc)
        for s in self.segments:
            pts.update((s.lo, s.hi))
        if self.singular is not None:
            pts.update((self.singular.lo, self.singular.hi))
        return sorted(p for p in pts if math.isfinite(p))

    @property
    def has_atoms(self) -> bool:
        return bool(self._aloc)

    @property
    def has_density(self) -> bool:
        return any(s.has_mass() for s in self.segments)

    @property
    def has_singular(self) -> bool:
        return self.singular is not None and self.singular.mass > 0

    def interior_atoms(self, lo: float = 0.0, hi: float = 1.0):
        return [(a, m) for a, m in sorted(self.atoms) if lo < a < hi and m > 0]

    # -- validation ------------------------------------------------------------------
    def validate(self) -> ValidationReport:
        rep = ValidationReport()
        v = rep.violations
        total = self.total_mass()
        if abs(total - 1.0) > MASS_TOL:
            v.append(Violation("total mass", total, 1.0))
        locs = [a for a, _ in self.atoms]
        for i in range(1, len(locs)):
            if not locs[i] > locs[i - 1]:
                v.append(Violation("atom locations strictly increasing", locs[i], locs[i - 1]))
        for a, m in self.atoms:
            if not (0.0 < m <= 1.0):
                v.append(Violation("atom mass in (0,1]", m, 1.0, f"atom at {a}"))
            if not math.isfinite(a):
                v.append(Violation("atom location finite", a, 0.0))
        prev_hi = -math.inf
        for s in self.segments:
            if not s.lo < s.hi:
                v.append(Violation("segment lo < hi", s.lo, s.hi))
            if s.lo < prev_hi:
                v.append(Violation("segments sorted and non-overlapping", s.lo, prev_hi))
            prev_hi = max(prev_hi, s.hi)
            if not (math.isfinite(s.lo) and math.isfinite(s.hi)):
                v.append(Violation("segment bounds finite", s.hi, 0.0))
                continue
            # Chebyshev points of the segment plus both ends
            k = max(len(s.coeffs) + 8, 16)
            nodes = np.cos(np.pi * (np.arange(k) + 0.5) / k)
            pts = np.concatenate(([s.lo, s.hi], 0.5 * (s.lo + s.hi) + 0.5 * (s.hi - s.lo) * nodes))
            low = float(np.min(s.density(pts)))
            if low < -1e-12:
                v.append(Violation("density nonnegative", low, 0.0, f"segment [{s.lo}, {s.hi})"))
        sp = self.singular
        if sp is not None:
            if not sp.lo < sp.hi:
                v.append(Violation("singular part lo < hi", sp.lo, sp.hi))
            if not (0.0 < sp.mass <= 1.0):
                v.append(Violation("singular mass in (0,1]", sp.mass, 1.0))
        lo, hi = (0.0, math.inf) if self.domain == HALF_LINE else (0.0, 1.0)
        for plo, phi in self._pieces():
            if plo < lo or phi > hi:
                v.append(Violation(f"support inside {self.domain}", plo if plo < lo else phi, hi if phi > hi else lo))
        return rep


def _cantor_part_scalar(sp: CantorPart, x: float, moment: bool) -> float:
    c = x if x < sp.hi else sp.hi
    u = (c - sp.lo) / sp.width
    cu = _cantor_cdf_scalar(u)
    if not moment:
        return sp.mass * cu
    # Stieltjes by parts: c F(c) - integral of F from lo to c
    return sp.mass * (c * cu - sp.width * _cantor_integral_scalar(u))


# ---------------------------------------------------------------------------
# Closed-form Williamson measure of the exponential generator
# ---------------------------------------------------------------------------

class ExponentialWilliamson:
    """Williamson measure of psi(z) = exp(-z): F(z) = exp(-1/z)(1 + 1/z).

    Its density is exp(-1/z)/z^3, so the partial first moment is exp(-1/c).
    """

    domain = HALF_LINE
    atoms = ()
    segments = ()
    singular = None
    has_atoms = False
    has_density = True
    has_singular = False
    atom_locations: list = []

    def __eq__(self, other):
        return isinstance(other, ExponentialWilliamson)

    def __hash__(self):
        return hash("ExponentialWilliamson")

    def __repr__(self):
        return "ExponentialWilliamson()"

    def cdf(self, x):
        if np.ndim(x) == 0:
            x = float(x)
            if x <= 0.0:
                return 0.0
            if x == math.inf:
                return 1.0
            r = 1.0 / x
            return math.exp(-r) * (1.0 + r)
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            r = 1.0 / np.where(x > 0, x, 1.0)
            v = np.exp(-r) * (1.0 + r)
        return np.where(x > 0, np.nan_to_num(v), 0.0)

    cdf_left = cdf

    def partial_first_moment(self, c):
        if np.ndim(c) == 0:
            c = float(c)
            if c <= 0.0:
                return 0.0
            return math.exp(-1.0 / c)
        c = np.asarray(c, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(c > 0, np.exp(-1.0 / np.where(c > 0, c, 1.0)), 0.0)

    partial_first_moment_open = partial_first_moment

    def atom_mass(self, x):
        return 0.0

    def nearest_atom(self, x, rel_tol):
        return None

    def density(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            xs = np.where(x > 0, x, 1.0)
            v = np.exp(-1.0 / xs - 3.0 * np.log(xs))
        out = np.where(x > 0, v, 0.0)
        return out if out.ndim else float(out)

    def total_mass(self):
        return 1.0

    def mean(self):
        return 1.0

    def inf_support(self):
        return 0.0

    def sup_support(self):
        return math.inf

    def support_interval_covers(self, a, b):
        return a >= 0.0

    def support_is_full_halfline(self):
        return True

    def knots(self):
        return []

    def interior_atoms(self, lo=0.0, hi=1.0):
        return []

    def validate(self):
        return ValidationReport()


# ---------------------------------------------------------------------------
# Role-specific validation
# ---------------------------------------------------------------------------

def validate_williamson(m) -> ValidationReport:
    """Check the Williamson-measure invariants; never raises."""
    rep = m.validate()
    if m.domain != HALF_LINE:
        rep.violations.append(Violation("domain is halfLine", 0.0, 0.0, m.domain))
    zero = m.atom_mass(0.0)
    if zero != 0.0:
        rep.violations.append(Violation("no atom at zero", zero, 0.0))
    return rep


def validate_pickands(m) -> ValidationReport:
    """Check the Pickands-measure invariants (mean 1/2 on [0,1]); never raises."""
    rep = m.validate()
    if m.domain != UNIT_INTERVAL:
        rep.violations.append(Violation("domain is unitInterval", 0.0, 0.0, m.domain))
    mu = m.mean()
    if not abs(mu - 0.5) <= PICKANDS_MEAN_TOL:
        rep.violations.append(Violation("mean equals 1/2", mu, 0.5))
    return rep


# ---------------------------------------------------------------------------
# Named measures used throughout
# ---------------------------------------------------------------------------

def comonotone_pickands() -> MixedMeasure1D:
    return MixedMeasure1D(atoms=[(0.5, 1.0)], domain=UNIT_INTERVAL)


def independence_pickands() -> MixedMeasure1D:
    return MixedMeasure1D(atoms=[(0.0, 0.5), (1.0, 0.5)], domain=UNIT_INTERVAL)
