"""Oracle checks: closed forms against quadrature, grids and Monte Carlo."""
from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .archimax import ArchimaxCopula, _adaptive_panel_quad, gauss_legendre
from .measures import (
    ExponentialWilliamson,
    MixedMeasure1D,
    UNIT_INTERVAL,
    comonotone_pickands,
    independence_pickands,
)
from .sampler import empirical_kendall, ks_distance, ks_threshold, sample, uniform_ks

log = logging.getLogger(__name__)

INF = math.inf
PASS, FAIL, FLAG = "pass", "fail", "flag"


@dataclass
class ReportEntry:
    name: str
    status: str
    measured: float
    expected: float
    tolerance: float
    seed: int | None = None
    detail: str = ""

    def to_dict(self):
        d = asdict(self)
        for k in ("measured", "expected", "tolerance"):
            v = d[k]
            d[k] = None if v is None or (isinstance(v, float) and not math.isfinite(v)) else v
        return d


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def extend(self, entries):
        if isinstance(entries, ReportEntry):
            entries = [entries]
        self.checks.extend(entries)
        return self

    def failures(self):
        return [c for c in self.checks if c.status == FAIL]

    def to_json(self) -> str:
        return json.dumps({"checks": [c.to_dict() for c in self.checks], "overall": self.overall}, indent=2)


def _entry(name, ok, measured, expected, tol, seed=None, detail=""):
    return ReportEntry(name, PASS if ok else FAIL, float(measured), float(expected), float(tol), seed, detail)


# ----------------------------------------------------------------------------
# copula axioms
# ----------------------------------------------------------------------------
def check_copula_axioms(c: ArchimaxCopula, grid_n: int = 64) -> ReportEntry:
    if grid_n < 8:
        raise ValueError("grid_n must be at least 8")
    g = np.linspace(0.0, 1.0, grid_n + 1)
    bnd = 0.0
    for v in g:
        bnd = max(bnd, abs(c.cdf(v, 0.0)), abs(c.cdf(0.0, v)),
                  abs(c.cdf(v, 1.0) - v), abs(c.cdf(1.0, v) - v))
    C = c.cdf_grid(g, g)
    vol = C[1:, 1:] - C[:-1, 1:] - C[1:, :-1] + C[:-1, :-1]
    minvol = float(vol.min())
    ok = bnd == 0.0 and minvol >= -1e-12
    return _entry("copula_axioms", ok, minvol, 0.0, 1e-12,
                  detail=f"boundary error {bnd:.3g}, min rectangle volume {minvol:.3g}")


# ----------------------------------------------------------------------------
# disintegration
# ----------------------------------------------------------------------------
def x_kinks_for_y(c: ArchimaxCopula, y: float):
    """x values where x -> K(x, [0, y]) may jump or kink."""
    if not 0.0 < y < 1.0:
        return []
    gen = c.gen
    py = gen.phi(y)
    pts = set()
    ray_levels = set(c.pick.knots()) | {c.L, c.R}
    for e in ray_levels:
        if 0.0 < e < 1.0:
            pts.add(gen.psi(py * e / (1.0 - e)))
    for b in c.gamma.knots():
        if b <= 0:
            continue
        t = gen.psi(1.0 / b)
        pts.add(t)
        if 0.0 < t < y:
            f = lambda x: c.cdf(x, y) - t
            if f(t) < 0.0 < f(1.0):
                pts.add(brentq(f, t, 1.0, xtol=1e-15))
    if not c.strict:
        # edge of the zero region, where the kernel jumps onto f0
        lo, hi = 0.0, 1.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if c.cdf(mid, y) > 0.0:
                hi = mid
            else:
                lo = mid
            if hi - lo <= 1e-16:
                break
        pts.add(hi)
    return sorted(p for p in pts if 0.0 < p < 1.0)


def _has_singular(c: ArchimaxCopula) -> bool:
    return bool(getattr(c.gamma, "singular", None) or getattr(c.theta, "singular", None))


def integrate_kernel(c: ArchimaxCopula, y: float, a: float, b: float, tol: float = 1e-9) -> float:
    """Integral of x -> K(x, [0, y]) over [a, b], split at the kinks of the integrand.

    With a singular component the integrand is a devil's staircase; there the
    integral is taken in z = phi(x) (dx = M1(1/z) dz) on adaptively refined
    Gauss-Legendre panels, which avoids inverting psi at every node.
    """
    if b <= a:
        return 0.0
    kinks = [k for k in x_kinks_for_y(c, y) if a < k < b]
    edges = [a] + kinks + [b]
    if not _has_singular(c):
        return sum(quad(lambda s: c.kernel_cdf(s, y), lo, hi, epsabs=tol, epsrel=1e-10, limit=200)[0]
                   for lo, hi in zip(edges[:-1], edges[1:]))
    gen = c.gen
    z_edges = [gen.phi(e) for e in reversed(edges)]
    if z_edges[-1] == INF:
        # the tail beyond Z carries at most psi(Z) of mass
        z_edges[-1] = gen.phi(min(1e-3 * tol, 0.5 * edges[1]))
    m1 = c.gamma.partial_first_moment

    def f(z):
        return c.kernel_cdf_phi_array(z, y) * m1(1.0 / z)

    z_edges = [z for z in z_edges if np.isfinite(z)]
    z_edges = sorted(set(z_edges))
    return _adaptive_panel_quad(f, z_edges, 8, tol, max_rounds=60)[0]


def disintegration_error(c: ArchimaxCopula, x: float, y: float, quad_tol: float = 1e-8) -> float:
    return abs(integrate_kernel(c, y, 0.0, x, quad_tol) - c.cdf(x, y))


def check_disintegration(c: ArchimaxCopula, points=None, quad_tol: float = 1e-7, seed: int = 0) -> ReportEntry:
    if points is None:
        rng = np.random.default_rng(seed)
        points = rng.uniform(0.02, 0.98, size=(25, 2)).tolist()
    if not points:
        raise ValueError("need at least one point")
    err = max(disintegration_error(c, x, y, quad_tol / 10.0) for x, y in points)
    tol = 10.0 * quad_tol
    return _entry("disintegration", err <= tol, err, 0.0, tol, seed, f"{len(points)} points")


# ----------------------------------------------------------------------------
# kernel shape
# ----------------------------------------------------------------------------
def check_kernel_monotone(c: ArchimaxCopula, xs=(0.1, 0.3, 0.5, 0.7, 0.9), n: int = 1000) -> ReportEntry:
    worst_dec, worst_rc, worst_top = 0.0, 0.0, 0.0
    for x in xs:
        locs = c.kernel_atoms(x).locations()
        ys = sorted(set(np.linspace(0.0, 1.0, n).tolist()) | set(locs))
        K = np.array([c.kernel_cdf(x, y) for y in ys])
        worst_dec = max(worst_dec, float(np.max(np.maximum(K[:-1] - K[1:], 0.0))))
        for y in locs:
            # right-continuity: the value at an atom equals the limit from the right
            right = c.kernel_cdf(x, min(y + 1e-9, 1.0))
            worst_rc = max(worst_rc, abs(right - c.kernel_cdf(x, y)))
        worst_top = max(worst_top, abs(c.kernel_cdf(x, 1.0) - 1.0))
    measured = max(worst_dec, worst_top)
    ok = worst_dec <= 1e-12 and worst_top <= 1e-12 and worst_rc <= 1e-6
    return _entry("kernel_monotone", ok, measured, 0.0, 1e-12,
                  detail=f"max decrease {worst_dec:.3g}, right-continuity gap {worst_rc:.3g}, K(x,1) error {worst_top:.3g}")


def check_kernel_atoms(c: ArchimaxCopula, xs=(0.15, 0.35, 0.55, 0.75, 0.95)) -> ReportEntry:
    """Every listed atom mass equals the kernel jump at its location."""
    worst = 0.0
    envelope_bad = 0
    for x in xs:
        atoms = c.kernel_atoms(x)
        for e in atoms:
            worst = max(worst, abs(e.mass - (c.kernel_cdf(x, e.y) - c.kernel_cdf_left(x, e.y))))
            if not c.in_support_envelope(x, e.y, 1e-9):
                envelope_bad += 1
        if atoms.total_mass > 1.0 + 1e-12:
            envelope_bad += 1
    return _entry("kernel_atoms", worst <= 1e-10 and envelope_bad == 0, worst, 0.0, 1e-10,
                  detail=f"{envelope_bad} envelope or total-mass violations")


# ----------------------------------------------------------------------------
# level curves
# ----------------------------------------------------------------------------
def _levels(c: ArchimaxCopula):
    ts = [0.05, 0.1, 0.25, 0.4, 0.6, 0.8, 0.95]
    ts += [t for t, _, _ in c.gamma_atom_levels() if 0.0 < t < 1.0]
    return sorted(set(ts))


def check_level_curves(c: ArchimaxCopula, n: int = 64, seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    lvl_err, sandwich, convex, mono = 0.0, 0.0, 0.0, 0.0
    for t in _levels(c):
        xs = np.linspace(t, 1.0, n)
        fs = np.array([c.f_level(t, x) for x in xs])
        lvl_err = max(lvl_err, max(abs(c.cdf(x, f) - t) for x, f in zip(xs, fs)))
        gR = c.g_curve(c.R, xs)
        gL = c.g_curve(c.L, xs)
        sandwich = max(sandwich, float(np.max(t - fs)), float(np.max(fs - gR)), float(np.max(gL - gR)))
        for _ in range(20):
            a, b = np.sort(rng.uniform(t, 1.0, 2))
            lam = rng.uniform()
            m = lam * a + (1 - lam) * b
            gap = c.f_level(t, m) - (lam * c.f_level(t, a) + (1 - lam) * c.f_level(t, b))
            convex = max(convex, gap)
        gt = c.g_curve(t, np.linspace(0.0, 1.0, n))
        mono = max(mono, float(np.max(np.maximum(gt[:-1] - gt[1:], 0.0))))
    return [
        _entry("level_curve_value", lvl_err <= 1e-9, lvl_err, 0.0, 1e-9),
        _entry("level_curve_sandwich", sandwich <= 1e-12, max(sandwich, 0.0), 0.0, 1e-12),
        _entry("level_curve_convexity", convex <= 1e-10, max(convex, 0.0), 0.0, 1e-10, seed),
        _entry("ray_curve_monotone", mono <= 0.0, mono, 0.0, 0.0),
    ]


# ----------------------------------------------------------------------------
# Kendall distribution
# ----------------------------------------------------------------------------
def kendall_ks(c: ArchimaxCopula, n: int, seed: int) -> float:
    batch = sample(c, n, seed)
    ecdf = empirical_kendall(batch, c)
    jumps = [t for t, _ in c.kendall_jumps()]
    return ks_distance(ecdf, c.kendall_cdf_array, lambda t: c.kendall_cdf_array(t, left=True), jumps)


def check_kendall(c: ArchimaxCopula, n: int = 100_000, seed: int = 0, repeats: int = 3) -> ReportEntry:
    if n < 10_000:
        raise ValueError("n must be at least 1e4")
    thr = ks_threshold(n)
    ds = [kendall_ks(c, n, seed + k) for k in range(repeats)]
    over = sum(d > thr for d in ds)
    status = PASS if over == 0 else (FAIL if over == repeats else FLAG)
    return ReportEntry("kendall_ks", status, float(max(ds)), 0.0, thr, seed,
                       "distances " + ", ".join(f"{d:.5f}" for d in ds))


def check_margins(c: ArchimaxCopula, n: int = 100_000, seed: int = 0) -> ReportEntry:
    b = sample(c, n, seed)
    d = max(uniform_ks(b.x), uniform_ks(b.y))
    thr = ks_threshold(n)
    return ReportEntry("margin_uniformity", PASS if d <= thr else FLAG, d, 0.0, thr, seed)


def check_sample_support(c: ArchimaxCopula, n: int = 10_000, seed: int = 0) -> ReportEntry:
    b = sample(c, n, seed)
    bad = sum(not c.in_support_envelope(x, y, 1e-9) for x, y in b.pairs)
    return _entry("sample_in_envelope", bad == 0, bad, 0, 0, seed, f"{n} samples")


# ----------------------------------------------------------------------------
# masses
# ----------------------------------------------------------------------------
def theta_atom_integral(c: ArchimaxCopula, r: float, tol: float = 1e-10) -> float:
    """Integral over x of the ray-curve atom mass of K(x, .) at g^r(x)."""
    edges = sorted({0.0, 1.0} | set(c.x_breakpoints()) | set(np.linspace(0.0, 1.0, 17).tolist()))

    def f(xs):
        out = []
        for x in xs:
            m = 0.0
            for e in c.kernel_atoms(x):
                if e.kind == "thetaAtom" and e.source == r:
                    m += e.mass
            out.append(m)
        return np.asarray(out)

    return _adaptive_panel_quad(f, edges, 8, tol, max_rounds=12)[0]


def check_masses(c: ArchimaxCopula, masses=None) -> list:
    out = []
    ta = c.tau_A
    for t, a, w in c.gamma_atom_levels():
        jump = c.kendall_cdf(t) - c.kendall_cdf_left(t)
        want = w * (1.0 - ta)
        out.append(_entry(f"level_set_mass[{a:.6g}]", abs(jump - want) <= 1e-10, jump, want, 1e-10))
    for r, w in c.theta_graph_levels():
        got = theta_atom_integral(c, r)
        want = 2.0 * r * (1.0 - r) / c.pick.A(r) * w
        out.append(_entry(f"graph_mass[{r:.6g}]", abs(got - want) <= 1e-6, got, want, 1e-6))
    cm = masses or c.component_masses()
    has_atom = bool(c._gatoms) or bool(c._tatoms)
    positive = cm.dis > 1e-9
    out.append(_entry("discrete_iff_atoms", positive == has_atom, cm.dis, float(has_atom), 0.0,
                      detail=f"interior atoms present: {has_atom}"))
    return out


def check_decomposition(c: ArchimaxCopula, masses=None) -> ReportEntry:
    cm = masses or c.component_masses()
    total = cm.abs + cm.dis + cm.sing
    tol = max(cm.error, 1e-12)
    ok = abs(total - 1.0) <= tol + 1e-12 and cm.tolerance_met and min(cm.abs, cm.dis, cm.sing) >= 0.0
    return _entry("decomposition_sum", ok, total, 1.0, tol,
                  detail=f"abs {cm.abs:.10g}, dis {cm.dis:.10g}, sing {cm.sing:.10g}, error {cm.error:.3g}")


# ----------------------------------------------------------------------------
# grid oracle
# ----------------------------------------------------------------------------
def _kernel_integral(c: ArchimaxCopula, y: float, x_edges, tol: float = 1e-11):
    """Cumulative integrals of x -> K(x, [0, y]) at each grid edge."""
    out = [0.0]
    for a, b in zip(x_edges[:-1], x_edges[1:]):
        out.append(out[-1] + integrate_kernel(c, y, a, b, tol))
    return np.asarray(out)


def grid_oracle(c: ArchimaxCopula, n: int = 32) -> ReportEntry:
    if not 4 <= n <= 256:
        raise ValueError("n must lie in [4, 256]")
    g = np.linspace(0.0, 1.0, n + 1)
    C = c.cdf_grid(g, g)
    cells_cdf = C[1:, 1:] - C[:-1, 1:] - C[1:, :-1] + C[:-1, :-1]
    tol = 1e-9 if _has_singular(c) else 1e-11
    I = np.column_stack([_kernel_integral(c, y, g, tol) if 0.0 < y < 1.0 else
                         (np.zeros(n + 1) if y <= 0.0 else g.copy()) for y in g])
    cells_kernel = I[1:, 1:] - I[:-1, 1:] - I[1:, :-1] + I[:-1, :-1]
    diff = float(np.max(np.abs(cells_cdf - cells_kernel)))
    return _entry("grid_oracle", diff <= 1e-5, diff, 0.0, 1e-5, detail=f"{n}x{n} cells")


# ----------------------------------------------------------------------------
# support geometry
# ----------------------------------------------------------------------------
def support_cells(c: ArchimaxCopula, n: int = 128, threshold: float = 1e-13):
    """(mass > threshold, centre in envelope, envelope boundary crosses cell) per cell."""
    g = np.linspace(0.0, 1.0, n + 1)
    C = c.cdf_grid(g, g)
    mass = C[1:, 1:] - C[:-1, 1:] - C[1:, :-1] + C[:-1, :-1]
    lower_e = np.array([c.envelope(x)[0] for x in g])
    upper_e = np.array([c.envelope(x)[1] for x in g])
    mid = 0.5 * (g[:-1] + g[1:])
    lower_m = np.array([c.envelope(x)[0] for x in mid])
    upper_m = np.array([c.envelope(x)[1] for x in mid])
    inside = (mid[None, :] >= lower_m[:, None]) & (mid[None, :] <= upper_m[:, None])
    ylo, yhi = g[None, :-1], g[None, 1:]
    boundary = np.zeros((n, n), bool)
    for curve in (lower_e, upper_e):
        clo = np.minimum(curve[:-1], curve[1:])[:, None]
        chi = np.maximum(curve[:-1], curve[1:])[:, None]
        boundary |= (clo <= yhi) & (chi >= ylo)
    return mass > threshold, inside, boundary


def check_support_grid(c: ArchimaxCopula, n: int = 128) -> ReportEntry:
    pos, inside, boundary = support_cells(c, n)
    bad = int(np.sum((pos != inside) & ~boundary))
    return _entry("support_grid", bad == 0, bad, 0, 0, detail=f"{n}x{n} cells, boundary cells excluded")


def abs_support_coverage(c: ArchimaxCopula, n: int = 64, sub: int = 3) -> int:
    """Envelope-interior probe points where the absolutely continuous density vanishes."""
    uncovered = 0
    offs = (np.arange(sub) + 0.5) / sub
    for i in range(n):
        for ox in offs:
            x = (i + ox) / n
            px = c.gen.phi(x)
            D = c.gamma.partial_first_moment(1.0 / px)
            lo, hi = c.envelope(x)
            ys = (np.arange(n)[:, None] + offs[None, :]).ravel() / n
            ys = ys[(ys > lo + 1e-9) & (ys < hi - 1e-9)]
            if ys.size == 0:
                continue
            s = px / (px + c.gen.phi(ys))
            k = c.abs_density_s(px, D, s)
            uncovered += int(np.sum(~(k > 0.0)))
    return uncovered


# ----------------------------------------------------------------------------
# regularity battery
# ----------------------------------------------------------------------------
def cantor_williamson() -> MixedMeasure1D:
    return MixedMeasure1D(singular=(0.5, 1.5, 1.0))


def cantor_pickands() -> MixedMeasure1D:
    return MixedMeasure1D(singular=(0.0, 1.0, 1.0), domain=UNIT_INTERVAL)


def mixed_pickands() -> MixedMeasure1D:
    return MixedMeasure1D(atoms=[(1 / 8, 1 / 8), (1 / 4, 13 / 64), (3 / 4, 35 / 64)],
                          segments=[(1 / 8, 1 / 4, [1.0])], domain=UNIT_INTERVAL)


def mixed_williamson() -> MixedMeasure1D:
    return MixedMeasure1D(atoms=[(1 / 8, 4 / 7), (2, 1 / 14), (3, 1 / 7)],
                          segments=[(1, 2, [1 / 7]), (2, 3, [1 / 14])])


def discrete_williamson() -> MixedMeasure1D:
    return MixedMeasure1D(atoms=[(1 / 11, 0.1), (1 / 7, 0.2), (1 / 6, 0.3), (1 / 5, 0.2), (1 / 2, 0.2)])


def discrete_pickands() -> MixedMeasure1D:
    return MixedMeasure1D(atoms=[(0.25, 0.5), (0.75, 0.5)], domain=UNIT_INTERVAL)


def smooth_pickands() -> MixedMeasure1D:
    # density 6t(1-t) on [0,1]: mean 1/2, full support
    return MixedMeasure1D(segments=[(0.0, 1.0, [0.0, 6.0, -6.0])], domain=UNIT_INTERVAL)


@dataclass
class BatteryConfig:
    name: str
    gamma: object
    theta: object
    predicted: str | None = None   # abs, dis or sing
    abs_support: bool = False      # abs component should fill the envelope

    def copula(self) -> ArchimaxCopula:
        return ArchimaxCopula.from_measures(self.gamma, self.theta)


def default_battery():
    exp = ExponentialWilliamson()
    return [
        BatteryConfig("exp+independence", exp, independence_pickands(), "abs", True),
        BatteryConfig("exp+comonotone", exp, comonotone_pickands(), "dis"),
        BatteryConfig("exp+mixed", exp, mixed_pickands(), None, True),
        BatteryConfig("mixed pair", mixed_williamson(), mixed_pickands()),
        BatteryConfig("discrete pair", discrete_williamson(), discrete_pickands(), "dis"),
        BatteryConfig("cantor+independence", cantor_williamson(), independence_pickands(), "sing"),
    ]


def extra_regularity_configs():
    exp = ExponentialWilliamson()
    return [
        BatteryConfig("exp+smooth", exp, smooth_pickands(), "abs", True),
        BatteryConfig("cantor+cantor", cantor_williamson(), cantor_pickands(), "sing"),
    ]


def check_regularity_propagation(battery=None, masses_cache=None) -> list:
    battery = battery if battery is not None else default_battery() + extra_regularity_configs()
    masses_cache = masses_cache if masses_cache is not None else {}
    out = []
    for cfg in battery:
        c = cfg.copula()
        cm = masses_cache.get(cfg.name) or c.component_masses()
        masses_cache[cfg.name] = cm
        if cfg.predicted == "abs":
            out.append(_entry(f"regularity[{cfg.name}].abs", cm.abs >= 1 - 1e-4, cm.abs, 1.0, 1e-4))
        elif cfg.predicted == "dis":
            out.append(_entry(f"regularity[{cfg.name}].dis", cm.dis >= 1 - 1e-4, cm.dis, 1.0, 1e-4))
        elif cfg.predicted == "sing":
            out.append(_entry(f"regularity[{cfg.name}].sing", cm.abs + cm.dis <= 1e-3,
                              cm.abs + cm.dis, 0.0, 1e-3))
        if cfg.abs_support:
            miss = abs_support_coverage(c)
            out.append(_entry(f"regularity[{cfg.name}].abs_support", miss == 0, miss, 0, 0,
                              detail="64x64 grid, 3x3 probes per cell"))
    return out


# ----------------------------------------------------------------------------
# suites
# ----------------------------------------------------------------------------
SUITES = ("axioms", "disintegration", "kernel", "levelcurves", "kendall", "masses",
          "decomposition", "grid", "support")


def run_suite(c: ArchimaxCopula, suite: str = "all", seed: int = 0, quad_tol: float = 1e-7,
              grid_n: int = 64, sample_n: int = 100_000, masses=None) -> VerificationReport:
    names = SUITES if suite == "all" else (suite,)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite {unknown[0]!r}; choose from {', '.join(SUITES)} or all")
    rep = VerificationReport()
    cm = masses
    for name in names:
        t0 = time.perf_counter()
        if name == "axioms":
            rep.extend(check_copula_axioms(c, grid_n))
        elif name == "disintegration":
            rep.extend(check_disintegration(c, quad_tol=quad_tol, seed=seed))
        elif name == "kernel":
            rep.extend([check_kernel_monotone(c), check_kernel_atoms(c)])
        elif name == "levelcurves":
            rep.extend(check_level_curves(c, seed=seed))
        elif name == "kendall":
            rep.extend([check_kendall(c, max(sample_n, 10_000), seed),
                        check_margins(c, max(sample_n, 10_000), seed),
                        check_sample_support(c, 10_000, seed)])
        elif name in ("masses", "decomposition"):
            cm = cm or c.component_masses()
            rep.extend(check_masses(c, cm) if name == "masses" else check_decomposition(c, cm))
        elif name == "grid":
            # staircase integrands are costly to resolve; use a coarser grid there
            n = 8 if _has_singular(c) else min(max(grid_n // 2, 4), 256)
            rep.extend(grid_oracle(c, n))
        elif name == "support":
            rep.extend(check_sample_support(c, 10_000, seed))
        log.info("suite %s finished in %.2fs", name, time.perf_counter() - t0)
    return rep


def run_battery(seed: int = 0, sample_n: int = 100_000) -> VerificationReport:
    rep = VerificationReport()
    cache: dict = {}
    for cfg in default_battery():
        c = cfg.copula()
        cache[cfg.name] = c.component_masses()
        sub = run_suite(c, "all", seed=seed, sample_n=sample_n, masses=cache[cfg.name])
        for e in sub.checks:
            e.name = f"{cfg.name}: {e.name}"
        rep.extend(sub.checks)
    rep.extend(check_regularity_propagation(masses_cache=cache))
    return rep
