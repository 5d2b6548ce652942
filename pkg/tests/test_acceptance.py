"""Acceptance criteria 1-9.

Each test records one "criterion N: PASS/FAIL ..." line; the lines are printed
together at the end of the pytest run. The file can also be run directly:

    python3 tests/test_acceptance.py
"""
import csv
import math
import os
import sys
import time

import numpy as np
import pytest

from archimax import (
    ArchimaxCopula,
    ExponentialWilliamson,
    Generator,
    PickandsFunction,
    comonotone_pickands,
    independence_pickands,
)
from archimax.cli import kendall_rows
from archimax.sampler import empirical_kendall, ks_distance, ks_threshold, sample
from archimax.verify import (
    cantor_pickands,
    cantor_williamson,
    discrete_pickands,
    discrete_williamson,
    mixed_pickands,
    mixed_williamson,
    run_battery,
    smooth_pickands,
    theta_atom_integral,
)

import conftest
from oracles import bisect_root, ref_A, ref_psi

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
ARTIFACTS = os.environ.get("ARCHIMAX_ARTIFACT_DIR", os.path.join(ROOT, "artifacts"))


def record(n, ok, detail):
    conftest.ACCEPTANCE_LINES[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    return ok


def kendall_fit(c, n, seed):
    b = sample(c, n, seed)
    jumps = [t for t, m in c.kendall_jumps() if m > 0]
    ecdf = empirical_kendall(b, c)
    d = ks_distance(ecdf, c.kendall_cdf_array, lambda t: c.kendall_cdf_array(t, left=True), snap_points=jumps)
    return b, d


# 1 -------------------------------------------------------------------------
def test_criterion_1_golden_values():
    t0 = time.perf_counter()
    p = PickandsFunction(mixed_pickands())
    got = [p.h(1 / 8), p.h(1 / 4), p.h_pseudo_inverse(7.0), p.h_pseudo_inverse(1.0), *p.L_R()]
    want = [7.0, 51 / 16, 1 / 8, 3 / 4, 1 / 8, 3 / 4]
    dt = time.perf_counter() - t0
    err = max(abs(a - b) for a, b in zip(got, want))
    ok = err <= 1e-12 and dt < 1.0
    assert record(1, ok, f"max error {err:.2e}, {dt:.3f} s"), (got, want)


# 2 -------------------------------------------------------------------------
def test_criterion_2_measure_function_consistency():
    g = Generator(mixed_williamson())
    zs = np.linspace(0.0, 10.0, 1000)
    psi_err = float(np.max(np.abs(g.psi(zs) - [ref_psi(z) for z in zs])))
    spots = [(g.psi(1.0), 0.5), (g.psi(0.5), 4 / 7), (g.psi(1 / 3), 55 / 84), (g.phi_zero, 8.0)]
    spot_err = max(abs(a - b) for a, b in spots)
    p = PickandsFunction(mixed_pickands())
    ts = np.linspace(0.0, 1.0, 1000)
    a_err = float(np.max(np.abs(p.A(ts) - [ref_A(t) for t in ts])))
    err = max(psi_err, spot_err, a_err)
    ok = err <= 1e-9
    assert record(2, ok, f"psi {psi_err:.1e}, spot values {spot_err:.1e}, A {a_err:.1e}")


# 3 -------------------------------------------------------------------------
def test_criterion_3_special_cases():
    grid = np.linspace(0.0, 1.0, 64)
    X, Y = np.meshgrid(grid, grid, indexing="ij")
    gammas = {"exp": ExponentialWilliamson(), "mixed": mixed_williamson(),
              "discrete": discrete_williamson(), "cantor": cantor_williamson()}
    errs = {}
    for name, gam in gammas.items():
        c = ArchimaxCopula.from_measures(gam, independence_pickands())
        if name == "mixed":
            # independent route: piecewise psi and phi by bisection on it
            phi = [8.0 if v == 0 else bisect_root(lambda z, v=v: v - ref_psi(z), 0.0, 8.0) for v in grid]
            ref = np.array([[ref_psi(a + b) for b in phi] for a in phi])
        elif name == "exp":
            ref = X * Y
        else:
            ref = c.gen.psi(c.gen.phi(X) + c.gen.phi(Y))
        errs[f"Pi/{name}"] = float(np.max(np.abs(c.cdf(X, Y) - ref)))
        m = ArchimaxCopula.from_measures(gam, comonotone_pickands())
        errs[f"M/{name}"] = float(np.max(np.abs(m.cdf(X, Y) - np.minimum(X, Y))))
    ts = np.linspace(0.02, 0.98, 49)
    for name, th in {"mixed": mixed_pickands(), "discrete": discrete_pickands(),
                     "smooth": smooth_pickands(), "cantor": cantor_pickands()}.items():
        c = ArchimaxCopula.from_measures(ExponentialWilliamson(), th)
        errs[f"exp/{name}"] = max(float(np.max(np.abs(c.g_curve(t, grid) - grid ** (1 / t - 1)))) for t in ts)
    worst = max(errs, key=errs.get)
    ok = errs[worst] <= 1e-12
    assert record(3, ok, f"{len(errs)} cases, worst {worst} {errs[worst]:.1e}"), errs


# 4 -------------------------------------------------------------------------
def test_criterion_4_kendall(mixed_pair):
    c = mixed_pair
    t0 = time.perf_counter()
    n = 100_000
    dists = [kendall_fit(c, n, seed)[1] for seed in (0, 1, 2)]
    thr = ks_threshold(n)
    passed = sum(d <= thr for d in dists)
    jump = c.kendall_cdf(4 / 7) - c.kendall_cdf_left(4 / 7)
    jump_err = abs(jump - (1 / 14) * (1 - c.tau_A))
    dt = time.perf_counter() - t0
    ok = passed >= 2 and jump_err <= 1e-10 and dt < 60
    detail = (f"KS {', '.join(f'{d:.4f}' for d in dists)} vs {thr:.4f}, jump error {jump_err:.1e}, {dt:.1f} s")
    assert record(4, ok, detail)


# 5 -------------------------------------------------------------------------
def test_criterion_5_graph_masses(discrete_pair):
    # theta atoms 1/4 and 3/4 of mass 1/2, A(1/4) = A(3/4) = 3/4: both predictions are 1/4
    errs = {r: abs(theta_atom_integral(discrete_pair, r) - 0.25) for r in (0.25, 0.75)}
    ok = max(errs.values()) <= 1e-6
    assert record(5, ok, ", ".join(f"t={r}: error {e:.1e}" for r, e in errs.items()))


# 6 -------------------------------------------------------------------------
def test_criterion_6_discrete_concentration(discrete_pair):
    c = discrete_pair
    b = sample(c, 10_000, seed=42)
    worst = 0.0
    for x, y in b.pairs:
        locs = c.kernel_atoms(x).locations()
        worst = max(worst, min(abs(y - v) for v in locs) if locs else math.inf)
    cm = c.component_masses()
    ok = worst <= 1e-10 and cm.dis >= 1 - 1e-4
    assert record(6, ok, f"max distance to an atom curve {worst:.1e}, dis {cm.dis:.12f}")


# 7 -------------------------------------------------------------------------
def test_criterion_7_support_grid(exp_mixed):
    n = 128
    e = np.linspace(0.0, 1.0, n + 1)
    C = exp_mixed.cdf_grid(e, e)
    mass = C[1:, 1:] - C[:-1, 1:] - C[1:, :-1] + C[:-1, :-1]
    positive = mass > 1e-13
    x0, x1 = e[:-1, None], e[1:, None]
    y0, y1 = e[None, :-1], e[None, 1:]
    # envelope x^7 <= y <= x^(1/3): cells fully inside, fully outside, or crossed
    inside = (y0 >= x1 ** 7) & (y1 <= x0 ** (1 / 3))
    outside = (y1 <= x0 ** 7) | (y0 >= x1 ** (1 / 3))
    boundary = ~inside & ~outside
    bad = int(np.sum((positive != inside) & ~boundary))
    ok = bad == 0
    assert record(7, ok, f"{n}x{n}: {int(inside.sum())} inside, {int(boundary.sum())} boundary, "
                         f"{bad} disagreements")


# 8 -------------------------------------------------------------------------
@pytest.mark.slow
def test_criterion_8_property_battery():
    t0 = time.perf_counter()
    rep = run_battery(seed=0)
    dt = time.perf_counter() - t0
    fails = rep.failures()
    ok = rep.overall and dt < 300
    names = "; ".join(f.name for f in fails[:5])
    assert record(8, ok, f"{len(rep.checks)} checks, {len(fails)} failures{': ' + names if fails else ''}, "
                         f"{dt:.0f} s"), rep.to_json()


# 9 -------------------------------------------------------------------------
LEVELS = (0.0, 1 / 10, 17 / 90, 5 / 18, 11 / 30, 41 / 90, 49 / 90, 19 / 30, 13 / 18, 73 / 90, 9 / 10)


def write_csv(name, header, rows):
    os.makedirs(ARTIFACTS, exist_ok=True)
    path = os.path.join(ARTIFACTS, name)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return path


def test_criterion_9_figure_data(mixed_pair, exp_mixed, discrete_pair):
    problems = []
    files = []

    # level-set polylines with the envelope curves
    rows = []
    for t in LEVELS:
        ls = mixed_pair.level_set(t, n=200)
        rows += [(t, x, y, seg) for x, y, seg in ls.rows()]
        for x, y in ls.points:
            if abs(mixed_pair.cdf(x, y) - t) > 1e-9:
                problems.append(f"level {t:.4f} off at x={x:.4f}")
                break
        ys = np.array([y for _, y in ls.points])
        if t > 0 and np.any(ys[:-2] + ys[2:] - 2 * ys[1:-1] < -1e-10):
            problems.append(f"level {t:.4f} not convex")
        if t > 0 and ls.vertical is not None:
            x0, lo, _ = ls.vertical
            if abs(mixed_pair.cdf(x0, lo) - t) > 1e-9 or abs(mixed_pair.cdf(x0, 1.0) - t) > 1e-9:
                problems.append(f"level {t:.4f} vertical part off")
    xs = np.linspace(0, 1, 201)
    rows += [("gL", x, y, "envelope") for x, y in zip(xs, mixed_pair.g_curve(1 / 8, xs))]
    rows += [("gR", x, y, "envelope") for x, y in zip(xs, mixed_pair.g_curve(3 / 4, xs))]
    files.append(write_csv("level_sets.csv", ("t", "x", "y", "segment"), rows))

    # samples and Kendall curves
    archimedean = ArchimaxCopula.from_measures(mixed_williamson(), independence_pickands())
    n = 10_000
    for name, c in (("archimedean", archimedean), ("extreme_value", exp_mixed), ("mixed_pair", mixed_pair)):
        b, d = kendall_fit(c, n, seed=7)
        files.append(write_csv(f"sample_{name}.csv", ("x", "y"), b.pairs))
        files.append(write_csv(f"kendall_{name}.csv", ("t", "FK"), kendall_rows(c, 512)))
        if d > ks_threshold(n):
            problems.append(f"{name} Kendall KS {d:.4f}")
        if not all(c.in_support_envelope(x, y, tol=1e-9) for x, y in b.pairs):
            problems.append(f"{name} sample leaves the envelope")
        fk = np.array([v for _, v in kendall_rows(c, 512)])
        if np.any(np.diff(fk) < -1e-14) or fk.min() < 0 or fk.max() > 1:
            problems.append(f"{name} Kendall curve not a distribution function")
    b = sample(discrete_pair, n, seed=7)
    files.append(write_csv("sample_discrete_pair.csv", ("x", "y"), b.pairs))
    off = sum(min(abs(y - v) for v in discrete_pair.kernel_atoms(x).locations()) > 1e-10 for x, y in b.pairs)
    if off:
        problems.append(f"{off} discrete-pair points off the atom curves")

    ok = not problems and all(os.path.getsize(f) > 0 for f in files)
    detail = f"{len(files)} CSV files in {os.path.relpath(ARTIFACTS, ROOT)}"
    assert record(9, ok, detail + ("; " + "; ".join(problems) if problems else "")), problems


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-p", "no:cacheprovider"]))
