import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from archimax import MixedMeasure1D, PickandsFunction, comonotone_pickands, independence_pickands
from archimax.measures import UNIT_INTERVAL
from archimax.verify import cantor_pickands, discrete_pickands, mixed_pickands
from oracles import ref_A, ref_h, ref_h_inv


@pytest.fixture(scope="module")
def pick():
    return PickandsFunction(mixed_pickands())


def test_golden_h_values(pick):
    assert pick.h(1 / 8) == pytest.approx(7.0, abs=1e-12)
    assert pick.h(1 / 4) == pytest.approx(51 / 16, abs=1e-12)
    assert pick.h_pseudo_inverse(7.0) == pytest.approx(1 / 8, abs=1e-12)
    assert pick.h_pseudo_inverse(1.0) == pytest.approx(3 / 4, abs=1e-12)
    L, R = pick.L_R()
    assert L == pytest.approx(1 / 8, abs=1e-12) and R == pytest.approx(3 / 4, abs=1e-12)


def test_A_matches_closed_form(pick):
    ts = np.linspace(0, 1, 1001)
    np.testing.assert_allclose(pick.A(ts), [ref_A(t) for t in ts], atol=1e-12)
    np.testing.assert_allclose(pick.h(ts[1:]), [ref_h(t) for t in ts[1:]], atol=1e-10)


def test_h_inverse_matches_closed_form(pick):
    zs = np.concatenate([np.linspace(1.0, 20.0, 400), [51 / 16, 7.0]])
    np.testing.assert_allclose(pick.h_pseudo_inverse(zs), [ref_h_inv(z) for z in zs], atol=1e-12)
    assert pick.h_pseudo_inverse(np.inf) == 0.0


def test_G_and_left_limit(pick):
    assert pick.G(0.1) == 0.0
    assert pick.G(0.8) == 1.0
    # jump of size 2(1-r) * mass at each interior theta atom
    for r in (1 / 8, 3 / 4):
        jump = pick.G(r) - pick.G_left(r)
        assert jump > 0
    ts = np.linspace(0, 1, 201)
    g = pick.G(ts)
    assert np.all(np.diff(g) >= -1e-14)


def test_right_derivative(pick):
    h = 1e-8
    for t in (0.05, 0.2, 0.5, 0.9):
        assert pick.dplusA(t) == pytest.approx((ref_A(t + h) - ref_A(t)) / h, abs=1e-6)


def test_tau_ev_against_quadrature(pick):
    # tau_A = int t(1-t)/A(t) dA'(t) with A' from the closed form: continuous
    # part A'' = 2 on (1/8, 1/4), slope jumps 1/4, 13/32, 35/32 at 1/8, 1/4, 3/4
    dens = quad(lambda t: t * (1 - t) / ref_A(t) * 2.0, 1 / 8, 1 / 4)[0]
    atoms = sum(r * (1 - r) / ref_A(r) * j for r, j in ((1 / 8, 1 / 4), (1 / 4, 13 / 32), (3 / 4, 35 / 32)))
    assert pick.tau_ev == pytest.approx(dens + atoms, abs=1e-10)


def test_builtin_extremes():
    pi = PickandsFunction(independence_pickands())
    m = PickandsFunction(comonotone_pickands())
    assert pi.A(0.3) == 1.0 and pi.tau_ev == pytest.approx(0.0, abs=1e-15)
    assert m.A(0.3) == pytest.approx(0.7) and m.tau_ev == pytest.approx(1.0)
    assert pi.L_R() == (0.0, 1.0)
    assert m.L_R() == (0.5, 0.5)


def test_cantor_pickands_tau_error_bar():
    p = PickandsFunction(cantor_pickands())
    assert 0 < p.tau_ev < 1
    assert p.tau_ev_error < 1e-6


def test_discrete_tau():
    assert PickandsFunction(discrete_pickands()).tau_ev == pytest.approx(0.5, abs=1e-12)


@st.composite
def pickands_measures(draw):
    """Random atoms in (0,1) with the mean balanced to 1/2 by a boundary atom."""
    n = draw(st.integers(1, 3))
    locs = draw(st.lists(st.floats(0.05, 0.95), min_size=n, max_size=n, unique=True))
    w = np.array(draw(st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n)))
    w = 0.5 * w / w.sum()
    mean = float(np.dot(locs, w))
    rest = 1.0 - w.sum()
    # put mass a at 0 and b at 1 with a + b = rest and b = 1/2 - mean
    b = 0.5 - mean
    a = rest - b
    atoms = list(zip(locs, w))
    if a > 1e-12:
        atoms.append((0.0, a))
    if b > 1e-12:
        atoms.append((1.0, b))
    return MixedMeasure1D(atoms=sorted(atoms), domain=UNIT_INTERVAL)


@settings(max_examples=40, deadline=None)
@given(pickands_measures(), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_A_bounds_and_convexity(m, a, b):
    p = PickandsFunction(m)
    for t in (a, b):
        assert max(t, 1 - t) - 1e-12 <= p.A(t) <= 1 + 1e-12
    mid = 0.5 * (a + b)
    assert p.A(mid) <= 0.5 * (p.A(a) + p.A(b)) + 1e-12


@settings(max_examples=40, deadline=None)
@given(pickands_measures(), st.floats(0.001, 0.999))
def test_h_inverse_roundtrip(m, t):
    p = PickandsFunction(m)
    _, R = p.L_R()
    if t < R - 1e-9:
        assert p.h_pseudo_inverse(p.h(t)) == pytest.approx(t, abs=1e-9)
