"""Orbits, preperiodicity, periodic points, cycles and linear commuters."""

import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import monic_maps
from dynmahler.dynamics import (
    CycleClass,
    OrbitStatus,
    Preperiodicity,
    classify_cycle,
    commutator_residual,
    critical_points,
    escape_radius,
    find_linear_commuters,
    is_preperiodic_exact,
    is_preperiodic_numeric,
    iterate_points,
    orbit,
    periodic_points,
    preimages,
)
from dynmahler.errors import DegreeCapError, NotOnCycleError
from dynmahler.poly import AffineMap, CPoly, ZPoly, iterate, roots

Z2 = ZPoly((0, 0, 1))
Z2M1 = ZPoly((-1, 0, 1))
Z2M2 = ZPoly((-2, 0, 1))
G3 = ZPoly((-2, 1, 1))  # z^2 + z - 2, neutral 3-cycle
CYCLE_CUBIC = ZPoly((-1, -1, 2, 1))  # z^3 + 2z^2 - z - 1


# ---------------------------------------------------------------------------
# escape radius
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("f, R", [(Z2, 2.0), (Z2M1, 3.0), (ZPoly((1, -1, 0, 1)), 4.0)])
def test_escape_radius_values(f, R):
    assert escape_radius(f) == R


@pytest.mark.parametrize("f", [Z2M1, ZPoly((1, -1, 0, 1))])
def test_escape_radius_boundary_samples(f):
    R = escape_radius(f)
    z = R * np.exp(2j * np.pi * np.arange(1000) / 1000)
    fz = CPoly(tuple(complex(c) for c in f.coeffs))(z)
    assert np.all(np.abs(fz) >= 2 * np.abs(z) * (1 - 1e-12))


def test_escape_soundness_panel():
    rng = np.random.default_rng(7)
    for _ in range(20):
        d = int(rng.integers(2, 6))
        coeffs = tuple(int(c) for c in rng.integers(-5, 6, size=d)) + (1,)
        f = ZPoly(coeffs)
        R = escape_radius(f)
        z = R * np.exp(2j * np.pi * rng.random(1000))
        fz = CPoly(tuple(complex(c) for c in f.coeffs))(z)
        assert np.all(np.abs(fz) >= 2 * np.abs(z) * (1 - 1e-12)), f


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------


def test_orbit_cycle_exact():
    rep = orbit(Z2M1, 0)
    assert rep.status is OrbitStatus.CYCLE and (rep.tail, rep.period) == (0, 2)
    assert rep.points[:3] == (0, -1, 0)


def test_orbit_escapes():
    rep = orbit(Z2, 3)
    assert rep.status is OrbitStatus.ESCAPED
    assert abs(rep.points[-1]) > escape_radius(Z2)


def test_orbit_neutral_three_cycle():
    z0 = roots(CYCLE_CUBIC).array[0]
    rep = orbit(G3, z0, tol=1e-8)
    assert rep.status is OrbitStatus.CYCLE and rep.period == 3
    pts = rep.points
    assert abs(pts[rep.tail + rep.period] - pts[rep.tail]) <= 1e-8


def test_orbit_undetermined_when_slow():
    rep = orbit(ZPoly((Fraction(1, 5), 0, 1)), 0.1, max_iter=20)
    assert rep.status is OrbitStatus.UNDETERMINED


# ---------------------------------------------------------------------------
# preperiodicity
# ---------------------------------------------------------------------------


def test_exact_examples():
    v = is_preperiodic_exact(Z2M1, 1)
    assert v.is_preperiodic and (v.tail, v.period) == (1, 2)
    assert is_preperiodic_exact(Z2, Fraction(1, 2)).is_wandering
    v = is_preperiodic_exact(Z2M2, 2)
    assert v.is_preperiodic and (v.tail, v.period) == (0, 1)


@given(st.integers(-50, 50), st.integers(2, 30))
@settings(max_examples=50, deadline=None)
def test_non_integer_rationals_wander(p, q):
    a = Fraction(p, q)
    if a.denominator == 1:
        return
    assert is_preperiodic_exact(Z2M1, a).is_wandering


def test_numeric_examples():
    v = is_preperiodic_numeric(Z2, cmath.exp(2j * cmath.pi / 7))
    assert v.is_preperiodic and v.heuristic
    w = is_preperiodic_numeric(Z2M1, 2)
    assert w.is_wandering and not w.heuristic


def test_numeric_bounded_orbit_never_wanders():
    # 0.2 < 1/4, so z^2 + 0.2 has an attracting fixed point and 0.1 stays in K_f
    f = CPoly((0.2, 0, 1))
    for n in (10, 100, 10_000):
        assert not is_preperiodic_numeric(f, 0.1, max_iter=n).is_wandering


def test_z2_plus_three_tenths_escapes():
    # 0.3 > 1/4 lies outside the Mandelbrot set, so every real orbit escapes
    assert is_preperiodic_numeric(CPoly((0.3, 0, 1)), 0.1).is_wandering


_AGREE_MAPS = [Z2, Z2M1, Z2M2, ZPoly((0, 1, 1)), ZPoly((-1, 1, 1)), G3, ZPoly((0, 0, 0, 1)), ZPoly((-1, 0, 0, 1))]


@pytest.mark.parametrize("f", _AGREE_MAPS, ids=str)
def test_exact_and_numeric_never_contradict(f):
    for a in range(-10, 11):
        ex = is_preperiodic_exact(f, a)
        nu = is_preperiodic_numeric(f, complex(a))
        if nu.kind is not Preperiodicity.UNDETERMINED:
            assert nu.kind is ex.kind, (f, a)


# ---------------------------------------------------------------------------
# preimages, periodic points
# ---------------------------------------------------------------------------


def test_preimages_shape_and_values():
    w = np.array([1.0, 4.0, -2.0 + 1j])
    pre = preimages(Z2M1, w)
    assert pre.shape == (3, 2)
    assert np.allclose(pre**2 - 1, w[:, None])


def test_periodic_points_examples():
    assert np.allclose(sorted(np.real(periodic_points(Z2, 1))), [0, 1])
    pts = periodic_points(G3, 3)
    assert len(pts) == 8
    for r in (np.sqrt(2), -np.sqrt(2)):
        assert np.min(np.abs(np.asarray(pts) - r)) < 1e-8
    for c in roots(CYCLE_CUBIC).array:
        assert np.sum(np.abs(np.asarray(pts) - c) < 1e-6) == 2
    two = periodic_points(Z2M1, 2)
    assert min(abs(z) for z in two) < 1e-10 and min(abs(z + 1) for z in two) < 1e-10


@given(monic_maps(max_deg=3), st.integers(1, 3))
@settings(max_examples=25, deadline=None)
def test_periodic_points_residual(f, n):
    pts = np.asarray(periodic_points(f, n))
    assert len(pts) == f.degree() ** n
    assert np.all(np.abs(iterate_points(f, pts, n) - pts) < 1e-6 * np.maximum(1, np.abs(pts)) ** 1)


def test_periodic_points_degree_cap():
    with pytest.raises(DegreeCapError):
        periodic_points(Z2, 13)


# ---------------------------------------------------------------------------
# cycle classification
# ---------------------------------------------------------------------------


def test_classify_examples():
    rep = classify_cycle(Z2M1, 0, 2)
    assert rep.multiplier == 0 and rep.cls is CycleClass.SUPERATTRACTING
    assert set(rep.cycle) == {0, -1}
    rep = classify_cycle(ZPoly((0, 1, 1)), 0, 1)
    assert rep.multiplier == 1 and rep.cls is CycleClass.NEUTRAL
    for z in roots(CYCLE_CUBIC):
        rep = classify_cycle(G3, z, 3)
        assert abs(rep.multiplier - 1) < 1e-6 and rep.cls is CycleClass.NEUTRAL


def test_classify_rotation_hint():
    rep = classify_cycle(ZPoly((-1, 1, 1)), -1, 1)
    assert rep.multiplier == -1 and rep.rotation_hint == Fraction(1, 2)


def test_classify_rejects_off_cycle_points():
    with pytest.raises(NotOnCycleError):
        classify_cycle(Z2M1, 1, 2)
    with pytest.raises(NotOnCycleError):
        classify_cycle(Z2M1, 0.5, 2)


@pytest.mark.parametrize("lam, cls", [(0.5, CycleClass.ATTRACTING), (1.5, CycleClass.REPELLING)])
def test_classify_bands(lam, cls):
    # fixed point 0 of z^2 + lam z has multiplier lam
    assert classify_cycle(CPoly((0, lam, 1)), 0.0, 1).cls is cls


@given(monic_maps(max_deg=3), st.integers(1, 2))
@settings(max_examples=25, deadline=None)
def test_multiplier_chain_rule(f, p):
    dfp = iterate(f, p).derivative().to_cpoly()
    for z in periodic_points(f, p):
        try:
            rep = classify_cycle(f, z, p)
        except NotOnCycleError:
            continue  # multiple roots may not polish to the tolerance
        lam_direct = complex(dfp(rep.cycle[0]))
        assert abs(rep.multiplier - lam_direct) < 1e-8 * max(1.0, abs(lam_direct))


# ---------------------------------------------------------------------------
# critical points and commuters
# ---------------------------------------------------------------------------


def test_critical_points():
    assert np.allclose(critical_points(ZPoly((3, 0, 1))), [0])
    cps = sorted(np.real(critical_points(ZPoly((1, -1, 0, 1)))))
    assert np.allclose(cps, [-1 / np.sqrt(3), 1 / np.sqrt(3)])
    assert np.allclose(critical_points(ZPoly((5, 0, 0, 0, 1))), [0, 0, 0])


def test_linear_commuters():
    assert find_linear_commuters(Z2M1) == [AffineMap.identity()]
    assert find_linear_commuters(Z2) == [AffineMap.identity()]
    # -z satisfies f(-z) = f(z) but not -f(z) = f(-z)
    assert commutator_residual(Z2, AffineMap(-1, 0)) > 1
    for d in (3, 4, 5):
        f = ZPoly((0,) * d + (1,))
        found = find_linear_commuters(f)
        assert len(found) == d - 1
        for L in found:
            assert abs(complex(L.a) ** (d - 1) - 1) < 1e-12


@given(monic_maps(max_deg=4))
@settings(max_examples=25, deadline=None)
def test_commuters_verified(f):
    found = find_linear_commuters(f)
    assert AffineMap.identity() in found
    for L in found:
        assert commutator_residual(f, L) < 1e-8
