"""Equilibrium sampling and quadrature engines for m_f(P)."""

import math

import numpy as np
import pytest
from scipy import stats

from dynmahler.errors import DegreeCapError, DynMahlerError
from dynmahler.measure import (
    MeasureSampler,
    boyd_lawton_sequence,
    draw_samples,
    find_start_point,
    mahler_circle,
    mahler_mc,
    mahler_nested,
    mahler_segment,
    mahler_tree,
    mc_estimate,
    new_sampler,
    preimage_tree,
)
from dynmahler.poly import MPoly, ZPoly, lehmer

Z2 = ZPoly((0, 0, 1))
Z2M1 = ZPoly((-1, 0, 1))
Z2M2 = ZPoly((-2, 0, 1))
SMYTH = 0.323065947219450514  # m(1 + x + y), checked against adaptive quadrature below


def _xy():
    return MPoly.var(0, 2), MPoly.var(1, 2)


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("f, allowed", [
    (Z2, [1]),
    (Z2M2, [2, -1]),
    (Z2M1, [(1 + math.sqrt(5)) / 2, (1 - math.sqrt(5)) / 2]),
])
def test_start_point(f, allowed):
    w = complex(find_start_point(f))
    assert min(abs(w - a) for a in allowed) < 1e-12
    df = f.derivative()
    assert abs(complex(f(w)) - w) < 1e-10 and abs(complex(df(w))) > 1


def test_sampler_stays_on_circle():
    z = MeasureSampler(Z2, seed=1).draw(10_000)
    assert np.max(np.abs(np.abs(z) - 1)) < 1e-9


def test_sampler_uniform_angles():
    z = new_sampler(Z2, seed=2).draw(10_000)
    assert stats.kstest((np.angle(z) / (2 * np.pi)) % 1, "uniform").pvalue > 0.01


@pytest.mark.parametrize("d", [3, 4])
def test_sampler_power_maps(d):
    f = ZPoly((0,) * d + (1,))
    z = MeasureSampler(f, seed=d).draw(10_000)
    assert np.max(np.abs(np.abs(z) - 1)) < 1e-9
    assert stats.kstest((np.angle(z) / (2 * np.pi)) % 1, "uniform").pvalue > 0.01


def test_sampler_chebyshev_arcsine():
    z = MeasureSampler(Z2M2, seed=3).draw(10_000)
    assert np.all(np.abs(z.imag) < 1e-9) and np.all(np.abs(z.real) <= 2 + 1e-9)
    cdf = lambda t: 0.5 + np.arcsin(np.clip(t / 2, -1, 1)) / np.pi  # noqa: E731
    assert stats.kstest(z.real, cdf).pvalue > 0.01


def test_sampler_is_reproducible():
    a = MeasureSampler(Z2M1, seed=9).draw(500)
    b = MeasureSampler(Z2M1, seed=9).draw(500)
    c = MeasureSampler(Z2M1, seed=10).draw(500)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_next_sample_is_preimage():
    s = MeasureSampler(Z2M1, seed=4)
    prev = s.next_sample()
    for _ in range(20):
        cur = s.next_sample()
        assert abs(cur**2 - 1 - prev) < 1e-12
        prev = cur


def test_draw_samples_independent_streams():
    _, (u, v) = draw_samples(Z2, 2, 1000, seed=5)
    assert not np.allclose(u, v)


# ---------------------------------------------------------------------------
# preimage trees
# ---------------------------------------------------------------------------


def test_tree_eighth_roots():
    pts = preimage_tree(Z2, 1.0, 3)
    assert len(pts) == 8 and np.allclose(pts**8, 1)
    assert len(np.unique(np.round(np.angle(pts), 9))) == 8


def test_tree_depth_two_residual():
    w = find_start_point(Z2M1)
    pts = preimage_tree(Z2M1, w, 2)
    assert len(pts) == 4
    assert np.all(np.abs((pts**2 - 1) ** 2 - 1 - w) < 1e-8)


def test_tree_average_log():
    pts = preimage_tree(Z2, 1.0, 10)
    assert abs(np.mean(np.log(np.abs(pts - 3))) - math.log(3)) < 1e-3


def test_tree_cap():
    with pytest.raises(DegreeCapError):
        preimage_tree(Z2, 1.0, 17)


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------


def test_mc_log2():
    r = mahler_mc(Z2, ZPoly((-2, 1)), n_samples=20_000, seed=1)
    assert abs(r.estimate - math.log(2)) <= 3 * r.std_error + 1e-12
    assert r.method == "MC" and r.rejections == 0 and r.seed == 1


def test_mc_diagonal_is_zero():
    x, y = _xy()
    r = mahler_mc(Z2M1, x - y, n_samples=50_000, seed=2)
    assert abs(r.estimate) <= max(3 * r.std_error, 1e-2)


def test_mc_smyth():
    x, y = _xy()
    r = mahler_mc(Z2, 1 + x + y, n_samples=50_000, seed=3)
    assert abs(r.estimate - SMYTH) <= 3 * r.std_error


def test_mc_std_error_definition():
    x, y = _xy()
    _, samples = draw_samples(Z2M1, 2, 5000, seed=4)
    vals = np.log(np.abs(samples[0] + 2 * samples[1] - 1))
    r = mc_estimate(x + 2 * y - 1, samples)
    assert abs(r.estimate - vals.mean()) < 1e-14
    assert abs(r.std_error - vals.std(ddof=1) / math.sqrt(len(vals))) < 1e-14


def test_mc_additivity_on_shared_samples():
    x, y = _xy()
    P, Q = x**2 + 3 * y - 1, x * y + 2
    e = [mahler_mc(Z2M1, R, n_samples=5000, seed=7).estimate for R in (P * Q, P, Q)]
    assert abs(e[0] - e[1] - e[2]) < 1e-12


def test_mc_reproducible():
    x, y = _xy()
    a = mahler_mc(Z2M1, x + y + 1, n_samples=3000, seed=11)
    b = mahler_mc(Z2M1, x + y + 1, n_samples=3000, seed=11)
    assert a == b


def test_mc_rejects_zero_polynomial():
    with pytest.raises((ValueError, DynMahlerError)):
        mahler_mc(Z2, MPoly({}, 2), n_samples=10)


@pytest.mark.parametrize("f, P", [
    (Z2, ZPoly((-3, 1))),
    (Z2M1, ZPoly((1, 1, 1))),
    (ZPoly((1, -1, 0, 1)), ZPoly((-2, 0, 1))),
])
def test_tree_matches_mc(f, P):
    tree = mahler_tree(f, P, depth=12)
    mc = mahler_mc(f, P, n_samples=100_000, seed=5)
    assert abs(tree.estimate - mc.estimate) <= 3 * mc.std_error + 1e-3


def test_tree_bivariate():
    x, y = _xy()
    r = mahler_tree(Z2, 1 + x + y, depth=6)
    assert abs(r.estimate - SMYTH) < 0.02 and r.method == "Tree(6)"


# ---------------------------------------------------------------------------
# nested, circle, segment
# ---------------------------------------------------------------------------


def test_nested_diagonal():
    x, y = _xy()
    assert abs(mahler_nested(Z2, x - y, n_samples=5000, seed=1).estimate) < 1e-12


def test_nested_agrees_with_mc():
    x, y = _xy()
    a = mahler_nested(Z2M1, x * y - 1, n_samples=20_000, seed=3)
    b = mahler_mc(Z2M1, x * y - 1, n_samples=20_000, seed=4)
    assert abs(a.estimate - b.estimate) <= 3 * math.hypot(a.std_error, b.std_error)


def test_nested_classical_oracle():
    x, y = _xy()
    P = (x - 2) * y + 1
    a = mahler_nested(Z2, P, n_samples=20_000, seed=3)
    assert abs(a.estimate - mahler_circle(P).estimate) <= 3 * a.std_error + 1e-5


def test_circle_examples():
    assert mahler_circle(ZPoly((-2, 1))).estimate == pytest.approx(math.log(2), abs=1e-15)
    assert abs(mahler_circle(lehmer()).estimate - 0.162357612) < 1e-6
    x, y = _xy()
    assert abs(mahler_circle(1 + x + y, grid_n=4096).estimate - SMYTH) < 1e-4


def test_circle_grid_convergence():
    x, y = _xy()
    coarse = mahler_circle(1 + x + y, grid_n=1024).estimate
    fine = mahler_circle(1 + x + y, grid_n=4096).estimate
    assert abs(fine - SMYTH) < abs(coarse - SMYTH) + 1e-12


def test_smyth_reference_by_quadrature():
    from dynmahler.acceptance import smyth_reference

    assert abs(smyth_reference() - SMYTH) < 1e-10


def test_segment_examples():
    assert abs(mahler_segment(ZPoly((0, 1))).estimate) < 1e-6
    assert abs(mahler_segment(ZPoly((-3, 1))).estimate - math.log((3 + math.sqrt(5)) / 2)) < 1e-6
    # root formula for z^2 - 10 z + 1
    big = math.log((10 + math.sqrt(96)) / 2)
    assert abs(mahler_segment(ZPoly((-10, 1))).estimate - big) < 1e-6


@pytest.mark.parametrize("coeffs", [(-3, 1), (1, 0, 1), (5, 2, 3), (7, -1, 0, 1)])
def test_segment_grid_matches_closed_form(coeffs):
    # no roots on [-2, 2]: the arcsine midpoint rule converges spectrally
    P = ZPoly(coeffs)
    a = mahler_segment(P, exact=True).estimate
    b = mahler_segment(P, exact=False, grid_n=4096).estimate
    assert abs(a - b) < 1e-9


def test_segment_shifted_interval():
    # J of z^2 - 2 rescaled to [0, 4]: m(x - 5) there equals m(x - 3) on [-2, 2]
    a = mahler_segment(ZPoly((-5, 1)), 0, 4).estimate
    b = mahler_segment(ZPoly((-3, 1)), -2, 2).estimate
    assert abs(a - b) < 1e-9


# ---------------------------------------------------------------------------
# Boyd-Lawton
# ---------------------------------------------------------------------------


def test_boyd_lawton_diagonal_zero():
    # the roots are periodic points, some repelling; a root off J_f by 1e-16
    # only escapes after ~40 steps, and the potential is Holder continuous,
    # so values of order 1e-9 are the expected floating-point floor
    x, y = _xy()
    for n, r in boyd_lawton_sequence(Z2M1, x - y, 4):
        assert abs(r.estimate) < 1e-6, n


def test_boyd_lawton_cyclotomic():
    x, y = _xy()
    for _, r in boyd_lawton_sequence(Z2, x * y - 1, 5):
        assert abs(r.estimate) < 1e-9


def test_boyd_lawton_terms_are_classical():
    x, y = _xy()
    for n, r in boyd_lawton_sequence(Z2, 1 + x + y, 4):
        coeffs = [0] * (2**n + 1)
        coeffs[0] += 1
        coeffs[1] += 1
        coeffs[2**n] += 1
        roots = np.roots(coeffs[::-1])
        classical = float(np.sum(np.log(np.maximum(1, np.abs(roots)))))
        assert abs(r.estimate - classical) < 1e-8, n


def test_boyd_lawton_vanishing_substitution():
    x, y = _xy()
    with pytest.raises(DynMahlerError):
        boyd_lawton_sequence(Z2, y - x**2, 1)
