"""Kronecker-type certificates: univariate roots, factor products, preperiodic pairs."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynmahler.kronecker import (
    FactorSpec,
    Verdict,
    build_factor_product,
    certify_zero_bivariate,
    certify_zero_univariate,
    commutes_with_iterate,
    find_preperiodic_pairs,
    preperiodic_candidates,
)
from dynmahler.measure import mahler_mc
from dynmahler.poly import AffineMap, CPoly, MPoly, ZPoly, iterate
from dynmahler.potential import mahler_univariate_jensen

Z2 = ZPoly((0, 0, 1))
Z2M1 = ZPoly((-1, 0, 1))
CHEB = ZPoly((-2, 0, 1))


def _xy():
    return MPoly.var(0, 2), MPoly.var(1, 2)


# ---------------------------------------------------------------------------
# univariate
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "f, P",
    [
        (Z2, ZPoly((1, 1, 1, 1, 1))),  # primitive 5th roots of unity
        (Z2, ZPoly((-1, 1))),
        (Z2, ZPoly((0, 1))),
        (Z2M1, ZPoly((0, -1, 1))),  # 0 and 1 lie on the 2-cycle
        (CHEB, ZPoly((-2, 1))),  # 2 is fixed
        (CHEB, ZPoly((-1, 1, 1))),  # 2cos(2pi/5) and 2cos(4pi/5)
    ],
)
def test_univariate_certified(f, P):
    v = certify_zero_univariate(f, P)
    assert v.verdict is Verdict.CERTIFIED_ZERO
    assert v.estimate == 0.0
    assert len(v.witnesses) == P.degree()


@pytest.mark.parametrize(
    "f, P",
    [
        (Z2, ZPoly((1, 0, 2))),  # leading coefficient 2
        (Z2, ZPoly((2, 0, 2))),  # content 2
        (Z2, ZPoly((-2, 1))),  # 2 escapes
        (Z2M1, ZPoly((-2, 1))),
    ],
)
def test_univariate_positive(f, P):
    v = certify_zero_univariate(f, P)
    assert v.verdict is Verdict.POSITIVE_EVIDENCE
    assert v.estimate > 0


def test_univariate_lead_reason():
    v = certify_zero_univariate(Z2, ZPoly((1, 0, 2)))
    assert "leading" in v.reason
    assert v.estimate == pytest.approx(math.log(2), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=3))
def test_univariate_verdict_matches_jensen(cs):
    """Certified zero implies a vanishing Jensen value; positive evidence implies a positive one."""
    P = ZPoly(tuple(cs) + (1,))
    v = certify_zero_univariate(Z2M1, P)
    m = mahler_univariate_jensen(Z2M1, P)
    if v.verdict is Verdict.CERTIFIED_ZERO:
        assert abs(m) < 1e-8
    else:
        assert m > 1e-8


# ---------------------------------------------------------------------------
# factor products
# ---------------------------------------------------------------------------


def test_factor_product_identity():
    x, y = _xy()
    assert build_factor_product([FactorSpec()], f=Z2) == x - y


def test_factor_product_sign_twist():
    assert str(build_factor_product([FactorSpec(Z2, AffineMap(-1, 0), 1, 0)])) == "y+x^2"


def test_factor_product_two_factors():
    x, y = _xy()
    specs = [FactorSpec(Z2, AffineMap(1, 0), 1, 0), FactorSpec(Z2, AffineMap(1, 0), 0, 1)]
    assert build_factor_product(specs) == (x * x - y) * (x - y * y)


def test_factor_product_iterates():
    x, y = _xy()
    prod = build_factor_product([FactorSpec(None, AffineMap.identity(), 2, 1)], f=Z2M1)
    f2 = iterate(Z2M1, 2)
    expect = sum((MPoly({(k, 0): int(c)}, 2) for k, c in enumerate(f2.coeffs) if c), MPoly({}, 2))
    expect = expect - (y * y - 1)
    assert prod == expect


@pytest.mark.parametrize(
    "spec",
    [
        FactorSpec(CPoly((0.5, 0, 1)), AffineMap(1, 0), 1, 0),
        FactorSpec(Z2, AffineMap(1j, 0), 1, 0),
    ],
)
def test_factor_product_non_integral(spec):
    assert build_factor_product([spec]) is None


def test_factor_spec_validation():
    with pytest.raises(ValueError):
        FactorSpec(n=-1)
    with pytest.raises(ValueError):
        FactorSpec(ZPoly((0, 1)))
    with pytest.raises(ValueError):
        build_factor_product([])
    with pytest.raises(ValueError):
        build_factor_product([FactorSpec()])


# ---------------------------------------------------------------------------
# bivariate certificates
# ---------------------------------------------------------------------------


def test_commutes_with_iterate():
    assert commutes_with_iterate(Z2, ZPoly((0, 0, 0, 1))) == 1
    assert commutes_with_iterate(CHEB, ZPoly((0, -3, 0, 1))) == 1  # Chebyshev T3
    assert commutes_with_iterate(Z2, AffineMap(-1, 0).as_poly()) is None
    assert commutes_with_iterate(Z2, ZPoly((1, 0, 1))) is None


def test_bivariate_diagonal():
    x, y = _xy()
    v = certify_zero_bivariate(Z2M1, x - y)
    assert v.verdict is Verdict.CERTIFIED_ZERO
    assert v.heuristic is False


def test_bivariate_divides_product():
    x, y = _xy()
    specs = [FactorSpec(None, AffineMap.identity(), 1, 1)]
    assert certify_zero_bivariate(Z2, x * x - y * y, specs).verdict is Verdict.CERTIFIED_ZERO
    assert certify_zero_bivariate(Z2, x + y, specs).verdict is Verdict.CERTIFIED_ZERO


def test_bivariate_rejects_non_commuting_twist():
    """-z commutes with no iterate of z^2 (it anticommutes), so the twist is refused."""
    x, y = _xy()
    specs = [FactorSpec(), FactorSpec(None, AffineMap(-1, 0), 0, 0)]
    v = certify_zero_bivariate(Z2, x * x - y * y, specs)
    assert v.verdict is Verdict.UNDETERMINED
    assert "L does not commute" in v.reason


def test_bivariate_two_factor_curve():
    x, y = _xy()
    specs = [FactorSpec(Z2, AffineMap(1, 0), 1, 0), FactorSpec(Z2, AffineMap(1, 0), 0, 1)]
    v = certify_zero_bivariate(Z2, x * x - y, specs)
    assert v.verdict is Verdict.CERTIFIED_ZERO
    assert v.witnesses[0]["quotient"] == str(x - y * y)


def test_bivariate_undetermined():
    x, y = _xy()
    v = certify_zero_bivariate(Z2, x - y - 1)
    assert v.verdict is Verdict.UNDETERMINED
    assert v.estimate is None


def test_bivariate_input_checks():
    x, y = _xy()
    with pytest.raises(ValueError, match="primitive"):
        certify_zero_bivariate(Z2, 2 * x - 2 * y)
    with pytest.raises(ValueError):
        certify_zero_bivariate(Z2, ZPoly((0, 1)))


def test_certified_zero_agrees_with_sampling():
    """m(x - y) vanishes for z^2 - 1; the sampler sees this within its error bar."""
    x, y = _xy()
    assert certify_zero_bivariate(Z2M1, x - y).verdict is Verdict.CERTIFIED_ZERO
    r = mahler_mc(Z2M1, x - y, n_samples=20_000, seed=3)
    assert abs(r.estimate) < 4 * r.std_error + 0.02


# ---------------------------------------------------------------------------
# preperiodic pairs
# ---------------------------------------------------------------------------


def test_candidates_z2():
    cands = preperiodic_candidates(Z2, max_n=2)
    assert len(cands) == 5
    for c in cands:
        assert abs(c) < 1e-12 or abs(abs(c) - 1) < 1e-12


def test_pairs_on_diagonal():
    x, y = _xy()
    res = find_preperiodic_pairs(Z2M1, x - y, max_n=3)
    assert len(res) > 0
    for a, b in res:
        assert abs(a - b) < 1e-8


def test_pairs_unimodular():
    x, y = _xy()
    res = find_preperiodic_pairs(Z2, x * y - 1, max_n=3)
    assert len(res) > 0
    for a, b in res:
        assert abs(a * b - 1) < 1e-8
        assert abs(abs(a) - 1) < 1e-8


def test_pairs_none():
    x, y = _xy()
    assert len(find_preperiodic_pairs(Z2, x + y - 5, max_n=3)) == 0


def test_pairs_vertical_line():
    x, y = _xy()
    res = find_preperiodic_pairs(Z2, (x - 1) * (x + y - 5), max_n=2)
    assert len(res) == 0
    assert len(res.vertical_lines) == 1
    assert abs(res.vertical_lines[0] - 1) < 1e-12


@pytest.mark.parametrize("f, P", [
    (Z2, "x^2+y^2-2"),
    (CHEB, "x+y"),
    (Z2M1, "x*y"),
])
def test_pairs_lie_on_curve(f, P):
    x, y = _xy()
    Pm = {"x^2+y^2-2": x * x + y * y - 2, "x+y": x + y, "x*y": x * y}[P]
    for a, b in find_preperiodic_pairs(f, Pm, max_n=3):
        val = Pm(a, b)
        assert abs(complex(val)) < 1e-8
