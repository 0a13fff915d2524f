"""Shared hypothesis strategies and small fixtures."""

import numpy as np
import pytest
from hypothesis import strategies as st

from dynmahler.poly import MPoly, ZPoly


def zpolys(min_deg=0, max_deg=4, bound=5, monic=False):
    """Exact univariate polynomials with small integer coefficients."""

    def build(cs):
        if monic:
            cs = list(cs) + [1]
        return ZPoly(tuple(cs))

    lo = min_deg if monic else min_deg + 1
    hi = max_deg if monic else max_deg + 1
    body = st.lists(st.integers(-bound, bound), min_size=lo, max_size=hi)
    strat = body.map(build)
    if not monic:
        strat = strat.filter(lambda p: not p.is_zero() and p.degree() >= min_deg)
    return strat


def monic_maps(max_deg=3, bound=3):
    """Monic integer maps of degree 2..max_deg."""
    return zpolys(min_deg=2, max_deg=max_deg, bound=bound, monic=True)


def mpolys(nvars=2, max_deg=2, bound=4):
    """Nonzero sparse integer polynomials in ``nvars`` variables."""
    exps = st.tuples(*[st.integers(0, max_deg)] * nvars)
    terms = st.dictionaries(exps, st.integers(-bound, bound).filter(bool), min_size=1, max_size=5)
    return terms.map(lambda t: MPoly(t, nvars))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def xy():
    return MPoly.var(0, 2), MPoly.var(1, 2)


def pytest_terminal_summary(terminalreporter):
    """Print the acceptance-criterion lines collected by test_acceptance.py."""
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
