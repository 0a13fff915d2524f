"""The fourteen acceptance criteria, one test each.

Every test records a one-line PASS/FAIL report; the lines are printed in
the terminal summary (see ``conftest.pytest_terminal_summary``) so a plain
``pytest`` run shows the status of each criterion.

Criterion 13 asks for every term of the sequence ``m_{z^2}(1 + x + f^n(x))``,
``n <= 5``, to stay below ``m(1 + x + y) + 3 sigma``.  The ``n = 2`` term
is the classical measure of ``1 + x + x^4``, about 0.33738, which already
exceeds the true limit 0.32307 by more than any admissible ``3 sigma``; the
underlying result only bounds the limsup.  The criterion therefore fails for
any correct implementation; its test is a strict xfail and
``test_criterion_13_is_infeasible`` checks the arithmetic independently.
"""

import math

import mpmath
import numpy as np
import pytest

from dynmahler.acceptance import CRITERIA, run_criterion, smyth_reference

REPORT = []


def _check(number):
    res = run_criterion(number)
    REPORT.append(res.line())
    print(res.line())
    assert res.passed, res.line()


@pytest.mark.parametrize("number", [k for k in sorted(CRITERIA) if k != 13])
def test_criterion(number):
    _check(number)


@pytest.mark.xfail(strict=True, reason="term n=2 exceeds the limit; only the limsup is bounded")
def test_criterion_13():
    _check(13)


def test_criterion_13_is_infeasible():
    """Independent root-formula values: the n = 2 term beats m(1+x+y) + 0.01."""
    terms = []
    for n in range(1, 6):
        c = np.zeros(2**n + 1)
        c[0] += 1
        c[1] += 1
        c[-1] += 1
        r = np.roots(c[::-1])
        terms.append(float(np.sum(np.log(np.maximum(1.0, np.abs(r))))))
    limit = smyth_reference()
    # closed form 3 sqrt(3) / (4 pi) * L(2, chi_-3), via Hurwitz zeta
    l2 = (mpmath.zeta(2, mpmath.mpf(1) / 3) - mpmath.zeta(2, mpmath.mpf(2) / 3)) / 9
    assert limit == pytest.approx(3 * math.sqrt(3) / (4 * math.pi) * float(l2), abs=1e-9)
    assert terms[1] > limit + 0.01
    assert max(terms[2:]) < terms[1]
