"""Escape-rate potential, canonical heights and dynamical Jensen.

For monic ``f`` of degree ``d`` the potential of the equilibrium measure is
the escape rate ``g(z) = lim d^-n log|f^n(z)|``; it vanishes exactly on the
filled Julia set.  The univariate dynamical Mahler measure of ``P`` is then
``log|lead P| + sum g(root)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .dynamics import escape_radius, is_preperiodic_exact
from .errors import DynMahlerError
from .poly import ZPoly, coeff_array, roots, squarefree_decomposition


@dataclass(frozen=True)
class PotentialValue:
    value: float
    converged: bool
    iterations_used: int


@dataclass(frozen=True)
class HeightValue:
    """Canonical height with a rigorous bound ``|true - value| <= error_bound``."""

    value: float
    error_bound: float
    iterations: int = 0


def _monic_coeffs(f):
    c = coeff_array(f)
    if len(c) < 3:
        raise ValueError("potential needs degree >= 2")
    if abs(c[-1] - 1) > 1e-12:
        raise ValueError("potential is only defined here for monic f")
    return c


def green(f, z, max_iter=10_000, tol=1e-14):
    """Escape rate of ``z`` under the monic polynomial ``f``.

    After the orbit leaves the escape disc it is followed until the
    remaining tail ``sum_k d^-k log|1 + (lower terms)/z_k^d|`` is below
    ``tol``.  Bounded orbits give 0; ``converged`` is false when the orbit
    stayed bounded without settling near a cycle, i.e. the point may lie
    on or very close to the Julia set.

    Examples
    --------
    >>> round(green(ZPoly((0, 0, 1)), 2).value, 12)
    0.69314718056
    >>> green(ZPoly((-1, 0, 1)), 0).value
    0.0
    """
    c = _monic_coeffs(f)
    d = len(c) - 1
    radius = escape_radius(f)
    lower = float(np.sum(np.abs(c[:-1])))
    big = 10.0 ** (250.0 / d)
    poly = c[::-1]
    w = complex(z)
    hist = []
    k = 0
    while k < max_iter and abs(w) <= radius:
        if k >= max_iter - 64:
            hist.append(w)
        w = complex(np.polyval(poly, w))
        k += 1
    if abs(w) <= radius:
        # bounded: call it converged if the last iterates revisit a cycle
        converged = _looks_cyclic(hist)
        return PotentialValue(0.0, converged, k)
    scale = float(d) ** -k
    aw = abs(w)
    used = k
    while scale * 2.0 * lower / aw >= tol and aw < big:
        w = complex(np.polyval(poly, w))
        scale /= d
        aw = abs(w)
        used += 1
    value = scale * math.log(aw)
    if not math.isfinite(value):
        raise DynMahlerError("non-finite escape rate")
    return PotentialValue(max(value, 0.0), True, used)


def _looks_cyclic(hist, tol=1e-8):
    if len(hist) < 2:
        return True
    last = hist[-1]
    return any(abs(last - h) <= tol * max(1.0, abs(last)) for h in hist[:-1])


def green_batch(f, z, max_iter=256, tol=1e-14):
    """Vectorized escape rate (compiled kernel when available).

    Orbits still bounded after ``max_iter`` steps are assigned 0.  Their
    true potential is at most ``d^-max_iter log R``, far below double
    precision for the default.
    """
    c = _monic_coeffs(f)
    return kernels.green_values(c, z, max_iter, escape_radius(f), tol)


# ---------------------------------------------------------------------------
# canonical heights
# ---------------------------------------------------------------------------


def _naive_height(x):
    x = Fraction(x)
    return math.log(max(abs(x.numerator), x.denominator))


def _homogeneous_step(coeffs, a, b):
    """b^d f(a/b) as an integer, by Horner in homogeneous form."""
    d = len(coeffs) - 1
    acc = coeffs[d]
    bpow = 1
    for k in range(d - 1, -1, -1):
        bpow *= b
        acc = acc * a + coeffs[k] * bpow
    return acc


def height_constant(f):
    """Constant ``C`` with ``|h(f(x)) - d h(x)| <= C`` for all rationals x.

    Write ``x = a/b`` in lowest terms and ``F(a, b) = b^d f(a/b)``; since
    ``f`` is monic, ``gcd(F, b) = 1`` and ``h(f(x)) = log max(|F|, b^d)``.
    The upper bound ``|F| <= (1 + S) max(|a|, b)^d`` gives ``log(1 + S)``.
    For the lower bound split at ``|a| = t b`` with ``t > S``: below it
    ``b^d >= max(|a|,b)^d / t^d``, above it ``|F| >= |a|^d (1 - S/t)``.
    The best ``t`` on a logarithmic grid is used; any ``t`` is valid.
    """
    c = f.coeffs
    d = len(c) - 1
    s = float(sum(abs(x) for x in c[:-1]))
    upper = math.log1p(s)
    if s == 0:
        return upper
    ts = np.geomspace(max(s, 1e-300) * (1 + 1e-9), max(s, 1.0) * 1e6, 4000)
    ts = ts[ts > s]
    vals = np.maximum(-np.log1p(-s / ts), d * np.log(np.maximum(ts, 1.0)))
    # tiny safety margin for rounding in the logarithms
    return max(upper, float(vals.min())) * (1 + 1e-12) + 1e-15


def canonical_height(f, alpha, target_error=1e-9, max_bits=1 << 20):
    """Canonical height of a rational point under a monic integer map.

    Preperiodic points get exactly 0.  Otherwise the orbit is computed with
    exact rationals and ``h(f^N(alpha)) / d^N`` is returned together with
    the telescoping bound ``C / ((d - 1) d^N)``; iteration stops once that
    bound is below ``target_error`` or the numbers exceed ``max_bits``.

    Examples
    --------
    >>> hv = canonical_height(ZPoly((0, 0, 1)), 2)
    >>> round(hv.value, 12), hv.error_bound
    (0.69314718056, 0.0)
    """
    if not (isinstance(f, ZPoly) and f.is_integral() and f.is_monic() and f.degree() >= 2):
        raise ValueError("canonical_height needs a monic integer polynomial of degree >= 2")
    alpha = Fraction(alpha)
    if is_preperiodic_exact(f, alpha).is_preperiodic:
        return HeightValue(0.0, 0.0, 0)
    d = f.degree()
    C = height_constant(f)
    # iterate a/b as the integer pair (F(a, b), b^d); f monic keeps it coprime
    a, b = alpha.numerator, alpha.denominator
    n = 0
    bound = C / (d - 1)
    while bound > target_error:
        if max(a.bit_length(), b.bit_length()) > max_bits:
            break
        a, b = _homogeneous_step(f.coeffs, a, b), b**d
        n += 1
        bound /= d
    value = math.log(max(abs(a), b)) / float(d) ** n
    return HeightValue(max(value, 0.0), bound, n)


# ---------------------------------------------------------------------------
# dynamical Jensen
# ---------------------------------------------------------------------------


def mahler_univariate_jensen(f, P, tol=1e-10):
    """``m_f(P) = log|lead P| + sum of the potential over the roots of P``.

    Exact ``P`` is first split into squarefree parts so that every root
    handed to the root finder is simple.

    Examples
    --------
    >>> round(mahler_univariate_jensen(ZPoly((0, 0, 1)), ZPoly((-2, 1))), 12)
    0.69314718056
    """
    c = coeff_array(P)
    if not np.any(c):
        raise ValueError("P must be nonzero")
    lead = abs(c[-1])
    if len(c) == 1:
        return math.log(lead)
    if isinstance(P, ZPoly):
        # repeated roots are only found to about sqrt(eps); split them off exactly
        total = 0.0
        for a, k in squarefree_decomposition(P):
            rs = roots(a, tol=tol)
            total += k * float(np.sum(green_batch(f, rs.array, max_iter=10_000)))
        return math.log(lead) + total
    rs = roots(P, tol=tol)
    return math.log(lead) + float(np.sum(green_batch(f, rs.array, max_iter=10_000)))
