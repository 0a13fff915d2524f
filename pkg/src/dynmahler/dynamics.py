"""Orbits, preperiodicity, periodic points and cycle multipliers.

Exact computations apply when the map is a :class:`~dynmahler.poly.ZPoly`
with integer coefficients and the starting point is an ``int`` or
``Fraction``; everything else runs in double precision.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import NotOnCycleError, RootFindingError
from .poly import (
    DEFAULT_DEGREE_CAP,
    AffineMap,
    CPoly,
    ZPoly,
    aberth,
    as_cpoly,
    check_degree,
    coeff_array,
    compose,
    iterate_newton,
    roots,
    roots_batch,
)

NEUTRAL_BAND = 1e-6
SUPERATTRACT_EPS = 1e-9
_EPS = np.finfo(float).eps


def _is_exact_point(z):
    return isinstance(z, (int, Fraction)) and not isinstance(z, bool)


def _is_exact_map(f):
    return isinstance(f, ZPoly) and f.is_integral()


def escape_radius(f):
    """Radius beyond which every orbit of the monic polynomial ``f`` escapes.

    Returns ``R = max(2S, S + 2)`` with ``S`` the sum of the moduli of the
    non-leading coefficients.  For ``|z| >= R`` one has
    ``|f(z)| >= |z|^(d-1) (|z| - S) >= 2|z|``.

    Examples
    --------
    >>> escape_radius(ZPoly((0, 0, 1)))
    2.0
    >>> escape_radius(ZPoly((1, -1, 0, 1)))
    4.0
    """
    c = coeff_array(f)
    if len(c) < 3:
        raise ValueError("escape_radius needs degree >= 2")
    if abs(c[-1] - 1) > 1e-12:
        raise ValueError("escape_radius needs a monic polynomial")
    s = float(np.sum(np.abs(c[:-1])))
    return max(2.0 * s, s + 2.0)


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------


class OrbitStatus(str, enum.Enum):
    ESCAPED = "escaped"
    CYCLE = "cycle"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class OrbitReport:
    """Outcome of :func:`orbit`.

    ``escape_step`` is set for escaped orbits, ``tail`` and ``period`` for
    detected cycles.
    """

    points: tuple
    status: OrbitStatus
    escape_step: int | None = None
    tail: int | None = None
    period: int | None = None


def orbit(f, z0, max_iter=10_000, tol=1e-10):
    """Follow the orbit of ``z0`` until it escapes, cycles or ``max_iter``.

    Cycles are found with Brent's algorithm; in exact mode points must be
    equal, in numeric mode within ``tol``.

    Examples
    --------
    >>> rep = orbit(ZPoly((-1, 0, 1)), 0)
    >>> rep.status.value, rep.tail, rep.period
    ('cycle', 0, 2)
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    exact = _is_exact_map(f) and _is_exact_point(z0)
    radius = escape_radius(f)
    if exact:
        step = f
        same = lambda a, b: a == b  # noqa: E731
        pts = [Fraction(z0) if isinstance(z0, Fraction) else z0]
    else:
        c = coeff_array(f)
        step = lambda z: complex(np.polyval(c[::-1], z))  # noqa: E731
        same = lambda a, b: abs(a - b) <= tol  # noqa: E731
        pts = [complex(z0)]

    def done(status, **kw):
        return OrbitReport(tuple(pts), status, **kw)

    if abs(pts[0]) > radius:
        return done(OrbitStatus.ESCAPED, escape_step=0)

    def point(i):
        # extend the orbit up to index i; None signals escape
        while len(pts) <= i:
            pts.append(step(pts[-1]))
            if abs(pts[-1]) > radius:
                return None
        return pts[i]

    power = lam = 1
    tortoise, hare = 0, 1
    if point(hare) is None:
        return done(OrbitStatus.ESCAPED, escape_step=len(pts) - 1)
    while not same(pts[tortoise], pts[hare]):
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare += 1
        lam += 1
        if hare > max_iter:
            return done(OrbitStatus.UNDETERMINED)
        if point(hare) is None:
            return done(OrbitStatus.ESCAPED, escape_step=len(pts) - 1)
    mu = 0
    while True:
        if point(mu + lam) is None:  # cannot happen after a confirmed match
            return done(OrbitStatus.ESCAPED, escape_step=len(pts) - 1)
        if same(pts[mu], pts[mu + lam]):
            break
        mu += 1
    del pts[mu + lam + 1 :]
    return done(OrbitStatus.CYCLE, tail=mu, period=lam)


# ---------------------------------------------------------------------------
# preperiodicity
# ---------------------------------------------------------------------------


class Preperiodicity(str, enum.Enum):
    PREPERIODIC = "preperiodic"
    WANDERING = "wandering"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class PreperiodicVerdict:
    """Preperiodicity decision.

    ``heuristic`` is true when the verdict rests on a floating-point cycle
    match rather than exact arithmetic or an escape proof.
    """

    kind: Preperiodicity
    tail: int | None = None
    period: int | None = None
    heuristic: bool = False
    reason: str = ""

    @property
    def is_preperiodic(self):
        return self.kind is Preperiodicity.PREPERIODIC

    @property
    def is_wandering(self):
        return self.kind is Preperiodicity.WANDERING


def is_preperiodic_exact(f, alpha):
    """Decide preperiodicity of a rational point under a monic integer map.

    A non-integer rational is never preperiodic: if ``alpha = a/b`` in lowest
    terms with ``b > 1`` then ``f(alpha)`` has denominator ``b^d``, so the
    denominators grow without bound.  Integer orbits either leave the disc
    of radius :func:`escape_radius` (and then escape) or repeat.

    Examples
    --------
    >>> is_preperiodic_exact(ZPoly((-1, 0, 1)), 1).tail
    1
    >>> is_preperiodic_exact(ZPoly((0, 0, 1)), Fraction(1, 2)).kind.value
    'wandering'
    """
    if not (_is_exact_map(f) and f.is_monic()):
        raise ValueError("is_preperiodic_exact needs a monic integer polynomial")
    if f.degree() < 2:
        raise ValueError("degree must be at least 2")
    alpha = Fraction(alpha)
    if alpha.denominator != 1:
        return PreperiodicVerdict(Preperiodicity.WANDERING, reason="non-integer rational")
    radius = escape_radius(f)
    seen = {}
    z = int(alpha)
    k = 0
    while z not in seen:
        if abs(z) > radius:
            return PreperiodicVerdict(Preperiodicity.WANDERING, reason=f"escaped at step {k}")
        seen[z] = k
        z = f(z)
        k += 1
    tail = seen[z]
    return PreperiodicVerdict(Preperiodicity.PREPERIODIC, tail=tail, period=k - tail,
                              reason="exact repetition")


def is_preperiodic_numeric(f, z0, tol=1e-9, max_iter=10_000):
    """Floating-point preperiodicity test.

    Escape is a proof of wandering.  A numeric cycle is reported as
    preperiodic with ``heuristic=True``: points attracted to a cycle are
    indistinguishable from points on it once they agree to ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    rep = orbit(f, complex(z0), max_iter=max_iter, tol=tol)
    if rep.status is OrbitStatus.ESCAPED:
        return PreperiodicVerdict(Preperiodicity.WANDERING,
                                  reason=f"escaped at step {rep.escape_step}")
    if rep.status is OrbitStatus.CYCLE:
        return PreperiodicVerdict(Preperiodicity.PREPERIODIC, tail=rep.tail, period=rep.period,
                                  heuristic=True, reason=f"numeric cycle within {tol:g}")
    return PreperiodicVerdict(Preperiodicity.UNDETERMINED, reason=f"no decision in {max_iter} steps")


# ---------------------------------------------------------------------------
# periodic points
# ---------------------------------------------------------------------------


def preimages(f, w):
    """All ``d`` preimages of each entry of ``w``; shape ``w.shape + (d,)``."""
    c = coeff_array(f)
    w = np.asarray(w, dtype=complex)
    flat = w.ravel()
    m = len(c) - 1
    if m >= 3 and np.any(c[1:m]):
        # generic degree: compiled Aberth when available
        r, ok = kernels.preimage_roots(c, flat)
    else:
        batch = np.tile(c, (flat.size, 1))
        batch[:, 0] -= flat
        r, ok = roots_batch(batch)
    if not ok.all():
        raise RootFindingError("preimage solve did not converge", float("nan"))
    return r.reshape(w.shape + (len(c) - 1,))


def repelling_fixed_points(f):
    """Fixed points with |f'| > 1, most repelling first."""
    cf = as_cpoly(f)
    g = cf - CPoly((0, 1))
    pts = roots(g, tol=1e-8).array
    df = cf.derivative()
    mult = np.abs([df(p) for p in pts])
    order = np.lexsort((-pts.real, -mult))
    return [complex(pts[i]) for i in order if mult[i] > 1 + 1e-9]


def _tree_guesses(f, m):
    """``m`` spread-out starting points from a backward orbit tree."""
    c = coeff_array(f)
    d = len(c) - 1
    start = np.array([0.5 + 0.25j])
    fixed = repelling_fixed_points(f)
    if fixed:
        start = np.array([fixed[0]])
    level = start
    while level.size < m:
        level = preimages(f, level).ravel()
    z = level[:m]
    # identical guesses stall Aberth; jitter deterministically
    z = z + 1e-6 * (1 + np.abs(z)) * np.exp(2j * np.pi * (np.arange(m) * 0.6180339887 % 1))
    return z, d


def periodic_points(f, n, tol=1e-8, degree_cap=DEFAULT_DEGREE_CAP):
    """Roots of ``f^n(z) - z`` with multiplicity.

    The iterate is evaluated by composition rather than expanded, so high
    periods do not overflow coefficient arithmetic.

    Examples
    --------
    >>> sorted(round(z.real, 9) for z in periodic_points(ZPoly((0, 0, 1)), 1))
    [0.0, 1.0]
    """
    if n < 1:
        raise ValueError("period must be at least 1")
    d = len(coeff_array(f)) - 1
    m = d**n
    check_degree(m, degree_cap)
    z0, _ = _tree_guesses(f, m)
    z, _ = aberth(iterate_newton(f, n, 0), z0[None, :])
    z = z[0]
    res = np.abs(iterate_points(f, z, n) - z)
    scale = 1 + np.abs(z)
    if not np.all(res <= np.maximum(tol, 1e-6) * scale):
        raise RootFindingError(f"periodic points of period {n} did not converge", float(res.max()))
    return [complex(v) for v in z]


def iterate_points(f, z, n):
    """Apply ``f`` ``n`` times to an array of points (float)."""
    c = coeff_array(f)[::-1]
    out = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        for _ in range(n):
            out = np.polyval(c, out)
    return out


# ---------------------------------------------------------------------------
# cycles
# ---------------------------------------------------------------------------


class CycleClass(str, enum.Enum):
    SUPERATTRACTING = "superattracting"
    ATTRACTING = "attracting"
    NEUTRAL = "neutral"
    REPELLING = "repelling"


@dataclass(frozen=True)
class CycleReport:
    """Cycle, multiplier and classification.

    ``rotation`` is ``arg(multiplier) / 2pi`` in ``[0, 1)`` and
    ``rotation_hint`` the nearest fraction with small denominator.  The hint
    is a suggestion only: whether a computed multiplier is exactly a root
    of unity cannot be decided in floating point.
    """

    cycle: tuple
    multiplier: complex
    cls: CycleClass
    rotation: float = 0.0
    rotation_hint: Fraction = field(default=Fraction(0))

    @property
    def abs_multiplier(self):
        return abs(self.multiplier)


def _classify(lam, neutral_band, superattract_eps):
    r = abs(lam)
    if r < superattract_eps:
        return CycleClass.SUPERATTRACTING
    if r < 1 - neutral_band:
        return CycleClass.ATTRACTING
    if abs(r - 1) <= neutral_band:
        return CycleClass.NEUTRAL
    return CycleClass.REPELLING


def _refine_cycle_point(f, z, period, steps=30):
    """Guarded Newton on f^p(z) - z: a step is kept only if it helps."""
    newton = iterate_newton(f, period, 0)

    def resid(v):
        return abs(iterate_points(f, np.array([v]), period)[0] - v)

    best = resid(z)
    for _ in range(steps):
        ratio, _ = newton(np.array([z]))
        cand = z - complex(ratio[0])
        if not np.isfinite(cand):
            break
        r = resid(cand)
        if r >= best:
            break
        z, best = cand, r
    return z, best


def _iterate_jets(f, z, period):
    """f^p(z) and its first two derivatives by forward-mode chain rule."""
    cf = as_cpoly(f)
    d1, d2 = cf.derivative(), cf.derivative().derivative()
    w, w1, w2 = z, 1.0 + 0j, 0j
    for _ in range(period):
        a, b = d1(w), d2(w)
        w, w1, w2 = cf(w), a * w1, b * w1 * w1 + a * w2
    return w, w1, w2


def _refine_parabolic(f, z, period, steps=20):
    """Polish a cycle point whose multiplier is close to 1.

    Such points are multiple roots of f^p(z) - z, which pins them down only
    to about the square root of machine precision; they are simple roots of
    (f^p)'(z) - 1.  The polished point is accepted only if it is still on
    the cycle to 1e-12, so nearby non-parabolic cycles are left alone.
    """
    best = z
    for _ in range(steps):
        _, w1, w2 = _iterate_jets(f, best, period)
        if w2 == 0:
            break
        cand = best - (w1 - 1) / w2
        if not np.isfinite(cand) or abs(cand - best) <= 2 * _EPS * abs(cand):
            best = cand if np.isfinite(cand) else best
            break
        best = cand
    w, w1, _ = _iterate_jets(f, best, period)
    if abs(w - best) <= 1e-12 * max(1.0, abs(best)):
        return best
    return z



def classify_cycle(f, point, period, tol=1e-6, neutral_band=NEUTRAL_BAND,
                   superattract_eps=SUPERATTRACT_EPS):
    """Multiplier and attraction type of the cycle through ``point``.

    Integer maps with rational points are handled exactly.  Otherwise the
    point must satisfy ``|f^period(z) - z| <= tol * max(1, |z|)`` and is then
    polished by a guarded Newton iteration.

    Examples
    --------
    >>> rep = classify_cycle(ZPoly((-1, 0, 1)), 0, 2)
    >>> rep.multiplier, rep.cls.value
    (0, 'superattracting')
    """
    if period < 1:
        raise ValueError("period must be at least 1")
    df = f.derivative()
    if _is_exact_map(f) and _is_exact_point(point):
        pts = [point]
        for _ in range(period - 1):
            pts.append(f(pts[-1]))
        if f(pts[-1]) != point:
            raise NotOnCycleError(f"{point} is not periodic with period {period}")
        lam = 1
        for p in pts:
            lam *= df(p)
        lam = lam.numerator if isinstance(lam, Fraction) and lam.denominator == 1 else lam
        val = complex(lam)
        cycle = tuple(pts)
    else:
        z0 = complex(point)
        fc = as_cpoly(f)
        w = z0
        for _ in range(period):
            w = fc(w)
        res0 = abs(w - z0)
        if not res0 <= tol * max(1.0, abs(z0)):
            raise NotOnCycleError(f"residual {res0:.3e} too large for a {period}-cycle")
        z, res = _refine_cycle_point(f, z0, period)
        if not res <= res0 or abs(z - z0) > math.sqrt(tol) * max(1.0, abs(z0)):
            z = z0  # keep the input when polishing does not help
        _, lam0, _ = _iterate_jets(f, z, period)
        if abs(lam0 - 1) < 1e-3:
            z = _refine_parabolic(f, z, period)
        pts = [z]
        for _ in range(period - 1):
            pts.append(complex(f(pts[-1])))
        dc = as_cpoly(df)
        lam = complex(np.prod([dc(p) for p in pts]))
        val = lam
        cycle = tuple(pts)
    rot = (math.atan2(val.imag, val.real) / (2 * math.pi)) % 1.0 if val != 0 else 0.0
    return CycleReport(cycle, lam, _classify(val, neutral_band, superattract_eps), rot,
                       Fraction(rot).limit_denominator(12))


def critical_points(f):
    """Roots of ``f'`` with multiplicity."""
    if f.degree() < 2:
        raise ValueError("degree must be at least 2")
    return list(roots(f.derivative()).roots)


# ---------------------------------------------------------------------------
# linear commuters
# ---------------------------------------------------------------------------


def _exact_affine(a, b, f):
    """Snap (a, b) to integers when that gives an exact commuter."""
    ai, bi = round(a.real), round(b.real)
    if abs(a - ai) > 1e-8 or abs(b - bi) > 1e-8 or ai == 0:
        return None
    L = AffineMap(int(ai), int(bi))
    if compose(L.as_poly(), f) == compose(f, L.as_poly()):
        return L
    return None


def commutator_residual(f, L):
    """Max coefficient modulus of ``L o f - f o L``."""
    lf = compose(as_cpoly(L.as_poly()), as_cpoly(f))
    fl = compose(as_cpoly(f), as_cpoly(L.as_poly()))
    diff = (lf - fl).coeffs
    return max((abs(c) for c in diff), default=0.0)


def find_linear_commuters(f, tol=1e-8, seed=0):
    """Affine maps ``L = a z + b`` with ``L o f = f o L``.

    Comparing leading coefficients forces ``a^(d-1) = 1``; comparing the
    equation at ``z = 0`` after substituting forces ``b`` to be a root of
    ``f(x) - x - a c_0``.  Candidates are verified on 50 random points.
    Integer solutions are returned as exact maps.

    Examples
    --------
    >>> [str(L) for L in find_linear_commuters(ZPoly((-1, 0, 1)))]
    ['1*z + 0']
    """
    cf = as_cpoly(f)
    d = cf.degree()
    if d < 2 or abs(cf.lead - 1) > 1e-12:
        raise ValueError("find_linear_commuters needs a monic polynomial of degree >= 2")
    c0 = cf.coeffs[0]
    rng = np.random.default_rng(seed)
    zs = np.sqrt(rng.random(50)) * np.exp(2j * np.pi * rng.random(50))
    found = []
    for k in range(d - 1):
        a = np.exp(2j * np.pi * k / (d - 1))
        a = complex(round(a.real, 15), round(a.imag, 15))
        g = cf - CPoly((a * c0, 1.0))
        for b in roots(g, tol=1e-8).roots:
            lhs = a * cf(zs) + b
            rhs = cf(a * zs + b)
            scale = np.maximum(1.0, np.abs(rhs))
            if np.max(np.abs(lhs - rhs) / scale) >= tol:
                continue
            L = _exact_affine(a, b, f) if _is_exact_map(f) else None
            if L is None:
                L = AffineMap(a, complex(b))
            if not any(abs(complex(L.a) - complex(M.a)) < 1e-8 and abs(complex(L.b) - complex(M.b)) < 1e-8
                       for M in found):
                found.append(L)
    return found
