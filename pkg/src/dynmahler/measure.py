"""Sampling the equilibrium measure and estimating dynamical Mahler measures.

Backward iteration
    From a repelling fixed point ``w`` the measure ``mu_n`` puts mass
    ``d^-n`` on each of the ``d^n`` solutions of ``f^n(z) = w`` (with
    multiplicity) and converges weakly to the equilibrium measure ``mu_f``.
    A chain that picks one preimage uniformly at random at every step
    samples ``mu_n`` exactly after ``n`` steps, so a batch of independent
    chains of length ``burn_in`` gives i.i.d. draws from ``mu_burn_in``.
Preimage tree
    The full set of ``d^depth`` preimages, averaged deterministically.
Closed forms
    For ``f = z^d`` the measure is Haar measure on the circle and for
    Chebyshev-type maps it is the arcsine law on a segment; both are
    exposed as independent oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import periodic_points, preimages, repelling_fixed_points
from .errors import DegreeCapError, DynMahlerError, SamplerError
from .poly import (
    DEFAULT_DEGREE_CAP,
    MPoly,
    ZPoly,
    as_cpoly,
    check_degree,
    coeff_array,
    iterate,
    roots,
    _quadratic_roots,
    roots_batch,
)
from .potential import green_batch, mahler_univariate_jensen

TREE_CAP = 1 << 16
UNDERFLOW_FLOOR = 1e-300
DEFAULT_BURN_IN = 64
DEFAULT_SAMPLES = 100_000


@dataclass(frozen=True)
class QuadratureResult:
    """An estimate of m_f(P).

    ``method`` is one of ``"MC"``, ``"Tree(k)"``, ``"Circle"``,
    ``"Segment"``, ``"Nested"`` or ``"Jensen"``.  ``std_error`` is 0 for
    deterministic methods.
    """

    estimate: float
    std_error: float
    n_samples: int
    method: str
    rejections: int = 0
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "estimate": self.estimate,
            "std_error": self.std_error,
            "n_samples": self.n_samples,
            "method": self.method,
            "rejections": self.rejections,
            "seed": self.seed,
        }
        out.update(self.extra)
        return out


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------


def find_start_point(f):
    """A repelling fixed point of ``f``, else a repelling point of period 2."""
    c = coeff_array(f)
    if len(c) < 3 or abs(c[-1] - 1) > 1e-12:
        raise ValueError("sampler needs a monic polynomial of degree >= 2")
    cf = as_cpoly(f)
    for w in repelling_fixed_points(f):
        if abs(cf(w) - w) < 1e-10 * max(1.0, abs(w)):
            return w
    df = cf.derivative()
    best = None
    for w in periodic_points(f, 2):
        lam = abs(df(w) * df(cf(w)))
        if lam > 1 + 1e-9 and abs(cf(w) - w) > 1e-6 and (best is None or lam > best[0]):
            best = (lam, w)
    if best is None:
        raise SamplerError("no repelling fixed point or 2-cycle found")
    return best[1]


class MeasureSampler:
    """Random backward orbit approximating the equilibrium measure.

    Parameters
    ----------
    f : ZPoly or CPoly
        Monic map of degree at least 2.
    seed : int, SeedSequence or None
        Seed for the numpy generator.
    burn_in : int
        Backward steps taken from the start point before the first sample,
        and the chain length used by :meth:`draw`.
    """

    def __init__(self, f, seed=None, burn_in=DEFAULT_BURN_IN):
        self.f = f
        self.burn_in = int(burn_in)
        self.rng = np.random.default_rng(seed)
        self.start_point = find_start_point(f)
        self.degree = len(coeff_array(f)) - 1
        self.state = self.start_point
        for _ in range(self.burn_in):
            self.next_sample()

    def next_sample(self):
        """Step to a uniformly chosen preimage of the current state."""
        pre = preimages(self.f, np.array([self.state]))[0]
        self.state = complex(pre[self.rng.integers(self.degree)])
        return self.state

    def draw(self, n):
        """``n`` independent draws: each is a fresh chain of ``burn_in`` steps."""
        w = np.full(int(n), self.start_point, dtype=complex)
        rows = np.arange(w.size)
        for _ in range(self.burn_in):
            pre = preimages(self.f, w)
            w = pre[rows, self.rng.integers(self.degree, size=w.size)]
        return w


def new_sampler(f, seed=None, burn_in=DEFAULT_BURN_IN):
    return MeasureSampler(f, seed, burn_in)


def preimage_tree(f, w, depth, cap=TREE_CAP):
    """All ``d^depth`` solutions of ``f^depth(z) = w`` with multiplicity."""
    d = len(coeff_array(f)) - 1
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if d**depth > cap:
        raise DegreeCapError(f"tree of size {d}^{depth} exceeds cap {cap}")
    level = np.array([complex(w)])
    for _ in range(depth):
        level = preimages(f, level).ravel()
    return level


# ---------------------------------------------------------------------------
# evaluation helpers
# ---------------------------------------------------------------------------


def _nvars(P):
    return P.nvars if isinstance(P, MPoly) else 1


def _evaluate(P, pts):
    """P at a tuple of coordinate arrays."""
    if isinstance(P, MPoly):
        return np.asarray(P(*pts), dtype=complex)
    return np.asarray(as_cpoly(P)(np.asarray(pts[0], dtype=complex)), dtype=complex)


def _check_nonzero(P):
    if isinstance(P, MPoly):
        if P.is_zero():
            raise ValueError("P must be nonzero")
    elif not np.any(coeff_array(P)):
        raise ValueError("P must be nonzero")


def draw_samples(f, nvars, n, seed=0, burn_in=DEFAULT_BURN_IN):
    """Independent samplers per variable, seeded from one master seed."""
    seqs = np.random.SeedSequence(seed).spawn(nvars)
    samplers = [MeasureSampler(f, s, burn_in) for s in seqs]
    return samplers, [s.draw(n) for s in samplers]


def mahler_mc(f, P, n_samples=DEFAULT_SAMPLES, seed=0, burn_in=DEFAULT_BURN_IN,
              underflow_floor=UNDERFLOW_FLOOR):
    """Monte Carlo estimate of m_f(P) from backward-orbit samples.

    Every variable gets its own sampler, with child seeds spawned from
    ``seed``, so two polynomials in the same number of variables evaluated
    with the same seed see the same sample tuples.  Tuples where
    ``|P| < underflow_floor`` are redrawn and counted.

    Examples
    --------
    >>> r = mahler_mc(ZPoly((0, 0, 1)), ZPoly((-2, 1)), n_samples=1000)
    >>> abs(r.estimate - math.log(2)) < 3 * r.std_error
    True
    """
    _check_nonzero(P)
    n = int(n_samples)
    if n < 2:
        raise ValueError("need at least 2 samples")
    nv = _nvars(P)
    samplers, pts = draw_samples(f, nv, n, seed, burn_in)
    vals = np.abs(_evaluate(P, pts))
    bad = vals < underflow_floor
    rejections = 0
    while bad.any():
        k = int(bad.sum())
        rejections += k
        if rejections > 0.01 * n:
            raise SamplerError(f"{rejections} of {n} samples hit |P| < {underflow_floor:g}")
        fresh = [s.draw(k) for s in samplers]
        for p, q in zip(pts, fresh):
            p[bad] = q
        vals[bad] = np.abs(_evaluate(P, [q for q in fresh]))
        bad = vals < underflow_floor
    logs = np.log(vals)
    return QuadratureResult(float(logs.mean()), float(logs.std(ddof=1) / math.sqrt(n)), n, "MC",
                            rejections, seed)


def mc_estimate(P, samples, seed=None):
    """Average of log|P| over given sample tuples (one array per variable).

    Evaluating several polynomials on the same tuples makes their
    estimates exactly additive under multiplication, up to rounding.
    """
    _check_nonzero(P)
    vals = np.abs(_evaluate(P, samples))
    if np.any(vals < UNDERFLOW_FLOOR):
        raise SamplerError("P vanishes at a supplied sample")
    logs = np.log(vals)
    n = logs.size
    return QuadratureResult(float(logs.mean()), float(logs.std(ddof=1) / math.sqrt(n)), n, "MC",
                            0, seed)


def mahler_tree(f, P, depth=12, w=None, cap=1 << 22):
    """Deterministic average of log|P| over the product of preimage trees.

    ``w`` defaults to the sampler start point.  Points where P vanishes
    exactly are dropped and counted as rejections.
    """
    _check_nonzero(P)
    if w is None:
        w = find_start_point(f)
    tree = preimage_tree(f, w, depth, cap=max(cap, 1))
    nv = _nvars(P)
    if tree.size**nv > cap:
        raise DegreeCapError(f"product tree of size {tree.size}^{nv} exceeds cap {cap}")
    grids = np.meshgrid(*([tree] * nv), indexing="ij")
    vals = np.abs(_evaluate(P, [g.ravel() for g in grids]))
    ok = vals > 0
    logs = np.log(vals[ok])
    return QuadratureResult(float(logs.mean()), 0.0, int(vals.size), f"Tree({depth})",
                            int((~ok).sum()))


def mahler_nested(f, P, n_samples=DEFAULT_SAMPLES, seed=0, var=0, burn_in=DEFAULT_BURN_IN,
                  max_iter=256):
    """m_f(P) for two-variable P by solving in one variable.

    Writing ``P = a_k(y) x^k + ... + a_0(y)`` with roots ``g_j(y)`` in x,
    ``m_f(P) = m_f(a_k) + E_y[sum_j g(g_j(y))]`` where ``g`` is the escape
    rate.  ``var`` picks the variable solved for (0 = x).  Samples where
    the leading coefficient vanishes or the root solve fails are redrawn.
    """
    if not isinstance(P, MPoly) or P.nvars != 2:
        raise ValueError("mahler_nested needs a polynomial in 2 variables")
    k = P.degree(var)
    if k < 1:
        raise ValueError("P must have positive degree in the solved variable")
    parts = P.coefficients_in(var)
    coeff_polys = [parts.get(j, MPoly({}, 2)).drop_variable(var).to_univariate() for j in range(k + 1)]
    lead = coeff_polys[k]
    base = mahler_univariate_jensen(f, lead) if lead.degree() > 0 else math.log(abs(lead.coeffs[0]))
    n = int(n_samples)
    samplers, (ys,) = draw_samples(f, 1, n, seed, burn_in)

    def row_values(y):
        cm = np.stack([as_cpoly(cp)(y) for cp in coeff_polys], axis=1)
        good = np.abs(cm[:, k]) > UNDERFLOW_FLOOR
        out = np.full(y.size, np.nan)
        if good.any():
            rts, ok = roots_batch(cm[good])
            g = green_batch(f, rts.ravel(), max_iter=max_iter).reshape(rts.shape).sum(axis=1)
            g[~ok] = np.nan
            out[good] = g
        return out

    vals = row_values(ys)
    bad = ~np.isfinite(vals)
    rejections = 0
    while bad.any():
        rejections += int(bad.sum())
        if rejections > 0.01 * n:
            raise SamplerError(f"{rejections} of {n} nested samples failed")
        fresh = samplers[0].draw(int(bad.sum()))
        vals[bad] = row_values(fresh)
        bad = ~np.isfinite(vals)
    return QuadratureResult(base + float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(n)), n,
                            "Nested", rejections, seed, {"leading_term_measure": base})


# ---------------------------------------------------------------------------
# classical oracles
# ---------------------------------------------------------------------------


def _mahler_roots(P):
    c = coeff_array(P)
    if len(c) == 1:
        return math.log(abs(c[0]))
    rs = roots(P).array
    return math.log(abs(c[-1])) + float(np.sum(np.log(np.maximum(1.0, np.abs(rs)))))


def mahler_circle(P, grid_n=4096, chunk=1 << 20):
    """Classical Mahler measure (the oracle for ``f = z^d``).

    Univariate P uses the root formula ``log|a| + sum log max(1, |alpha|)``.
    Several variables use the tensor trapezoid rule with ``grid_n`` nodes
    ``exp(2 pi i (k + 1/2) / grid_n)`` per circle; the half-step offset
    keeps nodes off the common zeros at roots of unity.

    Examples
    --------
    >>> round(mahler_circle(ZPoly((-2, 1))).estimate, 12)
    0.69314718056
    """
    _check_nonzero(P)
    if not isinstance(P, MPoly) or P.nvars == 1:
        Q = P.to_univariate() if isinstance(P, MPoly) else P
        return QuadratureResult(_mahler_roots(Q), 0.0, 0, "Circle")
    nv = P.nvars
    nodes = np.exp(2j * np.pi * (np.arange(grid_n) + 0.5) / grid_n)
    total = grid_n**nv
    acc = 0.0
    zeros = 0
    idx = np.arange(total, dtype=np.int64)
    for start in range(0, total, chunk):
        part = idx[start : start + chunk]
        coords = []
        rest = part
        for _ in range(nv):
            coords.append(nodes[rest % grid_n])
            rest = rest // grid_n
        vals = np.abs(P(*coords))
        ok = vals > 0
        zeros += int((~ok).sum())
        acc += float(np.log(vals[ok]).sum())
    return QuadratureResult(acc / (total - zeros), 0.0, total, "Circle", zeros)


def mahler_segment(P, alpha=-2.0, beta=2.0, grid_n=4096, exact=True):
    """m_f(P) for maps whose Julia set is the segment [alpha, beta].

    The equilibrium measure there is the arcsine law.  With
    ``w(z) = (beta - alpha)/4 (z + 1/z) + (alpha + beta)/2`` one has
    ``m_f(P) = m(P o w)``, so each root ``r`` of ``P`` contributes
    ``log|s| + log max|rho|`` over the roots of ``s rho^2 + (t - r) rho + s``
    (``s = (beta - alpha)/4``, ``t = (alpha + beta)/2``).  With
    ``exact=False`` the arcsine average is computed on the midpoint grid
    ``z = (beta - alpha)/2 cos(pi theta) + (alpha + beta)/2`` instead.

    Examples
    --------
    >>> round(mahler_segment(ZPoly((-3, 1))).estimate, 10)
    0.9624236501
    """
    _check_nonzero(P)
    if alpha == beta:
        raise ValueError("segment endpoints must differ")
    if isinstance(P, MPoly):
        if P.nvars != 1:
            raise ValueError("mahler_segment handles univariate P")
        P = P.to_univariate()
    if exact:
        c = coeff_array(P)
        s, t = (beta - alpha) / 4, (alpha + beta) / 2
        total = math.log(abs(c[-1]))
        if len(c) > 1:
            for r in roots(P).array:
                q = _quadratic_roots(np.array([[s, t - r, s]], dtype=complex))[0]
                total += math.log(abs(s)) + math.log(float(np.max(np.abs(q))))
        return QuadratureResult(total, 0.0, 0, "Segment")
    theta = (np.arange(grid_n) + 0.5) / grid_n
    z = (beta - alpha) / 2 * np.cos(np.pi * theta) + (alpha + beta) / 2
    vals = np.abs(as_cpoly(P)(z.astype(complex)))
    ok = vals > 0
    return QuadratureResult(float(np.log(vals[ok]).mean()), 0.0, grid_n, "Segment", int((~ok).sum()))


# ---------------------------------------------------------------------------
# Boyd-Lawton experiments
# ---------------------------------------------------------------------------


def boyd_lawton_sequence(f, P, n_max, degree_cap=DEFAULT_DEGREE_CAP):
    """m_f(P(x, f^n(x))) for ``n = 1 .. n_max`` by dynamical Jensen.

    The substitution is done exactly over the integers.  The sequence starts
    at n = 1: for n = 0 the substitution is P(x, x), which may vanish
    identically.
    """
    if not isinstance(P, MPoly) or P.nvars != 2:
        raise ValueError("boyd_lawton_sequence needs a polynomial in 2 variables")
    if not isinstance(f, ZPoly):
        raise TypeError("boyd_lawton_sequence needs an exact map")
    d = f.degree()
    out = []
    x = ZPoly((0, 1))
    for n in range(1, n_max + 1):
        check_degree(P.degree(0) + P.degree(1) * d**n, degree_cap)
        Q = P.substitute([x, iterate(f, n)])
        if Q.is_zero():
            raise DynMahlerError(f"P(x, f^{n}(x)) vanishes identically")
        val = mahler_univariate_jensen(f, Q, tol=1e-6)
        out.append((n, QuadratureResult(val, 0.0, max(Q.degree(), 0), "Jensen", extra={"degree": Q.degree()})))
    return out


__all__ = [
    "MeasureSampler",
    "QuadratureResult",
    "boyd_lawton_sequence",
    "draw_samples",
    "find_start_point",
    "mahler_circle",
    "mahler_mc",
    "mahler_nested",
    "mahler_segment",
    "mahler_tree",
    "mc_estimate",
    "new_sampler",
    "preimage_tree",
]
