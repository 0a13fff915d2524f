"""Multibrot sets, integer normal forms and the PrePer(f) in J_f question.

For ``f_{d,c}(z) = z^d + c`` the Multibrot set ``M_d`` is the set of ``c``
with bounded critical orbit.  Monic integer quadratics are affinely
conjugate over the integers to ``z^2 + c`` or ``z^2 + z + c``, and monic
integer polynomials with a single critical point to ``z^d + c``; for these
families the preperiodic points lie in the Julia set except for a short
explicit list, decided here.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import mpmath
import numpy as np

from . import kernels
from .dynamics import CycleClass, classify_cycle, periodic_points
from .errors import DynMahlerError
from .poly import AffineMap, ZPoly, conjugate
from .polyio import format_number

# ---------------------------------------------------------------------------
# membership and real slices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultibrotVerdict:
    """``inside`` means bounded for ``max_iter`` steps (not a proof)."""

    inside: bool
    escape_step: int | None = None


def multibrot_member(d, c, max_iter=10_000):
    """Critical-orbit test for ``z^d + c``.

    Escape beyond ``2 max(2, |c|)`` is a proof of ``c`` not in ``M_d``.

    Examples
    --------
    >>> multibrot_member(2, -2).inside, multibrot_member(2, 0.5).inside
    (True, False)
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    k = int(kernels.multibrot_counts(d, np.array([complex(c)]), max_iter)[0])
    if k >= max_iter:
        return MultibrotVerdict(True)
    return MultibrotVerdict(False, k)


def multibrot_scan(d, cs, max_iter=1000):
    """Vectorized membership: boolean array, True where bounded."""
    return kernels.multibrot_counts(d, np.asarray(cs, dtype=complex), max_iter) >= max_iter


@dataclass(frozen=True)
class RealInterval:
    lo: mpmath.mpf
    hi: mpmath.mpf
    lo_formula: str
    hi_formula: str

    def __contains__(self, x):
        return self.lo <= x <= self.hi


def multibrot_real_interval(d, dps=50):
    """Closed interval ``M_d`` intersected with the real line.

    Odd ``d``: ``[-(d-1)/d^(d/(d-1)), (d-1)/d^(d/(d-1))]``.
    Even ``d``: ``[-2^(1/(d-1)), (d-1)/d^(d/(d-1))]``.

    Examples
    --------
    >>> iv = multibrot_real_interval(2)
    >>> float(iv.lo), float(iv.hi)
    (-2.0, 0.25)
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    with mpmath.workdps(dps):
        hi = mpmath.mpf(d - 1) / mpmath.power(d, mpmath.mpf(d) / (d - 1))
        hi_s = f"({d}-1)/{d}^({d}/({d}-1))"
        if d % 2:
            return RealInterval(-hi, hi, "-" + hi_s, hi_s)
        lo = -mpmath.power(2, mpmath.mpf(1) / (d - 1))
        return RealInterval(lo, hi, f"-2^(1/({d}-1))", hi_s)


# ---------------------------------------------------------------------------
# normal forms
# ---------------------------------------------------------------------------


def quadratic_normal_form(f):
    """Integer conjugate ``z^2 + c`` or ``z^2 + z + c`` of a monic quadratic.

    Returns ``(form, L)`` with ``conjugate(f, L) == form``, i.e.
    ``form = L^-1 o f o L``, and ``L = z - a1`` where the linear coefficient
    is ``2 a1`` or ``2 a1 + 1``.

    Examples
    --------
    >>> form, L = quadratic_normal_form(ZPoly((1, 2, 1)))
    >>> str(form), str(L)
    ('z^2+1', '1*z + -1')
    """
    if not (isinstance(f, ZPoly) and f.is_integral() and f.degree() == 2 and f.is_monic()):
        raise ValueError("quadratic_normal_form needs a monic integer quadratic")
    beta, alpha = f.coeffs[0], f.coeffs[1]
    a1 = alpha // 2
    if alpha % 2 == 0:
        form = ZPoly((beta - a1 * a1 + a1, 0, 1))
    else:
        form = ZPoly((beta - a1 * a1, 1, 1))
    L = AffineMap(1, -a1)
    if conjugate(f, L) != form:  # pragma: no cover - algebraic identity
        raise DynMahlerError("normal form verification failed")
    return form, L


def unicritical_normal_form(f):
    """``(c, L)`` with ``conjugate(f, L) == z^d + c``, or None.

    ``f`` has a single critical point exactly when
    ``f = (z - g)^d + b``; then ``g = -c_{d-1} / d`` must be an integer
    and ``c = b - g``, ``L = z + g``.

    Examples
    --------
    >>> unicritical_normal_form(ZPoly((4, 3, -3, 1)))[0]
    4
    >>> unicritical_normal_form(ZPoly((1, -1, 0, 1))) is None
    True
    """
    if not (isinstance(f, ZPoly) and f.is_integral() and f.is_monic()):
        raise ValueError("unicritical_normal_form needs a monic integer polynomial")
    d = f.degree()
    if d < 3:
        raise ValueError("unicritical_normal_form needs degree > 2")
    num = -f.coeffs[d - 1]
    if num % d:
        return None
    g = num // d
    shifted = ZPoly((-g, 1)) ** d
    b = f.coeffs[0] - shifted.coeffs[0]
    if shifted + b != f:
        return None
    c = b - g
    L = AffineMap(1, g)
    if conjugate(f, L) != ZPoly((c,) + (0,) * (d - 1) + (1,)):  # pragma: no cover
        raise DynMahlerError("normal form verification failed")
    return c, L


# ---------------------------------------------------------------------------
# PrePer(f) in J_f
# ---------------------------------------------------------------------------


class Holds(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


class Reason(str, enum.Enum):
    TOTALLY_DISCONNECTED = "TotallyDisconnected"
    NEUTRAL_ROOT_OF_UNITY = "NeutralRootOfUnity"
    CHEBYSHEV_SEGMENT = "ChebyshevSegment"
    POWER_MAP_BOUNDARY = "PowerMapBoundary"
    ATTRACTING_CYCLE = "AttractingCycle"
    UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class PreperJuliaVerdict:
    """Whether every preperiodic point of ``f`` lies in its Julia set.

    ``witness`` is a cycle of ``f`` itself (not of the normal form): the
    attracting cycle for ``NO``, the neutral cycle for
    ``NeutralRootOfUnity``.  ``normal_form`` and ``L`` satisfy
    ``conjugate(f, L) == normal_form``.
    """

    holds: Holds
    reason: Reason
    witness: object = None
    normal_form: ZPoly | None = None
    L: AffineMap | None = None

    def to_dict(self):
        w = None
        if self.witness is not None:
            w = {
                "cycle": [format_number(z) for z in self.witness.cycle],
                "multiplier": format_number(self.witness.multiplier),
                "class": self.witness.cls.value,
            }
        return {
            "holds": self.holds.value,
            "reason": self.reason.value,
            "normal_form": None if self.normal_form is None else str(self.normal_form),
            "L": None if self.L is None else str(self.L),
            "witness": w,
        }


def _nonrepelling_cycle(g, max_period=3):
    """First non-repelling cycle of ``g`` of period <= max_period."""
    for p in range(1, max_period + 1):
        for z in periodic_points(g, p):
            zr = complex(round(z.real), round(z.imag))
            point = int(zr.real) if abs(z - zr) < 1e-9 and zr.imag == 0 else z
            try:
                rep = classify_cycle(g, point, p)
            except DynMahlerError:
                continue
            if len(rep.cycle) == p and rep.cls is not CycleClass.REPELLING and _exact_period(g, rep.cycle[0], p):
                return rep
    return None


def _exact_period(g, z, p):
    """``p`` is the exact period (no shorter return within 1e-8)."""
    w = z
    for k in range(1, p):
        w = g(w)
        if abs(w - z) < 1e-8:
            return False
    return True


def _witness_for_f(f, g, L, rep):
    """Transport a cycle of ``g = L^-1 f L`` to the cycle ``L(cycle)`` of ``f``."""
    if rep is None:
        return None
    z0 = rep.cycle[0]
    return classify_cycle(f, L(z0), len(rep.cycle))


def preper_in_julia(f):
    """Decide whether PrePer(f) is contained in J_f for the classified families.

    Monic integer quadratics and unicritical maps are reduced to normal form;
    anything else gives ``UNKNOWN``.

    Examples
    --------
    >>> preper_in_julia(ZPoly((-1, 0, 1))).holds.value
    'no'
    >>> preper_in_julia(ZPoly((-2, 1, 1))).reason.value
    'NeutralRootOfUnity'
    """
    if not (isinstance(f, ZPoly) and f.is_integral() and f.is_monic() and f.degree() >= 2):
        return PreperJuliaVerdict(Holds.UNKNOWN, Reason.UNCLASSIFIED)
    d = f.degree()
    if d == 2:
        g, L = quadratic_normal_form(f)
        c = g.coeffs[0]
        if g.coeffs[1] == 0:
            if c == 0:
                return PreperJuliaVerdict(Holds.NO, Reason.POWER_MAP_BOUNDARY,
                                          _witness_for_f(f, g, L, classify_cycle(g, 0, 1)), g, L)
            if c == -1:
                return PreperJuliaVerdict(Holds.NO, Reason.ATTRACTING_CYCLE,
                                          _witness_for_f(f, g, L, classify_cycle(g, 0, 2)), g, L)
            if c == -2:
                return PreperJuliaVerdict(Holds.YES, Reason.CHEBYSHEV_SEGMENT, None, g, L)
            return PreperJuliaVerdict(Holds.YES, Reason.TOTALLY_DISCONNECTED, None, g, L)
        if c in (0, -1, -2):
            rep = _nonrepelling_cycle(g)
            return PreperJuliaVerdict(Holds.YES, Reason.NEUTRAL_ROOT_OF_UNITY,
                                      _witness_for_f(f, g, L, rep), g, L)
        return PreperJuliaVerdict(Holds.YES, Reason.TOTALLY_DISCONNECTED, None, g, L)
    nf = unicritical_normal_form(f)
    if nf is None:
        return PreperJuliaVerdict(Holds.UNKNOWN, Reason.UNCLASSIFIED)
    c, L = nf
    g = ZPoly((c,) + (0,) * (d - 1) + (1,))
    if c == 0:
        return PreperJuliaVerdict(Holds.NO, Reason.POWER_MAP_BOUNDARY,
                                  _witness_for_f(f, g, L, classify_cycle(g, 0, 1)), g, L)
    if d % 2 == 0 and c == -1:
        return PreperJuliaVerdict(Holds.NO, Reason.ATTRACTING_CYCLE,
                                  _witness_for_f(f, g, L, classify_cycle(g, 0, 2)), g, L)
    return PreperJuliaVerdict(Holds.YES, Reason.TOTALLY_DISCONNECTED, None, g, L)
