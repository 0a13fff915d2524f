"""Exact and numeric polynomial arithmetic.

Three representations are used throughout the package:

``ZPoly``
    dense univariate polynomial with exact coefficients (``int`` or
    ``fractions.Fraction``), ascending degree order.
``CPoly``
    dense univariate polynomial with complex double coefficients.
``MPoly``
    sparse multivariate polynomial over the integers, keyed by exponent
    tuples.

Root finding is simultaneous (Aberth-Ehrlich) iteration.  The iteration core
works on a batch of independent problems at once so that the equilibrium
measure samplers can invert ``f`` on many points per call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import DegreeCapError, RootFindingError

ZERO_THRESHOLD = 1e-300
DEFAULT_DEGREE_CAP = 4096
MAX_SWEEPS = 500

_EPS = np.finfo(float).eps


def _normalize_exact(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, (int, np.integer)):
        return int(c)
    if isinstance(c, float) and c.is_integer():
        return int(c)
    raise TypeError(f"exact polynomial coefficient expected, got {c!r}")


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# univariate, exact
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZPoly:
    """Exact univariate polynomial, coefficients ascending (c_0 .. c_d).

    Coefficients are Python ints; Fractions are admitted so that affine
    conjugation over the rationals stays exact.  ``ZPoly(())`` is the zero
    polynomial.
    """

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, "coeffs", _strip(_normalize_exact(c) for c in self.coeffs)
        )

    @classmethod
    def monomial(cls, k, c=1):
        return cls((0,) * k + (c,))

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def const(cls, c):
        return cls((c,))

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return self.lead == 1

    def is_integral(self):
        return all(isinstance(c, int) for c in self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return ZPoly(tuple(k * c for k, c in enumerate(self.coeffs))[1:])

    def __add__(self, other):
        other = _as_zpoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return ZPoly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return ZPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-_as_zpoly(other))

    def __rsub__(self, other):
        return _as_zpoly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ZPoly(tuple(c * other for c in self.coeffs))
        other = _as_zpoly(other)
        if self.is_zero() or other.is_zero():
            return ZPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return ZPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result, base = ZPoly((1,)), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def to_cpoly(self):
        return CPoly(tuple(complex(c) for c in self.coeffs))

    def __str__(self):
        return _format_univariate(self.coeffs, "z")


def _as_zpoly(p):
    if isinstance(p, ZPoly):
        return p
    if isinstance(p, (int, Fraction)):
        return ZPoly((p,))
    raise TypeError(f"cannot combine ZPoly with {type(p).__name__}")


def _format_univariate(coeffs, var):
    if not coeffs:
        return "0"
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and c == 1:
            parts.append(f"+{mono}")
        elif mono and c == -1:
            parts.append(f"-{mono}")
        else:
            s = str(c)
            if not s.startswith("-"):
                s = "+" + s
            parts.append(s + (("*" + mono) if mono else ""))
    out = "".join(parts)
    return out[1:] if out.startswith("+") else out


# ---------------------------------------------------------------------------
# univariate, complex
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CPoly:
    """Univariate polynomial with complex double coefficients (ascending)."""

    coeffs: tuple = ()

    def __post_init__(self):
        cs = [complex(c) for c in self.coeffs]
        while cs and abs(cs[-1]) <= ZERO_THRESHOLD:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def array(self):
        return np.array(self.coeffs, dtype=complex)

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0j

    def is_zero(self):
        return not self.coeffs

    def __call__(self, x):
        acc = 0j if np.isscalar(x) else np.zeros_like(np.asarray(x), dtype=complex)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return CPoly(tuple(k * c for k, c in enumerate(self.coeffs))[1:])

    def __add__(self, other):
        other = as_cpoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0j,) * (n - len(self.coeffs))
        b = other.coeffs + (0j,) * (n - len(other.coeffs))
        return CPoly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return CPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-as_cpoly(other))

    def __rsub__(self, other):
        return as_cpoly(other) - self

    def __mul__(self, other):
        if isinstance(other, Number):
            return CPoly(tuple(c * other for c in self.coeffs))
        other = as_cpoly(other)
        if self.is_zero() or other.is_zero():
            return CPoly(())
        return CPoly(tuple(np.convolve(self.array, other.array)))

    __rmul__ = __mul__

    def __str__(self):
        return _format_univariate(self.coeffs, "z")


def as_cpoly(p):
    if isinstance(p, CPoly):
        return p
    if isinstance(p, ZPoly):
        return p.to_cpoly()
    if isinstance(p, Number):
        return CPoly((complex(p),))
    if isinstance(p, MPoly):
        if p.nvars != 1:
            raise ValueError("univariate polynomial expected")
        return p.to_univariate().to_cpoly()
    return CPoly(tuple(p))


def as_exact(p):
    """Return ``p`` as a ZPoly, or raise if it has inexact coefficients."""
    if isinstance(p, ZPoly):
        return p
    if isinstance(p, MPoly) and p.nvars == 1:
        return p.to_univariate()
    if isinstance(p, CPoly):
        cs = []
        for c in p.coeffs:
            if c.imag != 0 or not float(c.real).is_integer():
                raise TypeError("polynomial has non-integer coefficients")
            cs.append(int(c.real))
        return ZPoly(tuple(cs))
    raise TypeError(f"cannot interpret {type(p).__name__} as exact polynomial")


def coeff_array(p):
    """Complex coefficient array (ascending) of any univariate polynomial."""
    if isinstance(p, ZPoly):
        return np.array([complex(c) for c in p.coeffs], dtype=complex)
    return as_cpoly(p).array


# ---------------------------------------------------------------------------
# affine maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineMap:
    """L(z) = a*z + b.

    With int/Fraction ``a`` and ``b`` the map is exact and ``inverse`` is
    exact as well; otherwise the parameters are complex.
    """

    a: object = 1
    b: object = 0

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("affine map must have a != 0")
        if self.is_exact:
            object.__setattr__(self, "a", _normalize_exact(Fraction(self.a)))
            object.__setattr__(self, "b", _normalize_exact(Fraction(self.b)))

    @property
    def is_exact(self):
        return all(isinstance(v, (int, Fraction, np.integer)) for v in (self.a, self.b))

    @classmethod
    def identity(cls):
        return cls(1, 0)

    def __call__(self, z):
        return self.a * z + self.b

    def inverse(self):
        if self.is_exact:
            a = Fraction(1) / Fraction(self.a)
            return AffineMap(a, -Fraction(self.b) * a)
        return AffineMap(1 / complex(self.a), -complex(self.b) / complex(self.a))

    def as_poly(self):
        if self.is_exact:
            return ZPoly((self.b, self.a))
        return CPoly((self.b, self.a))

    def __matmul__(self, other):
        """Composition ``self @ other`` = self(other(z))."""
        return AffineMap(self.a * other.a, self.a * other.b + self.b)

    def __str__(self):
        return f"{self.a}*z + {self.b}"


# ---------------------------------------------------------------------------
# composition, iteration, conjugation
# ---------------------------------------------------------------------------


def compose(f, g):
    """Return f(g(z)) for two polynomials of the same kind."""
    if isinstance(f, ZPoly) and isinstance(g, ZPoly):
        acc = ZPoly(())
        for c in reversed(f.coeffs):
            acc = acc * g + c
        return acc
    f, g = as_cpoly(f), as_cpoly(g)
    acc = CPoly(())
    for c in reversed(f.coeffs):
        acc = acc * g + c
    if not all(np.isfinite(c) for c in acc.coeffs):
        raise OverflowError("composition produced non-finite coefficients")
    return acc


def iterate(f, n):
    """n-fold composition of f; ``iterate(f, 0)`` is the identity."""
    if n < 0:
        raise ValueError("iteration count must be nonnegative")
    ident = ZPoly((0, 1)) if isinstance(f, ZPoly) else CPoly((0, 1))
    out = ident
    for _ in range(n):
        out = compose(f, out)
    return out


def conjugate(f, L):
    """Return L^{-1} o f o L."""
    inv = L.inverse()
    if isinstance(f, ZPoly) and L.is_exact:
        return compose(inv.as_poly(), compose(f, L.as_poly()))
    return compose(as_cpoly(inv.as_poly()), compose(as_cpoly(f), as_cpoly(L.as_poly())))


def chebyshev(d):
    """Monic T_d with T_d(z + 1/z) = z^d + z^-d."""
    if d < 1:
        raise ValueError("d must be positive")
    t_prev, t = ZPoly((2,)), ZPoly((0, 1))
    for _ in range(d - 1):
        t_prev, t = t, ZPoly((0, 1)) * t - t_prev
    return t


def poly_divmod(a, b):
    """Quotient and remainder of exact univariate polynomials over the rationals."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    rem = [Fraction(c) for c in a.coeffs]
    db, lb = b.degree(), Fraction(b.lead)
    quot = [Fraction(0)] * max(len(rem) - db, 1)
    for k in range(len(rem) - 1 - db, -1, -1):
        q = rem[k + db] / lb
        quot[k] = q
        if q:
            for j, c in enumerate(b.coeffs):
                rem[k + j] -= q * c
    return ZPoly(tuple(quot)), ZPoly(tuple(rem[:db]) if db else ())


def poly_gcd(a, b):
    """Monic greatest common divisor over the rationals (Euclid)."""
    while not b.is_zero():
        a, b = b, poly_divmod(a, b)[1]
    if a.is_zero():
        return a
    lead = Fraction(a.lead)
    return ZPoly(tuple(Fraction(c) / lead for c in a.coeffs))


def squarefree_decomposition(p):
    """Yun's algorithm: ``p = lead * prod a_k^k`` with monic, squarefree, coprime ``a_k``.

    Returns the list of ``(a_k, k)`` with ``deg a_k >= 1``.

    Examples
    --------
    >>> [(str(a), k) for a, k in squarefree_decomposition(ZPoly((1, 0, 1)) ** 2 * ZPoly((0, 1)))]
    [('z', 1), ('z^2+1', 2)]
    """
    if p.degree() < 1:
        return []
    out = []
    a0 = poly_gcd(p, p.derivative())
    b = poly_divmod(p, a0)[0]
    c = poly_divmod(p.derivative(), a0)[0]
    d = c - b.derivative()
    k = 1
    while b.degree() >= 1:
        a = poly_gcd(b, d)
        b = poly_divmod(b, a)[0]
        c = poly_divmod(d, a)[0]
        d = c - b.derivative()
        if a.degree() >= 1:
            out.append((a, k))
        k += 1
    return out


# ---------------------------------------------------------------------------
# multivariate, exact
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MPoly:
    """Sparse polynomial in ``nvars`` variables with integer coefficients."""

    terms: Mapping = field(default_factory=dict)
    nvars: int = 1

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("nvars must be positive")
        clean = {}
        for exp, c in dict(self.terms).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.nvars:
                raise ValueError(f"exponent {exp} does not have length {self.nvars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = _normalize_exact(c)
            if c != 0:
                clean[exp] = clean.get(exp, 0) + c
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c != 0})

    @classmethod
    def var(cls, i, nvars):
        exp = [0] * nvars
        exp[i] = 1
        return cls({tuple(exp): 1}, nvars)

    @classmethod
    def const(cls, c, nvars):
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def from_univariate(cls, p, var=0, nvars=1):
        p = as_exact(p)
        terms = {}
        for k, c in enumerate(p.coeffs):
            exp = [0] * nvars
            exp[var] = k
            terms[tuple(exp)] = c
        return cls(terms, nvars)

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    __hash__ = None

    def is_zero(self):
        return not self.terms

    def degree(self, var=None):
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        return max(e[var] for e in self.terms)

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return MPoly.const(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k):
        result, base = MPoly.const(1, self.nvars), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, *values):
        """Evaluate at scalars or broadcastable numpy arrays."""
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} values")
        vals = [np.asarray(v, dtype=complex) for v in values]
        shape = np.broadcast_shapes(*(v.shape for v in vals))
        out = np.zeros(shape, dtype=complex)
        powers = [{} for _ in vals]
        for exp, c in self.terms.items():
            term = np.full(shape, complex(c))
            for i, e in enumerate(exp):
                if e:
                    if e not in powers[i]:
                        powers[i][e] = vals[i] ** e
                    term = term * powers[i][e]
            out = out + term
        return out if shape else complex(out)

    def coefficients_in(self, var):
        """Map k -> coefficient of x_var^k, as MPolys in the same variables."""
        out = {}
        for exp, c in self.terms.items():
            k = exp[var]
            rest = exp[:var] + (0,) + exp[var + 1 :]
            out.setdefault(k, {})[rest] = c
        return {k: MPoly(t, self.nvars) for k, t in out.items()}

    def drop_variable(self, var):
        """Remove a variable that does not occur."""
        if self.nvars == 1:
            raise ValueError("cannot drop the only variable")
        if any(e[var] for e in self.terms):
            raise ValueError(f"variable {var} occurs in the polynomial")
        return MPoly({e[:var] + e[var + 1 :]: c for e, c in self.terms.items()}, self.nvars - 1)

    def to_univariate(self):
        if self.nvars != 1:
            raise ValueError("not univariate")
        deg = self.degree()
        cs = [0] * (deg + 1)
        for (k,), c in self.terms.items():
            cs[k] = c
        return ZPoly(tuple(cs))

    def substitute(self, polys):
        """Replace each variable x_i by the univariate exact polynomial polys[i]."""
        if len(polys) != self.nvars:
            raise ValueError("one substitution per variable required")
        polys = [as_exact(p) for p in polys]
        cache = [{0: ZPoly((1,))} for _ in polys]
        acc = ZPoly(())
        for exp, c in self.terms.items():
            term = ZPoly((c,))
            for i, e in enumerate(exp):
                if e not in cache[i]:
                    cache[i][e] = polys[i] ** e
                term = term * cache[i][e]
            acc = acc + term
        return acc

    def leading_term(self):
        """Lex-leading term with the last variable most significant."""
        exp = max(self.terms, key=lambda e: e[::-1])
        return exp, self.terms[exp]

    def __str__(self):
        if not self.terms:
            return "0"
        names = _var_names(self.nvars)
        parts = []
        for exp in sorted(self.terms, key=lambda e: e[::-1], reverse=True):
            c = self.terms[exp]
            mono = "*".join(
                (n if e == 1 else f"{n}^{e}") for n, e in zip(names, exp) if e
            )
            if mono and c == 1:
                s = "+" + mono
            elif mono and c == -1:
                s = "-" + mono
            else:
                s = (str(c) if c < 0 else f"+{c}") + (("*" + mono) if mono else "")
            parts.append(s)
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out


def _var_names(n):
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{i + 1}" for i in range(n)]


def content_primitive(P):
    """Split P = content * primitive part with content > 0."""
    if P.is_zero():
        raise ValueError("content of the zero polynomial is undefined")
    g = 0
    for c in P.terms.values():
        g = math.gcd(g, c)
    return g, MPoly({e: c // g for e, c in P.terms.items()}, P.nvars)


def divide_exact(A, B):
    """Return Q with A == B*Q over the integers, or None if B does not divide A.

    Leading terms are taken in lex order with the last variable most
    significant, so each step is one step of long division in that variable
    with an exact recursive division of leading coefficients.
    """
    if B.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if A.nvars != B.nvars:
        raise ValueError("variable count mismatch")
    be, bc = B.leading_term()
    rem = dict(A.terms)
    quot = {}
    while rem:
        ae = max(rem, key=lambda e: e[::-1])
        ac = rem[ae]
        qe = tuple(a - b for a, b in zip(ae, be))
        if any(e < 0 for e in qe) or ac % bc:
            return None
        qc = ac // bc
        quot[qe] = qc
        for e, c in B.terms.items():
            t = tuple(x + y for x, y in zip(e, qe))
            v = rem.get(t, 0) - qc * c
            if v:
                rem[t] = v
            else:
                rem.pop(t, None)
    return MPoly(quot, A.nvars)


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootSet:
    roots: tuple
    residual: float
    lead: complex

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    @property
    def array(self):
        return np.array(self.roots, dtype=complex)


def horner(c, z):
    """Evaluate p, p' and the running bound sum |c_k||z|^k.

    ``c`` has shape (..., m+1) ascending; ``z`` broadcasts against c[..., 0].
    """
    c = np.asarray(c, dtype=complex)
    m = c.shape[-1] - 1
    az = np.abs(z)
    p = np.broadcast_to(c[..., m], np.shape(z)).astype(complex)
    dp = np.zeros_like(p)
    bound = np.abs(p)
    for k in range(m - 1, -1, -1):
        ck = c[..., k]
        dp = dp * z + p
        p = p * z + ck
        bound = bound * az + np.abs(ck)
    return p, dp, bound


def _pair_sums(z, block=256):
    """sum_{j != k} 1 / (z_k - z_j) along the last axis."""
    n, m = z.shape
    out = np.empty_like(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        for r0 in range(0, m, block):
            r1 = min(m, r0 + block)
            diff = z[:, r0:r1, None] - z[:, None, :]
            idx = np.arange(r0, r1)
            diff[:, idx - r0, idx] = np.inf
            inv = 1.0 / diff
            inv[~np.isfinite(inv)] = 0.0
            out[:, r0:r1] = inv.sum(axis=-1)
    return out


def aberth(newton, z, max_sweeps=MAX_SWEEPS):
    """Simultaneous Aberth-Ehrlich iteration on a batch of problems.

    Parameters
    ----------
    newton : callable
        ``newton(z) -> (ratio, small)`` where ``ratio`` is p/p' and ``small``
        flags entries where |p| is at the rounding-error level.
    z : ndarray, shape (N, m)
        Initial guesses; row i holds the m roots of problem i.

    Returns
    -------
    z, done : ndarray
        Final iterates and the per-root convergence mask.
    """
    z = np.array(z, dtype=complex)
    done = np.zeros(z.shape, dtype=bool)
    rng = np.random.default_rng(12345)
    for _ in range(max_sweeps):
        ratio, small = newton(z)
        done |= small
        if done.all():
            break
        s = _pair_sums(z)
        with np.errstate(all="ignore"):
            w = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(w)
        if bad.any():
            kick = 1e-3 * (1.0 + np.abs(z[bad])) * np.exp(2j * np.pi * rng.random(bad.sum()))
            w[bad] = kick
        w[done] = 0.0
        z = z - w
        done |= np.abs(w) <= 2 * _EPS * np.abs(z)
    return z, done


def _horner_newton(c):
    m = c.shape[-1] - 1

    def newton(z):
        p, dp, bound = horner(c[..., None, :] if c.ndim == 2 else c, z)
        with np.errstate(all="ignore"):
            ratio = p / dp
        return ratio, np.abs(p) <= 2 * m * _EPS * bound

    return newton


def initial_circle(c, m):
    """Guesses on a circle of radius 1 + max|c_i / c_m| (per row)."""
    c = np.atleast_2d(c)
    radius = 1.0 + np.max(np.abs(c[:, :m] / c[:, m : m + 1]), axis=1)
    angles = 2 * np.pi * np.arange(m) / m + 0.4
    return radius[:, None] * np.exp(1j * angles)[None, :]


def _quadratic_roots(c):
    c0, c1, c2 = c[:, 0], c[:, 1], c[:, 2]
    s = np.sqrt(c1 * c1 - 4 * c2 * c0)
    flip = (np.conj(c1) * s).real < 0
    s = np.where(flip, -s, s)
    q = -(c1 + s) / 2
    with np.errstate(all="ignore"):
        r1 = q / c2
        r2 = np.where(q != 0, c0 / q, 0)
    return np.stack([r1, r2], axis=1)


def roots_batch(c, max_sweeps=MAX_SWEEPS):
    """Roots of many polynomials of a common degree.

    ``c`` has shape (N, m+1), ascending, with nonzero leading column.
    Returns ``(roots, ok)`` with roots of shape (N, m) and ``ok`` flagging rows
    whose iteration converged.  Degrees 1 and 2 and binomials
    ``a z^m + b`` are solved in closed form.
    """
    c = np.atleast_2d(np.asarray(c, dtype=complex))
    n, m1 = c.shape
    m = m1 - 1
    if m < 1:
        raise ValueError("degree must be at least 1")
    if m == 1:
        return (-c[:, :1] / c[:, 1:2]), np.ones(n, dtype=bool)
    if m == 2:
        r = _quadratic_roots(c)
        return r, np.isfinite(r).all(axis=1)
    if not np.any(c[:, 1:m]):
        base = (-c[:, 0] / c[:, m]) ** (1.0 / m)
        r = base[:, None] * np.exp(2j * np.pi * np.arange(m) / m)[None, :]
        return r, np.ones(n, dtype=bool)
    z, done = aberth(_horner_newton(c), initial_circle(c, m), max_sweeps)
    return z, done.all(axis=1)


def roots(P, tol=1e-10, max_sweeps=MAX_SWEEPS):
    """All complex roots of P with multiplicity.

    Raises RootFindingError if the residual test
    max|P(r)|/|lead| <= tol * (1 + max|r|)^deg fails.
    """
    c = coeff_array(P)
    if len(c) < 2:
        raise ValueError("roots requires degree >= 1")
    if abs(c[-1]) <= ZERO_THRESHOLD:
        raise ValueError("leading coefficient below zero threshold")
    m = len(c) - 1
    r, _ = roots_batch(c[None, :], max_sweeps)
    r = r[0]
    p, _, _ = horner(c, r)
    lead = complex(c[-1])
    residual = float(np.max(np.abs(p)) / abs(lead))
    bound = tol * (1.0 + float(np.max(np.abs(r)))) ** m
    if not (np.all(np.isfinite(r)) and residual <= bound):
        raise RootFindingError("root finder did not converge", residual)
    return RootSet(tuple(complex(x) for x in r), residual, lead)


def iterate_newton(f, n, m=0, big=None):
    """Newton-ratio oracle for f^n(z) - f^m(z), evaluated by composition.

    Coefficients of high iterates overflow doubles long before their roots
    become hard to find, so the iterate is never expanded.  Orbits that leave
    every reasonable radius are frozen and their ratio extrapolated with the
    asymptotic factor 1/d per remaining step.
    """
    c = coeff_array(f)
    d = len(c) - 1
    if big is None:
        big = 10.0 ** (250.0 / d)

    def newton(z):
        w = z.astype(complex)
        dw = np.ones_like(w)
        err = _EPS * np.abs(w)
        wm, dwm, errm = (w, dw, err) if m == 0 else (None, None, None)
        escaped = np.zeros(w.shape, dtype=bool)
        esc_ratio = np.zeros_like(w)
        for k in range(1, n + 1):
            fw, dfw, bound = horner(c, w)
            with np.errstate(all="ignore"):
                new_dw = dfw * dw
                err = np.abs(dfw) * err + 2 * d * _EPS * bound
                newly = (~escaped) & (np.abs(fw) > big)
                if newly.any():
                    esc_ratio[newly] = fw[newly] / new_dw[newly] * float(d) ** (k - n)
                escaped |= newly
            w = np.where(escaped, 0, fw)
            dw = np.where(escaped, 1, new_dw)
            err = np.where(escaped, 0, err)
            if k == m:
                wm, dwm, errm = w.copy(), dw.copy(), err.copy()
        with np.errstate(all="ignore"):
            p = w - wm
            ratio = p / (dw - dwm)
            small = np.abs(p) <= 4 * (err + errm) + 2 * _EPS * np.abs(w)
        ratio = np.where(escaped, esc_ratio, ratio)
        small &= ~escaped
        return ratio, small

    return newton


def check_degree(deg, cap=DEFAULT_DEGREE_CAP):
    if deg > cap:
        raise DegreeCapError(f"degree {deg} exceeds cap {cap}")


def from_roots(rs: Iterable[complex], lead=1.0):
    out = CPoly((complex(lead),))
    for r in rs:
        out = out * CPoly((-complex(r), 1.0))
    return out


def lehmer():
    """x^10 + x^9 - x^7 - x^6 - x^5 - x^4 - x^3 + x + 1."""
    return ZPoly((1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1))
