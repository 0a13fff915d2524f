"""JSON schema for polynomials and point parsing.

Univariate::

    {"var": "z", "coeffs": ["c0", "c1", ...]}

Multivariate::

    {"vars": ["x", "y"], "terms": [{"exp": [i, j], "coeff": "c"}, ...]}

Coefficients are decimal strings (plain JSON numbers are tolerated).  A
univariate polynomial whose coefficients are all integers loads as a ZPoly,
otherwise as a CPoly.  ``"3/4"`` style rationals are exact.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .errors import SchemaError
from .poly import CPoly, MPoly, ZPoly

_RATIONAL = re.compile(r"^\s*[+-]?\d+\s*/\s*[+-]?\d+\s*$")


def parse_number(text, field="coeff"):
    """Parse an integer, rational ``p/q``, decimal or complex literal.

    Complex literals accept ``i`` or ``j`` as the imaginary unit, e.g.
    ``"1.5+0.5i"``.
    """
    if isinstance(text, bool):
        raise SchemaError(field, "boolean is not a number")
    if isinstance(text, int):
        return text
    if isinstance(text, float):
        return Fraction(text) if text.is_integer() else text
    if not isinstance(text, str):
        raise SchemaError(field, f"expected a number string, got {type(text).__name__}")
    s = text.strip()
    try:
        return int(s)
    except ValueError:
        pass
    if _RATIONAL.match(s):
        num, den = s.split("/")
        if int(den) == 0:
            raise SchemaError(field, "zero denominator")
        return Fraction(int(num), int(den))
    try:
        return float(s)
    except ValueError:
        pass
    try:
        return complex(s.replace("i", "j").replace(" ", ""))
    except ValueError:
        raise SchemaError(field, f"cannot parse number {text!r}") from None


def _load(source, field):
    if isinstance(source, (dict, list)):
        return source
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise SchemaError(field, f"cannot read {path}: {exc.strerror}") from None
    else:
        text = source
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(field, f"invalid JSON ({exc.msg} at char {exc.pos})") from None


def poly_from_json(source, field="poly"):
    """Load a polynomial from a dict, a JSON string or a path."""
    obj = _load(source, field)
    if not isinstance(obj, dict):
        raise SchemaError(field, "expected a JSON object")
    if "coeffs" in obj:
        coeffs = obj["coeffs"]
        if not isinstance(coeffs, list) or not coeffs:
            raise SchemaError(f"{field}.coeffs", "expected a nonempty list")
        vals = [parse_number(c, f"{field}.coeffs[{i}]") for i, c in enumerate(coeffs)]
        if all(isinstance(v, (int, Fraction)) for v in vals):
            return ZPoly(tuple(vals))
        return CPoly(tuple(complex(v) for v in vals))
    if "terms" in obj:
        names = obj.get("vars")
        if not isinstance(names, list) or not names:
            raise SchemaError(f"{field}.vars", "expected a nonempty list of names")
        terms = obj["terms"]
        if not isinstance(terms, list):
            raise SchemaError(f"{field}.terms", "expected a list")
        out = {}
        for i, t in enumerate(terms):
            where = f"{field}.terms[{i}]"
            if not isinstance(t, dict):
                raise SchemaError(where, "expected an object")
            exp = t.get("exp")
            if not isinstance(exp, list) or len(exp) != len(names):
                raise SchemaError(f"{where}.exp", f"expected a list of {len(names)} integers")
            if not all(isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in exp):
                raise SchemaError(f"{where}.exp", "exponents must be nonnegative integers")
            if "coeff" not in t:
                raise SchemaError(f"{where}.coeff", "missing")
            c = parse_number(t["coeff"], f"{where}.coeff")
            if not isinstance(c, int) and not (isinstance(c, Fraction) and c.denominator == 1):
                raise SchemaError(f"{where}.coeff", "multivariate coefficients must be integers")
            key = tuple(exp)
            out[key] = out.get(key, 0) + int(c)
        return MPoly(out, len(names))
    raise SchemaError(field, "expected 'coeffs' (univariate) or 'terms' (multivariate)")


def _num_str(c):
    if isinstance(c, complex):
        if c.imag == 0:
            return repr(c.real)
        return f"{c.real!r}{'+' if c.imag >= 0 else '-'}{abs(c.imag)!r}i"
    return str(c)


def poly_to_json(p, names=None):
    if isinstance(p, (ZPoly, CPoly)):
        return {"var": (names or ["z"])[0], "coeffs": [_num_str(c) for c in p.coeffs] or ["0"]}
    if isinstance(p, MPoly):
        names = names or (["x", "y", "z"][: p.nvars] if p.nvars <= 3 else [f"x{i + 1}" for i in range(p.nvars)])
        terms = [
            {"exp": list(e), "coeff": str(c)}
            for e, c in sorted(p.terms.items(), key=lambda ec: ec[0][::-1])
        ]
        return {"vars": names, "terms": terms}
    raise TypeError(f"cannot serialize {type(p).__name__}")


def as_mpoly(p):
    """Coerce a univariate polynomial to a one-variable MPoly."""
    if isinstance(p, MPoly):
        return p
    if isinstance(p, ZPoly):
        return MPoly.from_univariate(p)
    raise TypeError("integer polynomial expected")


def format_number(z, rel=1e-12):
    """Text for an exact or floating value; negligible imaginary parts are dropped.

    Examples
    --------
    >>> format_number(Fraction(3, 4)), format_number(complex(1.5, 1e-30)), format_number(1 - 2j)
    ('3/4', '1.5', '1.0-2.0i')
    """
    if isinstance(z, (int, Fraction)):
        return str(z)
    z = complex(z)
    if abs(z.imag) <= rel * max(1.0, abs(z.real)):
        return repr(z.real)
    return f"{z.real!r}{z.imag:+}i"


def parse_point(text):
    """Parse a CLI point: integer, ``p/q`` rational, real or complex."""
    return parse_number(text, "point")
