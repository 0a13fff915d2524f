"""JSON polynomial schema and number parsing."""

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import mpolys, zpolys
from dynmahler.errors import SchemaError
from dynmahler.poly import CPoly, MPoly, ZPoly
from dynmahler.polyio import as_mpoly, format_number, parse_number, parse_point, poly_from_json, poly_to_json


@pytest.mark.parametrize("text, value", [
    ("3", 3), ("-7", -7), ("3/4", Fraction(3, 4)), ("-1 / 2", Fraction(-1, 2)),
    ("1.5", 1.5), ("1.5+0.5i", complex(1.5, 0.5)), ("2j", 2j), (4, 4), (2.0, 2),
])
def test_parse_number(text, value):
    assert parse_number(text) == value


@pytest.mark.parametrize("bad", ["abc", "1/0", True, None, [1]])
def test_parse_number_rejects(bad):
    with pytest.raises(SchemaError):
        parse_number(bad)


def test_univariate_schema():
    p = poly_from_json('{"var":"z","coeffs":["-1","0","1"]}')
    assert isinstance(p, ZPoly) and p == ZPoly((-1, 0, 1))
    c = poly_from_json({"var": "z", "coeffs": ["0.5", "1"]})
    assert isinstance(c, CPoly)


def test_multivariate_schema():
    P = poly_from_json({"vars": ["x", "y"], "terms": [{"exp": [1, 0], "coeff": "1"}, {"exp": [0, 1], "coeff": "-1"}]})
    x, y = MPoly.var(0, 2), MPoly.var(1, 2)
    assert P == x - y


def test_schema_errors_name_the_field():
    with pytest.raises(SchemaError) as exc:
        poly_from_json('{"var":"z","coeffs":["1","q"]}', field="f")
    assert "f.coeffs[1]" in str(exc.value)
    with pytest.raises(SchemaError) as exc:
        poly_from_json('{"vars":["x","y"],"terms":[{"exp":[1],"coeff":"1"}]}')
    assert "terms[0]" in str(exc.value)
    with pytest.raises(SchemaError):
        poly_from_json("{not json")


def test_reads_files(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"var": "z", "coeffs": ["0", "0", "1"]}))
    assert poly_from_json(str(path)) == ZPoly((0, 0, 1))
    with pytest.raises(SchemaError):
        poly_from_json(str(tmp_path / "missing.json"))


@given(zpolys(0, 6, 50))
@settings(max_examples=50, deadline=None)
def test_univariate_roundtrip(p):
    assert poly_from_json(json.dumps(poly_to_json(p))) == p


@given(mpolys(nvars=3))
@settings(max_examples=50, deadline=None)
def test_multivariate_roundtrip(P):
    assert poly_from_json(json.dumps(poly_to_json(P))) == P


def test_helpers():
    assert as_mpoly(ZPoly((1, 1))) == MPoly.var(0, 1) + 1
    assert parse_point("7/3") == Fraction(7, 3)
    assert format_number(complex(2, 1e-20)) == "2.0"
    assert format_number(Fraction(-1, 3)) == "-1/3"
