from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dialgebras.monomials import DiMonomial, Node, enumerate_association_types, fill
from dialgebras.poly import (MultiPoly, ParseError, format_identity, format_poly, is_multilinear, parse_identities,
                             parse_poly, parse_tree, poly_degree)

TYPES = enumerate_association_types({"op1": 3, "op2": 3}, 5)
BINARY = enumerate_association_types({"m": 2}, 4)


def monomials(types, n):
    return st.tuples(st.sampled_from(types), st.permutations(list(range(n)))).map(lambda x: fill(x[0], x[1]))


coefficients = st.integers(-5, 5).filter(bool) | st.fractions(max_denominator=4).filter(bool)


@st.composite
def polys(draw, types=TYPES, n=5):
    terms = draw(st.lists(st.tuples(monomials(types, n), coefficients), min_size=1, max_size=6))
    return MultiPoly.of(terms)


@given(polys())
def test_tree_roundtrip(p):
    assert parse_poly(format_poly(p)) == p


@given(polys(BINARY, 4))
def test_product_roundtrip(p):
    assert parse_poly(format_poly(p, "product"), style="product") == p


@given(polys(), polys())
def test_arithmetic(p, q):
    assert (p + q) - q == p
    assert p - p == MultiPoly()
    assert -(p * 2) == p * -2


def test_styles_agree():
    a = parse_poly("{a,{b,c,d}_1,e}_2 - 1/2 {a,b,c}_1", style="bracket")
    b = parse_poly("op2(a,op1(b,c,d),e) - 1/2*op1(a,b,c)")
    c = parse_poly("<a,<b,c,d>_1,e>_2 - 1/2 (a,b,c)_1", style="bracket")
    assert a == b == c
    assert b[parse_tree("op1(a,b,c)")] == Fraction(-1, 2)


def test_product_style():
    p = parse_poly("(ab)c - a(bc)", style="product")
    assert p == MultiPoly({Node("m", (Node("m", (0, 1)), 2)): 1, Node("m", (0, Node("m", (1, 2)))): -1})
    with pytest.raises(ParseError):
        parse_poly("abc", style="product")


def test_di_style():
    p = parse_poly("^abc + cb^a", style="di")
    assert p == MultiPoly({DiMonomial((0, 1, 2), 0): 1, DiMonomial((2, 1, 0), 2): 1})
    with pytest.raises(ParseError):
        parse_poly("abc", style="di")


def test_chains_split_into_differences():
    ids = parse_identities("{a,b,c}_1 = {a,b,c}_2 = {c,b,a}_1", style="bracket")
    assert [format_poly(p) for p in ids] == ["op1(a,b,c) - op2(a,b,c)", "op2(a,b,c) - op1(c,b,a)"]
    with pytest.raises(ParseError):
        parse_poly("{a,b,c} = {c,b,a} = {b,a,c}", style="bracket")


def test_degree_and_multilinearity():
    p = parse_poly("op(a,b,op(c,d,e))")
    assert poly_degree(p) == 5 and is_multilinear(p)
    assert not is_multilinear(parse_poly("op(a,a,b)"))
    with pytest.raises(ValueError):
        poly_degree(parse_poly("op(a,b,c) - op(a,b,op(c,d,e))"))


def test_format_identity():
    p = parse_poly("op2(a,b,c) - op2(c,b,a)")
    assert format_identity(p) == ["+op2(a,b,c)", "-op2(c,b,a)"]


def test_parse_errors():
    for bad in ["op1(a,b", "op1(a,b,c))", "op1(ab,c)", "+", "op1(a,b,c) +"]:
        with pytest.raises(ParseError):
            parse_poly(bad)
