from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from pfq.arith import GF, QQ
from pfq.errors import ContextMismatch, ParseError
from pfq.pfaffian import load_f0
from pfq.poly import Polynomial, VarContext, degrevlex_key, monomials_of_degree, parse_poly

CTX3 = VarContext.numbered(3)
CTX5 = VarContext.numbered(5)


def _poly(field):
    coeff = (st.builds(Fraction, st.integers(-50, 50), st.integers(1, 5))
             if field == QQ else st.integers(0, field.p - 1))
    mono = st.tuples(*[st.integers(0, 3)] * 3)
    return st.dictionaries(mono, coeff, max_size=6).map(lambda d: Polynomial(CTX3, d, field))


qq_poly = _poly(QQ)
gf_poly = _poly(GF(101))


def test_context_validation():
    with pytest.raises(ValueError):
        VarContext(["x", "x"])
    with pytest.raises(ValueError):
        VarContext(["1x"])
    assert VarContext.numbered(3).names == ("x1", "x2", "x3")


def test_parse_examples():
    x1 = parse_poly("x1", CTX5)
    assert len(x1) == 1 and x1.degree() == 1
    assert parse_poly("x1 - x1", CTX5).is_zero()
    assert len(parse_poly("x1 - x1", CTX5)) == 0
    f0 = load_f0()
    assert len(f0) == 20 and f0.degree() == 4 and f0.is_homogeneous()


def test_parse_grammar_variants():
    f = parse_poly(" 3/2 * x1^2*x2 -x3 - 2*x2 ", CTX3)
    assert f.coefficient((2, 1, 0)) == Fraction(3, 2)
    assert f.coefficient((0, 0, 1)) == -1
    assert f.coefficient((0, 1, 0)) == -2
    assert parse_poly("7", CTX3) == Polynomial.constant(CTX3, 7)
    for bad in ("2 x1", "x1 + -x2"):
        with pytest.raises(ParseError):
            parse_poly(bad, CTX3)


@pytest.mark.parametrize("text, fragment", [
    ("", "empty"),
    ("x9", "unknown variable"),
    ("x1^", "exponent"),
    ("x1^-2", "exponent"),
    ("x1 + * x2", "variable"),
])
def test_parse_errors_carry_position(text, fragment):
    with pytest.raises(ParseError) as exc:
        parse_poly(text, CTX3)
    assert fragment in str(exc.value).lower()
    assert "position" in str(exc.value)


@given(qq_poly)
def test_serialization_round_trip_qq(f):
    assert parse_poly(str(f), CTX3) == f


@given(gf_poly)
def test_serialization_round_trip_gf(f):
    assert parse_poly(str(f), CTX3, GF(101)) == f


def test_canonical_order_is_descending_degrevlex():
    f = parse_poly("x3^2 + x1*x3 + x2^2 + x1^2 + x1*x2 + x2*x3", CTX3)
    assert str(f) == "x1^2 + x1*x2 + x2^2 + x1*x3 + x2*x3 + x3^2"
    keys = [degrevlex_key(e) for e, _ in f.sorted_terms()]
    assert keys == sorted(keys, reverse=True)
    mons = monomials_of_degree(3, 2)
    assert len(mons) == 6 and mons[0] == (2, 0, 0) and mons[-1] == (0, 0, 2)


def test_differentiate_examples():
    x1 = Polynomial.var(CTX5, "x1")
    assert (x1 ** 2).differentiate("x1") == 2 * x1
    assert parse_poly("x1^3*x2", CTX5).differentiate("x2") == x1 ** 3
    d5 = load_f0().differentiate("x5")
    assert d5.is_homogeneous() and d5.degree() == 3 and len(d5) == 10


def test_f0_has_ten_x5_terms():
    f0 = load_f0()
    assert sum(1 for e in f0.terms if e[4]) == 10


def test_evaluate_examples():
    f0 = load_f0()
    assert f0.evaluate((1, 0, 0, 0, 0), 31991) == 0
    assert all(any(e[1:]) for e in f0.terms)
    x1 = Polynomial.var(CTX5, "x1")
    assert x1.evaluate((17, 2, 3, 4, 5), 31991) == 17
    fermat = parse_poly("x1^4 + x2^4 + x3^4 + x4^4 + x5^4", CTX5)
    assert fermat.evaluate((1, 1, 1, 1, 1), 5) == 0
    assert fermat.evaluate((1, 1, 1, 1, 1)) == 5
    with pytest.raises(ContextMismatch):
        x1.evaluate((1, 2), 7)


def test_mul_examples():
    x1, x2 = Polynomial.var(CTX3, "x1"), Polynomial.var(CTX3, "x2")
    f = parse_poly("3*x1*x2 - x3^2", CTX3)
    assert f * Polynomial.constant(CTX3, 1) == f
    assert x1 * x2 == parse_poly("x1*x2", CTX3)
    assert (x1 + x2) ** 2 == parse_poly("x1^2 + 2*x1*x2 + x2^2", CTX3)
    with pytest.raises(ContextMismatch):
        x1 * Polynomial.var(CTX5, "x1")
    with pytest.raises(ContextMismatch):
        x1 * Polynomial.var(CTX3, "x1", GF(7))


def _schoolbook(f, g):
    out = {}
    for (a, c), (b, d) in product(f.terms.items(), g.terms.items()):
        e = tuple(i + j for i, j in zip(a, b))
        out[e] = out.get(e, 0) + c * d
    return Polynomial(f.ctx, out, f.field)


@given(qq_poly, qq_poly, qq_poly)
def test_ring_axioms_qq(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f and f + g == g + f
    assert f - f == Polynomial.zero(CTX3)
    assert f * g == _schoolbook(f, g)


@given(gf_poly, gf_poly, gf_poly)
def test_ring_axioms_gf(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert (f + g) * h == f * h + g * h
    assert f * g == _schoolbook(f, g)


@given(gf_poly, gf_poly, st.tuples(*[st.integers(0, 100)] * 3))
def test_evaluate_is_ring_morphism(f, g, pt):
    p = 101
    assert (f * g).evaluate(pt, p) == f.evaluate(pt, p) * g.evaluate(pt, p) % p
    assert (f + g).evaluate(pt, p) == (f.evaluate(pt, p) + g.evaluate(pt, p)) % p


@given(qq_poly.filter(lambda f: not f.is_zero()))
@settings(max_examples=50)
def test_homogeneous_degree_of_product(f):
    hom = Polynomial(CTX3, {e: c for e, c in f.terms.items() if sum(e) == f.degree()})
    g = parse_poly("x1 + 2*x3", CTX3)
    assert (hom * g).degree() == hom.degree() + 1 and (hom * g).is_homogeneous()


def test_euler_relation_on_f0():
    f0 = load_f0()
    xs = Polynomial.gens(f0.ctx)
    total = sum((x * f0.differentiate(i) for i, x in enumerate(xs)), Polynomial.zero(f0.ctx))
    assert total == 4 * f0


def test_substitute_and_field_change():
    f = parse_poly("x1^2 - x2*x3", CTX3)
    g = f.substitute({"x1": parse_poly("x2 + x3", CTX3)})
    assert g == parse_poly("x2^2 + x2*x3 + x3^2", CTX3)
    fp = f.to_field(GF(7))
    assert fp.coefficient((0, 1, 1)) == 6
    assert fp.to_field(QQ) == f
    assert str(fp) == "x1^2 - x2*x3"
