from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import elements
from ybco.ring import (
    QQ,
    QQi,
    ZZ,
    NotAUnitError,
    ParseError,
    Ring,
    RingError,
    RingMismatchError,
    cyclic,
    exact_divide,
    from_grades,
    grade,
    invert_unit,
    laurent,
    parse,
    poly,
    render,
    specialize,
    truncated,
)

MIXED = QQ.with_vars(poly("x"), laurent("y"))
FULL = QQi.with_vars(poly("x"), laurent("y"), truncated("h", 2), cyclic("z", 3))


@given(elements(MIXED, low=-2), elements(MIXED, low=-2), elements(MIXED, low=-2))
def test_commutative_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == MIXED.zero()
    assert a * MIXED.one() == a


@given(elements(FULL, low=-2))
def test_render_parse_round_trip(a):
    assert parse(render(a), FULL) == a


@given(elements(MIXED, low=-2), elements(MIXED, low=-2, max_terms=3))
def test_exact_divide_inverts_multiplication(a, b):
    if b.is_zero():
        return
    assert exact_divide(a * b, b) == a


def test_exact_divide_rejects_non_multiple():
    x = MIXED.gen("x")
    with pytest.raises(RingError):
        exact_divide(x, x + 1)


def test_truncation_and_cyclic_reduction():
    h = FULL.gen("h")
    z = FULL.gen("z")
    assert (h ** 3).is_zero()
    assert not (h ** 2).is_zero()
    assert z ** 3 == FULL.one()
    assert z ** -1 == z ** 2


def test_gaussian_unit():
    i = QQi.imag()
    assert i * i == QQi.const(-1)
    with pytest.raises(RingError):
        QQ.imag()


@given(st.integers(-4, 4), small := st.fractions(min_value=-3, max_value=3).filter(lambda q: q != 0))
def test_invert_laurent_monomial(k, c):
    y = MIXED.gen("y", k).scale(c)
    assert y * invert_unit(y) == MIXED.one()


def test_invert_truncated_series():
    h = FULL.gen("h")
    a = FULL.one() + h + FULL.gen("x") * h ** 2
    assert a * invert_unit(a) == FULL.one()
    assert render(invert_unit(FULL.one() + h)) == "1 - h + h^2"


def test_non_units_rejected():
    with pytest.raises(NotAUnitError):
        invert_unit(MIXED.one() + MIXED.gen("x"))
    with pytest.raises(NotAUnitError):
        invert_unit(ZZ.const(2))


def test_mismatched_rings_do_not_mix():
    with pytest.raises(RingMismatchError):
        MIXED.gen("x") + FULL.gen("x")


def test_embed_and_ring_id():
    x = MIXED.gen("x")
    big = MIXED.with_vars(poly("w"))
    assert big.embed(x) == big.gen("x")
    assert Ring.from_id(FULL.ring_id) == FULL
    with pytest.raises(RingError):
        MIXED.embed(FULL.gen("x"))


def test_specialize_and_grades():
    a = parse("3/2*x*y^-2 + i*h - 1 + z^2", FULL)
    s = specialize(a, {"x": 2, "y": 1})
    assert render(s) == "2 + i*h + z^2"
    parts = {k: grade(a, "h", k) for k in range(3)}
    assert from_grades(FULL, "h", parts) == a


def test_parse_errors():
    with pytest.raises(ParseError):
        parse("x +", MIXED)
    with pytest.raises((ParseError, RingError)):
        parse("q", MIXED)


def test_integer_ring_rejects_fractions():
    with pytest.raises(RingError):
        ZZ.const(Fraction(1, 2))
