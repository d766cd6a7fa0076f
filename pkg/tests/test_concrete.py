import pytest
from hypothesis import given

from conftest import terms
from pisym.concrete import ParseError, parse, pretty
from pisym.syntax import NIL, SUCCESS, In, Out, Par, Rep, Res, Sum, Tau, UNIT


def test_race_network_base():
    p = parse("x! . 0 | x?() . out!1 . 0 + y?() . out!2 . 0")
    assert isinstance(p, Par) and len(p.components) == 2
    left, right = p.components
    assert left == Sum(((Out("x", UNIT), NIL),))
    assert [pre for pre, _ in right.branches] == [In("x", UNIT), In("y", UNIT)]


def test_restriction_extends_right():
    p = parse("new x . a!x . x! . 0")
    assert isinstance(p, Res) and p.binder == "x"
    assert parse("new x . a!x.0 | b!.0") == Res("x", parse("a!x.0 | b!.0"))


def test_sugar_and_keywords():
    assert parse("a!") == parse("a!.0")
    assert parse("a?()") == parse("a?().0")
    assert parse("tau . check") == Sum(((Tau(), SUCCESS),))
    assert isinstance(parse("!a!.0"), Rep)


def test_prefix_binds_tighter_than_choice_and_par():
    p = parse("a!.0 + b!.0 | c!.0")
    assert isinstance(p, Par)
    assert len(p.components[0].branches) == 2


@pytest.mark.parametrize("src", ["0 + 0", "a!.0 + (b!.0 | c!.0)", "check + a!.0"])
def test_unguarded_choice_is_rejected(src):
    with pytest.raises(ParseError, match="unguarded"):
        parse(src)


def test_errors_carry_positions():
    with pytest.raises(ParseError) as info:
        parse("a!.0 |\n  ?")
    assert (info.value.line, info.value.column) == (2, 3)


def test_name_discipline():
    twice = "(new x.a!x.0) | (new x.a!x.0)"
    with pytest.raises(ParseError):
        parse(twice)
    assert parse(twice, check="clash")
    with pytest.raises(ParseError):
        parse("x!.0 | new x.x!.0", check="clash")


def test_pretty_prints_bound_and_free_forms():
    assert pretty(parse("new x.a!x.x!.0")) == "new x.a!x.x!.0"
    assert pretty(parse("a?(z).z!.0 + tau.check")) == "a?(z).z!.0 + tau.check"


@given(terms(allow_mixed=True))
def test_round_trip(p):
    assert parse(pretty(p)) == p
