import random

import pytest
from hypothesis import given, strategies as st

from conftest import seeds, terms
from pisym.concrete import parse, pretty
from pisym.congruence import congruent
from pisym.generate import random_renaming, random_symmetry
from pisym.names import (
    ID,
    FreshSupply,
    Substitution,
    SymmetryRelation,
    apply,
    extend_symmetry,
    fresh_name,
    identity,
    parse_permutation,
    power,
    rename_binder,
    validate_symmetry,
)
from pisym.syntax import free_names, well_formed


def test_substitution_is_identity_outside_support():
    s = Substitution({"a": "b"})
    assert s("a") == "b" and s("c") == "c"
    assert s.support == {"a"}


def test_identity_entries_are_dropped():
    assert Substitution({"a": "a"}) == ID
    assert not ID


def test_parse_permutation():
    s = parse_permutation("x>y,y>x,1>2,2>1")
    assert s("x") == "y" and s("2") == "1"
    assert parse_permutation("") == ID


@pytest.mark.parametrize("text", ["x>y", "x>y,x>z,y>x", "x>", "xy"])
def test_parse_permutation_rejects(text):
    with pytest.raises(ValueError):
        parse_permutation(text)


def test_literal_round_trip():
    s = parse_permutation("a>b,b>c,c>a")
    assert parse_permutation(s.literal()) == s


def test_compose_and_inverse():
    s = parse_permutation("a>b,b>c,c>a")
    assert s.compose(s.inverse()) == ID
    assert s.compose(s)("a") == "c"


def test_power_of_a_three_cycle():
    sigma = SymmetryRelation(parse_permutation("a>b,b>c,c>a"), 3)
    assert power(sigma, 0) == ID
    assert power(sigma, 1)("a") == "b"
    assert power(sigma, 2)("a") == "c"
    assert power(sigma, 3) == ID
    assert power(sigma, 4) == power(sigma, 1)


def test_symmetry_relation_checks_degree():
    with pytest.raises(ValueError):
        SymmetryRelation(parse_permutation("a>b,b>c,c>a"), 2)
    # the degree need not be minimal
    SymmetryRelation(parse_permutation("a>b,b>a"), 4)


def test_validate_symmetry_reasons():
    swap = parse_permutation("a>b,b>a")
    assert validate_symmetry(swap, 2)
    assert validate_symmetry(swap, 3).reason == "wrong-degree"
    assert validate_symmetry(swap, 2, forbidden={"b"}).reason == "touches-forbidden-name"
    assert validate_symmetry(Substitution({"a": "c", "b": "c"}), 2).reason == "not-bijective"


def test_extend_symmetry():
    sigma = SymmetryRelation(parse_permutation("a>b,b>a"), 2)
    grown = extend_symmetry(sigma, ["x", "x'1"])
    assert grown("x") == "x'1" and grown("a") == "b"
    assert grown.extends(sigma)
    with pytest.raises(ValueError):
        extend_symmetry(sigma, ["a", "c"])
    with pytest.raises(ValueError):
        extend_symmetry(identity(2), ["p", "q", "r"])


def test_fresh_names_follow_the_prime_scheme():
    assert fresh_name("x", {"x"}) == "x'1"
    assert fresh_name("x'1", {"x", "x'1"}) == "x'2"
    supply = FreshSupply({"v"})
    assert [supply.fresh(), supply.fresh()] == ["v'1", "v'2"]


def test_apply_avoids_capture():
    p = parse("new x.a!x.0")
    q = apply(Substitution({"a": "x"}), p)
    assert pretty(q) == "new x'1.x!x'1.0"


def test_apply_leaves_bound_occurrences():
    p = parse("a?(z).z!a.0")
    assert pretty(apply(Substitution({"a": "b", "z": "c"}), p)) == "b?(z).z!b.0"


def test_rename_binder():
    p = parse("new x.(a!x.0 | x?(y).y!.0)")
    q = rename_binder(p, "x", "u")
    assert pretty(q) == "new u.a!u.0 | u?(y).y!.0"
    assert parse(pretty(q)) == q
    assert congruent(p, q)
    with pytest.raises(ValueError):
        rename_binder(p, "x", "a")


@given(terms(), seeds)
def test_apply_renames_free_names(p, seed):
    s = random_renaming(random.Random(seed), free_names(p))
    q = apply(s, p)
    assert free_names(q) == {s(x) for x in free_names(p)}
    assert congruent(apply(s.inverse(), q), p)


@given(terms(), st.sampled_from([2, 3, 4]), seeds)
def test_random_symmetries_are_valid(p, degree, seed):
    sigma = random_symmetry(random.Random(seed), free_names(p), degree)
    assert validate_symmetry(sigma.perm, degree)
    assert power(sigma, degree) == ID


@given(terms())
def test_generated_terms_are_well_formed(p):
    assert well_formed(p)
