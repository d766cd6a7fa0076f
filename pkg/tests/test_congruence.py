import random

import pytest
from hypothesis import given

from conftest import seeds, terms
from pisym.concrete import parse
from pisym.congruence import (
    canonical,
    collect_garbage,
    congruent,
    congruent_upto_garbage,
    has_top_level_success,
    top_level,
)
from pisym.names import FreshSupply, Substitution, apply, rename_binder
from pisym.semantics import NetState, decompose
from pisym.syntax import bound_names


@pytest.mark.parametrize("left,right", [
    ("a!.0 | b!.0", "b!.0 | a!.0"),
    ("(a!.0 | b!.0) | c!.0", "a!.0 | (b!.0 | c!.0)"),
    ("new x.a!x.0", "new y.a!y.0"),
    ("new x.new y.x!y.0", "new y.new x.x!y.0"),
    ("new x.(a!.0 | x!.0)", "a!.0 | new x.x!.0"),
    ("(new x.x!a.0) | a?(z).0", "new x.(x!a.0 | a?(z).0)"),
    ("a?(z).z!.0", "a?(w).w!.0"),
])
def test_congruent_pairs(left, right):
    assert congruent(parse(left), parse(right))


@pytest.mark.parametrize("left,right", [
    ("a!.0", "b!.0"),
    ("a!b.0", "a!c.0"),
    ("a!.0 | a!.0", "a!.0"),
    ("a!.0 | 0", "a!.0"),  # no unit law for parallel
    ("new x.0", "0"),  # no garbage law
    ("a!.0 + b!.0", "b!.0 + a!.0"),  # choice is not commutative
    ("!a!.0", "!a!.0 | a!.0"),  # no unfolding
])
def test_distinct_pairs(left, right):
    assert not congruent(parse(left, check="clash"), parse(right, check="clash"))


def test_canonical_is_idempotent_on_example():
    p = parse("new x.(a!x.0 | new y.(y!x.0 | b?(z).z!.0))")
    c = canonical(p)
    assert canonical(c.term) == c


def test_top_level_and_success():
    p = parse("a!.0 | new x.(check | x!.0)")
    assert len(top_level(p)) == 3
    assert has_top_level_success(p)
    assert not has_top_level_success(parse("a!.check"))
    assert not has_top_level_success(parse("!check"))


def test_collect_garbage():
    assert collect_garbage(parse("new x.new y.a!y.0")) == parse("new y.a!y.0")
    assert congruent_upto_garbage(parse("new x.a!.0"), parse("a!.0"))


@given(terms())
def test_canonical_idempotent(p):
    c = canonical(p)
    assert canonical(c.term) == c


@given(terms(), seeds)
def test_congruence_ignores_component_order(p, seed):
    state = decompose(p)
    comps = list(state.comps)
    random.Random(seed).shuffle(comps)
    assert congruent(p, NetState(state.restriction, tuple(comps)).term)


@given(terms())
def test_congruence_ignores_binder_names(p):
    supply = FreshSupply(bound_names(p) | {"a", "b", "c", "d"})
    q = p
    for z in sorted(bound_names(p)):
        q = rename_binder(q, z, supply.fresh("u"))
    assert congruent(p, q)


@given(terms())
def test_congruent_is_reflexive_under_identity(p):
    assert congruent(p, apply(Substitution({}), p))
