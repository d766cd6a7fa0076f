import pytest
from hypothesis import given

from conftest import terms
from pisym.checkers import (
    ChannelError,
    Outcome,
    StepMode,
    can_step,
    component_output_counts,
    must_succeed,
    solves_leader_election_bouge,
    solves_leader_election_indexed,
)
from pisym.concrete import parse, pretty
from pisym.congruence import congruent
from pisym.execution import enumerate_executions
from pisym.generate import POOL
from pisym.names import identity
from pisym.semantics import transitions
from pisym.symmetry import build
from pisym.syntax import SUCCESS, Par, Rep, Res, Success, Sum, free_names

def has_success(p):
    match p:
        case Success():
            return True
        case Sum(branches):
            return any(has_success(c) for _, c in branches)
        case Par(components):
            return any(has_success(c) for c in components)
        case Res(_, body) | Rep(body):
            return has_success(body)
    return False


BOUGE = "a?().slave!.0 + a!.leader!.0"
RACE_NETWORK = "(x! . 0 | x?() . out!1 . 0 + y?() . out!2 . 0) | (y! . 0 | y?() . out!1 . 0 + x?() . out!2 . 0)"


def twice(src):
    return parse(f"({src}) | ({src})", check="clash")


def test_bouge_election_on_pair():
    assert solves_leader_election_bouge(twice(BOUGE), "leader", "slave", 2).holds


def test_bouge_election_on_single_process_fails():
    verdict = solves_leader_election_bouge(parse(BOUGE), "leader", "slave", 1)
    assert verdict.fails and verdict.witness is not None


def test_two_leaders_fail():
    p = parse("leader!.0 | leader!.0")
    verdict = solves_leader_election_bouge(p, "leader", "slave", 2)
    assert verdict.fails and "2 leaders" in verdict.reason


def test_silent_component_fails():
    verdict = solves_leader_election_bouge(parse("leader!.0 | 0"), "leader", "slave", 2)
    assert verdict.fails


def test_announcing_forever_is_unknown_within_bounds():
    # every path keeps announcing, so each one hits the depth bound
    verdict = solves_leader_election_bouge(parse("!leader!.0 | slave!.0"), "leader", "slave", 2, max_depth=6)
    assert verdict.outcome is Outcome.UNKNOWN
    assert verdict.witness.truncated


def test_bound_channel_is_rejected():
    with pytest.raises(ChannelError):
        solves_leader_election_bouge(parse("new leader.leader!.0 | slave!.0"), "leader", "slave", 2)


def test_component_count_must_match():
    with pytest.raises(ValueError):
        solves_leader_election_bouge(twice(BOUGE), "leader", "slave", 3)


def test_indexed_election_on_race_network():
    assert solves_leader_election_indexed(parse(RACE_NETWORK), "out", 2).holds


def test_indexed_election_on_mixed_network():
    p = parse("new x.new y.((x!.out!1.0 + y?().out!2.0) | (y!.out!2.0 + x?().out!1.0))")
    assert solves_leader_election_indexed(p, "out", 2).holds


def test_indexed_election_disagreeing_indices():
    verdict = solves_leader_election_indexed(parse("out!1.0 | out!2.0"), "out", 2)
    assert verdict.fails and "different indices" in verdict.reason


def test_must_succeed_examples():
    assert must_succeed(twice("a?().0 + a!.check")).holds
    verdict = must_succeed(parse("a?().0 + a!.check"))
    assert verdict.fails and verdict.reason == "stops without success"
    assert must_succeed(parse("check")).holds
    assert must_succeed(parse("tau.check + tau.0")).fails


def test_must_succeed_on_unbounded_growth_is_unknown():
    verdict = must_succeed(parse("!tau.0"), max_depth=10)
    assert verdict.outcome is Outcome.UNKNOWN
    assert verdict.witness.truncated


def test_can_step_modes():
    p = parse("a?().0 + a!.0")
    assert not can_step(p, StepMode.TAU)
    assert can_step(p, StepMode.ANY)
    assert can_step(twice("a?().0 + a!.0"), StepMode.TAU)
    assert not can_step(parse("0"), StepMode.ANY)


def test_output_counts():
    (ex,) = [e for e in enumerate_executions(parse("a!.b!.0 | c!.0"), observables={"a", "b", "c"})
             if [str(x) for x in e.labels] == ["a!", "b!", "c!"]]
    assert component_output_counts(ex, 2) == {0: 2, 1: 1}


@given(terms())
def test_tau_steps_imply_any_steps(p):
    if can_step(p, StepMode.TAU):
        assert can_step(p, StepMode.ANY)


@given(terms(max_size=8))
def test_must_succeed_holds_only_with_reachable_success(p):
    verdict = must_succeed(p)
    if verdict.holds:
        assert has_success(p)


def replays(ex):
    state = ex.initial
    for t in ex.steps:
        if not congruent(t.source, state):
            return False
        if not any(u.label == t.label and congruent(u.target, t.target)
                   for u in transitions(t.source, free_names(t.source) | t.label.names, check=False)):
            return False
        state = t.target
    return True


@given(terms(max_size=8, allow_rep=False))
def test_output_attribution_is_sound(p):
    net = parse(f"({pretty(p)}) | ({pretty(p)})", check="clash")
    for ex in enumerate_executions(net, max_depth=6, observables=POOL):
        outputs = sum(1 for x in ex.labels if x.is_output)
        assert sum(component_output_counts(ex, 2).values()) == outputs


@given(terms(max_size=8))
def test_top_level_success_must_succeed(q):
    assert must_succeed(Par((SUCCESS, q))).holds


@given(terms(max_size=10))
def test_fails_witnesses_replay(p):
    verdict = must_succeed(p, max_depth=12)
    if verdict.fails:
        assert replays(verdict.witness)


@given(terms(max_size=10))
def test_must_success_of_a_pair_transfers_to_the_base(p):
    _, net = build(p, identity(2))
    if must_succeed(net, max_depth=24).holds:
        assert not must_succeed(p, max_depth=24).fails
