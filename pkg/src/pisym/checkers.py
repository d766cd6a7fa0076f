"""Bounded decision procedures for leader election, must-success and stepping."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass

from .congruence import canonical, has_top_level_success
from .execution import Execution, enumerate_executions
from .semantics import LabelKind, Transition, decompose, tau_transitions, transitions
from .syntax import Process, bound_names, free_names


class Outcome(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    witness: Execution | None = None
    reason: str = ""

    @property
    def holds(self) -> bool:
        return self.outcome is Outcome.HOLDS

    @property
    def fails(self) -> bool:
        return self.outcome is Outcome.FAILS

    @property
    def unknown(self) -> bool:
        return self.outcome is Outcome.UNKNOWN


def Holds(reason: str = "") -> Verdict:
    return Verdict(Outcome.HOLDS, None, reason)


def Fails(witness: Execution, reason: str = "") -> Verdict:
    return Verdict(Outcome.FAILS, witness, reason)


def Unknown(reason: str = "bound-exceeded", witness: Execution | None = None) -> Verdict:
    return Verdict(Outcome.UNKNOWN, witness, reason)


class ChannelError(ValueError):
    pass


def _check_channels(term: Process, channels) -> None:
    for c in channels:
        if c in bound_names(term):
            raise ChannelError(f"channel {c} is bound in the term")


def _outputs(ex: Execution, channels, component_count: int):
    """Per-component outputs on the given channels; lasso loops count as unbounded."""
    per: dict[int, list] = {k: [] for k in range(component_count)}
    for t in ex.steps:
        if t.label.is_output and t.label.subject in channels:
            (actor,) = t.actors if component_count > 1 else (0,)
            per[actor].append(t.label)
    if ex.looping and ex.loop_start is not None:
        loop = ex.steps[ex.loop_start:]
        if any(t.label.is_output and t.label.subject in channels for t in loop):
            return None
    return per


def _explore(term: Process, channels, component_count: int, max_depth: int):
    _check_channels(term, channels)
    state = decompose(term)
    if len(state.comps) != component_count and component_count != 1:
        raise ValueError(f"term has {len(state.comps)} top-level components, not {component_count}")
    return enumerate_executions(state, max_depth=max_depth, observables=set(channels))


def solves_leader_election_bouge(term: Process, leader: str, slave: str, component_count: int, max_depth: int = 32) -> Verdict:
    """Every execution: each component announces exactly once, exactly one as leader."""
    truncated = None
    for ex in _explore(term, (leader, slave), component_count, max_depth):
        if ex.truncated:
            truncated = truncated or ex
            continue
        per = _outputs(ex, {leader, slave}, component_count)
        if per is None:
            return Fails(ex, "a component announces infinitely often")
        if any(len(outs) != 1 for outs in per.values()):
            return Fails(ex, "some component does not announce exactly once")
        leaders = sum(1 for outs in per.values() if outs[0].subject == leader)
        if leaders != 1:
            return Fails(ex, f"{leaders} leaders elected")
    return Unknown(witness=truncated) if truncated else Holds()


def solves_leader_election_indexed(term: Process, out: str, component_count: int, max_depth: int = 32) -> Verdict:
    """Every maximal execution: each component outputs once on ``out``, all the same index."""
    truncated = None
    for ex in _explore(term, (out,), component_count, max_depth):
        if ex.truncated:
            truncated = truncated or ex
            continue
        per = _outputs(ex, {out}, component_count)
        if per is None:
            return Fails(ex, "a component outputs infinitely often")
        if any(len(outs) != 1 for outs in per.values()):
            return Fails(ex, "some component does not output exactly once")
        indices = {outs[0].obj for outs in per.values()}
        if len(indices) != 1:
            return Fails(ex, f"different indices {sorted(indices)}")
    return Unknown(witness=truncated) if truncated else Holds()


def must_succeed(term: Process, max_depth: int = 64) -> Verdict:
    """Every maximal tau-execution reaches a top-level success.

    A tau-cycle that never passes a success counts as failure.
    """
    memo: dict = {}
    # depth at which a state was found unknown; deeper visits have less budget
    unknown_at: dict = {}

    def visit(p: Process, depth: int, path: set) -> tuple[Outcome, list[Transition], bool]:
        """Outcome, counterexample steps, and whether the witness is a lasso."""
        key = canonical(p)
        if has_top_level_success(key.term):
            return Outcome.HOLDS, [], False
        if key in memo:
            return memo[key]
        if unknown_at.get(key, max_depth + 1) <= depth:
            return Outcome.UNKNOWN, [], False
        if key in path:
            return Outcome.FAILS, [], True
        steps = tau_transitions(p, check=False)
        if not steps:
            return Outcome.FAILS, [], False
        if depth >= max_depth:
            return Outcome.UNKNOWN, [], False
        result: tuple = (Outcome.HOLDS, [], False)
        path.add(key)
        for t in steps:
            outcome, witness, loop = visit(t.target, depth + 1, path)
            if outcome is Outcome.FAILS:
                result = (Outcome.FAILS, [t] + witness, loop)
                break
            if outcome is Outcome.UNKNOWN:
                result = (Outcome.UNKNOWN, [t] + witness, False)
        path.discard(key)
        if result[0] is Outcome.UNKNOWN:
            unknown_at[key] = min(depth, unknown_at.get(key, depth))
        elif not result[2]:
            memo[key] = result
        return result

    outcome, witness, loop = visit(term, 0, set())
    ex = Execution(term, tuple(witness), maximal=outcome is Outcome.FAILS and not loop,
                   truncated=outcome is Outcome.UNKNOWN, looping=loop)
    match outcome:
        case Outcome.HOLDS:
            return Holds()
        case Outcome.FAILS:
            return Fails(ex, "diverges without success" if loop else "stops without success")
    return Unknown(witness=ex)


class StepMode(enum.Enum):
    ANY = "any"
    TAU = "tau"


def can_step(term: Process, mode: StepMode = StepMode.ANY) -> bool:
    match mode:
        case StepMode.TAU:
            return bool(tau_transitions(term))
        case StepMode.ANY:
            return bool(transitions(term, free_names(term)))
    raise ValueError(mode)


def component_output_counts(ex: Execution, component_count: int) -> Counter:
    """Outputs per component, attributed through the step actors."""
    counts: Counter = Counter()
    for t in ex.steps:
        if t.label.kind in (LabelKind.FREE_OUTPUT, LabelKind.BOUND_OUTPUT):
            (actor,) = t.actors if component_count > 1 else (0,)
            counts[actor] += 1
    return counts
