"""The acceptance corpus: worked examples and property suites, each a pass/fail check."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from .checkers import StepMode, can_step, must_succeed, solves_leader_election_bouge, solves_leader_election_indexed
from .concrete import parse
from .congruence import congruent
from .execution import (
    RestoreDefect,
    check_local_confluence,
    enumerate_executions,
    has_symmetric_execution,
    label_occurs,
    subdivide,
    symmetric_execution,
    validate_symmetric_execution,
)
from .generate import random_renaming, random_restriction, random_symmetry, random_term
from .names import Substitution, SymmetryRelation, apply, identity, parse_permutation
from .semantics import LabelKind, Transition, transitions
from .symmetry import build, is_symmetric
from .syntax import all_names, free_names

# the worked examples, in concrete syntax
RACE_NETWORK = "x! . 0 | x?() . out!1 . 0 + y?() . out!2 . 0"
MIXED_BASE = "x!.1!.0 + y?().2!.0"
EXTRUSION_BASE = "new x . a!x . x! . 0"
BOUGE_BASE = "a?().slave!.0 + a!.leader!.0"
SUCCESS_BASE = "a?().0 + a!.check"
STEP_BASE = "a?().0 + a!.0"


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d}. {self.title}: {self.detail} ({self.seconds:.1f}s)"


def twice(base: str) -> str:
    return f"({base}) | ({base})"


def swap(*pairs: str) -> SymmetryRelation:
    return SymmetryRelation(parse_permutation(",".join(pairs)), 2)


# -- individual criteria ------------------------------------------------------


def mixed_counterexample():
    sigma = swap("x>y", "y>x", "1>2", "2>1")
    return build(parse(MIXED_BASE), sigma, ["x", "y"])


def criterion_1() -> tuple[bool, str]:
    net, term = mixed_counterexample()
    execs = enumerate_executions(term, max_depth=32, observables={"1", "2"})
    maximal = sorted(tuple(str(x) for x in e.labels) for e in execs if e.maximal)
    others = [e for e in execs if not e.maximal]
    expected = [("tau", "1!", "1!"), ("tau", "2!", "2!")]
    search = has_symmetric_execution(net, max_rounds=16)
    ok = maximal == expected and not others and search.outcome == "no"
    return ok, f"maximal executions {maximal}, symmetric execution: {search.outcome}"


def criterion_2(count: int = 200, seed: int = 2024, rounds: int = 16) -> tuple[bool, str]:
    rng = random.Random(seed)
    failures = defects = checked = 0
    for _ in range(count):
        base = random_term(rng)
        for degree in (2, 3):
            sigma = random_symmetry(rng, free_names(base), degree)
            net, _ = build(base, sigma, random_restriction(rng, base, sigma))
            checked += 1
            try:
                sx = symmetric_execution(net, max_rounds=rounds)
            except RestoreDefect:
                defects += 1
                continue
            if validate_symmetric_execution(sx) or not (sx.complete or len(sx.rounds) >= rounds):
                failures += 1
    return failures == 0 and defects == 0, f"{checked} networks, {defects} defects, {failures} invalid"


def criterion_3() -> tuple[bool, str]:
    net, _ = build(parse(EXTRUSION_BASE), identity(2))
    sx = symmetric_execution(net)
    first = sx.rounds[0]
    labels = [str(x) for x in first.labels]
    sigma = first.sigma.perm.literal()
    expected = parse_permutation("x>x'1,x'1>x")
    final = parse("x!.0 | x'1!.0")
    ok = (labels == ["a!(x)", "a!(x'1)"] and first.sigma.perm == expected
          and congruent(first.network.term, final) and not validate_symmetric_execution(sx))
    return ok, f"round {labels}, sigma' {{{sigma}}}"


def criterion_4() -> tuple[bool, str]:
    sigma = swap("x>y", "y>x")
    net, term = build(parse(RACE_NETWORK), sigma)
    symmetric = is_symmetric(term, sigma, [])
    elected = solves_leader_election_indexed(term, "out", 2)
    sx = symmetric_execution(net)
    rounds = [[str(x) for x in r.labels] for r in sx.rounds]
    pattern = bool(rounds) and all(x == "tau" for x in rounds[0]) and all(
        lab.subject == "out" and lab.is_output for r in sx.rounds[1:] for lab in r.labels) and len(rounds) > 1
    ok = symmetric and elected.holds and pattern and sx.complete and not validate_symmetric_execution(sx)
    return ok, f"symmetric={symmetric}, indexed election {elected.outcome.value}, rounds {rounds}"


def criterion_5() -> tuple[bool, str]:
    both = solves_leader_election_bouge(parse(twice(BOUGE_BASE), check="clash"), "leader", "slave", 2)
    alone = solves_leader_election_bouge(parse(BOUGE_BASE), "leader", "slave", 1)
    return both.holds and alone.fails, f"P | P {both.outcome.value}, P {alone.outcome.value}"


def criterion_6() -> tuple[bool, str]:
    both = must_succeed(parse(twice(SUCCESS_BASE), check="clash"))
    alone = must_succeed(parse(SUCCESS_BASE))
    return both.holds and alone.fails, f"P | P {both.outcome.value}, P {alone.outcome.value}"


def criterion_7() -> tuple[bool, str]:
    alone = can_step(parse(STEP_BASE), StepMode.TAU)
    both = can_step(parse(twice(STEP_BASE), check="clash"), StepMode.TAU)
    return (not alone) and both, f"P steps: {alone}, P | P steps: {both}"


def criterion_8(count: int = 200, seed: int = 77) -> tuple[bool, str]:
    rng = random.Random(seed)
    checked = bad = 0
    while checked < count:
        p = random_term(rng)
        moves = transitions(p, free_names(p))
        if not any(t.label.is_output for t in moves):
            continue
        if not any(t.label.kind is LabelKind.FREE_INPUT for t in moves):
            continue
        checked += 1
        if not check_local_confluence(p):
            bad += 1
    mixed = check_local_confluence(parse(STEP_BASE), require_separate=False)
    ok = bad == 0 and not mixed.holds
    return ok, f"{checked} terms, {bad} counterexamples; mixed witness {'refuted' if not mixed.holds else 'missed'}"


def criterion_9(count: int = 50, seed: int = 99, rounds: int = 12) -> tuple[bool, str]:
    rng = random.Random(seed)
    failures = done = nonempty = 0
    while done < count:
        base = random_term(rng)
        net, _ = build(base, identity(2))
        sx = symmetric_execution(net, max_rounds=rounds)
        done += 1
        nonempty += bool(sx.rounds)
        try:
            sub = subdivide(sx, 1)
        except RestoreDefect:
            failures += 1
            continue
        occurs = len(sub.rounds) == len(sx.rounds) and all(
            label_occurs(lab, big.labels) for small, big in zip(sub.rounds, sx.rounds) for lab in small.labels)
        if validate_symmetric_execution(sub) or not occurs:
            failures += 1
    return failures == 0, f"{done} executions ({nonempty} non-empty), {failures} replay failures"


def _correspond(t: Transition, u: Transition, s: Substitution) -> bool:
    lab = t.label.renamed(s)
    if (lab.kind, lab.subject) != (u.label.kind, u.label.subject):
        return False
    target = u.target
    if lab.kind is LabelKind.BOUND_OUTPUT:
        if u.label.obj != lab.obj:
            if lab.obj in all_names(target):
                return False
            target = apply(Substitution({u.label.obj: lab.obj}), target)
    elif lab.obj != u.label.obj:
        return False
    return congruent(apply(s, t.target), target)


def transitions_correspond(p, s: Substitution) -> bool:
    """Transitions of ``p`` and of ``s(p)`` match under ``s`` (s injective on fn(p))."""
    q = apply(s, p)
    universe = free_names(p)
    left = transitions(p, universe)
    right = transitions(q, {s(x) for x in universe})
    return all(any(_correspond(t, u, s) for u in right) for t in left) and all(
        any(_correspond(t, u, s) for t in left) for u in right)


def criterion_10(count: int = 500, seed: int = 5) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        p = random_term(rng)
        s = random_renaming(rng, free_names(p))
        if not transitions_correspond(p, s):
            bad += 1
    return bad == 0, f"{count} pairs, {bad} mismatches"


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]]]] = [
    (1, "mixed-choice network breaks symmetry", criterion_1),
    (2, "symmetric executions exist in separate choice", criterion_2),
    (3, "bound-output round with alpha-conversion", criterion_3),
    (4, "two-channel race network and indexed election", criterion_4),
    (5, "leader election with leader/slave announcements", criterion_5),
    (6, "must-succeed on P | P but not on P", criterion_6),
    (7, "P | P can step but P cannot", criterion_7),
    (8, "local confluence without mixed choice", criterion_8),
    (9, "subdivision replays on the component", criterion_9),
    (10, "transitions are equivariant under renaming", criterion_10),
]


def run(number: int) -> CriterionResult:
    for n, title, check in CRITERIA:
        if n == number:
            start = time.perf_counter()
            try:
                passed, detail = check()
            except Exception as err:  # a crash is a failed criterion, reported as such
                passed, detail = False, f"raised {type(err).__name__}: {err}"
            return CriterionResult(n, title, passed, detail, time.perf_counter() - start)
    raise KeyError(number)


def run_all() -> list[CriterionResult]:
    return [run(n) for n, _, _ in CRITERIA]
