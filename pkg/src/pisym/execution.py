"""Executions, symmetric executions, subdivision and local confluence.

A symmetric execution is organised in rounds of ``n`` steps.  Each round
starts and ends in a literally symmetric network; the symmetry relation may
grow along the way to record alpha-conversions of extruded names.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .congruence import canonical, congruent, congruent_upto_garbage
from .names import Substitution, SymmetryRelation, apply, extend_symmetry, power
from .semantics import (
    TAU,
    Label,
    LabelKind,
    NetState,
    NetTransition,
    Transition,
    decompose,
    network_transitions,
    policy_key,
    sort_transitions,
    witness,
)
from .symmetry import (
    NetworkError,
    SymmetricNetwork,
    align,
    close_permutation,
    is_symmetric,
    symmetric_action_sequence,
)
from .syntax import UNIT, Fragment, Process, all_names, bound_names, classify, free_names, no_clash

SEARCH_LIMIT = 20_000


class RestoreDefect(RuntimeError):
    """A round that the construction guarantees could not be closed."""


class FragmentError(ValueError):
    """The base process uses mixed choice."""


# -- plain executions --------------------------------------------------------


@dataclass(frozen=True)
class Execution:
    initial: Process
    steps: tuple[Transition, ...] = ()
    maximal: bool = False
    truncated: bool = False
    looping: bool = False
    loop_start: int | None = None  # index of the step where the cycle re-enters

    @property
    def final(self) -> Process:
        return self.steps[-1].target if self.steps else self.initial

    @property
    def labels(self) -> tuple[Label, ...]:
        return tuple(t.label for t in self.steps)

    def __len__(self) -> int:
        return len(self.steps)


def normalize_labels(labels: Iterable[Label]) -> tuple[str, ...]:
    """Label strings with bound-output objects replaced positionally."""
    mapping: dict[str, str] = {}
    out = []
    for label in labels:
        if label.kind is LabelKind.BOUND_OUTPUT:
            mapping[label.obj] = f"${len(mapping)}"
        out.append(str(label.renamed(Substitution(mapping)) if mapping else label))
    return tuple(out)


def closed_world(observables: Iterable[str]):
    obs = set(observables)

    def allowed(t: NetTransition) -> bool:
        match t.label.kind:
            case LabelKind.TAU:
                return True
            case LabelKind.FREE_OUTPUT | LabelKind.BOUND_OUTPUT:
                return t.label.subject in obs
        return False

    return allowed


def enumerate_executions(
    term: Process | NetState,
    max_depth: int = 32,
    observables: Iterable[str] | None = None,
    universe: Iterable[str] | None = None,
) -> list[Execution]:
    """All executions up to congruence, by depth-first search.

    With ``observables`` the system is closed: only tau-steps and outputs on
    the observable channels are explored.  A state repeating on the current
    path ends the branch as a lasso (``looping``).
    """
    state = term if isinstance(term, NetState) else decompose(term)
    verdict = no_clash(state.term)
    if not verdict:
        raise ValueError(f"ill-formed term: {verdict}")
    allowed = closed_world(observables) if observables is not None else (lambda t: True)
    universe = set(free_names(state.term) if universe is None else universe)
    inputs = observables is None
    results: dict[tuple, Execution] = {}
    initial = state.term

    def record(steps: list[NetTransition], final: NetState, **flags) -> None:
        key = (normalize_labels(t.label for t in steps), canonical(final.term),
               flags.get("maximal", False), flags.get("truncated", False), flags.get("looping", False))
        if key not in results:
            results[key] = Execution(initial, tuple(t.as_transition() for t in steps), **flags)

    def walk(s: NetState, steps: list[NetTransition], seen: dict) -> None:
        moves = [t for t in network_transitions(s, universe | free_names(s.term), inputs=inputs) if allowed(t)]
        if not moves:
            record(steps, s, maximal=True)
            return
        if len(steps) >= max_depth:
            record(steps, s, truncated=True)
            return
        done = set()
        for t in sorted(moves, key=policy_key):
            key = canonical(t.target.term)
            sig = (normalize_labels([t.label]), key)
            if sig in done:
                continue
            done.add(sig)
            steps.append(t)
            if key in seen:
                record(steps, t.target, looping=True, loop_start=seen[key])
            else:
                seen[key] = len(steps)
                walk(t.target, steps, seen)
                del seen[key]
            steps.pop()

    walk(state, [], {canonical(state.term): 0})
    return list(results.values())


# -- symmetric executions -----------------------------------------------------


@dataclass(frozen=True)
class Round:
    """One round: the labels, the network reached and the steps taken."""

    labels: tuple[Label, ...]
    sigma: SymmetryRelation
    restriction: tuple[str, ...]
    base: Process
    steps: tuple[NetTransition, ...]
    case: str  # "C1" (one component acts) or "C2" (communication)
    cycle: tuple[str, ...] = ()

    @property
    def network(self) -> SymmetricNetwork:
        return SymmetricNetwork(self.restriction, self.base, self.sigma)


@dataclass(frozen=True)
class SymmetricExecution:
    network: SymmetricNetwork
    rounds: tuple[Round, ...] = ()
    complete: bool = False
    looping: bool = False

    @property
    def degree(self) -> int:
        return self.network.degree

    def networks(self) -> list[SymmetricNetwork]:
        return [self.network] + [r.network for r in self.rounds]

    @property
    def final(self) -> SymmetricNetwork:
        return self.rounds[-1].network if self.rounds else self.network

    def steps(self) -> list[NetTransition]:
        return [t for r in self.rounds for t in r.steps]


def _avoid(net: SymmetricNetwork) -> set[str]:
    return set(net.relation.support) | set(net.restriction)


def check_round_network(net: SymmetricNetwork) -> str | None:
    """Invariants a network reached by a round must satisfy (None if fine).

    Unlike construction, restricted names may have become unused.
    """
    x = list(net.restriction)
    if len(set(x)) != len(x):
        return "duplicate-restriction"
    if net.relation.support & bound_names(net.base):
        return "touches-forbidden-name"
    if any(net.relation(n) not in x for n in x):
        return "restriction-not-closed"
    if not no_clash(net.term):
        return "ill-formed"
    if not is_symmetric(net.state, net.relation, net.restriction):
        return "not-symmetric"
    return None


def _close_round(
    net: SymmetricNetwork,
    state: NetState,
    cycle: list[str],
    steps: list[NetTransition],
    case: str,
) -> Round | None:
    sigma = net.relation
    if cycle:
        try:
            sigma = extend_symmetry(sigma, cycle)
        except ValueError:
            return None
    comps = state.comps
    n = net.degree
    images = [apply(power(sigma, k), comps[0]) for k in range(n)]
    for k in range(n):
        if comps[k] != images[k] and not congruent(comps[k], images[k]):
            return None
    nxt = SymmetricNetwork(tuple(state.restriction), comps[0], sigma)
    if check_round_network(nxt) is not None:
        return None
    labels = tuple(t.label for t in steps)
    return Round(labels, sigma, nxt.restriction, nxt.base, tuple(steps), case, tuple(cycle))


def _as_net_transition(net: SymmetricNetwork, first) -> NetTransition:
    if isinstance(first, NetTransition):
        return first
    for t in network_transitions(net.state, free_names(net.term) | first.label.names, avoid=_avoid(net)):
        if t.label == first.label and t.actors == first.actors and congruent(t.target.term, first.target):
            return t
    raise ValueError(f"{first.label} is not a transition of the network")


def _dedupe(cands: list[NetTransition]) -> list[NetTransition]:
    if len(cands) < 2:
        return list(cands)
    seen = set()
    out = []
    for t in sorted(cands, key=policy_key):
        key = (t.label if t.label.kind is not LabelKind.BOUND_OUTPUT else (t.label.kind, t.label.subject),
               canonical(t.target.term))
        if key not in seen:
            seen.add(key)
            out.append(t)
    return out


def restore_rounds(net: SymmetricNetwork, first, limit: int = SEARCH_LIMIT) -> Iterator[Round]:
    """Rounds that start with ``first`` and follow the constructive schedule.

    A single-component step is mimicked by each other component in turn;
    a communication from component i to j is followed by communications
    from i+d to j+d.  Candidates are searched depth first.
    """
    first = _as_net_transition(net, first)
    n = net.degree
    sigma = net.relation
    budget = [limit]
    if len(first.actors) == 1:
        (i,) = first.actors
        yield from _c1(net, first, i, budget)
    else:
        yield from _c2(net, first, budget)


def _c1(net: SymmetricNetwork, first: NetTransition, i: int, budget) -> Iterator[Round]:
    n, sigma = net.degree, net.relation
    mu = first.label
    extruded_locally = mu.kind is LabelKind.BOUND_OUTPUT and mu.obj not in net.restriction
    head = first.target.comps[i]

    def matches(t: NetTransition, d: int, cycle: list[str]) -> bool:
        s = power(sigma, d)
        label = t.label
        match mu.kind:
            case LabelKind.TAU:
                ok = label.kind is LabelKind.TAU
            case LabelKind.FREE_INPUT:
                ok = label == Label(mu.kind, s(mu.subject), mu.obj if mu.obj == UNIT else s(mu.obj))
            case LabelKind.FREE_OUTPUT:
                ok = label == mu.renamed(s)
            case LabelKind.BOUND_OUTPUT if extruded_locally:
                ok = (label.kind is LabelKind.BOUND_OUTPUT and label.subject == s(mu.subject)
                      and label.obj not in cycle and label.obj not in sigma.support)
            case _:
                ok = label.is_output and (label.subject, label.obj) == (s(mu.subject), s(mu.obj))
        if not ok:
            return False
        if extruded_locally:
            return True
        return congruent(t.target.comps[(i + d) % n], apply(s, head))

    def go(state: NetState, d: int, cycle: list[str], steps: list[NetTransition]) -> Iterator[Round]:
        budget[0] -= 1
        if budget[0] < 0:
            return
        if d == n:
            rnd = _close_round(net, state, cycle, steps, "C1")
            if rnd is not None:
                yield rnd
            return
        if d == 0:
            cands = [first]
        else:
            k = (i + d) % n
            universe = free_names(state.term)
            if mu.kind is LabelKind.FREE_INPUT and mu.obj != UNIT:
                universe |= {power(sigma, d)(mu.obj)}
            avoid = _avoid(net) | set(cycle)
            cands = network_transitions(state, universe, avoid=avoid, only=[k],
                                        inputs=mu.kind is LabelKind.FREE_INPUT)
            cands = _dedupe([t for t in cands if matches(t, d, cycle)])
        for t in cands:
            extra = [t.label.obj] if extruded_locally else []
            yield from go(t.target, d + 1, cycle + extra, steps + [t])

    yield from go(first.source, 0, [], [])


def _c2(net: SymmetricNetwork, first: NetTransition, budget) -> Iterator[Round]:
    n, sigma = net.degree, net.relation
    sync = first.sync
    i, j = sync.sender, sync.receiver

    def matches(t: NetTransition, d: int, cycle: list[str]) -> bool:
        s = power(sigma, d)
        other = t.sync
        if t.label.kind is not LabelKind.TAU or other is None:
            return False
        if (other.sender, other.receiver) != ((i + d) % n, (j + d) % n):
            return False
        if other.channel != s(sync.channel) or other.bound != sync.bound:
            return False
        if sync.bound:
            return other.datum not in cycle and other.datum not in sigma.support
        return other.datum == (UNIT if sync.datum == UNIT else s(sync.datum))

    def go(state: NetState, d: int, cycle: list[str], steps: list[NetTransition]) -> Iterator[Round]:
        budget[0] -= 1
        if budget[0] < 0:
            return
        if d == n:
            rnd = _close_round(net, state, cycle, steps, "C2")
            if rnd is not None:
                yield rnd
            return
        if d == 0:
            cands = [first]
        else:
            actors = [(i + d) % n, (j + d) % n]
            avoid = _avoid(net) | set(cycle)
            cands = network_transitions(state, free_names(state.term), avoid=avoid, only=actors, inputs=False)
            cands = _dedupe([t for t in cands if matches(t, d, cycle)])
        for t in cands:
            extra = [t.sync.datum] if sync.bound else []
            yield from go(t.target, d + 1, cycle + extra, steps + [t])

    yield from go(first.source, 0, [], [])


def restore_symmetry(net: SymmetricNetwork, first, strict: bool = True) -> Round:
    """Complete the round begun by ``first`` so the network is symmetric again."""
    if strict and classify(net.base) is Fragment.MIXED:
        raise FragmentError("the base process uses mixed choice")
    for rnd in restore_rounds(net, first):
        return rnd
    raise RestoreDefect(f"could not restore symmetry after {first.label}")


def first_transitions(net: SymmetricNetwork) -> list[NetTransition]:
    return sort_transitions(network_transitions(net.state, avoid=_avoid(net)))


def symmetric_execution(net: SymmetricNetwork, max_rounds: int = 64) -> SymmetricExecution:
    """Build a symmetric execution round by round with the fixed policy."""
    if classify(net.base) is Fragment.MIXED:
        raise FragmentError("the base process uses mixed choice")
    rounds = []
    current = net
    for _ in range(max_rounds):
        moves = first_transitions(current)
        if not moves:
            return SymmetricExecution(net, tuple(rounds), complete=True)
        rnd = restore_symmetry(current, moves[0])
        rounds.append(rnd)
        current = rnd.network
    complete = not first_transitions(current)
    return SymmetricExecution(net, tuple(rounds), complete=complete)


# -- exhaustive search --------------------------------------------------------


@dataclass(frozen=True)
class SearchResult:
    outcome: str  # "yes", "no" or "unknown"
    witness: SymmetricExecution | None = None
    explored: int = 0

    def __bool__(self) -> bool:
        return self.outcome == "yes"


def _discover_extension(comps: tuple[Process, ...], sigma: SymmetryRelation) -> SymmetryRelation | None:
    n = len(comps)
    mapping: dict[str, str] = {}
    for k in range(n):
        if not align(comps[k], comps[(k + 1) % n], mapping, set()):
            return None
    for x in sigma.support:
        if mapping.setdefault(x, sigma(x)) != sigma(x):
            return None
    perm = close_permutation(mapping, n)
    if perm is None:
        return None
    grown = SymmetryRelation(perm, n)
    return grown if grown.extends(sigma) else None


def general_rounds(net: SymmetricNetwork, first: NetTransition, universe: set[str], limit: int = SEARCH_LIMIT) -> Iterator[Round]:
    """Every way to extend ``first`` by n-1 steps into a symmetric round."""
    n = net.degree
    budget = [limit]

    def go(state: NetState, steps: list[NetTransition]) -> Iterator[Round]:
        budget[0] -= 1
        if budget[0] < 0:
            return
        if len(steps) == n:
            sigma = _discover_extension(state.comps, net.relation)
            if sigma is None:
                return
            nxt = SymmetricNetwork(tuple(state.restriction), state.comps[0], sigma)
            if check_round_network(nxt) is not None:
                return
            labels = tuple(t.label for t in steps)
            cycle = tuple(sorted(sigma.support - net.relation.support))
            if not labels_ok(labels, sigma, list(net.restriction) + list(cycle)):
                return
            yield Round(labels, sigma, nxt.restriction, nxt.base, tuple(steps), "search", cycle)
            return
        for t in _dedupe(network_transitions(state, universe | free_names(state.term), avoid=_avoid(net))):
            yield from go(t.target, steps + [t])

    yield from go(first.target, [first])


def has_symmetric_execution(net: SymmetricNetwork, max_rounds: int = 16, limit: int = 200_000) -> SearchResult:
    """Search the tree of rounds for a symmetric execution.

    ``yes`` carries a witness ending in a network without steps or in a
    repeated network (a lasso); ``no`` means the search was exhaustive.
    """
    universe = set(free_names(net.term))
    universe.add(witness(all_names(net.term) | _avoid(net)))
    explored = [0]

    def search(cur: SymmetricNetwork, depth: int, path: frozenset) -> tuple[str, list[Round], bool]:
        explored[0] += 1
        if explored[0] > limit:
            return "unknown", [], False
        moves = network_transitions(cur.state, universe | free_names(cur.term), avoid=_avoid(cur))
        if not moves:
            return "yes", [], False
        key = canonical(cur.term)
        if key in path:
            return "yes", [], True
        if depth >= max_rounds:
            return "unknown", [], False
        unknown = False
        seen = set()
        for first in sort_transitions(moves):
            rounds = list(restore_rounds(cur, first, limit=2_000)) + list(general_rounds(cur, first, universe))
            for rnd in rounds:
                nk = canonical(rnd.network.term)
                if nk in seen:
                    continue
                seen.add(nk)
                outcome, rest, loop = search(rnd.network, depth + 1, path | {key})
                if outcome == "yes":
                    return "yes", [rnd] + rest, loop
                unknown = unknown or outcome == "unknown"
        return ("unknown" if unknown else "no"), [], False

    outcome, rounds, loop = search(net, 0, frozenset())
    if outcome == "yes":
        final = rounds[-1].network if rounds else net
        complete = not loop and not network_transitions(final.state, universe, avoid=_avoid(final))
        sx = SymmetricExecution(net, tuple(rounds), complete=complete, looping=loop)
        return SearchResult("yes", sx, explored[0])
    return SearchResult(outcome, None, explored[0])


# -- validation ----------------------------------------------------------------


def _permuted_inputs(mu: Label, sigma: SymmetryRelation) -> list[Label]:
    return [mu if mu.obj == UNIT else Label(mu.kind, power(sigma, d)(mu.subject), power(sigma, d)(mu.obj))
            for d in range(sigma.degree)]


def labels_ok(labels, sigma: SymmetryRelation, restriction) -> bool:
    """Round labels form the symmetric sequence of their first label.

    For inputs the object may also follow the permutation, which is what the
    mimicking steps need when the received name is itself permuted.
    """
    labels = list(labels)
    if not labels:
        return False
    mu = labels[0]
    if labels == symmetric_action_sequence(mu, sigma, restriction):
        return True
    return mu.kind is LabelKind.FREE_INPUT and labels == _permuted_inputs(mu, sigma)


def _same_step(t: NetTransition, u: NetTransition) -> bool:
    if t.actors != u.actors or t.label.kind != u.label.kind or t.label.subject != u.label.subject:
        return False
    if t.label.kind is LabelKind.BOUND_OUTPUT:
        a, b = t.label.obj, u.label.obj
        target = u.target.term
        if a != b:
            if a in all_names(target):
                return False
            target = apply(Substitution({b: a}), target)
        return congruent(t.target.term, target)
    return t.label == u.label and congruent(t.target.term, u.target.term)


def replay(state: NetState, steps: Iterable[NetTransition], avoid: Iterable[str] = ()) -> list[str]:
    """Check every step against the semantics; returns problems found."""
    problems = []
    avoid = set(avoid)
    for n, t in enumerate(steps):
        if not congruent(state.term, t.source.term):
            problems.append(f"step {n}: source does not continue the previous target")
        universe = free_names(t.source.term) | t.label.names
        found = network_transitions(t.source, universe, avoid=avoid | t.label.names, only=sorted(t.actors),
                                    inputs=t.label.kind is LabelKind.FREE_INPUT)
        if not any(_same_step(t, u) for u in found):
            problems.append(f"step {n}: {t.label} by {sorted(t.actors)} is not derivable")
        state = t.target
    return problems


def validate_symmetric_execution(sx: SymmetricExecution) -> list[str]:
    """Independent check of every invariant; an empty list means valid."""
    problems = []
    net = sx.network
    try:
        from .symmetry import check_network

        check_network(net)
    except NetworkError as err:
        problems.append(f"initial network: {err}")
    for r, rnd in enumerate(sx.rounds):
        where = f"round {r}"
        if len(rnd.steps) != net.degree or len(rnd.labels) != net.degree:
            problems.append(f"{where}: expected {net.degree} steps")
        if not rnd.sigma.extends(net.relation) or rnd.sigma.degree != net.relation.degree:
            problems.append(f"{where}: symmetry relation does not extend the previous one")
        for p in replay(net.state, rnd.steps, _avoid(net)):
            problems.append(f"{where}: {p}")
        if tuple(t.label for t in rnd.steps) != rnd.labels:
            problems.append(f"{where}: labels disagree with the steps")
        if rnd.steps and not congruent(rnd.steps[-1].target.term, rnd.network.term):
            problems.append(f"{where}: final state is not the reported network")
        bad = check_round_network(rnd.network)
        if bad:
            problems.append(f"{where}: next network {bad}")
        if not labels_ok(rnd.labels, rnd.sigma, list(net.restriction) + list(rnd.cycle)):
            problems.append(f"{where}: labels are not a symmetric sequence")
        net = rnd.network
    if sx.complete and first_transitions(net):
        problems.append("marked complete but the final network can still move")
    return problems


# -- subdivision -------------------------------------------------------------


def label_occurs(label: Label, labels: Iterable[Label]) -> bool:
    """``label`` or its free variant is in ``labels``; bound objects up to alpha."""
    for other in labels:
        if label.kind is LabelKind.BOUND_OUTPUT and other.kind is LabelKind.BOUND_OUTPUT:
            if label.subject == other.subject:
                return True
        if label == other or label.free_variant() == other:
            return True
    return False


def _small_network(net: SymmetricNetwork, n_prime: int) -> SymmetricNetwork:
    sigma = SymmetryRelation(net.relation.perm, n_prime)
    comps = [apply(power(sigma, k), net.base) for k in range(n_prime)]
    used = set().union(*(free_names(c) for c in comps))
    restriction = tuple(x for x in net.restriction if x in used)
    return SymmetricNetwork(restriction, net.base, sigma)


def _small_firsts(small: SymmetricNetwork, big: SymmetricNetwork, rnd: Round) -> list[NetTransition]:
    n, m = big.degree, small.degree
    first = rnd.steps[0]
    moves = network_transitions(small.state, free_names(small.term) | first.label.names, avoid=_avoid(small))
    if len(first.actors) == 1:
        (i,) = first.actors
        mu = rnd.labels[(n - i) % n]  # the label component 0 performed
        out = []
        for t in moves:
            if t.actors != frozenset({0}):
                continue
            lab = t.label
            if mu.kind is LabelKind.TAU:
                ok = lab.kind is LabelKind.TAU
            elif mu.kind is LabelKind.FREE_INPUT:
                ok = lab == mu
            elif rnd.steps[0].label.kind is LabelKind.BOUND_OUTPUT or mu.kind is LabelKind.BOUND_OUTPUT:
                ok = lab.is_output and lab.subject == mu.subject
            else:
                ok = lab == mu
            if ok:
                out.append(t)
        return out
    sync = first.sync
    i, j = sync.sender % m, sync.receiver % m
    out = []
    for t in moves:
        if t.label.kind is not LabelKind.TAU or t.sync is None:
            continue
        if i == j:
            if t.actors == frozenset({i}):
                out.append(t)
        elif (t.sync.sender, t.sync.receiver) == (i, j) and t.sync.channel == sync.channel:
            out.append(t)
    return out


def subdivide(sx: SymmetricExecution, n_prime: int) -> SymmetricExecution:
    """The symmetric execution of the subnetwork of degree ``n_prime``."""
    big = sx.network
    n = big.degree
    if not 0 < n_prime < n:
        raise ValueError(f"n' must lie strictly between 0 and {n}")
    if power(big.relation.perm, n_prime):
        raise ValueError(f"sigma^{n_prime} is not the identity")
    small = _small_network(big, n_prime)
    start = small
    rounds = []
    for rnd in sx.rounds:
        target = rnd.network.components()[:n_prime]
        chosen = fallback = None
        for first in _small_firsts(small, big, rnd):
            for cand in restore_rounds(small, first, limit=5_000):
                if not all(label_occurs(lab, rnd.labels) for lab in cand.labels):
                    continue
                fallback = fallback or cand
                got = cand.network.term
                used = set().union(*(free_names(c) for c in target))
                want = NetState(tuple(x for x in rnd.restriction if x in used), tuple(target)).term
                if congruent_upto_garbage(got, want):
                    chosen = cand
                    break
            if chosen:
                break
        chosen = chosen or fallback
        if chosen is None:
            raise RestoreDefect(f"no subdivided round matches round labels {[str(x) for x in rnd.labels]}")
        rounds.append(chosen)
        small = chosen.network
        big = rnd.network
    complete = not first_transitions(small)
    return SymmetricExecution(start, tuple(rounds), complete=complete)


# -- local confluence ----------------------------------------------------------


@dataclass(frozen=True)
class ConfluenceVerdict:
    holds: bool
    checked: int = 0
    labels: tuple[Label, Label] | None = None
    states: tuple[Process, ...] = field(default=())

    def __bool__(self) -> bool:
        return self.holds


def _completes(first: NetTransition, second: Label, universe: set[str]) -> list[NetTransition]:
    moves = network_transitions(first.target, universe | second.names | free_names(first.target.term))
    out = []
    for t in moves:
        if t.label.kind is LabelKind.BOUND_OUTPUT and second.kind is LabelKind.BOUND_OUTPUT:
            if t.label.subject == second.subject:
                out.append(t)
        elif second.kind is LabelKind.BOUND_OUTPUT and t.label.kind is LabelKind.FREE_OUTPUT:
            continue
        elif t.label == second:
            out.append(t)
    return out


def _meet(a: NetTransition, b: NetTransition, bound: tuple[str, str] | None) -> bool:
    ta, tb = a.target.term, b.target.term
    if bound and bound[0] != bound[1]:
        mine, theirs = bound
        if mine in all_names(tb):
            return False
        tb = apply(Substitution({theirs: mine}), tb)
    return congruent(ta, tb)


def check_local_confluence(p: Process, universe: Iterable[str] | None = None, require_separate: bool = True) -> ConfluenceVerdict:
    """Every output and input available together commute to a common state."""
    if require_separate and classify(p) is Fragment.MIXED:
        raise FragmentError("local confluence is only claimed for separate choice")
    state = decompose(p)
    universe = set(free_names(p) if universe is None else universe)
    moves = network_transitions(state, universe)
    outs = [t for t in moves if t.label.is_output]
    ins = [t for t in moves if t.label.kind is LabelKind.FREE_INPUT]
    checked = 0
    for o in outs:
        for i in ins:
            checked += 1
            ok = False
            after_out = _completes(o, i.label, universe)
            after_in = _completes(i, o.label, universe)
            for s1 in after_out:
                for s2 in after_in:
                    bound = None
                    if o.label.kind is LabelKind.BOUND_OUTPUT:
                        bound = (o.label.obj, s2.label.obj)
                    if _meet(s1, s2, bound):
                        ok = True
                        break
                if ok:
                    break
            if not ok:
                states = (p, o.target.term, i.target.term)
                return ConfluenceVerdict(False, checked, (o.label, i.label), states)
    return ConfluenceVerdict(True, checked)
