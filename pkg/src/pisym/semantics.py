"""Early labelled transition semantics.

Terms are stepped compositionally.  A term is read as a network: the
outermost restrictions, then the top-level parallel components (a single
component when there is no top-level ``|``).  Transitions report which
components moved, and targets keep the component positions stable.

Free inputs are instantiated over a finite universe plus one fresh witness.
Bound names that would clash after scope extrusion are alpha-converted with
the deterministic ``name'k`` scheme.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .names import FreshSupply, Substitution, apply, fresh_name
from .syntax import (
    UNIT,
    In,
    Out,
    Par,
    Process,
    Rep,
    Res,
    Success,
    Sum,
    Tau,
    all_names,
    bound_names,
    free_names,
    new,
    no_clash,
    par,
)


class LabelKind(enum.IntEnum):
    """Ordered as the deterministic scheduling policy prefers them."""

    TAU = 0
    BOUND_OUTPUT = 1
    FREE_OUTPUT = 2
    FREE_INPUT = 3


@dataclass(frozen=True, order=True)
class Label:
    kind: LabelKind
    subject: str | None = None
    obj: str | None = None

    @property
    def is_output(self) -> bool:
        return self.kind in (LabelKind.FREE_OUTPUT, LabelKind.BOUND_OUTPUT)

    @property
    def names(self) -> frozenset[str]:
        return frozenset(n for n in (self.subject, self.obj) if n not in (None, UNIT))

    @property
    def bound(self) -> frozenset[str]:
        return frozenset({self.obj}) if self.kind is LabelKind.BOUND_OUTPUT else frozenset()

    def renamed(self, s: Substitution) -> "Label":
        if self.kind is LabelKind.TAU:
            return self
        obj = self.obj if self.obj == UNIT else s(self.obj)
        return Label(self.kind, s(self.subject), obj)

    def free_variant(self) -> "Label":
        if self.kind is LabelKind.BOUND_OUTPUT:
            return Label(LabelKind.FREE_OUTPUT, self.subject, self.obj)
        return self

    def bound_variant(self) -> "Label":
        if self.kind is LabelKind.FREE_OUTPUT:
            return Label(LabelKind.BOUND_OUTPUT, self.subject, self.obj)
        return self

    def __str__(self) -> str:
        match self.kind:
            case LabelKind.TAU:
                return "tau"
            case LabelKind.FREE_OUTPUT:
                return f"{self.subject}!" if self.obj == UNIT else f"{self.subject}!{self.obj}"
            case LabelKind.BOUND_OUTPUT:
                return f"{self.subject}!({self.obj})"
            case LabelKind.FREE_INPUT:
                return f"{self.subject}?" if self.obj == UNIT else f"{self.subject}?{self.obj}"


TAU = Label(LabelKind.TAU)


def out_label(x: str, y: str = UNIT, bound: bool = False) -> Label:
    return Label(LabelKind.BOUND_OUTPUT if bound else LabelKind.FREE_OUTPUT, x, y)


def in_label(x: str, y: str = UNIT) -> Label:
    return Label(LabelKind.FREE_INPUT, x, y)


def parse_label(text: str) -> Label:
    """Inverse of ``str(Label)``."""
    text = text.strip()
    if text == "tau":
        return TAU
    if "!" in text:
        x, _, y = text.partition("!")
        if y.startswith("(") and y.endswith(")"):
            return out_label(x, y[1:-1], bound=True)
        return out_label(x, y or UNIT)
    if "?" in text:
        x, _, y = text.partition("?")
        return in_label(x, y or UNIT)
    raise ValueError(f"bad label {text!r}")


@dataclass(frozen=True)
class Sync:
    """Who talked to whom in a communication (component indices)."""

    sender: int
    receiver: int
    channel: str
    datum: str
    bound: bool = False


@dataclass(frozen=True)
class NetState:
    """A term split into outer restrictions and top-level components."""

    restriction: tuple[str, ...]
    comps: tuple[Process, ...]

    @property
    def term(self) -> Process:
        return new(self.restriction, par(*self.comps))

    def replace(self, index: int, comp: Process) -> "NetState":
        comps = list(self.comps)
        comps[index] = comp
        return NetState(self.restriction, tuple(comps))


def decompose(p: Process) -> NetState:
    restriction = []
    while isinstance(p, Res):
        restriction.append(p.binder)
        p = p.body
    comps = p.components if isinstance(p, Par) else (p,)
    return NetState(tuple(restriction), tuple(comps))


@dataclass(frozen=True)
class Transition:
    source: Process
    label: Label
    target: Process
    actors: frozenset[int]
    sync: Sync | None = field(default=None, compare=False)


@dataclass(frozen=True)
class NetTransition:
    source: NetState
    label: Label
    target: NetState
    actors: frozenset[int]
    sync: Sync | None = field(default=None, compare=False)

    def as_transition(self) -> Transition:
        return Transition(self.source.term, self.label, self.target.term, self.actors, self.sync)


class IllFormedError(ValueError):
    pass


class UniverseError(ValueError):
    pass


# -- the compositional engine ----------------------------------------------


@dataclass(frozen=True)
class _Act:
    kind: LabelKind
    subject: str | None = None
    obj: str | None = None
    target: object = None  # Process, or a tuple of components at Par level
    cont: Callable[[str], object] | None = None  # inputs only
    sync: Sync | None = None
    actors: frozenset[int] = frozenset()
    closed: tuple[str, ...] = ()  # restrictions created by Close


def _fresh(base: str, avoid: set) -> str:
    name = fresh_name(base, avoid)
    avoid.add(name)
    return name


def _rename_binders(p: Process, doomed: str, avoid: set) -> Process:
    """Alpha-convert every binding occurrence of ``doomed`` to its own fresh name."""
    if doomed not in bound_names(p):
        return p
    match p:
        case Sum(branches):
            out = []
            for pre, cont in branches:
                if isinstance(pre, In) and pre.binder == doomed:
                    z = _fresh(doomed, avoid)
                    body = apply(Substitution({doomed: z}), cont)
                    out.append((In(pre.channel, z), _rename_binders(body, doomed, avoid)))
                else:
                    out.append((pre, _rename_binders(cont, doomed, avoid)))
            return Sum(tuple(out))
        case Par(components):
            return Par(tuple(_rename_binders(c, doomed, avoid) for c in components))
        case Res(z, body):
            if z == doomed:
                z2 = _fresh(doomed, avoid)
                body = apply(Substitution({doomed: z2}), body)
                return Res(z2, _rename_binders(body, doomed, avoid))
            return Res(z, _rename_binders(body, doomed, avoid))
        case Rep(body):
            return Rep(_rename_binders(body, doomed, avoid))
    return p


def _instantiate(binder: str, cont: Process, avoid: frozenset) -> Callable[[str], Process]:
    if binder == UNIT:
        return lambda y: cont

    def receive(y: str) -> Process:
        supply = FreshSupply(avoid | all_names(cont) | {y})
        return apply(Substitution({binder: y}), cont, supply)

    return receive


def _acts(p: Process, avoid: frozenset) -> list[_Act]:
    match p:
        case Sum(branches):
            acts = []
            for pre, cont in branches:
                match pre:
                    case Out(x, y):
                        acts.append(_Act(LabelKind.FREE_OUTPUT, x, y, target=cont))
                    case In(x, z):
                        acts.append(_Act(LabelKind.FREE_INPUT, x, UNIT if z == UNIT else None,
                                         cont=_instantiate(z, cont, avoid)))
                    case Tau():
                        acts.append(_Act(LabelKind.TAU, target=cont))
            return acts
        case Par(components):
            return [_wrap_par(a) for a in _par_acts(components, avoid)]
        case Res(z, body):
            acts = []
            for a in _acts(body, avoid):
                lifted = _restrict(a, z, avoid, lambda t, z=z: Res(z, t), lambda t: t)
                if lifted is not None:
                    acts.append(lifted)
            return acts
        case Rep(body):
            return _rep_acts(body, avoid)
        case Success():
            return []
    raise TypeError(f"not a process: {p!r}")


def _wrap_par(a: _Act) -> _Act:
    def build(comps, closed):
        return new(closed, Par(tuple(comps)))

    if a.cont is not None:
        cont = a.cont
        return _Act(a.kind, a.subject, a.obj, cont=lambda y: build(cont(y), ()), actors=a.actors)
    return _Act(a.kind, a.subject, a.obj, target=build(a.target, a.closed), sync=a.sync,
                actors=a.actors)


def _restrict(a: _Act, z: str, avoid: frozenset, keep, drop) -> _Act | None:
    """Lift an act through a restriction of ``z``.

    ``keep`` rebuilds a target under the restriction, ``drop`` rebuilds it
    with the restriction removed (rule Open).
    """
    match a.kind:
        case LabelKind.TAU:
            return _Act(a.kind, target=keep(a.target), sync=a.sync, actors=a.actors, closed=a.closed)
        case LabelKind.FREE_OUTPUT:
            if a.subject == z:
                return None
            if a.obj == z:
                return _Act(LabelKind.BOUND_OUTPUT, a.subject, z, target=drop(a.target), actors=a.actors)
            return _Act(a.kind, a.subject, a.obj, target=keep(a.target), actors=a.actors)
        case LabelKind.BOUND_OUTPUT:
            if a.subject == z:
                return None
            if a.obj == z:
                # the extruded name is shadowed here: rename it on the way out
                taken = set(avoid) | _names_of(a.target) | {z}
                y2 = _fresh(z, taken)
                target = _map_target(a.target, lambda t: apply(Substitution({z: y2}), t))
                return _Act(a.kind, a.subject, y2, target=keep(target), actors=a.actors)
            return _Act(a.kind, a.subject, a.obj, target=keep(a.target), actors=a.actors)
        case LabelKind.FREE_INPUT:
            if a.subject == z:
                return None
            cont = a.cont

            def receive(y: str):
                if y != z:
                    return keep(cont(y))
                temp = "%tmp"
                r = cont(temp)
                taken = set(avoid) | _names_of(r) | {y}
                z2 = _fresh(z, taken)
                return _rekeep(keep, z, z2, r, temp, y)

            return _Act(a.kind, a.subject, a.obj, cont=receive, actors=a.actors)
    raise AssertionError(a.kind)


def _rekeep(keep, z, z2, r, temp, y):
    """Receive the restricted name ``z`` itself: rename the restriction first."""
    s = Substitution({z: z2, temp: y})
    renamed = _map_target(r, lambda t: apply(s, t))
    built = keep(renamed)
    return _rebind(built, z, z2)


def _rebind(t, old: str, new_: str):
    if isinstance(t, Res) and t.binder == old:
        return Res(new_, t.body)
    if isinstance(t, tuple) and len(t) == 2 and isinstance(t[0], tuple):
        restriction, comps = t
        return tuple(new_ if b == old else b for b in restriction), comps
    return t


def _names_of(t) -> set:
    if isinstance(t, tuple):
        acc: set = set()
        for c in t:
            acc |= _names_of(c)
        return acc
    if isinstance(t, str):
        return {t}
    return set(all_names(t))


def _map_target(t, f):
    if isinstance(t, tuple):
        return tuple(_map_target(c, f) for c in t)
    if isinstance(t, str):
        return t
    return f(t)


def _extrude(comps: tuple, i: int, target: Process, y: str, avoid: frozenset):
    """Component ``i`` extrudes ``y``.  Returns (object, new components)."""
    others = [c for k, c in enumerate(comps) if k != i]
    taken = set(avoid) | {n for c in comps for n in all_names(c)} | all_names(target)
    if any(y in free_names(c) for c in others):
        y2 = _fresh(y, taken)
        target = apply(Substitution({y: y2}), target)
        y = y2
    new_comps = list(comps)
    new_comps[i] = target
    for k, c in enumerate(comps):
        if k != i and y in bound_names(c):
            new_comps[k] = _rename_binders(c, y, taken)
    return y, tuple(new_comps)


def _par_acts(comps: tuple, avoid: frozenset, only: Iterable[int] | None = None) -> list[_Act]:
    """Acts of a parallel composition; targets are component tuples."""
    only = None if only is None else set(only)
    per = [_acts(c, avoid) for c in comps]
    result = []
    n = len(comps)

    def replaced(*pairs):
        new_comps = list(comps)
        for k, c in pairs:
            new_comps[k] = c
        return tuple(new_comps)

    for i, acts in enumerate(per):
        if only is not None and only != {i}:
            continue
        for a in acts:
            actors = frozenset({i})
            match a.kind:
                case LabelKind.FREE_INPUT:
                    cont = a.cont
                    result.append(_Act(a.kind, a.subject, a.obj, actors=actors,
                                       cont=lambda y, i=i, cont=cont: replaced((i, cont(y)))))
                case LabelKind.BOUND_OUTPUT:
                    y, new_comps = _extrude(comps, i, a.target, a.obj, avoid)
                    result.append(_Act(a.kind, a.subject, y, target=new_comps, actors=actors))
                case _:
                    result.append(_Act(a.kind, a.subject, a.obj, target=replaced((i, a.target)),
                                       sync=a.sync, actors=actors, closed=a.closed))
    for i in range(n):
        for j in range(n):
            if i == j or (only is not None and only != {i, j}):
                continue
            for s in per[i]:
                if not (s.kind in (LabelKind.FREE_OUTPUT, LabelKind.BOUND_OUTPUT)):
                    continue
                for r in per[j]:
                    if r.kind is not LabelKind.FREE_INPUT or r.subject != s.subject:
                        continue
                    if (s.obj == UNIT) != (r.obj == UNIT):
                        continue
                    actors = frozenset({i, j})
                    if s.kind is LabelKind.FREE_OUTPUT:
                        sync = Sync(i, j, s.subject, s.obj)
                        result.append(_Act(LabelKind.TAU, target=replaced((i, s.target), (j, r.cont(s.obj))),
                                           sync=sync, actors=actors))
                    else:
                        z = s.obj
                        target = s.target
                        others = [c for k, c in enumerate(comps) if k != i]
                        if any(z in free_names(c) for c in others):
                            taken = set(avoid) | {m for c in comps for m in all_names(c)} | all_names(target)
                            z2 = _fresh(z, taken)
                            target = apply(Substitution({z: z2}), target)
                            z = z2
                        sync = Sync(i, j, s.subject, z, bound=True)
                        result.append(_Act(LabelKind.TAU, target=replaced((i, target), (j, r.cont(z))),
                                           sync=sync, actors=actors, closed=(z,)))
    return result


def _rep_acts(body: Process, avoid: frozenset) -> list[_Act]:
    bang = Rep(body)
    per = _acts(body, avoid)
    result = []
    inside = all_names(body)
    for a in per:
        match a.kind:
            case LabelKind.FREE_INPUT:
                cont = a.cont
                result.append(_Act(a.kind, a.subject, a.obj, cont=lambda y, cont=cont: Par((cont(y), bang))))
            case LabelKind.BOUND_OUTPUT:
                y, target = a.obj, a.target
                if y in inside:
                    y2 = _fresh(y, set(avoid) | inside | all_names(target))
                    target = apply(Substitution({y: y2}), target)
                    y = y2
                result.append(_Act(a.kind, a.subject, y, target=Par((target, bang))))
            case _:
                result.append(_Act(a.kind, a.subject, a.obj, target=Par((a.target, bang)), sync=a.sync))
    for s in per:
        if s.kind not in (LabelKind.FREE_OUTPUT, LabelKind.BOUND_OUTPUT):
            continue
        for r in per:
            if r.kind is not LabelKind.FREE_INPUT or r.subject != s.subject:
                continue
            if (s.obj == UNIT) != (r.obj == UNIT):
                continue
            if s.kind is LabelKind.FREE_OUTPUT:
                pair = Par((s.target, r.cont(s.obj)))
                result.append(_Act(LabelKind.TAU, target=Par((pair, bang)), sync=Sync(0, 0, s.subject, s.obj)))
            else:
                z2 = _fresh(s.obj, set(avoid) | inside | all_names(s.target))
                sent = apply(Substitution({s.obj: z2}), s.target)
                pair = Par((sent, r.cont(z2)))
                result.append(_Act(LabelKind.TAU, target=Res(z2, Par((pair, bang))),
                                   sync=Sync(0, 0, s.subject, z2, bound=True)))
    return result


# -- public interface ------------------------------------------------------


def witness(names: Iterable[str]) -> str:
    """The designated fresh input witness: ``_w0`` unless that name is taken."""
    taken = set(names)
    k = 0
    while f"_w{k}" in taken:
        k += 1
    return f"_w{k}"


def network_transitions(
    state: NetState,
    universe: Iterable[str] | None = None,
    avoid: Iterable[str] = (),
    only: Iterable[int] | None = None,
    inputs: bool = True,
) -> list[NetTransition]:
    """All transitions of a network, optionally restricted to the given actors."""
    term = state.term
    fn = free_names(term)
    universe = set(fn if universe is None else universe)
    wit = witness(all_names(term) | universe | set(avoid))
    taken = frozenset(all_names(term) | universe | set(avoid) | {wit})
    restricted = set(state.restriction)

    if len(state.comps) == 1:
        if only is not None and set(only) != {0}:
            return []
        raw = []
        for a in _acts(state.comps[0], taken):
            if a.cont is not None:
                cont = a.cont
                raw.append(_Act(a.kind, a.subject, a.obj, cont=lambda y, cont=cont: (cont(y),),
                                actors=frozenset({0})))
            else:
                raw.append(_Act(a.kind, a.subject, a.obj, target=(a.target,), sync=a.sync,
                                actors=frozenset({0})))
    else:
        raw = _par_acts(state.comps, taken, only)

    out = []
    for a in raw:
        restriction = list(state.restriction) + list(a.closed)
        match a.kind:
            case LabelKind.TAU:
                label = TAU
                targets = [(label, a.target)]
            case LabelKind.FREE_OUTPUT:
                if a.subject in restricted:
                    continue
                if a.obj in restricted:
                    label = out_label(a.subject, a.obj, bound=True)
                    _remove_last(restriction, a.obj)
                else:
                    label = out_label(a.subject, a.obj)
                targets = [(label, a.target)]
            case LabelKind.BOUND_OUTPUT:
                if a.subject in restricted:
                    continue
                obj, comps = a.obj, a.target
                if obj in restricted:
                    obj2 = fresh_name(obj, set(taken) | _names_of(comps))
                    comps = tuple(apply(Substitution({obj: obj2}), c) for c in comps)
                    obj = obj2
                targets = [(out_label(a.subject, obj, bound=True), comps)]
            case LabelKind.FREE_INPUT:
                if not inputs or a.subject in restricted:
                    continue
                if a.obj == UNIT:
                    objects = [UNIT]
                else:
                    objects = sorted((universe | {wit}) - restricted)
                targets = [(in_label(a.subject, y), a.cont(y)) for y in objects]
        for label, comps in targets:
            out.append(NetTransition(state, label, NetState(tuple(restriction), tuple(comps)),
                                     a.actors, a.sync))
    return out


def _remove_last(seq: list, item) -> None:
    for k in range(len(seq) - 1, -1, -1):
        if seq[k] == item:
            del seq[k]
            return


def _check(p: Process, universe) -> None:
    verdict = no_clash(p)
    if not verdict:
        raise IllFormedError(f"ill-formed term: {verdict}")
    if universe is not None:
        missing = sorted(free_names(p) - set(universe))
        if missing:
            raise UniverseError(f"universe lacks free names {missing}")


def transitions(p: Process, universe: Iterable[str] | None = None, check: bool = True) -> list[Transition]:
    """One-step transitions of ``p``; free inputs range over ``universe`` and a witness."""
    universe = None if universe is None else set(universe)
    if check:
        _check(p, universe)
    state = decompose(p)
    return sort_transitions(t.as_transition() for t in network_transitions(state, universe))


def tau_transitions(p: Process, check: bool = True) -> list[Transition]:
    if check:
        _check(p, None)
    state = decompose(p)
    steps = network_transitions(state, inputs=False)
    return sort_transitions(t.as_transition() for t in steps if t.label.kind is LabelKind.TAU)


def input_transitions(p: Process, objects: Iterable[str]) -> list[Transition]:
    universe = free_names(p) | set(objects)
    return [t for t in transitions(p, universe) if t.label.kind is LabelKind.FREE_INPUT]


def policy_key(t):
    from .concrete import pretty

    target = t.target.term if isinstance(t.target, NetState) else t.target
    return (min(t.actors, default=0), t.label.kind, str(t.label), pretty(target))


def sort_transitions(ts) -> list:
    return sorted(ts, key=policy_key)
