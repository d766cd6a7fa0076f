"""Canonical forms deciding structural congruence.

The congruence is generated by alpha-conversion, scope extrusion
``(new x)P | Q == (new x)(P | Q)`` when x is not free in Q, and commutativity
and associativity of ``|``.  Canonicalization flattens every parallel level,
pulls its restrictions outward, names binders positionally and sorts the
parallel components.  Restrictions within one level therefore commute.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .names import Substitution, apply
from .syntax import UNIT, In, Out, Par, Process, Rep, Res, Success, Sum, Tau, free_names, new

PERMUTATION_CAP = 720


@lru_cache(maxsize=400_000)
def encode(p: Process) -> str:
    """Compact unambiguous serialization used as a sort key."""
    match p:
        case Sum(branches):
            parts = []
            for pre, cont in branches:
                match pre:
                    case Out(x, y):
                        head = f"o{x},{y}"
                    case In(x, z):
                        head = f"i{x},{z}"
                    case Tau():
                        head = "t"
                parts.append(f"{head}.{encode(cont)}")
            return "S(" + ";".join(parts) + ")"
        case Par(components):
            return "P(" + ",".join(encode(c) for c in components) + ")"
        case Res(z, body):
            return f"R{z}({encode(body)})"
        case Rep(body):
            return f"!({encode(body)})"
        case Success():
            return "V"
    raise TypeError(f"not a process: {p!r}")


def _rename(p: Process, mapping: dict[str, str]) -> Process:
    return apply(Substitution(mapping), p)


@lru_cache(maxsize=400_000)
def _canon(p: Process, depth: int) -> Process:
    match p:
        case Sum(branches):
            out = []
            for pre, cont in branches:
                if isinstance(pre, In) and pre.binder != UNIT:
                    token = f"%{depth}"
                    cont = _rename(cont, {pre.binder: token})
                    out.append((In(pre.channel, token), _canon(cont, depth + 1)))
                else:
                    out.append((pre, _canon(cont, depth + 1)))
            return Sum(tuple(out))
        case Rep(body):
            return Rep(_canon(body, depth))
        case Success():
            return p
        case Par() | Res():
            return _level(p, depth)
    raise TypeError(f"not a process: {p!r}")


def _flatten(p: Process, depth: int):
    binders: list[str] = []
    leaves: list[Process] = []

    def walk(q: Process) -> None:
        match q:
            case Res(z, body):
                temp = f"%u{depth}_{len(binders)}"
                binders.append(temp)
                walk(_rename(body, {z: temp}))
            case Par(components):
                for c in components:
                    walk(c)
            case _:
                leaves.append(q)

    walk(p)
    return binders, leaves


def _level(p: Process, depth: int) -> Process:
    binders, leaves = _flatten(p, depth)
    if not binders:
        leaves = sorted((_canon(leaf, depth + 1) for leaf in leaves), key=encode)
        return _assemble([], leaves)

    classes = _classify(binders, leaves, depth + 1)
    groups: dict[tuple, list[str]] = {}
    for b in binders:
        groups.setdefault(classes[b], []).append(b)
    ordered = [groups[k] for k in sorted(groups)]
    combos = math.prod(math.factorial(len(g)) for g in ordered)

    def candidates():
        if combos > PERMUTATION_CAP:
            yield [b for g in ordered for b in g]
            return
        for choice in itertools.product(*(itertools.permutations(g) for g in ordered)):
            yield [b for g in choice for b in g]

    best = None
    for order in candidates():
        mapping = {b: f"%{depth}_{k}" for k, b in enumerate(order)}
        renamed = sorted((_canon(_rename(leaf, mapping), depth + 1) for leaf in leaves), key=encode)
        key = tuple(encode(leaf) for leaf in renamed)
        if best is None or key < best[0]:
            best = (key, [mapping[b] for b in order], renamed)
    _, tokens, renamed = best
    return _assemble(tokens, renamed)


def _assemble(tokens: list[str], leaves: list[Process]) -> Process:
    body = leaves[0] if len(leaves) == 1 else Par(tuple(leaves))
    return new(tokens, body)


def _classify(binders: list[str], leaves: list[Process], depth: int) -> dict[str, tuple]:
    """Name-independent colour of each level binder (a few refinement rounds)."""
    colour = {b: 0 for b in binders}
    members = [(leaf, free_names(leaf)) for leaf in leaves]
    sigs: dict[str, tuple] = {}
    for _ in range(3):
        for b in binders:
            sig = []
            for leaf, fn in members:
                if b not in fn:
                    continue
                mapping = {b: "@"}
                for other in binders:
                    if other != b and other in fn:
                        mapping[other] = f"#{colour[other]}"
                sig.append(encode(_canon(_rename(leaf, mapping), depth)))
            sigs[b] = (colour[b], tuple(sorted(sig)))
        ranks = {v: k for k, v in enumerate(sorted(set(sigs.values())))}
        refined = {b: ranks[sigs[b]] for b in binders}
        if refined == colour:
            break
        colour = refined
    return {b: sigs[b] for b in binders}


@dataclass(frozen=True)
class CanonicalForm:
    term: Process

    def __str__(self) -> str:
        from .concrete import pretty

        return pretty(self.term)


def canonical(p: Process) -> CanonicalForm:
    return CanonicalForm(_canon(p, 0))


def congruent(p: Process, q: Process) -> bool:
    return p == q or _canon(p, 0) == _canon(q, 0)


def top_level(p: Process) -> list[Process]:
    """Components of the outermost parallel level, under its restrictions."""
    while isinstance(p, Res):
        p = p.body
    if isinstance(p, Par):
        out = []
        for c in p.components:
            out.extend(top_level(c))
        return out
    return [p]


def has_top_level_success(p: Process) -> bool:
    return any(isinstance(c, Success) for c in top_level(p))


def collect_garbage(p: Process) -> Process:
    """Drop restrictions whose name is not used in their scope."""
    match p:
        case Res(z, body):
            body = collect_garbage(body)
            return Res(z, body) if z in free_names(body) else body
        case Par(components):
            return Par(tuple(collect_garbage(c) for c in components))
        case Rep(body):
            return Rep(collect_garbage(body))
        case Sum(branches):
            return Sum(tuple((pre, collect_garbage(c)) for pre, c in branches))
    return p


def congruent_upto_garbage(p: Process, q: Process) -> bool:
    return congruent(collect_garbage(p), collect_garbage(q))
