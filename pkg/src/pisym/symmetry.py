"""Symmetric networks, indexed substitution and symmetric label sequences."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .congruence import congruent
from .names import (
    Substitution,
    SymmetryRelation,
    apply,
    identity,
    power,
    validate_symmetry,
)
from .semantics import Label, LabelKind, NetState, decompose
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
    bound_names,
    free_names,
    new,
    no_clash,
    par,
)


class NetworkError(ValueError):
    """A symmetric-network invariant does not hold; ``reason`` names it."""

    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.detail = detail


@dataclass(frozen=True)
class SymmetricNetwork:
    """``(new x~)(P | sigma(P) | ... | sigma^(n-1)(P))``."""

    restriction: tuple[str, ...]
    base: Process
    relation: SymmetryRelation

    @property
    def degree(self) -> int:
        return self.relation.degree

    def component(self, k: int) -> Process:
        return apply(power(self.relation, k), self.base)

    def components(self) -> tuple[Process, ...]:
        return tuple(self.component(k) for k in range(self.degree))

    @property
    def state(self) -> NetState:
        return NetState(tuple(self.restriction), self.components())

    @property
    def term(self) -> Process:
        return self.state.term


def check_network(net: SymmetricNetwork) -> None:
    """Raise ``NetworkError`` unless every construction-time invariant holds."""
    base, sigma, x = net.base, net.relation, list(net.restriction)
    if len(set(x)) != len(x):
        raise NetworkError("duplicate-restriction", ",".join(x))
    stray = sorted(set(x) - free_names(base))
    if stray:
        raise NetworkError("restriction-not-free", ",".join(stray))
    verdict = validate_symmetry(sigma.perm, sigma.degree, bound_names(base))
    if not verdict:
        raise NetworkError(verdict.reason, verdict.detail)
    open_ = sorted(n for n in x if sigma(n) not in x)
    if open_:
        raise NetworkError("restriction-not-closed", ",".join(open_))
    clash = no_clash(net.term)
    if not clash:
        raise NetworkError("ill-formed", str(clash))


def build(base: Process, sigma: SymmetryRelation, restriction: Iterable[str] = ()) -> tuple[SymmetricNetwork, Process]:
    net = SymmetricNetwork(tuple(restriction), base, sigma)
    check_network(net)
    return net, net.term


def denote(net: SymmetricNetwork) -> Process:
    return net.term


def indexed_substitute(net: SymmetricNetwork, replacements: Mapping[int, Process]) -> Process:
    comps = list(net.components())
    for i, q in replacements.items():
        if not 0 <= i < net.degree:
            raise IndexError(f"component index {i} outside 0..{net.degree - 1}")
        comps[i] = q
    return new(net.restriction, par(*comps))


def symmetric_action_sequence(mu: Label, sigma: SymmetryRelation, restriction: Iterable[str]) -> list[Label]:
    """The n labels generated by ``mu``; entry k is the image under sigma^k.

    Inputs keep their object; a bound output stays bound while its image has
    not been extruded earlier in the sequence.
    """
    x = list(restriction)
    seq = [mu]
    for k in range(1, sigma.degree):
        s = power(sigma, k)
        match mu.kind:
            case LabelKind.TAU:
                seq.append(mu)
            case LabelKind.FREE_INPUT:
                seq.append(Label(mu.kind, s(mu.subject), mu.obj))
            case LabelKind.FREE_OUTPUT:
                seq.append(mu.renamed(s))
            case LabelKind.BOUND_OUTPUT:
                b = mu.obj
                earlier = {power(sigma, m)(b) for m in range(k)}
                remaining = [n for n in x if n not in earlier]
                kind = LabelKind.BOUND_OUTPUT if s(b) in remaining else LabelKind.FREE_OUTPUT
                seq.append(Label(kind, s(mu.subject), s(b)))
    return seq


def _split(term: Process | NetState, degree: int) -> NetState | None:
    state = term if isinstance(term, NetState) else decompose(term)
    if len(state.comps) == degree:
        return state
    if degree == 1:
        body = par(*state.comps)
        return NetState(state.restriction, (body,))
    return None


def is_symmetric(
    term: Process | NetState,
    sigma: SymmetryRelation,
    restriction: Iterable[str],
    lenient: bool = False,
) -> bool:
    """Literal recognition: each component is sigma of its predecessor.

    The outer restrictions must be exactly ``restriction`` (as a set).  With
    ``lenient`` the component check is up to structural congruence; this mode
    is for diagnostics only.
    """
    state = _split(term, sigma.degree)
    if state is None or set(state.restriction) != set(restriction):
        return False
    if len(set(state.restriction)) != len(state.restriction):
        return False
    comps = state.comps
    n = len(comps)
    for k in range(n):
        image = apply(sigma.perm, comps[k])
        succ = comps[(k + 1) % n]
        if image != succ and not (lenient and congruent(image, succ)):
            return False
    return True


# -- discovery ---------------------------------------------------------------


def align(a: Process, b: Process, mapping: dict[str, str], bound: set[str]) -> bool:
    """Positional alignment of ``a`` onto ``b`` without alpha-conversion.

    Extends ``mapping`` on free names so that renaming ``a`` gives ``b``;
    binders must coincide.  Returns False when the shapes differ.
    """

    def name(x: str, y: str) -> bool:
        if x == UNIT or y == UNIT:
            return x == y
        if x in bound or y in bound:
            return x == y
        if mapping.setdefault(x, y) != y:
            return False
        return True

    match a, b:
        case Sum(ba), Sum(bb):
            if len(ba) != len(bb):
                return False
            for (pa, ca), (pb, cb) in zip(ba, bb):
                match pa, pb:
                    case Out(x1, y1), Out(x2, y2):
                        if not (name(x1, x2) and name(y1, y2)):
                            return False
                        if not align(ca, cb, mapping, bound):
                            return False
                    case In(x1, z1), In(x2, z2):
                        if z1 != z2 or not name(x1, x2):
                            return False
                        if not align(ca, cb, mapping, bound | {z1}):
                            return False
                    case Tau(), Tau():
                        if not align(ca, cb, mapping, bound):
                            return False
                    case _:
                        return False
            return True
        case Par(ca), Par(cb):
            return len(ca) == len(cb) and all(align(x, y, mapping, bound) for x, y in zip(ca, cb))
        case Res(z1, b1), Res(z2, b2):
            return z1 == z2 and align(b1, b2, mapping, bound | {z1})
        case Rep(b1), Rep(b2):
            return align(b1, b2, mapping, bound)
        case Success(), Success():
            return True
    return False


def close_permutation(mapping: Mapping[str, str], degree: int) -> Substitution | None:
    """Complete an injective partial map to a permutation of the given degree."""
    if len(set(mapping.values())) != len(mapping):
        return None
    full = dict(mapping)
    inverse = {v: k for k, v in full.items()}
    for start in list(full):
        if start in inverse:
            continue
        end = start
        while end in full:
            end = full[end]
        full[end] = start
        inverse[start] = end
    perm = Substitution(full)
    verdict = validate_symmetry(perm, degree)
    return perm if verdict else None


def discover_symmetry(term: Process, degree: int, max_candidates: int = 10_000):
    """Find ``(sigma, restriction)`` under which ``term`` is literally symmetric."""
    state = _split(term, degree)
    if state is None:
        return None
    comps = state.comps
    restriction = tuple(state.restriction)
    if degree == 1:
        return identity(1), restriction
    mapping: dict[str, str] = {}
    tried = 0
    for k in range(degree):
        if not align(comps[k], comps[(k + 1) % degree], mapping, set()):
            return None
        tried += 1
        if tried > max_candidates:
            return None
    perm = close_permutation(mapping, degree)
    if perm is None:
        return None
    sigma = SymmetryRelation(perm, degree)
    if any(sigma(x) not in restriction for x in restriction):
        return None
    if is_symmetric(state, sigma, restriction):
        return sigma, restriction
    return None
