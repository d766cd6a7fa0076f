"""Abstract syntax of pi-calculus terms with guarded (possibly mixed) choice.

Terms are immutable dataclasses.  The calculus is monadic; prefixes that carry
no datum use the reserved name ``UNIT`` in the datum/binder position, and
``UNIT`` never counts as a free or bound name.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Union

UNIT = "_unit"

NAME_RE = re.compile(r"[A-Za-z0-9_'][A-Za-z0-9_']*")


@dataclass(frozen=True)
class Out:
    channel: str
    datum: str = UNIT


@dataclass(frozen=True)
class In:
    channel: str
    binder: str = UNIT


@dataclass(frozen=True)
class Tau:
    pass


Prefix = Union[Out, In, Tau]


class _Node:
    """Structural hash is cached; terms are hashed a lot during exploration."""

    __slots__ = ()

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((type(self).__name__,) + self._key())
            object.__setattr__(self, "_hash", h)
        return h


@dataclass(frozen=True, eq=True)
class Sum(_Node):
    """Guarded choice; the empty sum is the nil process."""

    branches: tuple[tuple[Prefix, "Process"], ...] = ()

    def _key(self):
        return (self.branches,)

    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Par(_Node):
    components: tuple["Process", ...]

    def __post_init__(self):
        if len(self.components) < 2:
            raise ValueError("Par needs at least two components")

    def _key(self):
        return (self.components,)

    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Res(_Node):
    binder: str
    body: "Process"

    def _key(self):
        return (self.binder, self.body)

    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Rep(_Node):
    body: "Process"

    def _key(self):
        return (self.body,)

    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Success(_Node):
    """The success marker (written ``check`` in concrete syntax)."""

    def _key(self):
        return ()

    __hash__ = _Node.__hash__


Process = Union[Sum, Par, Res, Rep, Success]

NIL = Sum()
SUCCESS = Success()


# -- convenience constructors -------------------------------------------------

def out(channel: str, datum: str = UNIT, cont: Process = NIL) -> Sum:
    return Sum(((Out(channel, datum), cont),))


def inp(channel: str, binder: str = UNIT, cont: Process = NIL) -> Sum:
    return Sum(((In(channel, binder), cont),))


def tau(cont: Process = NIL) -> Sum:
    return Sum(((Tau(), cont),))


def choice(*alternatives: Sum) -> Sum:
    branches = []
    for alt in alternatives:
        if not isinstance(alt, Sum):
            raise TypeError(f"choice operand is not guarded: {alt!r}")
        branches.extend(alt.branches)
    return Sum(tuple(branches))


def par(*components: Process) -> Process:
    """Parallel composition; collapses to the single component (or nil)."""
    if not components:
        return NIL
    if len(components) == 1:
        return components[0]
    return Par(tuple(components))


def new(binders: Union[str, Iterable[str]], body: Process) -> Process:
    if isinstance(binders, str):
        binders = [binders]
    for b in reversed(list(binders)):
        body = Res(b, body)
    return body


# -- names ------------------------------------------------------------------

@lru_cache(maxsize=200_000)
def free_names(p: Process) -> frozenset[str]:
    match p:
        case Sum(branches):
            acc: set[str] = set()
            for pre, cont in branches:
                match pre:
                    case Out(x, y):
                        acc.update((x, y))
                        acc |= free_names(cont)
                    case In(x, z):
                        acc.add(x)
                        acc |= free_names(cont) - {z}
                    case Tau():
                        acc |= free_names(cont)
            acc.discard(UNIT)
            return frozenset(acc)
        case Par(components):
            return frozenset().union(*(free_names(c) for c in components))
        case Res(z, body):
            return free_names(body) - {z}
        case Rep(body):
            return free_names(body)
        case Success():
            return frozenset()
    raise TypeError(f"not a process: {p!r}")


def binders(p: Process) -> Iterator[str]:
    """Every binding occurrence, in pre-order, duplicates included."""
    match p:
        case Sum(branches):
            for pre, cont in branches:
                if isinstance(pre, In) and pre.binder != UNIT:
                    yield pre.binder
                yield from binders(cont)
        case Par(components):
            for c in components:
                yield from binders(c)
        case Res(z, body):
            yield z
            yield from binders(body)
        case Rep(body):
            yield from binders(body)


def bound_names(p: Process) -> frozenset[str]:
    return frozenset(binders(p))


@lru_cache(maxsize=200_000)
def all_names(p: Process) -> frozenset[str]:
    """Free and bound names together (used to pick fresh names)."""
    match p:
        case Sum(branches):
            acc: set[str] = set()
            for pre, cont in branches:
                match pre:
                    case Out(x, y):
                        acc.update((x, y))
                    case In(x, z):
                        acc.update((x, z))
                acc |= all_names(cont)
            acc.discard(UNIT)
            return frozenset(acc)
        case Par(components):
            return frozenset().union(*(all_names(c) for c in components))
        case Res(z, body):
            return all_names(body) | {z}
        case Rep(body):
            return all_names(body)
        case Success():
            return frozenset()
    raise TypeError(f"not a process: {p!r}")


@dataclass(frozen=True)
class WellFormedness:
    ok: bool
    name: str | None = None
    reason: str | None = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "ok"
        return f"violation({self.name}: {self.reason})"


def well_formed(p: Process) -> WellFormedness:
    """Bound names pairwise distinct and disjoint from the free names."""
    seen: set[str] = set()
    for b in binders(p):
        if b in seen:
            return WellFormedness(False, b, "reused")
        seen.add(b)
    clash = sorted(seen & free_names(p))
    if clash:
        return WellFormedness(False, clash[0], "both bound and free")
    return WellFormedness(True)


def no_clash(p: Process) -> WellFormedness:
    """Weaker discipline: binders may repeat in disjoint scopes, but no bound
    name is also free.  Symmetric networks share binders between components,
    so this is the condition used for network terms."""
    clash = sorted(bound_names(p) & free_names(p))
    if clash:
        return WellFormedness(False, clash[0], "both bound and free")
    return WellFormedness(True)


# -- fragments --------------------------------------------------------------

class Fragment(enum.Enum):
    CHOICE_FREE = "choice-free"
    SEPARATE_CHOICE = "separate-choice"
    MIXED = "mixed"


def sums(p: Process) -> Iterator[Sum]:
    match p:
        case Sum(branches):
            yield p
            for _, cont in branches:
                yield from sums(cont)
        case Par(components):
            for c in components:
                yield from sums(c)
        case Res(_, body) | Rep(body):
            yield from sums(body)


def classify(p: Process) -> Fragment:
    """Tightest fragment containing ``p``; tau guards are allowed on either
    side of a separate choice."""
    widest = Fragment.CHOICE_FREE
    for s in sums(p):
        kinds = {type(pre) for pre, _ in s.branches}
        if In in kinds and Out in kinds:
            return Fragment.MIXED
        if len(s.branches) > 1:
            widest = Fragment.SEPARATE_CHOICE
    return widest


def size(p: Process) -> int:
    """Number of AST nodes; every prefix counts as one node."""
    match p:
        case Sum(branches):
            return 1 + sum(1 + size(c) for _, c in branches)
        case Par(components):
            return 1 + sum(size(c) for c in components)
        case Res(_, body) | Rep(body):
            return 1 + size(body)
        case Success():
            return 1
    raise TypeError(f"not a process: {p!r}")


def is_name(token: str) -> bool:
    return bool(NAME_RE.fullmatch(token))
