"""Substitutions, symmetry relations and fresh names."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

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
    free_names,
)


class Substitution:
    """Finite simultaneous renaming; identity outside its support."""

    __slots__ = ("_map", "_hash")

    def __init__(self, mapping: Mapping[str, str] | Iterable[tuple[str, str]] = ()):
        if isinstance(mapping, dict) or isinstance(mapping, Mapping):
            items = mapping.items()
        else:
            items = mapping
        m = {}
        for k, v in items:
            if UNIT in (k, v):
                raise ValueError("the unit name cannot be renamed")
            if k != v:
                m[k] = v
        self._map = m
        self._hash = None

    def __call__(self, name: str) -> str:
        return self._map.get(name, name)

    def __bool__(self):
        return bool(self._map)

    def __eq__(self, other):
        return isinstance(other, Substitution) and self._map == other._map

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __repr__(self):
        return f"Substitution({self.literal() or 'id'})"

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self._map)

    def items(self):
        return sorted(self._map.items())

    def as_dict(self) -> dict[str, str]:
        return dict(self._map)

    def is_bijective(self) -> bool:
        """Bijective on its support, i.e. a genuine permutation of names."""
        return set(self._map.values()) == set(self._map)

    def compose(self, first: "Substitution") -> "Substitution":
        """``self`` after ``first``."""
        keys = set(self._map) | set(first._map)
        return Substitution({k: self(first(k)) for k in keys})

    def without(self, names: Iterable[str]) -> "Substitution":
        drop = set(names)
        return Substitution({k: v for k, v in self._map.items() if k not in drop})

    def restricted_to(self, names: Iterable[str]) -> "Substitution":
        keep = set(names)
        return Substitution({k: v for k, v in self._map.items() if k in keep})

    def inverse(self) -> "Substitution":
        return Substitution({v: k for k, v in self._map.items()})

    def literal(self) -> str:
        """Permutation literal ``a>b,b>a`` (CLI syntax)."""
        return ",".join(f"{k}>{v}" for k, v in self.items())


ID = Substitution()


def parse_permutation(text: str) -> Substitution:
    """Parse ``a>b,b>a``; the result must be a bijection on its support."""
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        left, sep, right = chunk.partition(">")
        left, right = left.strip(), right.strip()
        if not sep or not left or not right:
            raise ValueError(f"bad permutation entry {chunk!r}")
        pairs.append((left, right))
    sources = [a for a, _ in pairs]
    if len(set(sources)) != len(sources):
        raise ValueError("permutation maps a name twice")
    s = Substitution(pairs)
    if not s.is_bijective():
        raise ValueError(f"permutation {text!r} is not a bijection")
    return s


def fresh_name(base: str, avoid) -> str:
    """Smallest ``root'k`` (k >= 1) outside ``avoid``; the root drops primes."""
    root = base.split("'", 1)[0] or "v"
    k = 1
    while f"{root}'{k}" in avoid:
        k += 1
    return f"{root}'{k}"


class FreshSupply:
    """Deterministic fresh names of the form ``base'k``."""

    def __init__(self, avoid: Iterable[str] = ()):
        self.avoid = set(avoid)
        self.counter = 0

    def fresh(self, base: str = "v") -> str:
        name = fresh_name(base, self.avoid)
        self.avoid.add(name)
        self.counter += 1
        return name

    def reserve(self, names: Iterable[str]) -> None:
        self.avoid.update(names)


def apply(s: Substitution, p: Process, supply: FreshSupply | None = None) -> Process:
    """Capture-avoiding simultaneous substitution.

    A binder is renamed only when keeping it would capture the image of a
    free name underneath it.
    """
    if not s:
        return p
    s = s.restricted_to(free_names(p))
    if not s:
        return p
    if supply is None:
        supply = FreshSupply(all_names(p) | s.support | set(s.as_dict().values()))
    return _apply(s, p, supply)


def _bind(s: Substitution, z: str, body: Process, supply: FreshSupply):
    inner = s.without([z]).restricted_to(free_names(body) - {z})
    if z in {inner(w) for w in inner.support}:
        z2 = supply.fresh(z)
        return z2, Substitution({**inner.as_dict(), z: z2})
    return z, inner


def _apply(s: Substitution, p: Process, supply: FreshSupply) -> Process:
    if not s:
        return p
    match p:
        case Sum(branches):
            out_branches = []
            for pre, cont in branches:
                match pre:
                    case Out(x, y):
                        pre2 = Out(s(x), y if y == UNIT else s(y))
                        cont2 = _apply(s, cont, supply)
                    case In(x, z) if z == UNIT:
                        pre2 = In(s(x), UNIT)
                        cont2 = _apply(s, cont, supply)
                    case In(x, z):
                        z2, inner = _bind(s, z, cont, supply)
                        pre2 = In(s(x), z2)
                        cont2 = _apply(inner, cont, supply)
                    case Tau():
                        pre2 = pre
                        cont2 = _apply(s, cont, supply)
                out_branches.append((pre2, cont2))
            return Sum(tuple(out_branches))
        case Par(components):
            return Par(tuple(_apply(s, c, supply) for c in components))
        case Res(z, body):
            z2, inner = _bind(s, z, body, supply)
            return Res(z2, _apply(inner, body, supply))
        case Rep(body):
            return Rep(_apply(s, body, supply))
        case Success():
            return p
    raise TypeError(f"not a process: {p!r}")


def rename_binder(p: Process, old: str, new: str) -> Process:
    """Alpha-convert every binder named ``old`` to ``new``.

    ``new`` must not occur in ``p``.
    """
    if new in all_names(p):
        raise ValueError(f"{new} already occurs in the term")

    def go(q: Process) -> Process:
        match q:
            case Sum(branches):
                bs = []
                for pre, cont in branches:
                    if isinstance(pre, In) and pre.binder == old:
                        bs.append((In(pre.channel, new), apply(Substitution({old: new}), go(cont))))
                    else:
                        bs.append((pre, go(cont)))
                return Sum(tuple(bs))
            case Par(components):
                return Par(tuple(go(c) for c in components))
            case Res(z, body):
                if z == old:
                    return Res(new, apply(Substitution({old: new}), go(body)))
                return Res(z, go(body))
            case Rep(body):
                return Rep(go(body))
        return q

    return go(p)


@dataclass(frozen=True)
class SymmetryRelation:
    """A name permutation ``perm`` with ``perm`` to the power ``degree`` = id.

    The degree need not be minimal.
    """

    perm: Substitution
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be at least 1")
        if not self.perm.is_bijective():
            raise ValueError("symmetry relation is not a bijection")
        if _power(self.perm, self.degree):
            raise ValueError(f"perm^{self.degree} is not the identity")

    def __call__(self, name: str) -> str:
        return self.perm(name)

    @property
    def support(self) -> frozenset[str]:
        return self.perm.support

    def power(self, i: int) -> Substitution:
        return power(self, i)

    def extends(self, other: "SymmetryRelation") -> bool:
        """``other`` is contained in ``self`` (agrees on other's support)."""
        return all(self.perm(x) == other.perm(x) for x in other.support)


def identity(degree: int) -> SymmetryRelation:
    return SymmetryRelation(ID, degree)


def _power(s: Substitution, i: int) -> Substitution:
    result = ID
    for _ in range(i):
        result = s.compose(result)
    return result


def power(s: SymmetryRelation | Substitution, i: int) -> Substitution:
    perm = s.perm if isinstance(s, SymmetryRelation) else s
    if isinstance(s, SymmetryRelation):
        i %= s.degree
    if i < 0:
        raise ValueError("negative power of a plain substitution")
    return _power(perm, i)


@dataclass(frozen=True)
class SymmetryVerdict:
    ok: bool
    reason: str | None = None
    detail: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "ok" if self.ok else f"{self.reason}: {self.detail}"


def validate_symmetry(perm: Substitution, n: int, forbidden: Iterable[str] = ()) -> SymmetryVerdict:
    if not perm.is_bijective():
        return SymmetryVerdict(False, "not-bijective", perm.literal())
    touched = sorted(perm.support & set(forbidden))
    if touched:
        return SymmetryVerdict(False, "touches-forbidden-name", ",".join(touched))
    if n < 1 or _power(perm, n):
        return SymmetryVerdict(False, "wrong-degree", f"power {n} is not the identity")
    return SymmetryVerdict(True)


def extend_symmetry(s: SymmetryRelation, cycle: list[str]) -> SymmetryRelation:
    """Add the cycle ``cycle[0] -> cycle[1] -> ... -> cycle[0]`` to ``s``."""
    if len(set(cycle)) != len(cycle):
        raise ValueError("cycle names must be pairwise distinct")
    overlap = sorted(set(cycle) & s.support)
    if overlap:
        raise ValueError(f"cycle overlaps the existing support: {overlap}")
    if not cycle or s.degree % len(cycle):
        raise ValueError(f"cycle length {len(cycle)} does not divide degree {s.degree}")
    m = s.perm.as_dict()
    for k, name in enumerate(cycle):
        m[name] = cycle[(k + 1) % len(cycle)]
    return SymmetryRelation(Substitution(m), s.degree)


def apply_label(s: Substitution, label):
    """Rename subject and object of a label; the kind is left alone."""
    return label.renamed(s)
