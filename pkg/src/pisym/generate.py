"""Seeded random terms, permutations and networks for property suites."""

from __future__ import annotations

import random

from .names import Substitution, SymmetryRelation
from .syntax import NIL, SUCCESS, UNIT, In, Out, Par, Process, Rep, Res, Sum, Tau, free_names, size

POOL = ("a", "b", "c", "d")


class _Gen:
    def __init__(self, rng: random.Random, pool, allow_rep: bool, allow_mixed: bool):
        self.rng = rng
        self.pool = list(pool)
        self.allow_rep = allow_rep
        self.allow_mixed = allow_mixed
        self.count = 0

    def binder(self) -> str:
        self.count += 1
        return f"x{self.count}"

    def name(self, scope: list[str]) -> str:
        return self.rng.choice(self.pool + scope)

    def channel(self, scope: list[str]) -> str:
        # favour a couple of channels so that components meet
        if self.rng.random() < 0.6:
            return self.pool[self.rng.randrange(min(2, len(self.pool)))]
        return self.name(scope)

    def datum(self, scope: list[str]) -> str:
        if scope and self.rng.random() < 0.5:
            return self.rng.choice(scope)
        return self.name(scope)

    def term(self, budget: int, scope: list[str]) -> Process:
        rng = self.rng
        if budget <= 1:
            return SUCCESS if rng.random() < 0.1 else NIL
        options = ["sum"] * 5 + ["par"] * 2 + ["res"]
        if self.allow_rep and budget >= 4:
            options.append("rep")
        match rng.choice(options):
            case "par" if budget >= 3:
                left = rng.randint(1, budget - 2)
                return Par((self.term(left, scope), self.term(budget - 1 - left, scope)))
            case "res":
                z = self.binder()
                return Res(z, self.term(budget - 1, scope + [z]))
            case "rep":
                return Rep(self.guarded(budget - 1, scope))
        return self.guarded(budget, scope)

    def guarded(self, budget: int, scope: list[str]) -> Process:
        rng = self.rng
        branches = 1 if budget < 6 or rng.random() < 0.6 else 2
        polarity = rng.choice(["in", "out"])
        out = []
        remaining = budget - 1
        for k in range(branches):
            share = remaining if k == branches - 1 else rng.randint(2, max(2, remaining - 2))
            remaining -= share
            kind = rng.choice([polarity] * 4 + ["tau"])
            if self.allow_mixed:
                kind = rng.choice(["in", "out", "tau"])
            cont_budget = max(1, share - 1)
            match kind:
                case "out":
                    datum = UNIT if rng.random() < 0.3 else self.datum(scope)
                    out.append((Out(self.channel(scope), datum), self.term(cont_budget, scope)))
                case "in":
                    if rng.random() < 0.3:
                        out.append((In(self.channel(scope), UNIT), self.term(cont_budget, scope)))
                    else:
                        z = self.binder()
                        out.append((In(self.channel(scope), z), self.term(cont_budget, scope + [z])))
                case _:
                    out.append((Tau(), self.term(cont_budget, scope)))
        return Sum(tuple(out))


def random_term(
    rng: random.Random | int,
    max_size: int = 12,
    pool=POOL,
    allow_rep: bool = True,
    allow_mixed: bool = False,
) -> Process:
    """A well-formed term of at most ``max_size`` nodes.

    Free names come from ``pool``; binders are ``x1``, ``x2``, ... so they
    never clash with free names.  Without ``allow_mixed`` every sum has a
    single polarity (tau guards may join either side).
    """
    rng = random.Random(rng) if isinstance(rng, int) else rng
    while True:
        gen = _Gen(rng, pool, allow_rep, allow_mixed)
        p = gen.term(rng.randint(2, max_size), [])
        if size(p) <= max_size:
            return p


def random_symmetry(rng: random.Random | int, names, degree: int) -> SymmetryRelation:
    """A random permutation of ``names`` whose cycles all divide ``degree``."""
    rng = random.Random(rng) if isinstance(rng, int) else rng
    names = sorted(names)
    rng.shuffle(names)
    lengths = [d for d in range(1, degree + 1) if degree % d == 0]
    mapping = {}
    while names:
        k = rng.choice([m for m in lengths if m <= len(names)])
        cycle, names = names[:k], names[k:]
        for i, x in enumerate(cycle):
            mapping[x] = cycle[(i + 1) % k]
    return SymmetryRelation(Substitution(mapping), degree)


def random_restriction(rng: random.Random | int, base: Process, sigma: SymmetryRelation) -> tuple[str, ...]:
    """A union of sigma-orbits of free names of ``base``."""
    rng = random.Random(rng) if isinstance(rng, int) else rng
    fn = free_names(base)
    chosen: list[str] = []
    for x in sorted(fn):
        if x in chosen:
            continue
        orbit = [x]
        while sigma(orbit[-1]) != x:
            orbit.append(sigma(orbit[-1]))
        if all(o in fn for o in orbit) and rng.random() < 0.3:
            chosen.extend(orbit)
    return tuple(chosen)


def random_renaming(rng: random.Random | int, names, targets=("a", "b", "c", "d", "e", "f")) -> Substitution:
    """A random injective renaming of ``names`` into ``names`` plus ``targets``."""
    rng = random.Random(rng) if isinstance(rng, int) else rng
    names = sorted(names)
    codomain = sorted(set(names) | set(targets))
    images = rng.sample(codomain, len(names))
    return Substitution(dict(zip(names, images)))
