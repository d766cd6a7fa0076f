"""Concrete syntax: a small recursive-descent parser and a matching printer.

Grammar (loosest first)::

    par      ::= choice ('|' choice)*
    choice   ::= prefixed ('+' prefixed)*
    prefixed ::= NAME '!' [NAME] ['.' prefixed]
               | NAME '?' '(' [NAME] ')' ['.' prefixed]
               | 'tau' ['.' prefixed]
               | 'new' NAME (',' NAME)* '.' par
               | '!' prefixed
               | '0' | 'check' | '(' par ')'

A missing continuation means ``0``.  ``new`` extends as far right as possible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    NIL,
    SUCCESS,
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
    no_clash,
    well_formed,
)

KEYWORDS = {"new", "tau", "check"}

_NAME = re.compile(r"[A-Za-z0-9_'][A-Za-z0-9_']*")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class _Tok:
    kind: str  # "name", "sym" or "eof"
    text: str
    pos: int


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        if src.startswith("#", pos):
            nl = src.find("\n", pos)
            pos = len(src) if nl < 0 else nl
            continue
        m = _NAME.match(src, pos)
        if m:
            toks.append(_Tok("name", m.group(), pos))
            pos = m.end()
            continue
        ch = src[pos]
        if ch in "!?().+|,":
            toks.append(_Tok("sym", ch, pos))
            pos += 1
            continue
        toks.append(_Tok("bad", ch, pos))
        pos += 1
    toks.append(_Tok("eof", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    def error(self, msg: str, tok: _Tok | None = None) -> ParseError:
        tok = tok or self.peek()
        line = self.src.count("\n", 0, tok.pos) + 1
        col = tok.pos - (self.src.rfind("\n", 0, tok.pos) + 1) + 1
        return ParseError(msg, line, col)

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.peek()
        if tok.kind == "bad":
            raise self.error(f"unexpected character {tok.text!r}", tok)
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "sym" and tok.text == text

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            found = self.peek().text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.next()

    def name(self) -> str:
        tok = self.peek()
        if tok.kind != "name" or tok.text in KEYWORDS:
            found = tok.text or "end of input"
            raise self.error(f"expected a name, found {found!r}")
        self.next()
        return tok.text

    def parse(self) -> Process:
        p = self.par()
        if self.peek().kind != "eof":
            raise self.error(f"unexpected {self.peek().text!r}")
        return p

    def par(self) -> Process:
        comps = [self.choice()]
        while self.at("|"):
            self.next()
            comps.append(self.choice())
        return comps[0] if len(comps) == 1 else Par(tuple(comps))

    def choice(self) -> Process:
        start = self.peek()
        first = self.prefixed()
        if not self.at("+"):
            return first
        operands = [(start, first)]
        while self.at("+"):
            self.next()
            tok = self.peek()
            operands.append((tok, self.prefixed()))
        branches = []
        for tok, p in operands:
            if not isinstance(p, Sum) or not p.branches:
                raise self.error("unguarded choice operand", tok)
            branches.extend(p.branches)
        return Sum(tuple(branches))

    def continuation(self) -> Process:
        if self.at("."):
            self.next()
            return self.prefixed()
        return NIL

    def prefixed(self) -> Process:
        tok = self.peek()
        if tok.kind == "sym":
            if tok.text == "(":
                self.next()
                p = self.par()
                self.expect(")")
                return p
            if tok.text == "!":
                self.next()
                return Rep(self.prefixed())
            raise self.error(f"unexpected {tok.text!r}")
        if tok.kind != "name":
            found = tok.text or "end of input"
            raise self.error(f"expected a process, found {found!r}")
        nxt = self.peek(1)
        if nxt.kind == "sym" and nxt.text in "!?" and tok.text not in KEYWORDS:
            chan = self.name()
            if self.next().text == "!":
                datum = UNIT
                if self.peek().kind == "name" and self.peek().text not in KEYWORDS:
                    datum = self.name()
                return Sum(((Out(chan, datum), self.continuation()),))
            self.expect("(")
            binder = UNIT
            if not self.at(")"):
                binder = self.name()
            self.expect(")")
            return Sum(((In(chan, binder), self.continuation()),))
        if tok.text == "tau":
            self.next()
            return Sum(((Tau(), self.continuation()),))
        if tok.text == "new":
            self.next()
            names = [self.name()]
            while self.at(","):
                self.next()
                names.append(self.name())
            self.expect(".")
            body = self.par()
            for z in reversed(names):
                body = Res(z, body)
            return body
        if tok.text == "0":
            self.next()
            return NIL
        if tok.text == "check":
            self.next()
            return SUCCESS
        raise self.error(f"unexpected name {tok.text!r}")


def parse(src: str, check: str | None = "strict") -> Process:
    """Parse a term.

    ``check`` selects the name discipline enforced on the result: ``"strict"``
    (well formed), ``"clash"`` (binders may repeat, as in networks whose
    components share bound names) or ``None``.
    """
    p = _Parser(src).parse()
    if check is not None:
        verdict = well_formed(p) if check == "strict" else no_clash(p)
        if not verdict:
            raise ParseError(str(verdict), 1, 1)
    return p


# -- printing ---------------------------------------------------------------

def _prefix(pre) -> str:
    match pre:
        case Out(x, y):
            return f"{x}!" if y == UNIT else f"{x}!{y}"
        case In(x, z):
            return f"{x}?()" if z == UNIT else f"{x}?({z})"
        case Tau():
            return "tau"
    raise TypeError(pre)


def _guarded(pre, cont: Process) -> str:
    return f"{_prefix(pre)}.{_atom(cont)}"


def _atom(p: Process) -> str:
    """Print at 'prefixed' precedence."""
    match p:
        case Sum(branches) if len(branches) == 1:
            return _guarded(*branches[0])
        case Sum(()):
            return "0"
        case Success():
            return "check"
        case Rep(body):
            return "!" + _atom(body)
    return f"({pretty(p)})"


def pretty(p: Process) -> str:
    match p:
        case Sum(()):
            return "0"
        case Sum(branches):
            return " + ".join(_guarded(pre, c) for pre, c in branches)
        case Par(components):
            parts = []
            for c in components:
                if isinstance(c, (Par, Res)):
                    parts.append(f"({pretty(c)})")
                else:
                    parts.append(pretty(c))
            return " | ".join(parts)
        case Res():
            names = []
            while isinstance(p, Res):
                names.append(p.binder)
                p = p.body
            return f"new {','.join(names)}.{pretty(p)}"
        case Rep(body):
            return "!" + _atom(body)
        case Success():
            return "check"
    raise TypeError(f"not a process: {p!r}")
