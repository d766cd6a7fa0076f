"""Command-line driver.

Exit codes: 0 ok, 1 parse or validation error, 2 property fails,
3 unknown (a bound was hit), 4 internal defect.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus
from .checkers import (
    ChannelError,
    Outcome,
    StepMode,
    Verdict,
    can_step,
    must_succeed,
    solves_leader_election_bouge,
    solves_leader_election_indexed,
)
from .concrete import ParseError, parse, pretty
from .congruence import canonical
from .execution import (
    FragmentError,
    RestoreDefect,
    check_local_confluence,
    enumerate_executions,
    has_symmetric_execution,
    subdivide,
    symmetric_execution,
    validate_symmetric_execution,
)
from .names import SymmetryRelation, parse_permutation
from .report import (
    dumps,
    execution_json,
    network_json,
    report,
    symexec_from_json,
    symexec_json,
    term_json,
    transition_json,
    verdict_json,
)
from .semantics import IllFormedError, UniverseError, transitions
from .symmetry import NetworkError, build

OK, INVALID, FAILS, UNKNOWN, DEFECT = 0, 1, 2, 3, 4
EXIT_FOR = {Outcome.HOLDS: OK, Outcome.FAILS: FAILS, Outcome.UNKNOWN: UNKNOWN}


class UsageError(ValueError):
    pass


def _names(text: str | None) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()] if text else []


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from err


def _term(path: str):
    return parse(_read(path), check="clash")


def _network(args):
    base = parse(_read(args.base))
    sigma = SymmetryRelation(parse_permutation(args.perm or ""), args.degree)
    net, term = build(base, sigma, _names(args.restrict))
    descriptor = {"base": args.base, "perm": args.perm or "", "degree": args.degree,
                  "restriction": _names(args.restrict)}
    return net, term, descriptor


# -- commands ----------------------------------------------------------------


def cmd_parse(args):
    p = _term(args.file)
    doc = report("parse", args.file, **term_json(p))
    return OK, doc, f"{pretty(p)}\ncanonical: {canonical(p)}"


def cmd_steps(args):
    p = _term(args.file)
    universe = _names(args.universe) or None
    moves = transitions(p, universe)
    doc = report("steps", args.file, {"universe": _names(args.universe)},
                 steps=[transition_json(t) for t in moves])
    lines = [f"--{t.label}--> {pretty(t.target)}" for t in moves] or ["(no transitions)"]
    return OK, doc, "\n".join(lines)


def cmd_explore(args):
    p = _term(args.file)
    observables = set(_names(args.observables)) if args.observables is not None else None
    execs = enumerate_executions(p, max_depth=args.max_depth, observables=observables)
    truncated = any(e.truncated for e in execs)
    bounds = {"maxDepth": args.max_depth}
    if observables is not None:
        bounds["observables"] = sorted(observables)
    doc = report("explore", args.file, bounds, executions=[execution_json(e) for e in execs], truncated=truncated)
    lines = []
    for e in execs:
        tag = "maximal" if e.maximal else "truncated" if e.truncated else "loop" if e.looping else "partial"
        trace = " . ".join(str(x) for x in e.labels) or "(empty)"
        lines.append(f"[{tag}] {trace}  =>  {pretty(e.final)}")
    lines.append(f"{sum(e.maximal for e in execs)} maximal of {len(execs)} executions")
    return (UNKNOWN if truncated else OK), doc, "\n".join(lines)


def cmd_symnet(args):
    net, term, descriptor = _network(args)
    doc = report("symnet", descriptor, network=network_json(net))
    return OK, doc, pretty(term)


def _render_rounds(sx) -> str:
    lines = []
    for k, rnd in enumerate(sx.rounds):
        labels = ", ".join(str(x) for x in rnd.labels)
        lines.append(f"round {k}: [{labels}]  sigma {{{rnd.sigma.perm.literal()}}}")
    state = "complete" if sx.complete else "loops" if sx.looping else "prefix"
    lines.append(f"{len(sx.rounds)} rounds, {state}; final {pretty(sx.final.term)}")
    return "\n".join(lines)


def cmd_symexec(args):
    net, _, descriptor = _network(args)
    sx = symmetric_execution(net, max_rounds=args.max_rounds)
    problems = validate_symmetric_execution(sx)
    if problems:
        raise RestoreDefect("; ".join(problems))
    body = symexec_json(sx)
    doc = report("symexec", descriptor, {"maxRounds": args.max_rounds}, execution=body,
                 rounds=body["rounds"], sigmaChain=body["sigmaChain"], truncated=not (sx.complete or sx.looping))
    return OK, doc, _render_rounds(sx)


def cmd_find_symexec(args):
    net, _, descriptor = _network(args)
    found = has_symmetric_execution(net, max_rounds=args.max_rounds, limit=args.limit)
    code = {"yes": OK, "no": FAILS}.get(found.outcome, UNKNOWN)
    doc = report("find-symexec", descriptor, {"maxRounds": args.max_rounds, "limit": args.limit},
                 verdict=found.outcome, explored=found.explored, truncated=found.outcome == "unknown")
    text = f"symmetric execution: {found.outcome} ({found.explored} networks explored)"
    if found.witness is not None:
        doc["execution"] = symexec_json(found.witness)
        text += "\n" + _render_rounds(found.witness)
    return code, doc, text


def cmd_subdivide(args):
    try:
        source = json.loads(_read(args.exec))
        sx = symexec_from_json(source)
    except (json.JSONDecodeError, KeyError, TypeError) as err:
        raise UsageError(f"not a symmetric-execution report: {err}") from err
    problems = validate_symmetric_execution(sx)
    if problems:
        raise UsageError("report does not replay: " + "; ".join(problems))
    small = subdivide(sx, args.degree_prime)
    body = symexec_json(small)
    doc = report("subdivide", args.exec, {"degreePrime": args.degree_prime}, execution=body,
                 rounds=body["rounds"], sigmaChain=body["sigmaChain"])
    return OK, doc, _render_rounds(small)


def _verdict(command: str, file: str, verdict: Verdict, bounds: dict):
    doc = report(command, file, bounds, verdict=verdict_json(verdict), truncated=verdict.unknown)
    text = verdict.outcome.value + (f": {verdict.reason}" if verdict.reason else "")
    if verdict.witness is not None and verdict.witness.steps:
        text += "\nwitness: " + " . ".join(str(x) for x in verdict.witness.labels)
    return EXIT_FOR[verdict.outcome], doc, text


def cmd_check(args):
    p = _term(args.file)
    bounds = {"maxDepth": args.max_depth}
    match args.property:
        case "leader-election":
            if not (args.leader and args.slave):
                raise UsageError("leader-election needs --leader and --slave")
            v = solves_leader_election_bouge(p, args.leader, args.slave, args.components, args.max_depth)
        case "leader-indexed":
            if not args.out:
                raise UsageError("leader-indexed needs --out")
            v = solves_leader_election_indexed(p, args.out, args.components, args.max_depth)
        case "must-succeed":
            v = must_succeed(p, args.max_depth)
        case "can-step":
            mode = StepMode(args.mode)
            steps = can_step(p, mode)
            doc = report("check can-step", args.file, {"mode": mode.value}, verdict="holds" if steps else "fails")
            return (OK if steps else FAILS), doc, f"can step ({mode.value}): {steps}"
    return _verdict(f"check {args.property}", args.file, v, bounds)


def cmd_confluence(args):
    p = _term(args.file)
    v = check_local_confluence(p, _names(args.universe) or None, require_separate=not args.allow_mixed)
    doc = report("confluence", args.file, {}, verdict="holds" if v.holds else "fails", checked=v.checked)
    if v.holds:
        return OK, doc, f"locally confluent ({v.checked} output/input pairs)"
    first, second = v.labels
    doc["counterexample"] = {"labels": [str(first), str(second)], "states": [pretty(s) for s in v.states]}
    return FAILS, doc, f"not confluent: {first} and {second} do not commute"


def cmd_verify(args):
    results = corpus.run_all() if not args.only else [corpus.run(n) for n in args.only]
    rows = [{"criterion": r.number, "title": r.title, "passed": r.passed, "detail": r.detail,
             "seconds": round(r.seconds, 2)} for r in results]
    ok = all(r.passed for r in results)
    doc = report("verify-paper", None, verdict="holds" if ok else "fails", results=rows)
    lines = [r.line() for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} criteria pass")
    return (OK if ok else FAILS), doc, "\n".join(lines)


# -- argument parsing ------------------------------------------------------------


def _network_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--base", required=True, help="file holding the base process")
    p.add_argument("--perm", default="", help="permutation literal such as x>y,y>x")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--restrict", help="comma-separated restricted names")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pisym", description="Symmetric networks of pi-calculus processes.")
    parser.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    parser.add_argument("--report", metavar="FILE", help="also write the JSON report to FILE")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a term and print its canonical form")
    p.add_argument("file")
    p.set_defaults(run=cmd_parse)

    p = sub.add_parser("steps", help="one-step transitions")
    p.add_argument("file")
    p.add_argument("--universe", help="names used to instantiate inputs")
    p.set_defaults(run=cmd_steps)

    p = sub.add_parser("explore", help="enumerate executions")
    p.add_argument("file")
    p.add_argument("--max-depth", type=int, default=32)
    p.add_argument("--observables", help="closed world: only these free channels are visible")
    p.set_defaults(run=cmd_explore)

    p = sub.add_parser("symnet", help="build a symmetric network")
    _network_args(p)
    p.set_defaults(run=cmd_symnet)

    p = sub.add_parser("symexec", help="construct a symmetric execution (separate choice)")
    _network_args(p)
    p.add_argument("--max-rounds", type=int, default=64)
    p.set_defaults(run=cmd_symexec)

    p = sub.add_parser("find-symexec", help="search for any symmetric execution")
    _network_args(p)
    p.add_argument("--max-rounds", type=int, default=16)
    p.add_argument("--limit", type=int, default=200_000, help="networks explored before giving up")
    p.set_defaults(run=cmd_find_symexec)

    p = sub.add_parser("subdivide", help="restrict a saved symmetric execution to fewer components")
    p.add_argument("--exec", required=True, metavar="REPORT")
    p.add_argument("--degree-prime", type=int, required=True)
    p.set_defaults(run=cmd_subdivide)

    p = sub.add_parser("check", help="decide a property of a network")
    p.add_argument("property", choices=["leader-election", "leader-indexed", "must-succeed", "can-step"])
    p.add_argument("file")
    p.add_argument("--components", type=int, default=2)
    p.add_argument("--leader")
    p.add_argument("--slave")
    p.add_argument("--out")
    p.add_argument("--mode", choices=[m.value for m in StepMode], default="tau")
    p.add_argument("--max-depth", type=int, default=32)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("confluence", help="check local confluence of outputs and inputs")
    p.add_argument("file")
    p.add_argument("--universe")
    p.add_argument("--allow-mixed", action="store_true", help="run even on mixed-choice terms")
    p.set_defaults(run=cmd_confluence)

    p = sub.add_parser("verify-paper", help="run the acceptance corpus")
    p.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    p.set_defaults(run=cmd_verify)
    return parser


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        code, doc, text = args.run(args)
    except ParseError as e:
        print(f"parse error: {e}", file=err)
        return INVALID
    except (UsageError, NetworkError, FragmentError, ChannelError, IllFormedError, UniverseError, ValueError) as e:
        print(f"error: {e}", file=err)
        return INVALID
    except RestoreDefect as e:
        print(f"internal defect: {e}", file=err)
        return DEFECT
    if args.report:
        Path(args.report).write_text(dumps(doc) + "\n", encoding="utf-8")
    print(dumps(doc) if args.json else text, file=out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
