"""JSON reports: executions, symmetric executions and verdicts.

Symmetric executions round-trip exactly, so a saved report can be fed back
(for instance to ``subdivide``) and replayed through the semantics.
"""

from __future__ import annotations

import json
from typing import Any

from .concrete import parse, pretty
from .congruence import canonical
from .names import SymmetryRelation, parse_permutation
from .semantics import NetState, NetTransition, Sync, Transition, decompose, parse_label
from .symmetry import SymmetricNetwork

SCHEMA = "pisym-report/1"


def report(command: str, input: Any, bounds: dict | None = None, **fields) -> dict:
    doc = {"schema": SCHEMA, "command": command, "input": input, "bounds": bounds or {}}
    doc.update(fields)
    doc.setdefault("truncated", False)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)


def state_json(state: NetState) -> dict:
    return {"restriction": list(state.restriction), "components": [pretty(c) for c in state.comps]}


def state_from_json(doc: dict) -> NetState:
    return NetState(tuple(doc["restriction"]), tuple(parse(c, check=None) for c in doc["components"]))


def sync_json(sync: Sync | None) -> dict | None:
    if sync is None:
        return None
    return {"sender": sync.sender, "receiver": sync.receiver, "channel": sync.channel,
            "datum": sync.datum, "bound": sync.bound}


def transition_json(t: Transition | NetTransition) -> dict:
    target = t.target.term if isinstance(t, NetTransition) else t.target
    doc = {
        "label": str(t.label),
        "kind": t.label.kind.name.lower(),
        "actors": sorted(t.actors),
        "target": pretty(target),
        "targetCanonical": str(canonical(target)),
    }
    if isinstance(t, NetTransition):
        doc["source"] = state_json(t.source)
        doc["targetState"] = state_json(t.target)
        doc["sync"] = sync_json(t.sync)
    return doc


def net_transition_from_json(doc: dict) -> NetTransition:
    sync = doc.get("sync")
    return NetTransition(
        state_from_json(doc["source"]),
        parse_label(doc["label"]),
        state_from_json(doc["targetState"]),
        frozenset(doc["actors"]),
        Sync(**sync) if sync else None,
    )


def execution_json(ex) -> dict:
    return {
        "labels": [str(t.label) for t in ex.steps],
        "steps": [transition_json(t) for t in ex.steps],
        "final": pretty(ex.final),
        "finalCanonical": str(canonical(ex.final)),
        "maximal": ex.maximal,
        "truncated": ex.truncated,
        "looping": ex.looping,
    }


def network_json(net: SymmetricNetwork) -> dict:
    return {
        "base": pretty(net.base),
        "perm": net.relation.perm.literal(),
        "degree": net.degree,
        "restriction": list(net.restriction),
        "term": pretty(net.term),
    }


def network_from_json(doc: dict) -> SymmetricNetwork:
    sigma = SymmetryRelation(parse_permutation(doc["perm"]), doc["degree"])
    return SymmetricNetwork(tuple(doc["restriction"]), parse(doc["base"], check=None), sigma)


def round_json(rnd) -> dict:
    return {
        "case": rnd.case,
        "labels": [str(x) for x in rnd.labels],
        "sigma": rnd.sigma.perm.literal(),
        "restriction": list(rnd.restriction),
        "base": pretty(rnd.base),
        "cycle": list(rnd.cycle),
        "steps": [transition_json(t) for t in rnd.steps],
    }


def symexec_json(sx) -> dict:
    return {
        "network": network_json(sx.network),
        "rounds": [round_json(r) for r in sx.rounds],
        "sigmaChain": [n.relation.perm.literal() for n in sx.networks()],
        "complete": sx.complete,
        "looping": sx.looping,
        "final": pretty(sx.final.term),
    }


def symexec_from_json(doc: dict):
    from .execution import Round, SymmetricExecution

    if "network" not in doc and "execution" in doc:
        doc = doc["execution"]
    net = network_from_json(doc["network"])
    rounds = []
    for r in doc["rounds"]:
        sigma = SymmetryRelation(parse_permutation(r["sigma"]), net.degree)
        rounds.append(Round(
            tuple(parse_label(x) for x in r["labels"]),
            sigma,
            tuple(r["restriction"]),
            parse(r["base"], check=None),
            tuple(net_transition_from_json(t) for t in r["steps"]),
            r["case"],
            tuple(r["cycle"]),
        ))
    return SymmetricExecution(net, tuple(rounds), complete=doc["complete"], looping=doc.get("looping", False))


def verdict_json(verdict) -> dict:
    doc = {"outcome": verdict.outcome.value, "reason": verdict.reason}
    if verdict.witness is not None:
        doc["witness"] = execution_json(verdict.witness)
    return doc


def term_json(p) -> dict:
    state = decompose(p)
    return {"term": pretty(p), "canonical": str(canonical(p)), "components": len(state.comps)}
