import json

from pisym.checkers import must_succeed
from pisym.concrete import parse
from pisym.execution import enumerate_executions, symmetric_execution, validate_symmetric_execution
from pisym.names import SymmetryRelation, identity, parse_permutation
from pisym.report import (
    SCHEMA,
    dumps,
    execution_json,
    network_from_json,
    network_json,
    report,
    state_from_json,
    state_json,
    symexec_from_json,
    symexec_json,
    verdict_json,
)
from pisym.semantics import decompose
from pisym.symmetry import build


def test_report_envelope():
    doc = report("parse", "f.pi", {"maxDepth": 3}, extra=1)
    assert doc["schema"] == SCHEMA
    assert doc["truncated"] is False
    assert json.loads(dumps(doc)) == doc


def test_state_round_trip():
    state = decompose(parse("new x.(x!.0 | a?(z).z!x.0)"))
    assert state_from_json(state_json(state)) == state


def test_network_round_trip():
    sigma = SymmetryRelation(parse_permutation("x>y,y>x"), 2)
    net, _ = build(parse("x!.0 + y?().0"), sigma, ["x", "y"])
    assert network_from_json(network_json(net)) == net


def test_symmetric_execution_round_trip():
    net, _ = build(parse("new x . a!x . x! . 0"), identity(2))
    sx = symmetric_execution(net)
    doc = json.loads(dumps(symexec_json(sx)))
    back = symexec_from_json(doc)
    assert back == sx
    assert validate_symmetric_execution(back) == []
    assert doc["rounds"][0]["labels"] == ["a!(x)", "a!(x'1)"]
    assert doc["sigmaChain"] == ["", "x>x'1,x'1>x", "x>x'1,x'1>x"]


def test_execution_json_lists_steps():
    (ex,) = enumerate_executions(parse("a!.b!.0"), observables={"a", "b"})
    doc = execution_json(ex)
    assert doc["labels"] == ["a!", "b!"]
    assert doc["maximal"] and not doc["truncated"]
    assert [s["actors"] for s in doc["steps"]] == [[0], [0]]


def test_verdict_json_carries_witness():
    doc = verdict_json(must_succeed(parse("a!.0 + tau.0")))
    assert doc["outcome"] == "fails"
    assert doc["witness"]["labels"] == ["tau"]
