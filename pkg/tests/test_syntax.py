import pytest

from pisym.syntax import (
    NIL,
    SUCCESS,
    UNIT,
    Fragment,
    In,
    Out,
    Par,
    Res,
    Sum,
    all_names,
    bound_names,
    choice,
    classify,
    free_names,
    inp,
    is_name,
    new,
    no_clash,
    out,
    par,
    size,
    tau,
    well_formed,
)


def test_nil_is_the_empty_sum():
    assert NIL == Sum(())
    assert free_names(NIL) == frozenset()


def test_unit_is_never_a_name():
    p = par(out("a"), inp("b", cont=out("c")))
    assert UNIT not in free_names(p)
    assert UNIT not in bound_names(p)


def test_free_and_bound_names():
    # new x.(a!x.0 | a?(z).z!b.0)
    p = new("x", par(out("a", "x"), inp("a", "z", out("z", "b"))))
    assert free_names(p) == {"a", "b"}
    assert bound_names(p) == {"x", "z"}
    assert all_names(p) == {"a", "b", "x", "z"}


def test_input_binds_in_continuation_only():
    p = inp("z", "z", out("z"))
    assert free_names(p) == {"z"}


def test_par_of_one_is_that_component():
    assert par(out("a")) == out("a")
    assert par() == NIL


def test_new_accepts_several_binders():
    p = new(["x", "y"], out("x", "y"))
    assert isinstance(p, Res) and isinstance(p.body, Res)
    assert free_names(p) == frozenset()


def test_choice_flattens_sums():
    p = choice(out("a"), inp("b"), tau())
    assert isinstance(p, Sum) and len(p.branches) == 3


def test_well_formed_rejects_free_and_bound_clash():
    p = par(out("x"), new("x", out("x")))
    assert not well_formed(p)


def test_well_formed_rejects_repeated_binder():
    p = par(new("x", out("x")), new("x", out("x")))
    assert not well_formed(p)
    assert no_clash(p)


def test_classify_fragments():
    assert classify(par(out("a"), inp("a"))) is Fragment.CHOICE_FREE
    assert classify(choice(out("a"), out("b"))) is Fragment.SEPARATE_CHOICE
    assert classify(choice(out("a"), tau(), out("b"))) is Fragment.SEPARATE_CHOICE
    assert classify(choice(inp("a"), out("a"))) is Fragment.MIXED


def test_size_counts_prefixes():
    assert size(NIL) == 1
    assert size(out("a")) > size(NIL)
    assert size(par(out("a"), out("a"))) > size(out("a"))


@pytest.mark.parametrize("token,ok", [("a", True), ("x'1", True), ("_w0", True), ("1", True), ("a b", False), ("", False)])
def test_is_name(token, ok):
    assert is_name(token) is ok


def test_prefix_defaults():
    assert Out("a").datum == UNIT
    assert In("a").binder == UNIT
    assert isinstance(Par((NIL, SUCCESS)), Par)
