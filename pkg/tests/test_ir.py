import pytest

from irplus.category import discrete_category
from irplus.fam import FamMorphism, FamObject, fam_identity
from irplus.ir import (
    IRDelta,
    IRIota,
    IRSigma,
    NonSplitInput,
    interpret_ir_mor,
    interpret_ir_obj,
    ir_codes_equal,
    ir_plus,
)
from irplus.oracle import enumerate_fam_morphisms, enumerate_fam_objects, ir_corpus

D = discrete_category(("a", "b"))


def test_iota_has_one_element():
    X = FamObject(D, ("x",), ("a",))
    out = interpret_ir_obj(IRIota("b"), X)
    assert out.index == ("*",) and out.fibres == ("b",)


def test_empty_sigma_is_empty():
    X = FamObject(D, ("x",), ("a",))
    assert len(interpret_ir_obj(IRSigma((), ()), X)) == 0


def test_delta_over_one_point_enumerates_elements():
    code = IRDelta((0,), lambda h: IRIota(h[0]))
    X = FamObject(D, ("x0", "x1"), ("a", "b"))
    out = interpret_ir_obj(code, X)
    assert len(out) == 2
    assert out.fibres == ("a", "b")


def test_identity_goes_to_identity():
    for code in ir_corpus(D.objects(), count=20, seed=3):
        for X in enumerate_fam_objects(D, 2):
            assert interpret_ir_mor(code, fam_identity(X)) == fam_identity(interpret_ir_obj(code, X))


def test_delta_summands_move_along_the_index_map():
    code = IRDelta((0,), lambda h: IRIota(h[0]))
    X = FamObject(D, ("x",), ("a",))
    Y = FamObject(D, ("y0", "y1"), ("b", "a"))
    m = FamMorphism(X, Y, ("y1",), (("id", "a"),))
    out = interpret_ir_mor(code, m)
    assert out.on_index == (("δ", ("y1",), "*"),)


def test_non_split_input_is_rejected():
    from irplus.category import Fn, finset_category

    C = finset_category(2)
    X = FamObject(C, (0,), (2,))
    m = FamMorphism(X, X, (0,), (Fn(2, 2, (1, 0)),))
    with pytest.raises(NonSplitInput):
        interpret_ir_mor(IRIota(1), m)


def test_structural_equality_and_plus():
    a, b = ir_corpus(D.objects(), count=2, seed=1)
    assert ir_codes_equal(a, a, D.objects())
    p = ir_plus(a, b)
    assert ir_codes_equal(p.f(0), a, D.objects()) and ir_codes_equal(p.f(1), b, D.objects())
    for X in enumerate_fam_objects(D, 1):
        assert len(interpret_ir_obj(p, X)) == len(interpret_ir_obj(a, X)) + len(interpret_ir_obj(b, X))
    for X, Y in [(x, y) for x in enumerate_fam_objects(D, 1) for y in enumerate_fam_objects(D, 1)]:
        for m in enumerate_fam_morphisms(X, Y):
            interpret_ir_mor(p, m)
