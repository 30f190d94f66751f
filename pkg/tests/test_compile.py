import itertools

import pytest

from irplus.codes import Delta, Iota, Sigma, const_functor, proj_functor
from irplus.compile import (
    NotUniform,
    bifunctor_law_failures,
    bullet,
    certify,
    code_for_id,
    code_for_k,
    compile_nest,
    default_category,
    exp_split_at,
    exponential,
    is_uniform,
    nest_family,
    plus_bifunctor,
    subst_iota,
    times_g,
)
from irplus.containers import BOTTOM, I_C, M, Comp, Id, K, Plus, Times, container_family, from_sizes, lam_example
from irplus.fam import FamObject, empty_family
from irplus.fixpoint import initial_chain
from irplus.oracle import check_functor_laws, enumerate_fam_objects, find_iso
from irplus.semantics import interpret_obj

CAT = default_category()
G = plus_bifunctor(CAT)


def test_plus_is_a_bifunctor():
    assert bifunctor_law_failures(G) == []


def test_identity_code_reproduces_its_argument():
    X = FamObject(CAT, (0, 1), (2, 3))
    out = interpret_obj(code_for_id(CAT).code, X)
    assert len(out) == 2 and sorted(out.fibres) == [2, 3]
    assert find_iso(out, X) is not None


def test_constant_code_ignores_its_argument():
    D = from_sizes([1, 0, 2])
    for X in enumerate_fam_objects(CAT, 2):
        assert find_iso(interpret_obj(code_for_k(D, CAT).code, X), container_family(D, CAT)) is not None
    assert len(interpret_obj(code_for_k(BOTTOM, CAT).code, X)) == 0


def test_substitution_and_product_on_iota():
    assert subst_iota(Iota(CAT, 1), G, 2) == Iota(CAT, G.obj(2, 1))
    g = times_g(certify(Iota(CAT, 1)), certify(Iota(CAT, 2)), G)
    assert g.code == Iota(CAT, G.obj(1, 2)) and g.spine == ("ι",)


def test_uniformity_examples():
    inner = Delta(CAT, (0,), const_functor(CAT, (0,), Iota(CAT, 1)))
    code = Sigma(CAT, (0, 1), (inner, Delta(CAT, (0, 1), proj_functor(CAT, (0, 1), 0))))
    assert is_uniform(code) == ("σ", "δ", "ι")
    same = Sigma(CAT, (0, 1), (inner, inner))
    assert is_uniform(same) == ("σ", "δ", "ι")
    branching = Sigma(CAT, (0, 1), (Iota(CAT, 1), inner))
    assert is_uniform(branching) is None
    with pytest.raises(NotUniform):
        certify(branching)
    assert is_uniform(Iota(CAT, 2)) == ("ι",)


def test_exponential_of_empty_exponent():
    g = exponential((), certify(Iota(CAT, 2)))
    out = interpret_obj(g.code, empty_family(CAT))
    assert len(out) == 1 and out.fibres == (0,)


def test_exponential_of_iota_sums_the_fibre():
    g = exponential(2, certify(Iota(CAT, 1)))
    out = interpret_obj(g.code, empty_family(CAT))
    assert len(out) == 1 and out.fibres == (2,)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_exponential_counts_and_fibres(k):
    base = code_for_id(CAT)
    g = exponential(k, base)
    for X in enumerate_fam_objects(CAT, 2, objects=(0, 1, 2)):
        inner = interpret_obj(base.code, X)
        out = interpret_obj(g.code, X)
        assert len(out) == len(inner) ** k
        for t, p in out.items():
            parts = exp_split_at(base, k, X, t)
            assert p == sum(inner.fibre(x) for x in parts)


def test_bullet_with_a_constant_container():
    g = code_for_id(CAT)
    D = from_sizes([1, 2])
    out = bullet(K(D), g)
    assert out.code == Sigma(CAT, D.shapes, tuple(exponential(p, g).code for p in D.positions))


def test_bullet_with_identity_composes():
    for C in (I_C, M, from_sizes([0, 2])):
        got = interpret_obj(bullet(Id(), code_for_k(I_C, CAT)).code, container_family(C, CAT))
        want = nest_family(Comp(Id(), K(I_C)), C, CAT)
        assert find_iso(got, want) is not None


def test_compile_identity():
    assert compile_nest(Id(), CAT) == code_for_id(CAT)


NESTS = [Id(), K(M), Plus(Id(), K(M)), Times(Id(), Id()), Comp(Id(), K(M)), Comp(Times(Id(), Id()), Id()),
         Plus(K(I_C), Comp(Id(), Id())), lam_example()]


@pytest.mark.parametrize("N", NESTS, ids=repr)
def test_compiled_code_matches_container_semantics(N):
    code = compile_nest(N, CAT)
    assert is_uniform(code.code) == code.spine
    for C in (BOTTOM, I_C, M, from_sizes([0, 2])):
        A = interpret_obj(code.code, container_family(C, CAT))
        assert find_iso(A, nest_family(N, C, CAT)) is not None


def test_lam_chain_shape_counts():
    result = initial_chain(compile_nest(lam_example(), CAT).code, 3)
    assert result.cardinalities[1:] == [1, 4, 26]
    assert result.all_split


def test_compiled_square_passes_the_law_sweep():
    assert check_functor_laws(compile_nest(Times(Id(), Id()), CAT).code).ok


def test_identity_code_law_sweep():
    assert check_functor_laws(code_for_id(CAT).code).ok


def test_exponential_index_is_a_function_space():
    base = certify(Sigma(CAT, (0, 1, 2), (Iota(CAT, 0), Iota(CAT, 1), Iota(CAT, 1))))
    for k in range(4):
        out = interpret_obj(exponential(k, base).code, empty_family(CAT))
        assert len(out) == 3 ** k
        assert sorted(out.fibres) == sorted(sum(p) for p in itertools.product((0, 1, 1), repeat=k))

