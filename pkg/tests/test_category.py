import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from irplus.category import (
    Fn,
    all_functions,
    category_law_failures,
    core_groupoid,
    discrete_category,
    discretisation,
    finset_category,
    fn_compose,
    fn_identity,
    opposite,
    same_structure,
)
from irplus.fam import (
    FamObject,
    FamMorphism,
    empty_family,
    epsilon,
    fam_compose,
    fam_coproduct,
    fam_identity,
    fam_map,
    identity_functor,
    is_split_cartesian,
    reindex,
)
from irplus.oracle import enumerate_fam_morphisms, enumerate_fam_objects

CATEGORIES = {
    "discrete": discrete_category(("a", "b")),
    "finset": finset_category(3),
    "opposite": opposite(finset_category(3)),
    "core": core_groupoid(finset_category(3)),
    "discretisation": discretisation(finset_category(2)),
}


@pytest.mark.parametrize("name", sorted(CATEGORIES))
def test_category_laws_hold_exhaustively(name):
    assert category_law_failures(CATEGORIES[name]) == []


def test_discrete_category_sizes():
    assert discrete_category(()).objects() == ()
    one = discrete_category(("a",))
    assert len(one.objects()) == 1 and len(one.hom("a", "a")) == 1
    assert discrete_category(("a", "b")).hom("a", "b") == ()


def test_finset_hom_counts():
    C = finset_category(3)
    assert len(C.hom(2, 3)) == 9
    assert len(C.hom(0, 1)) == 1
    assert len(C.hom(1, 0)) == 0


def test_opposite_reverses_and_is_an_involution():
    C = finset_category(3)
    assert len(opposite(C).hom(3, 2)) == 9
    assert opposite(opposite(C)) == C
    S = discrete_category(("x", "y"))
    assert same_structure(opposite(S), S)


def test_core_keeps_only_bijections():
    G = core_groupoid(finset_category(3))
    assert len(G.hom(2, 2)) == 2
    assert G.hom(1, 2) == ()
    S = discrete_category(("x",))
    assert same_structure(core_groupoid(S), S)


@given(st.lists(st.integers(0, 2), min_size=3, max_size=3), st.lists(st.integers(0, 1), min_size=3, max_size=3),
       st.lists(st.integers(0, 3), min_size=2, max_size=2))
def test_tabulated_composition_is_associative(f, g, h):
    f, g, h = Fn(3, 3, tuple(f)), Fn(3, 2, tuple(g)), Fn(2, 4, tuple(h))
    assert fn_compose(h, fn_compose(g, f)) == fn_compose(fn_compose(h, g), f)
    assert fn_compose(fn_identity(2), g) == g


def test_all_functions_counts_match_powers():
    for m, n in itertools.product(range(4), repeat=2):
        assert len(all_functions(m, n)) == n ** m


# -- families --------------------------------------------------------------------------


def _fam(C, fibres):
    return FamObject(C, tuple(range(len(fibres))), tuple(fibres))


def test_identity_is_a_unit_for_composition():
    C = finset_category(2)
    X, Y = _fam(C, (1, 2)), _fam(C, (2,))
    for m in enumerate_fam_morphisms(X, Y):
        assert fam_compose(fam_identity(Y), m) == m
        assert fam_compose(m, fam_identity(X)) == m


def test_family_composition_is_associative_exhaustively():
    C = finset_category(2)
    fams = list(enumerate_fam_objects(C, 1))
    checked = 0
    for X, Y, Z, W in itertools.product(fams, repeat=4):
        for f in enumerate_fam_morphisms(X, Y):
            for g in enumerate_fam_morphisms(Y, Z):
                for h in enumerate_fam_morphisms(Z, W):
                    assert fam_compose(h, fam_compose(g, f)) == fam_compose(fam_compose(h, g), f)
                    checked += 1
    assert checked > 100


def test_split_cartesian_maps_are_closed_under_composition():
    C = finset_category(2)
    fams = list(enumerate_fam_objects(C, 2))
    for X, Y, Z in itertools.product(fams[:7], repeat=3):
        for f in enumerate_fam_morphisms(X, Y):
            if not is_split_cartesian(f):
                continue
            for g in enumerate_fam_morphisms(Y, Z):
                if is_split_cartesian(g):
                    assert is_split_cartesian(fam_compose(g, f))


def test_coproducts():
    C = finset_category(3)
    empty = fam_coproduct([], C)
    assert len(empty.obj) == 0 and empty.injections == ()
    cp = fam_coproduct([_fam(C, (1, 2)), _fam(C, (0, 0, 3))])
    assert len(cp.obj) == 5
    assert all(is_split_cartesian(i) for i in cp.injections)


def test_copair_recovers_the_legs():
    C = finset_category(2)
    A, B, T = _fam(C, (1,)), _fam(C, (2, 0)), _fam(C, (2, 1))
    cp = fam_coproduct([A, B])
    for la in enumerate_fam_morphisms(A, T):
        for lb in list(enumerate_fam_morphisms(B, T))[:5]:
            m = cp.copair(T, [la, lb])
            assert fam_compose(m, cp.injections[0]) == la
            assert fam_compose(m, cp.injections[1]) == lb


def test_reindex_examples():
    C = finset_category(2)
    X, Y = _fam(C, (1, 2)), _fam(C, (2, 2))
    m = next(m for m in enumerate_fam_morphisms(X, Y) if not is_split_cartesian(m))
    assert reindex(X.index, m) == m.on_fibre
    assert all(C.is_identity(k) for k in reindex((0, 1, 1), fam_identity(X)))
    assert reindex((1, 1, 1), m) == (m.k(1),) * 3


def test_split_cartesian_detection():
    C = finset_category(2)
    X, Y = _fam(C, (2,)), _fam(C, (2,))
    assert is_split_cartesian(fam_identity(X))
    swap = FamMorphism(X, Y, (0,), (Fn(2, 2, (1, 0)),))
    assert not is_split_cartesian(swap)


def test_fam_map_along_identity_and_embedding():
    C = finset_category(2)
    X = _fam(C, (0, 2))
    assert fam_map(identity_functor(C), X) == X
    D = discretisation(C)
    XD = FamObject(D, X.index, X.fibres)
    image = fam_map(epsilon(C), XD)
    assert image.index == XD.index and image.fibres == XD.fibres and image.cat == C
    assert fam_map(epsilon(C), empty_family(D)) == empty_family(C)
