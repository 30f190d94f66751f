import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irplus.containers import (
    BOTTOM,
    I_C,
    M,
    Comp,
    Container,
    Id,
    K,
    Plus,
    Times,
    check_component_bijections,
    check_nest_square,
    cont_compose,
    cont_coproduct,
    cont_product,
    container_family,
    extension,
    extension_size,
    family_container,
    from_sizes,
    interpret_nest,
    interpret_nest_cont,
    lam_example,
    nest_count,
    nest_depth,
)
from irplus.oracle import direct_nest_count

sizes = st.lists(st.integers(0, 3), max_size=3)


def test_identity_container_extension_is_the_set_itself():
    X = ("a", "b", "c")
    ext = extension(I_C, X)
    assert len(ext) == 3
    assert sorted(f[0] for _, f in ext) == sorted(X)


def test_empty_set_leaves_only_positionless_shapes():
    C = from_sizes([0, 1, 0, 2])
    assert len(extension(C, ())) == 2


def test_maybe_container_adds_one_point():
    for n in range(5):
        assert extension_size(M, n) == n + 1


def test_combinator_shape_counts():
    assert cont_compose(I_C, I_C).positions == (1,)
    C, D = from_sizes([1, 2]), from_sizes([0, 3, 1])
    assert len(cont_coproduct(C, D).shapes) == 5
    assert len(cont_product(C, D).shapes) == 6
    assert len(cont_compose(C, D).shapes) == 3 ** 1 + 3 ** 2


@settings(max_examples=60, deadline=None)
@given(sizes, sizes, st.integers(0, 3), st.sampled_from(["coproduct", "product", "compose"]))
def test_combinator_maps_are_bijections(a, b, n, kind):
    r = check_component_bijections(kind, from_sizes(a), from_sizes(b), n)
    assert r.ok, r.witness


def test_combinator_sizes_match_set_operations():
    for a, b in itertools.product([[0], [1, 2], [3, 0, 1]], repeat=2):
        C, D = from_sizes(a), from_sizes(b)
        for n in range(4):
            assert extension_size(cont_coproduct(C, D), n) == extension_size(C, n) + extension_size(D, n)
            assert extension_size(cont_product(C, D), n) == extension_size(C, n) * extension_size(D, n)
            assert extension_size(cont_compose(C, D), n) == extension_size(C, extension_size(D, n))


def test_nest_semantics_on_identity():
    F = lambda X: tuple(("f", x) for x in X)  # noqa: E731
    assert interpret_nest(Id(), F, (1, 2)) == (("f", 1), ("f", 2))
    assert interpret_nest_cont(K(M), I_C) == M


def test_lam_container_shapes():
    L = lam_example()
    assert nest_depth(L) == 4
    assert len(interpret_nest_cont(L, I_C).shapes) == 4
    assert len(interpret_nest_cont(L, BOTTOM).shapes) == 1
    S = from_sizes([0, 1, 2])
    assert len(interpret_nest_cont(L, S).shapes) == 1 + 9 + (1 + 2 + 4)


def test_lam_positions():
    L = lam_example()
    C = interpret_nest_cont(L, from_sizes([1, 2]))
    # the first summand has one position, pairs add, the third counts the marked positions
    assert sum(n for n in C.positions) == 1 + (2 + 3 + 3 + 4) + (0 + 1 + 0 + 1 + 1 + 2)


def test_lam_second_stage_extension():
    L = lam_example()
    stage2 = interpret_nest_cont(L, interpret_nest_cont(L, BOTTOM))
    assert extension_size(stage2, 1) == 4
    assert extension_size(stage2, 2) == 9
    assert direct_nest_count(L, 2, 2) == 9


NESTS = [Id(), K(M), Plus(Id(), K(I_C)), Times(Id(), K(M)), Comp(Id(), Id()), lam_example(),
         Comp(Times(Id(), Id()), K(M)), Plus(Comp(Id(), K(M)), Times(Id(), Id()))]


@pytest.mark.parametrize("N", NESTS, ids=repr)
def test_nest_square_on_small_containers(N):
    for C in (BOTTOM, I_C, M, from_sizes([0, 2])):
        for n in range(3):
            if nest_count(N, C, n) <= 5000:
                assert check_nest_square(N, C, n).ok


def test_containers_round_trip_through_families():
    for C in (BOTTOM, I_C, M, from_sizes([2, 0, 3])):
        assert family_container(container_family(C)) == C


def test_container_validation():
    with pytest.raises(ValueError):
        Container((0, 0), (1, 1))
    with pytest.raises(ValueError):
        Container((0,), ())
