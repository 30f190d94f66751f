import pytest

from irplus.category import Fn, core_groupoid, discrete_category, finset_category, fn_is_bijective, opposite
from irplus.bridge import phi as phi_ir
from irplus.codes import Iota, Sigma
from irplus.fam import fam_identity
from irplus.fixpoint import NotConverged, fold, initial_chain
from irplus.nf import (
    GROUND,
    UNIT,
    eta,
    ground_map_fold,
    nf_code,
    nf_direct,
    nf_fold,
    nf_predicate,
    phi,
)
from irplus.oracle import ir_corpus
from irplus.semantics import BudgetExceeded
from irplus.universes import decode, leaf_tag, sigma_tag, sigma_universe_code

SETOP = opposite(finset_category(3))


def test_constant_code_is_fixed_at_the_first_stage():
    result = initial_chain(Iota(SETOP, 2), 3)
    assert result.object(1).fibres == (2,)
    assert result.fixed[0] == 1


def test_sigma_universe_chain():
    result = initial_chain(sigma_universe_code(SETOP), 3)
    assert result.cardinalities == [0, 1, 2, 21]
    assert result.all_split
    assert result.fixed is None


def _corpus(cat):
    if cat is DISCRETE:
        return [phi_ir(c, cat) for c in ir_corpus(cat.objects(), count=10, seed=2)]
    return [sigma_universe_code(cat), Sigma(cat, (0, 1), (Iota(cat, 1), Iota(cat, 2)))]


DISCRETE = discrete_category((0, 1, 2))


@pytest.mark.parametrize("cat", [DISCRETE, SETOP, core_groupoid(finset_category(3))], ids=["discrete", "opposite", "core"])
def test_every_connecting_map_is_split(cat):
    for code in _corpus(cat):
        assert initial_chain(code, 3).all_split


def test_budget_is_reported_with_the_stage():
    with pytest.raises(BudgetExceeded) as exc:
        initial_chain(sigma_universe_code(SETOP), 5, budget_index=100)
    assert exc.value.stage is not None


def test_fixed_point_iso_verifies():
    code = Sigma(SETOP, (0, 1), (Iota(SETOP, 1), Iota(SETOP, 2)))
    result = initial_chain(code, 3)
    n, iso = result.fixed
    assert n == 1 and iso.verify()


def test_folding_into_the_initial_algebra_gives_the_identity():
    code = Sigma(SETOP, (0, 1), (Iota(SETOP, 1), Iota(SETOP, 2)))
    result = initial_chain(code, 3)
    n, iso = result.fixed
    f = fold(code, iso.backward, result)
    assert f == fam_identity(result.object(n))


def test_fold_needs_a_fixed_point():
    result = initial_chain(sigma_universe_code(SETOP), 2)
    with pytest.raises(NotConverged):
        fold(result.code, None, result)


# -- normal forms -------------------------------------------------------------------------

CODE = nf_code()
ONE, B = leaf_tag(UNIT), leaf_tag(GROUND)


def test_nf_predicate_clauses():
    assert nf_predicate(CODE, ONE)
    assert not nf_predicate(CODE, sigma_tag(CODE, ONE, (B,)))
    assert nf_predicate(CODE, sigma_tag(CODE, B, (ONE, ONE)))
    assert not nf_predicate(CODE, sigma_tag(CODE, sigma_tag(CODE, B, (ONE, ONE)), (ONE, ONE)))


def test_algebra_on_leaves_and_unit_sums():
    assert phi(CODE, ONE) == (ONE, Fn(1, 1, (0,)))
    t = sigma_tag(CODE, ONE, (B,))
    u, k = phi(CODE, t)
    assert u == B
    assert fn_is_bijective(k) and k == eta(CODE, t)


def test_fold_normalises_every_element():
    f = nf_fold(3)
    assert len(f.universe) > 1000
    for u in f.universe.index:
        v, k = f.nf(u), f.correct(u)
        assert nf_predicate(CODE, v)
        assert fn_is_bijective(k) and k.src == decode(CODE, u) and k.dst == decode(CODE, v)
    assert f.square_failures() == []


def test_fold_examples():
    f = nf_fold(2)
    assert f.nf(ONE) == ONE
    assert f.nf(sigma_tag(CODE, ONE, (B,))) == B


def test_nf_is_idempotent_on_normal_forms():
    f = nf_fold(3)
    for u in f.universe.index:
        if nf_predicate(CODE, u):
            assert f.nf(u) == u


def test_fold_does_not_depend_on_traversal_order():
    assert nf_fold(3).fold.value == nf_fold(3, order="reverse").fold.value


def test_fold_agrees_with_direct_structural_recursion():
    f = nf_fold(3)
    memo = {}
    for u in f.universe.index:
        assert nf_direct(CODE, u, memo) == f.fold.value[u]


def test_ground_map_identity_is_an_embedding():
    g = ground_map_fold(Fn(2, 2, (0, 1)), depth=2)
    assert g.square_failures() == []
    for u, (v, k) in g.fold.value.items():
        assert v == u and k == Fn(k.src, k.src, tuple(range(k.src)))


def test_ground_map_truncation():
    f = Fn(3, 2, (0, 1, 1))
    g = ground_map_fold(f, depth=2)
    assert g.square_failures() == []
    assert g(leaf_tag(0)) == (leaf_tag(0), f)
    assert len(g.fold.value) == len(g.fold.stages[2])
