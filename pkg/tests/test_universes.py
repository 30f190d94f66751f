import pytest

from irplus.category import core_groupoid, finset_category, opposite
from irplus.fam import empty_family
from irplus.oracle import check_functor_laws
from irplus.semantics import interpret_obj
from irplus.universes import (
    ContravarianceFailure,
    decode,
    leaf_tag,
    nf_universe_code,
    pi_universe_code,
    sigma_tag,
    sigma_universe_code,
    universe_view,
)

SETOP = opposite(finset_category(3))
CORE = core_groupoid(finset_category(3))


def test_sigma_universe_passes_the_law_sweep():
    assert check_functor_laws(sigma_universe_code(SETOP)).ok


def test_pi_universe_exists_over_the_core_groupoid():
    code = pi_universe_code(CORE)
    assert check_functor_laws(code).ok
    assert interpret_obj(code, empty_family(CORE)).fibres == (2,)


def test_pi_universe_fails_over_plain_finite_sets():
    with pytest.raises(ContravarianceFailure) as exc:
        pi_universe_code(finset_category(3))
    w = exc.value.witness
    assert (w["X'"], w["X"]) == (0, 1)


def test_pi_universe_fails_over_the_opposite_too():
    with pytest.raises(ContravarianceFailure):
        pi_universe_code(SETOP)


def test_decoding_reads_sums():
    code = sigma_universe_code(SETOP, ground=2)
    B = leaf_tag(0)
    assert universe_view(code, B) == ("leaf", 0)
    assert decode(code, B) == 2
    pair = sigma_tag(code, B, (B, B))
    assert universe_view(code, pair) == ("Σ", B, (B, B))
    assert decode(code, pair) == 4


def test_decoding_reads_products_in_the_pi_universe():
    code = pi_universe_code(CORE, ground=2)
    B = leaf_tag(0)
    assert decode(code, sigma_tag(code, B, (B, B))) == 4
    one = sigma_tag(code, B, (sigma_tag(code, B, (B, B)), B))
    assert decode(code, one) == 4 * 2


def test_nf_universe_has_a_unit_leaf():
    code = nf_universe_code(CORE, ground=2)
    assert decode(code, leaf_tag(0)) == 1
    assert decode(code, leaf_tag(1)) == 2
