from irplus.category import Fn, core_groupoid, finset_category, opposite
from irplus.codes import Delta, Iota, IotaIota, Sigma, SigmaSigma, const_functor, id_plus
from irplus.fam import FamMorphism, FamObject, empty_family, fam_identity, is_split_cartesian
from irplus.ir import interpret_ir_mor
from irplus.bridge import psi
from irplus.oracle import Budget, check_naturality, enumerate_fam_morphisms, enumerate_fam_objects
from irplus.semantics import interpret_code_mor, interpret_mor, interpret_obj
from irplus.universes import pi_universe_code, sigma_universe_code
from irplus.fixpoint import initial_chain

SETOP = opposite(finset_category(3))


def test_iota_is_a_singleton_everywhere():
    for X in enumerate_fam_objects(SETOP, 2):
        out = interpret_obj(Iota(SETOP, 2), X)
        assert out.index == ("*",) and out.fibres == (2,)


def test_delta_over_empty_arity_has_one_summand():
    code = Delta(SETOP, (), const_functor(SETOP, (), Iota(SETOP, 1)))
    for X in enumerate_fam_objects(SETOP, 2):
        assert len(interpret_obj(code, X)) == 1


def test_sigma_universe_over_the_empty_family():
    out = interpret_obj(sigma_universe_code(SETOP), empty_family(SETOP))
    assert out.fibres == (2,)


def test_sigma_universe_one_point_family_matches_hand_count():
    # ι B contributes the ground element; δ₁ picks x0, then δ over its 2 positions picks x0 twice
    code = sigma_universe_code(SETOP)
    X = FamObject(SETOP, ("x0",), (2,))
    out = interpret_obj(code, X)
    assert len(out) == 2
    assert sorted(out.fibres) == [2, 4]


def test_sigma_universe_third_stage_has_21_elements():
    result = initial_chain(sigma_universe_code(SETOP), 3)
    assert len(result.object(3)) == 21


def test_identity_is_preserved():
    code = sigma_universe_code(SETOP)
    for X in enumerate_fam_objects(SETOP, 2):
        assert interpret_mor(code, fam_identity(X)) == fam_identity(interpret_obj(code, X))


def test_split_inputs_agree_with_the_plain_clause():
    from irplus.category import discretisation
    from irplus.fam import epsilon, fam_map_mor

    code = sigma_universe_code(SETOP)
    D = discretisation(SETOP)
    fams = list(enumerate_fam_objects(D, 2, objects=(0, 1, 2)))
    checked = 0
    for X in fams:
        for Y in fams:
            for m in enumerate_fam_morphisms(X, Y):
                lifted = fam_map_mor(epsilon(SETOP), m)
                assert is_split_cartesian(interpret_mor(code, lifted))
                plain = fam_map_mor(epsilon(SETOP), interpret_ir_mor(psi(code), m))
                assert plain == interpret_mor(code, lifted)
                checked += 1
    assert checked > 20


def test_non_split_input_over_the_core_groupoid():
    G = core_groupoid(finset_category(3))
    code = pi_universe_code(G)
    X = FamObject(G, (0,), (2,))
    swap = FamMorphism(X, X, (0,), (Fn(2, 2, (1, 0)),))
    out = interpret_mor(code, swap)
    assert not is_split_cartesian(out)
    assert out.src == interpret_obj(code, X) == out.dst


def test_iota_morphism_component():
    f = Fn(2, 1, (0, 0))
    rho = IotaIota(Iota(SETOP, 1), Iota(SETOP, 2), f)
    for X in enumerate_fam_objects(SETOP, 1):
        m = interpret_code_mor(rho, X)
        assert m.on_index == ("*",) and m.on_fibre == (f,)


def test_identity_code_morphism_is_identity():
    code = sigma_universe_code(SETOP)
    for X in enumerate_fam_objects(SETOP, 2):
        assert interpret_code_mor(id_plus(code), X) == fam_identity(interpret_obj(code, X))


def test_naturality_of_a_depth_two_sigma_morphism():
    a, b = Iota(SETOP, 1), Iota(SETOP, 2)
    src = Sigma(SETOP, (0, 1), (a, b))
    dst = Sigma(SETOP, (0, 1, 2), (b, a, b))
    rho = SigmaSigma(src, dst, (1, 2), (id_plus(a), IotaIota(b, b, Fn(2, 2, (1, 0)))))
    rep = check_naturality(rho, Budget(max_index=2, max_objects=3))
    assert rep.ok and rep.cases > 100
