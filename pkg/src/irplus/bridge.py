"""Plain IR inside IR⁺ and back.

``phi`` embeds IR codes over a discrete category as IR⁺ codes whose functor
arguments act trivially on the (identity-only) morphisms.  ``psi`` forgets
the morphism action of an IR⁺ code, giving an IR code over the
discretisation.  Only the object part of ``psi`` is provided.
"""

from __future__ import annotations

from .category import CategoryError, FinCategory, discretisation
from .codes import CodeFunctor, Delta, Iota, Sigma, id_plus
from .fam import FamMorphism, FamObject, epsilon, fam_map, fam_map_mor, is_split_cartesian
from .ir import IRDelta, IRIota, IRSigma, interpret_ir_mor, interpret_ir_obj
from .semantics import interpret_mor, interpret_obj


def phi(code, D: FinCategory):
    """Embed an IR code over the discrete category ``D``."""
    if any(D.hom(a, b) for a in D.objects() for b in D.objects() if a != b):
        raise CategoryError("phi needs a discrete category")
    memo = {}

    def go(c):
        key = id(c)
        if key in memo:
            return memo[key][1]
        match c:
            case IRIota(d):
                out = Iota(D, d)
            case IRSigma(A, branches):
                out = Sigma(D, A, tuple(go(b) for b in branches))
            case IRDelta(A, F):
                def on_obj(h, F=F):
                    return go(F(h))

                def on_mor(k, F=F):
                    # only identities exist, so their image is the identity
                    return id_plus(go(F(tuple(D.dom(m) for m in k))))

                out = Delta(D, A, CodeFunctor(D, A, on_obj, on_mor, name="φF"))
            case _:
                raise TypeError(f"not an IR code: {c!r}")
        memo[key] = (c, out)  # keep c alive so id() stays unique
        return out

    return go(code)


def psi(code):
    """``ψ``: an IR code over ``|C|`` from an IR⁺ code over ``C`` (objects only)."""
    memo = {}

    def go(c):
        key = id(c)
        if key in memo:
            return memo[key][1]
        match c:
            case Iota(_, obj):
                out = IRIota(obj)
            case Sigma(_, A, branches):
                out = IRSigma(A, tuple(go(b) for b in branches))
            case Delta(_, A, F):
                # ε is the identity on objects, so F(ε∘X) = F(X)
                out = IRDelta(A, lambda X, F=F: go(F(X)))
            case _:
                raise TypeError(f"not an IR⁺ code: {c!r}")
        memo[key] = (c, out)
        return out

    return go(code)


def star_square_objects(code, X: FamObject):
    """The two corners ``Fam(ε)(⟦ψγ⟧X)`` and ``⟦γ⟧(Fam(ε)X)`` for X over ``|C|``."""
    C = code.cat
    eps = epsilon(C)
    if X.cat != discretisation(C):
        raise CategoryError("the square is evaluated on families over the discretisation")
    left = fam_map(eps, interpret_ir_obj(psi(code), X), check=False)
    right = interpret_obj(code, fam_map(eps, X, check=False))
    return left, right


def star_square_morphisms(code, m: FamMorphism):
    """Both paths of the square on a split cartesian ``m`` over ``|C|``."""
    C = code.cat
    eps = epsilon(C)
    left = fam_map_mor(eps, interpret_ir_mor(psi(code), m))
    right = interpret_mor(code, fam_map_mor(eps, m))
    return left, right


def preserves_split(code, m: FamMorphism) -> bool:
    return is_split_cartesian(interpret_mor(code, m))
