"""Universe codes closed under Σ (and Π over the core groupoid).

The codes have the shape ``ι B₀ + … + δ₁(X ↦ δ_{X*}(Y ↦ ι ◇Y))`` where ``◇`` is
the finite sum or product.  Elements of their interpretations are tags; the
helpers at the bottom read them back as ``("leaf", i)`` or ``("Σ", a, b)``.
"""

from __future__ import annotations

import itertools

from .category import (
    CategoryError,
    CoreGroupoid,
    FinCategory,
    FinSetCategory,
    Fn,
    Opposite,
    all_functions,
)
from .codes import (
    CodeFunctor,
    Delta,
    DeltaDelta,
    Iota,
    IotaIota,
    LawViolation,
    Sigma,
    code_law_failures,
)


class ContravarianceFailure(CategoryError):
    """The Π-former cannot be made functorial over this category."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


def _finset_like(C: FinCategory) -> bool:
    base = getattr(C, "base", None)
    return isinstance(C, FinSetCategory) or (
        isinstance(C, (Opposite, CoreGroupoid)) and isinstance(base, FinSetCategory)
    )


def _former(C: FinCategory, kind: str):
    """Object action, morphism action and reindexing of the Σ/Π former."""
    if kind == "Σ":
        return C.sum_object, C.sum_morphism, C.reindex_sum
    return C.product_object, C.product_morphism, C.reindex_product


def _binder(C: FinCategory, kind: str) -> CodeFunctor:
    """``X ↦ δ_{X*}(Y ↦ ι ◇Y)`` with its action on ``f : X -> X'``."""
    obj_op, mor_op, reindex = _former(C, kind)

    def inner(n):
        A = tuple(range(n))
        return CodeFunctor(
            C,
            A,
            lambda Y: Iota(C, obj_op(Y)),
            lambda k: IotaIota(
                Iota(C, obj_op([C.dom(m) for m in k])), Iota(C, obj_op([C.cod(m) for m in k])), mor_op(k)
            ),
            name=f"Y ↦ ι {kind}Y",
        )

    inner_memo = {}

    def on_obj(X):
        n = X[0]
        if n not in inner_memo:
            inner_memo[n] = Delta(C, tuple(range(n)), inner(n))
        return inner_memo[n]

    def on_mor(f):
        (f0,) = f
        src, dst = on_obj((C.dom(f0),)), on_obj((C.cod(f0),))
        alpha = C.backward(f0)  # a set function dst* -> src*

        def rho(Y, alpha=alpha, dst=dst):
            Ya = tuple(Y[a] for a in alpha.table)
            return IotaIota(Iota(C, obj_op(Y)), Iota(C, obj_op(Ya)), reindex(alpha, Y))

        return DeltaDelta(src, dst, alpha.table, rho)

    return CodeFunctor(C, (0,), on_obj, on_mor, name=f"X ↦ δ_X* {kind}")


def _universe(C: FinCategory, leaves, kind: str, check: bool) -> Sigma:
    if not _finset_like(C):
        raise CategoryError(f"universe codes need a category of finite sets, got {C.name}")
    branches = tuple(Iota(C, b) for b in leaves) + (Delta(C, (0,), _binder(C, kind)),)
    code = Sigma(C, tuple(range(len(branches))), branches)
    if check:
        bad = code_law_failures(code, max_witnesses=3)
        if bad:
            raise LawViolation(f"universe code over {C.name} violates functor laws", bad)
    return code


def sigma_universe_code(C: FinCategory, ground: int = 2, check: bool = True) -> Sigma:
    """``ι B + δ₁(X ↦ δ_{X*}(Y ↦ ι ΣY))`` with ``B = Fin ground``."""
    return _universe(C, (ground,), "Σ", check)


def nf_universe_code(C: FinCategory, ground: int = 2, check: bool = True) -> Sigma:
    """Universe with the unit set, a ground set and Σ: ``ι 1 + ι B + δ₁(…)``."""
    return _universe(C, (1, ground), "Σ", check)


def pi_obstruction(C: FinCategory, max_objects: int = 3):
    """Search for data showing the Π-former has no morphism action over ``C``.

    For each ``f : X -> X'`` between one-point families the code morphism
    ``δ_{X*}G -> δ_{X'*}G`` needs an index map ``α : X'* -> X*`` and, for every
    ``Y``, a morphism ``ΠY -> Π(Y∘α)``.  Returns a witness dict for the first
    ``f`` where no α works, or None.
    """
    objs = C.objects()[:max_objects]
    for a in objs:
        for b in objs:
            for f in C.hom(a, b):
                alphas = all_functions(b, a)
                blocked = []
                for alpha in alphas:
                    bad = None
                    for Y in itertools.product(objs, repeat=a):
                        Ya = tuple(Y[i] for i in alpha.table)
                        if not C.hom(C.product_object(Y), C.product_object(Ya)):
                            bad = Y
                            break
                    if bad is None:
                        break
                    blocked.append((alpha, bad))
                else:
                    return _pi_witness(C, f, a, b, blocked)
    return None


def _pi_witness(C, f, a, b, blocked):
    # Present the witness in the language of set functions.
    fn = f if isinstance(f, Fn) else None
    if isinstance(C, Opposite):
        X_prime, X = b, a  # f is a set function X'* -> X*
    else:
        X_prime, X = a, b
    w = {
        "category": C.name,
        "morphism": {"src": fn.src, "dst": fn.dst, "table": list(fn.table)} if fn else repr(f),
        "X'": X_prime,
        "X": X,
    }
    if blocked:
        alpha, Y = blocked[0]
        w["Y*"] = Y[0] if len(Y) == 1 else list(Y)
        w["reason"] = (
            f"no set function Π(Y∘α) = {C.product_object([Y[i] for i in alpha.table])} "
            f"-> ΠY = {C.product_object(Y)}"
            if isinstance(C, Opposite)
            else f"no function ΠY = {C.product_object(Y)} -> Π(Y∘α)"
        )
    else:
        w["Y*"] = 0
        w["reason"] = f"no index map α : Fin {b} -> Fin {a}"
    return w


def pi_universe_code(C: FinCategory, ground: int = 2, check: bool = True) -> Sigma:
    """``ι B + δ₁(X ↦ δ_{X*}(Y ↦ ι ΠY))``; only the core groupoid admits it."""
    if not _finset_like(C):
        raise CategoryError(f"universe codes need a category of finite sets, got {C.name}")
    if not isinstance(C, CoreGroupoid):
        w = pi_obstruction(C)
        if w is None:  # pragma: no cover - every non-groupoid finite-set category has one
            w = {"category": C.name, "reason": "no product reindexing"}
        xp, x = w.get("X'"), w.get("X")
        raise ContravarianceFailure(f"Π-former is contravariant over {C.name}: X'=Fin {xp}, X=Fin {x}", w)
    return _universe(C, (ground,), "Π", check)


# -- reading tags back ------------------------------------------------------


def universe_view(code: Sigma, tag):
    """``("leaf", i)`` for the i-th ground code or ``("Σ", a, b)`` with ``b`` a tuple."""
    _, branch, inner = tag
    if branch < len(code.A) - 1:
        return ("leaf", branch)
    _, (a,), (_, b, _) = inner
    return ("Σ", a, b)


def leaf_tag(i: int):
    return ("σ", i, "*")


def sigma_tag(code: Sigma, a, b):
    return ("σ", len(code.A) - 1, ("δ", (a,), ("δ", tuple(b), "*")))


def decode(code: Sigma, tag) -> int:
    """Cardinality of the set named by ``tag`` (Σ read as sum, Π as product)."""
    view = universe_view(code, tag)
    if view[0] == "leaf":
        return code.branches[view[1]].obj
    sizes = tuple(decode(code, u) for u in view[2])
    # the binder's innermost code is ι ◇Y; evaluate it on the sizes
    return code.branches[-1].F((len(sizes),)).F(sizes).obj
