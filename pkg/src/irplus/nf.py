"""Normalising a Σ-universe by a fold, and remapping ground sets by a fold.

The universe has codes ``1̂``, ``B̂`` and ``Σ̂ a b``.  A code is normal when it
is ``1̂``, ``B̂`` or ``Σ̂ B̂ b`` with every ``b n`` normal.  The algebra ``(φ, η)``
sends a Σ of normal codes to a normal code together with a bijection of the
decoded sets; folding it over the initial chain yields ``(nf, correct)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .category import Fn, core_groupoid, finset_category, fn_identity, fn_inverse, opposite
from .fixpoint import PointwiseFold, fold_pointwise, fold_square_failures
from .universes import decode, leaf_tag, nf_universe_code, sigma_tag, sigma_universe_code, universe_view

UNIT, GROUND = 0, 1


class ImpossibleCase(ValueError):
    """φ was handed a Σ whose first component is not normal."""


def nf_code(ground: int = 2, max_card: int = 3):
    """``ι 1 + ι B + δ₁(X ↦ δ_{X*}(Y ↦ ι ΣY))`` over the core of finite sets."""
    return nf_universe_code(core_groupoid(finset_category(max_card)), ground)


def nf_predicate(code, u) -> bool:
    view = universe_view(code, u)
    if view[0] == "leaf":
        return True
    _, a, b = view
    head = universe_view(code, a)
    if head == ("leaf", GROUND):
        return all(nf_predicate(code, x) for x in b)
    return False  # Σ̂ 1̂ b and Σ̂ (Σ̂ a' b') b


def _sum(C, ms):
    return C.sum_morphism(ms)


def phi(code, t):
    """The algebra ``(φ, η)``: returns ``(normal code, η : fibre(t) -> T(code))``.

    ``t`` is an element of ``⟦γ⟧(U_NF, T_NF)``: a leaf or ``Σ̂ a b`` with ``a``
    and every ``b i`` normal.
    """
    C = code.cat
    view = universe_view(code, t)
    if view[0] == "leaf":
        return leaf_tag(view[1]), fn_identity(decode(code, t))
    _, a, b = view
    head = universe_view(code, a)
    if head == ("leaf", UNIT):
        return b[0], fn_identity(decode(code, b[0]))
    if head == ("leaf", GROUND):
        u = sigma_tag(code, a, b)
        return u, fn_identity(decode(code, u))
    _, a2, b2 = head
    if universe_view(code, a2) != ("leaf", GROUND):
        raise ImpossibleCase(f"first component {a!r} is not normal")
    # reassociate: Σ̂ (Σ̂ B̂ b') b ↦ Σ̂ B̂ (n ↦ φ(Σ̂ (b' n) (y ↦ b(n, y))))
    parts, etas, off = [], [], 0
    for bn in b2:
        size = decode(code, bn)
        un, en = phi(code, sigma_tag(code, bn, b[off:off + size]))
        parts.append(un)
        etas.append(en)
        off += size
    return sigma_tag(code, a2, parts), _sum(C, etas)


def eta(code, t) -> Fn:
    return phi(code, t)[1]


@dataclass
class NFFold:
    code: object
    fold: PointwiseFold

    def nf(self, u):
        return self.fold.value[u][0]

    def correct(self, u) -> Fn:
        return self.fold.value[u][1]

    @property
    def universe(self):
        return self.fold.stages[self.fold.depth]

    def square_failures(self) -> list:
        return fold_square_failures(self.fold, lambda t: phi(self.code, t))


def nf_fold(depth: int = 3, ground: int = 2, budget_index: int = 20000, order: str = "forward") -> NFFold:
    """``(nf, correct)`` on the stage-``depth`` truncation of the universe."""
    code = nf_code(ground)
    pf = fold_pointwise(
        code, lambda t: phi(code, t), lambda u: decode(code, u), depth, budget_index=budget_index, order=order
    )
    return NFFold(code, pf)


def nf_direct(code, u, memo=None):
    """Independent structural recursion for ``(nf u, correct_u)``.

    The Σ case reindexes ``b`` along ``correct_a⁻¹``, the index map of the
    core groupoid's action on ``δ_{X*}``.
    """
    memo = {} if memo is None else memo
    if u in memo:
        return memo[u]
    C = code.cat
    view = universe_view(code, u)
    if view[0] == "leaf":
        out = (u, fn_identity(decode(code, u)))
    else:
        _, a, b = view
        na, ca = nf_direct(code, a, memo)
        alpha = fn_inverse(ca)  # T(nf a) -> T(a)
        moved = [b[alpha(i)] for i in range(alpha.src)]
        sizes = [decode(code, x) for x in b]
        reindex = C.reindex_sum(alpha, sizes)  # Σ T(b) -> Σ T(b∘α)
        inner = [nf_direct(code, x, memo) for x in moved]
        comps = _sum(C, [k for _, k in inner])
        v, e = phi(code, sigma_tag(code, na, [y for y, _ in inner]))
        out = (v, C.compose(e, C.compose(comps, reindex)))
    memo[u] = out
    return out


# -- ground-set remapping ----------------------------------------------------


@dataclass
class GroundMapFold:
    source_code: object  # universe with ground B₂ (the initial one)
    target_code: object  # universe with ground B₁ (the algebra carrier)
    f: Fn
    fold: PointwiseFold

    def __call__(self, u):
        return self.fold.value[u]

    def square_failures(self) -> list:
        return fold_square_failures(self.fold, self.structure)

    def structure(self, t):
        return ground_structure(self.target_code, self.f, t)


def ground_structure(target_code, f: Fn, t):
    """Algebra for the B₂-universe code on the B₁-universe: ``B̂ ↦ B̂`` via ``f``."""
    view = universe_view(target_code, t)
    if view[0] == "leaf":
        return leaf_tag(0), f  # a Setᵒᵖ morphism B₂ -> B₁ is a set function B₁ -> B₂
    _, a, b = view
    u = sigma_tag(target_code, a, b)
    return u, fn_identity(decode(target_code, u))


def ground_map_fold(f: Fn, depth: int = 2, max_card: int = 3, budget_index: int = 20000) -> GroundMapFold:
    """Fold the universe over ``Fin f.dst`` into the universe over ``Fin f.src``.

    A set function ``f : B₁ -> B₂`` is a morphism ``B₂ -> B₁`` in the opposite
    category, which is what the ground clause of the algebra needs; initiality
    of the B₂-universe then gives the map into the B₁-universe.
    """
    C = opposite(finset_category(max_card))
    source = sigma_universe_code(C, f.dst)
    target = sigma_universe_code(C, f.src)
    pf = fold_pointwise(
        source,
        lambda t: ground_structure(target, f, t),
        lambda u: decode(target, u),
        depth,
        budget_index=budget_index,
    )
    return GroundMapFold(source, target, f, pf)
