"""Compiling Nest expressions to uniform IR⁺ codes over the opposite of finite sets.

A family over ``Setᵒᵖ`` is a container: its index is the shape set and its
fibre at ``s`` is the number of positions.  The constructions here act on
codes and, simultaneously, on code morphisms, so every δ they build carries
a genuine functor.

Spines are tuples such as ``("σ", "δ", "ι")``.  An empty σ has spine
``("σ", "*")``; the ``"*"`` unifies with anything.
"""

from __future__ import annotations

import threading
from functools import lru_cache
from dataclasses import dataclass
from typing import Callable, Sequence

from .category import FinCategory, Fn, finset_category, opposite
from .codes import (
    CodeError,
    CodeFunctor,
    Delta,
    DeltaDelta,
    Iota,
    IotaIota,
    Sigma,
    SigmaSigma,
    id_plus,
    positions,
    spine,
)
from .containers import Comp, Container, Id, K, Plus, Times, container_family, interpret_nest_cont
from .fam import FamObject
from .semantics import interpret_obj


class NotUniform(CodeError):
    """A construction that needs a uniform code was handed a branching one."""


@dataclass(frozen=True)
class UniformCode:
    code: object
    spine: tuple

    @property
    def cat(self):
        return self.code.cat


def is_uniform(code, objects: Sequence | None = None):
    """The spine shared by every branch of ``code``, or None."""
    return spine(code, objects)


def certify(code, objects: Sequence | None = None) -> UniformCode:
    s = is_uniform(code, objects)
    if s is None:
        raise NotUniform(f"branches of {code!r} have different spines")
    return UniformCode(code, s)


def _unpack(g) -> tuple:
    if isinstance(g, UniformCode):
        return g.code, g.spine
    return certify(g).code, certify(g).spine


def default_category(max_card: int = 3) -> FinCategory:
    return opposite(finset_category(max_card))


# -- memo -------------------------------------------------------------------------------

_MEMO: dict = {}
_LOCK = threading.Lock()


def _memo(key, build):
    try:
        return _MEMO[key]
    except KeyError:
        pass
    v = build()
    with _LOCK:
        return _MEMO.setdefault(key, v)


def clear_memo() -> None:
    with _LOCK:
        _MEMO.clear()


# -- bifunctors -------------------------------------------------------------------------


@dataclass(frozen=True)
class Bifunctor:
    cat: FinCategory
    name: str
    obj: Callable
    mor: Callable


@lru_cache(maxsize=None)
def plus_bifunctor(cat: FinCategory) -> Bifunctor:
    """``(c, x) ↦ c + x``; a product in ``Setᵒᵖ``."""
    return Bifunctor(cat, "+", lambda c, x: cat.sum_object((c, x)), lambda f, g: cat.sum_morphism((f, g)))


def bifunctor_law_failures(G: Bifunctor, objects: Sequence | None = None) -> list:
    C = G.cat
    objs = tuple(C.objects() if objects is None else objects)
    out = []
    for a in objs:
        for b in objs:
            if G.mor(C.identity(a), C.identity(b)) != C.identity(G.obj(a, b)):
                out.append({"law": "identity", "objects": (a, b)})
    for a1 in objs:
        for a2 in objs:
            for a3 in objs:
                for f1 in C.hom(a1, a2):
                    for f2 in C.hom(a2, a3):
                        for b1 in objs[:2]:
                            for b2 in objs[:2]:
                                for g1 in C.hom(b1, b2):
                                    for g2 in C.hom(b2, b1):
                                        lhs = G.mor(C.compose(f2, f1), C.compose(g2, g1))
                                        rhs = C.compose(G.mor(f2, g2), G.mor(f1, g1))
                                        if lhs != rhs:
                                            out.append({"law": "composition", "f": (f1, f2), "g": (g1, g2)})
    return out


# -- containers as codes --------------------------------------------------------------------


def code_for_id(cat: FinCategory | None = None) -> UniformCode:
    """``δ₁(X ↦ ι X*)``, the identity on containers."""
    C = default_category() if cat is None else cat

    def build():
        F = CodeFunctor(
            C, (0,), lambda h: Iota(C, h[0]),
            lambda k: IotaIota(Iota(C, C.dom(k[0])), Iota(C, C.cod(k[0])), k[0]),
            name="X ↦ ι X*",
        )
        return UniformCode(Delta(C, (0,), F), ("δ", "ι"))

    return _memo(("id", C), build)


def code_for_k(D: Container, cat: FinCategory | None = None) -> UniformCode:
    """``σ_S(s ↦ ι P(s))``, constantly ``(S, P)``."""
    C = default_category() if cat is None else cat
    return _memo(
        ("k", D, C),
        lambda: UniformCode(Sigma(C, D.shapes, tuple(Iota(C, p) for p in D.positions)), ("σ", "ι")),
    )


# -- substitution at ι and the G-product ---------------------------------------------------


def subst_iota(g, G: Bifunctor, c):
    """``g[ι x ↦ ι G(c, x)]``."""
    def build():
        C = G.cat
        match g:
            case Iota(_, x):
                return Iota(C, G.obj(c, x))
            case Sigma(_, A, branches):
                return Sigma(C, A, tuple(subst_iota(b, G, c) for b in branches))
            case Delta(_, A, F):
                Fs = CodeFunctor(
                    C, A, lambda h: subst_iota(F(h), G, c), lambda k: subst_along(F.mor(k), G, c),
                    name=f"{F.name}[ι↦G]",
                )
                return Delta(C, A, Fs)
        raise CodeError(f"not a code: {g!r}")

    return _memo(("subst", g, G, c), build)


def subst_along(rho, G: Bifunctor, c):
    """``subst_iota`` applied to a code morphism ``rho : g -> g'``."""
    def build():
        C = G.cat
        src, dst = subst_iota(rho.src, G, c), subst_iota(rho.dst, G, c)
        match rho:
            case IotaIota(_, _, f):
                return IotaIota(src, dst, G.mor(C.identity(c), f))
            case SigmaSigma(_, _, alpha, rs):
                return SigmaSigma(src, dst, alpha, tuple(subst_along(r, G, c) for r in rs))
            case DeltaDelta(_, _, alpha, _):
                return DeltaDelta(src, dst, alpha, lambda h: subst_along(rho.rho(h), G, c))
        raise CodeError(f"not a code morphism: {rho!r}")

    return _memo(("subst_along", rho, G, c), build)


def subst_at(g, G: Bifunctor, f):
    """``g[ι x ↦ ι G(c, x)] -> g[ι x ↦ ι G(c', x)]`` for ``f : c -> c'``."""
    def build():
        C = G.cat
        src, dst = subst_iota(g, G, C.dom(f)), subst_iota(g, G, C.cod(f))
        match g:
            case Iota(_, x):
                return IotaIota(src, dst, G.mor(f, C.identity(x)))
            case Sigma(_, A, branches):
                return SigmaSigma(src, dst, A, tuple(subst_at(b, G, f) for b in branches))
            case Delta(_, A, F):
                return DeltaDelta(src, dst, A, lambda h: subst_at(F(h), G, f))
        raise CodeError(f"not a code: {g!r}")

    return _memo(("subst_at", g, G, f), build)


def _times(g, g2, G: Bifunctor):
    def build():
        C = G.cat
        match g:
            case Iota(_, c):
                return subst_iota(g2, G, c)
            case Sigma(_, A, branches):
                return Sigma(C, A, tuple(_times(b, g2, G) for b in branches))
            case Delta(_, A, F):
                Ft = CodeFunctor(
                    C, A, lambda h: _times(F(h), g2, G), lambda k: _times_along(F.mor(k), g2, G),
                    name=f"{F.name}×{G.name}",
                )
                return Delta(C, A, Ft)
        raise CodeError(f"not a code: {g!r}")

    return _memo(("times", g, g2, G), build)


def _times_along(rho, g2, G: Bifunctor):
    def build():
        src, dst = _times(rho.src, g2, G), _times(rho.dst, g2, G)
        match rho:
            case IotaIota(_, _, f):
                return subst_at(g2, G, f)
            case SigmaSigma(_, _, alpha, rs):
                return SigmaSigma(src, dst, alpha, tuple(_times_along(r, g2, G) for r in rs))
            case DeltaDelta(_, _, alpha, _):
                return DeltaDelta(src, dst, alpha, lambda h: _times_along(rho.rho(h), g2, G))
        raise CodeError(f"not a code morphism: {rho!r}")

    return _memo(("times_along", rho, g2, G), build)


def _join(s, s2) -> tuple:
    """Spine of ``γ ×_G γ'``: ``s`` with its terminal replaced by ``s2``."""
    if s[-1] == "*":
        return s
    return s[:-1] + s2


def times_g(g, g2, G: Bifunctor | None = None) -> UniformCode:
    """``γ ×_G γ'``: index ``⟦γ⟧₀ × ⟦γ'⟧₀``, fibre ``G(⟦γ⟧₁ s, ⟦γ'⟧₁ s')``."""
    c, s = _unpack(g)
    c2, s2 = _unpack(g2)
    G = plus_bifunctor(c.cat) if G is None else G
    return UniformCode(_times(c, c2, G), _join(s, s2))


# -- exponentials ------------------------------------------------------------------------


def _labels(K) -> tuple:
    return tuple(range(K)) if isinstance(K, int) else tuple(K)


def _product(sets) -> tuple:
    out = [()]
    for A in sets:
        out = [t + (a,) for t in out for a in A]
    return tuple(out)


def _restrict(h, A, k) -> tuple:
    return tuple(x for (j, _), x in zip(A, h) if j == k)


def _sum_index(K, codes) -> tuple:
    return tuple((k, a) for k, c in zip(K, codes) for a in c.A)


def exp_family(cat: FinCategory, K: tuple, codes: tuple, sp: tuple):
    """A code for ``Π_k ⟦codes[k]⟧`` with fibres ``Σ_k``; ``sp`` is their common spine."""
    def build():
        head = sp[0]
        if head in ("ι", "*"):
            return Iota(cat, cat.sum_object([c.obj for c in codes]))
        if head == "σ":
            A = _product([c.A for c in codes])
            branches = tuple(
                exp_family(cat, K, tuple(c.branches[positions(c.A)[a]] for c, a in zip(codes, t)), sp[1:])
                for t in A
            )
            return Sigma(cat, A, branches)
        A = _sum_index(K, codes)

        def on_obj(h):
            return exp_family(cat, K, tuple(c.F(_restrict(h, A, k)) for k, c in zip(K, codes)), sp[1:])

        def on_mor(kk):
            return exp_mor_family(cat, K, tuple(c.F.mor(_restrict(kk, A, k)) for k, c in zip(K, codes)), sp[1:])

        return Delta(cat, A, CodeFunctor(cat, A, on_obj, on_mor, name=f"Π{len(K)}"))

    return _memo(("exp", cat, K, codes, sp), build)


def exp_mor_family(cat: FinCategory, K: tuple, rhos: tuple, sp: tuple):
    """``Π_k rhos[k]`` between the exponential codes of their endpoints."""
    def build():
        src = exp_family(cat, K, tuple(r.src for r in rhos), sp)
        dst = exp_family(cat, K, tuple(r.dst for r in rhos), sp)
        if not K:
            return id_plus(src)
        head = sp[0]
        if head in ("ι", "*"):
            return IotaIota(src, dst, cat.sum_morphism([r.f for r in rhos]))
        if head == "σ":
            alpha, comps = [], []
            for t in src.A:
                parts = [r.at(a) for r, a in zip(rhos, t)]
                alpha.append(tuple(b for b, _ in parts))
                comps.append(exp_mor_family(cat, K, tuple(x for _, x in parts), sp[1:]))
            return SigmaSigma(src, dst, tuple(alpha), tuple(comps))
        A = src.A
        alpha = tuple((k, r.alpha[positions(r.dst.A)[b]]) for k, r in zip(K, rhos) for b in r.dst.A)

        def comps(h):
            return exp_mor_family(cat, K, tuple(r.rho(_restrict(h, A, k)) for k, r in zip(K, rhos)), sp[1:])

        return DeltaDelta(src, dst, alpha, comps)

    return _memo(("exp_mor", cat, K, rhos, sp), build)


def exp_reindex(cat: FinCategory, u: Fn, codes: tuple, sp: tuple):
    """``exp(K, codes) -> exp(K', codes ∘ u)`` for ``u : K' -> K``."""
    K, K2 = tuple(range(u.dst)), tuple(range(u.src))
    moved = tuple(codes[u.table[j]] for j in K2)

    def build():
        src = exp_family(cat, K, codes, sp)
        dst = exp_family(cat, K2, moved, sp)
        head = sp[0]
        if head in ("ι", "*"):
            return IotaIota(src, dst, cat.reindex_sum(u, [c.obj for c in codes]))
        if head == "σ":
            alpha = tuple(tuple(t[u.table[j]] for j in K2) for t in src.A)
            comps = tuple(
                exp_reindex(cat, u, tuple(c.branches[positions(c.A)[a]] for c, a in zip(codes, t)), sp[1:])
                for t in src.A
            )
            return SigmaSigma(src, dst, alpha, comps)
        A = src.A
        alpha = tuple((u.table[j], a) for j, c in zip(K2, moved) for a in c.A)

        def comps(h):
            return exp_reindex(cat, u, tuple(c.F(_restrict(h, A, k)) for k, c in zip(K, codes)), sp[1:])

        return DeltaDelta(src, dst, alpha, comps)

    return _memo(("exp_reindex", cat, u, codes, sp), build)


def exponential(K, g) -> UniformCode:
    """``K -> γ``: index ``K -> ⟦γ⟧₀``, fibre at ``f`` is ``Σ_k ⟦γ⟧₁(f k)``."""
    c, s = _unpack(g)
    K = _labels(K)
    return UniformCode(exp_family(c.cat, K, (c,) * len(K), s), s)


def exp_split_at(g, K, X: FamObject, tag) -> tuple:
    """Like :func:`exp_split`, evaluating δ branches at the family ``X``."""
    c, s = _unpack(g)
    K = _labels(K)

    def go(codes, sp, t):
        head = sp[0]
        if head in ("ι", "*"):
            return tuple("*" for _ in codes)
        _, a, rest = t
        if head == "σ":
            subs = tuple(cc.branches[positions(cc.A)[x]] for cc, x in zip(codes, a))
            return tuple(("σ", x, r) for x, r in zip(a, go(subs, sp[1:], rest)))
        A = _sum_index(K, codes)
        gs = tuple(_restrict(a, A, k) for k in K)
        subs = tuple(cc.F(tuple(X.fibre(x) for x in gk)) for cc, gk in zip(codes, gs))
        return tuple(("δ", gk, r) for gk, r in zip(gs, go(subs, sp[1:], rest)))

    return go((c,) * len(K), s, tag)


# -- padded coproduct -----------------------------------------------------------------------


def _scs(a: tuple, b: tuple) -> tuple:
    """A shortest common supersequence, preferring ``a``'s letters on ties."""
    n, m = len(a), len(b)
    L = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            L[i][j] = L[i + 1][j + 1] + 1 if a[i] == b[j] else max(L[i + 1][j], L[i][j + 1])
    out, i, j = [], 0, 0
    while i < n and j < m:
        if a[i] == b[j]:
            out.append(a[i])
            i, j = i + 1, j + 1
        elif L[i + 1][j] >= L[i][j + 1]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    return tuple(out) + a[i:] + b[j:]


def common_spine(s: tuple, t: tuple) -> tuple:
    term = "*" if s[-1] == t[-1] == "*" else "ι"
    return _scs(s[:-1], t[:-1]) + (term,)


def _wrap_sigma(cat, inner):
    return Sigma(cat, (0,), (inner,))


def _wrap_delta(cat, inner):
    return Delta(cat, (), CodeFunctor(cat, (), lambda h: inner, lambda k: id_plus(inner), name="δ∅"))


def pad(code, s: tuple, t: tuple):
    """Insert ``σ₁``/``δ_∅`` wrappers so that spine ``s`` becomes ``t``."""
    def build():
        cat = code.cat
        if s == t or t[0] in ("ι", "*"):
            return code
        if s[0] == t[0]:
            match code:
                case Sigma(_, A, branches):
                    return Sigma(cat, A, tuple(pad(b, s[1:], t[1:]) for b in branches))
                case Delta(_, A, F):
                    Fp = CodeFunctor(
                        cat, A, lambda h: pad(F(h), s[1:], t[1:]), lambda k: pad_mor(F.mor(k), s[1:], t[1:]),
                        name=f"pad {F.name}",
                    )
                    return Delta(cat, A, Fp)
            raise NotUniform(f"code {code!r} does not follow its spine {s}")
        inner = pad(code, s, t[1:])
        return _wrap_sigma(cat, inner) if t[0] == "σ" else _wrap_delta(cat, inner)

    return _memo(("pad", code, s, t), build)


def pad_mor(rho, s: tuple, t: tuple):
    def build():
        if s == t or t[0] in ("ι", "*"):
            return rho
        src, dst = pad(rho.src, s, t), pad(rho.dst, s, t)
        if s[0] == t[0]:
            match rho:
                case SigmaSigma(_, _, alpha, rs):
                    return SigmaSigma(src, dst, alpha, tuple(pad_mor(r, s[1:], t[1:]) for r in rs))
                case DeltaDelta(_, _, alpha, _):
                    return DeltaDelta(src, dst, alpha, lambda h: pad_mor(rho.rho(h), s[1:], t[1:]))
            raise NotUniform(f"morphism {rho!r} does not follow its spine {s}")
        inner = pad_mor(rho, s, t[1:])
        if t[0] == "σ":
            return SigmaSigma(src, dst, (0,), (inner,))
        return DeltaDelta(src, dst, (), lambda h: inner)

    return _memo(("pad_mor", rho, s, t), build)


def plus_uniform(g, g2) -> UniformCode:
    """``σ₂`` of the two codes, padded to a common spine."""
    c, s = _unpack(g)
    c2, s2 = _unpack(g2)
    t = common_spine(s, s2)
    return UniformCode(Sigma(c.cat, (0, 1), (pad(c, s, t), pad(c2, s2, t))), ("σ",) + t)


# -- bullet and compilation ---------------------------------------------------------------------


def bullet(N, g) -> UniformCode:
    """``N • γ``, a code for ``⟦N⟧_Cont C ∘ ⟦γ⟧C``."""
    c, s = _unpack(g)
    cat = c.cat
    ug = UniformCode(c, s)
    match N:
        case Id():
            def build():
                def on_obj(h):
                    return exponential(h[0], ug).code

                def on_mor(k):
                    u = cat.backward(k[0])
                    return exp_reindex(cat, u, (c,) * u.dst, s)

                F = CodeFunctor(cat, (0,), on_obj, on_mor, name="X ↦ X* → γ")
                return UniformCode(Delta(cat, (0,), F), ("δ",) + s)

            return _memo(("bullet_id", c, s), build)
        case K(D):
            return _memo(
                ("bullet_k", D, c, s),
                lambda: UniformCode(
                    Sigma(cat, D.shapes, tuple(exponential(p, ug).code for p in D.positions)), ("σ",) + s
                ),
            )
        case Plus(a, b):
            return plus_uniform(bullet(a, ug), bullet(b, ug))
        case Times(a, b):
            return times_g(bullet(a, ug), bullet(b, ug), plus_bifunctor(cat))
        case Comp(a, b):
            return bullet(a, bullet(b, ug))
    raise TypeError(f"not a Nest expression: {N!r}")


def compile_nest(N, cat: FinCategory | None = None) -> UniformCode:
    """A uniform code whose interpretation is ``⟦N⟧_Cont`` on containers-as-families."""
    C = default_category() if cat is None else cat
    match N:
        case Id():
            return code_for_id(C)
        case K(D):
            return code_for_k(D, C)
        case Plus(a, b):
            return plus_uniform(compile_nest(a, C), compile_nest(b, C))
        case Times(a, b):
            return times_g(compile_nest(a, C), compile_nest(b, C), plus_bifunctor(C))
        case Comp(a, b):
            return bullet(a, compile_nest(b, C))
    raise TypeError(f"not a Nest expression: {N!r}")


def nest_family(N, D: Container, cat: FinCategory | None = None) -> FamObject:
    """``⟦N⟧_Cont D`` as a family, the target of :func:`compile_nest`'s contract."""
    return container_family(interpret_nest_cont(N, D), default_category() if cat is None else cat)


def compiled_family(N, D: Container, cat: FinCategory | None = None) -> FamObject:
    C = default_category() if cat is None else cat
    return interpret_obj(compile_nest(N, C).code, container_family(D, C))
