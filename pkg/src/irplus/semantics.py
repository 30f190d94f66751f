"""Codes as endofunctors on Fam(C), code morphisms as natural transformations.

Elements of an interpreted family carry canonical tags:

* ``"*"`` for the single element of ``⟦ι c⟧``,
* ``("σ", a, t)`` for the summand ``a`` of a sigma code,
* ``("δ", g, t)`` for the summand ``g : A -> X`` of a delta code,

so equality of interpreted families is plain structural equality.  The
pointwise functions (``*_at``) evaluate a single element without building
the target family, which is what folds into large carriers need.
"""

from __future__ import annotations

import itertools
import threading
from typing import Callable

from .codes import Delta, DeltaDelta, Iota, IotaIota, Sigma, SigmaSigma, precompose
from .fam import FamMorphism, FamObject

class BudgetExceeded(RuntimeError):
    """An interpreted index set grew past the configured bound."""

    def __init__(self, message, stage=None, limit=None):
        super().__init__(message)
        self.stage = stage
        self.limit = limit


_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()
_CACHE_LIMIT = 20000


def _check(out, limit):
    if limit is not None and len(out) > limit:
        raise BudgetExceeded(f"interpreted index set exceeds {limit} elements", limit=limit)


def _elements(code, X: FamObject, limit):
    match code:
        case Iota(_, c):
            return [("*", c)]
        case Sigma(_, A, branches):
            out = []
            for a, b in zip(A, branches):
                out.extend((("σ", a, t), p) for t, p in interpret_obj(b, X, limit).items())
                _check(out, limit)
            return out
        case Delta(_, A, F):
            out = []
            for g in itertools.product(X.index, repeat=len(A)):
                Pg = tuple(X.fibre(x) for x in g)
                out.extend((("δ", g, t), p) for t, p in interpret_obj(F(Pg), X, limit).items())
                _check(out, limit)
            return out
    raise TypeError(f"not an IR⁺ code: {code!r}")


def interpret_obj(code, X: FamObject, limit: int | None = None) -> FamObject:
    """``⟦code⟧(X, P)``; raises BudgetExceeded past ``limit`` elements."""
    key = (code, X)
    hit = _CACHE.get(key)
    if hit is not None:
        _check(hit.index, limit)
        return hit
    els = _elements(code, X, limit)
    out = FamObject(X.cat, tuple(t for t, _ in els), tuple(p for _, p in els))
    with _CACHE_LOCK:
        if len(_CACHE) > _CACHE_LIMIT:
            _CACHE.clear()
        return _CACHE.setdefault(key, out)


def clear_cache() -> None:
    with _CACHE_LOCK:
        _CACHE.clear()


def element_of(code, X: FamObject, tag) -> bool:
    """Whether ``tag`` names an element of ``⟦code⟧(X, P)``, without enumerating it."""
    match code:
        case Iota():
            return tag == "*"
        case Sigma(_, A, _):
            return (
                isinstance(tag, tuple) and len(tag) == 3 and tag[0] == "σ"
                and tag[1] in A and element_of(code.f(tag[1]), X, tag[2])
            )
        case Delta(_, A, F):
            if not (isinstance(tag, tuple) and len(tag) == 3 and tag[0] == "δ"):
                return False
            g = tag[1]
            if not isinstance(g, tuple) or len(g) != len(A) or any(x not in X for x in g):
                return False
            return element_of(F(tuple(X.fibre(x) for x in g)), X, tag[2])
    raise TypeError(f"not an IR⁺ code: {code!r}")


def fibre_of(code, tag, P: Callable):
    """Fibre of the element ``tag`` of ``⟦code⟧(X, P)`` given ``P`` alone."""
    match code:
        case Iota(_, c):
            return c
        case Sigma():
            _, a, t = tag
            return fibre_of(code.f(a), t, P)
        case Delta(_, _, F):
            _, g, t = tag
            return fibre_of(F(tuple(P(x) for x in g)), t, P)
    raise TypeError(f"not an IR⁺ code: {code!r}")


def interpret_code_mor_at(rho, X: FamObject, tag, P: Callable | None = None):
    """Component of ``⟦rho⟧_X`` at one element: ``(tag', fibre morphism)``."""
    P = X.fibre if P is None else P
    match rho:
        case IotaIota(_, _, f):
            return "*", f
        case SigmaSigma():
            _, a, t = tag
            b, r = rho.at(a)
            t2, c = interpret_code_mor_at(r, X, t, P)
            return ("σ", b, t2), c
        case DeltaDelta(src, _, alpha, _):
            _, g, t = tag
            r = rho.rho(tuple(P(x) for x in g))
            t2, c = interpret_code_mor_at(r, X, t, P)
            return ("δ", precompose(g, alpha, src.A), t2), c
    raise TypeError(f"not a code morphism: {rho!r}")


def interpret_mor_at(code, m: FamMorphism, tag, P: Callable | None = None, Q: Callable | None = None):
    """Component of ``⟦code⟧(m)`` at one element: ``(tag', fibre morphism)``."""
    P = m.src.fibre if P is None else P
    Q = m.dst.fibre if Q is None else Q
    match code:
        case Iota(cat, c):
            return "*", cat.identity(c)
        case Sigma():
            _, a, t = tag
            t2, k = interpret_mor_at(code.f(a), m, t, P, Q)
            return ("σ", a, t2), k
        case Delta(cat, _, F):
            _, g, t = tag
            kg = tuple(m.k(x) for x in g)
            hg = tuple(m.h(x) for x in g)
            Qhg = tuple(Q(y) for y in hg)
            # ⟦F(Q h g)⟧(h, k) ∘ ⟦F→(g*k)⟧_(X,P), then inject at h∘g
            t1, c1 = interpret_code_mor_at(F.mor(kg), m.src, t, P)
            t2, c2 = interpret_mor_at(F(Qhg), m, t1, P, Q)
            return ("δ", hg, t2), cat.compose(c2, c1)
    raise TypeError(f"not an IR⁺ code: {code!r}")


def interpret_mor(code, m: FamMorphism) -> FamMorphism:
    """``⟦code⟧(h, k)``; no split-cartesian restriction."""
    src = interpret_obj(code, m.src)
    dst = interpret_obj(code, m.dst)
    pairs = [interpret_mor_at(code, m, t) for t in src.index]
    return FamMorphism(src, dst, tuple(y for y, _ in pairs), tuple(k for _, k in pairs))


def interpret_code_mor(rho, X: FamObject) -> FamMorphism:
    """The component at ``X`` of the natural transformation ``⟦rho⟧``."""
    src = interpret_obj(rho.src, X)
    dst = interpret_obj(rho.dst, X)
    pairs = [interpret_code_mor_at(rho, X, t) for t in src.index]
    return FamMorphism(src, dst, tuple(y for y, _ in pairs), tuple(k for _, k in pairs))
