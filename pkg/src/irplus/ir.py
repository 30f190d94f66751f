"""Plain IR codes over a discrete base and their interpretation on Fam|D|."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from .fam import FamMorphism, FamObject, is_split_cartesian


class NonSplitInput(ValueError):
    """The IR action on morphisms is only defined on split cartesian maps."""


@dataclass(frozen=True)
class IRIota:
    obj: object


@dataclass(frozen=True)
class IRSigma:
    A: tuple
    branches: tuple

    def f(self, a):
        return self.branches[self.A.index(a)]


@dataclass(frozen=True, eq=False)
class IRDelta:
    A: tuple
    F: Callable  # (A -> |D|) -> IRCode, an arbitrary function

    def __post_init__(self):
        if not hasattr(self.F, "memo"):
            object.__setattr__(self, "F", _memoized(self.F))


def _memoized(fn):
    table = {}

    def wrapped(h):
        h = tuple(h)
        if h not in table:
            table[h] = fn(h)
        return table[h]

    wrapped.memo = table
    wrapped.raw = fn
    return wrapped


IRCode = IRIota | IRSigma | IRDelta


def _elements(code, X: FamObject):
    match code:
        case IRIota(c):
            return [("*", c)]
        case IRSigma(A, branches):
            return [(("σ", a, t), p) for a, b in zip(A, branches) for t, p in _elements(b, X)]
        case IRDelta(A, F):
            out = []
            for g in itertools.product(X.index, repeat=len(A)):
                Pg = tuple(X.fibre(x) for x in g)
                out.extend((("δ", g, t), p) for t, p in _elements(F(Pg), X))
            return out
    raise TypeError(f"not an IR code: {code!r}")


def interpret_ir_obj(code, X: FamObject) -> FamObject:
    els = _elements(code, X)
    return FamObject(X.cat, tuple(t for t, _ in els), tuple(p for _, p in els))


def _mor_at(code, m: FamMorphism, tag):
    C = m.src.cat
    match code:
        case IRIota(c):
            return "*", C.identity(c)
        case IRSigma():
            _, a, t = tag
            t2, k = _mor_at(code.f(a), m, t)
            return ("σ", a, t2), k
        case IRDelta(_, F):
            _, g, t = tag
            hg = tuple(m.h(x) for x in g)
            # Q∘h∘g = P∘g on the nose, so the same code F(P∘g) applies
            Qhg = tuple(m.dst.fibre(y) for y in hg)
            t2, k = _mor_at(F(Qhg), m, t)
            return ("δ", hg, t2), k
    raise TypeError(f"not an IR code: {code!r}")


def interpret_ir_mor(code, m: FamMorphism) -> FamMorphism:
    if not is_split_cartesian(m):
        raise NonSplitInput("IR codes act only on split cartesian morphisms (Q∘h = P)")
    src = interpret_ir_obj(code, m.src)
    dst = interpret_ir_obj(code, m.dst)
    pairs = [_mor_at(code, m, t) for t in src.index]
    return FamMorphism(src, dst, tuple(y for y, _ in pairs), tuple(k for _, k in pairs))


def ir_codes_equal(x, y, objects) -> bool:
    """Structural equality; delta arguments compared on all ``A -> objects``."""
    if x is y:
        return True
    match x, y:
        case IRIota(), IRIota():
            return x == y
        case IRSigma(), IRSigma():
            return x.A == y.A and all(ir_codes_equal(a, b, objects) for a, b in zip(x.branches, y.branches))
        case IRDelta(), IRDelta():
            return x.A == y.A and all(
                ir_codes_equal(x.F(h), y.F(h), objects) for h in itertools.product(objects, repeat=len(x.A))
            )
    return False


def ir_plus(left, right):
    return IRSigma((0, 1), (left, right))
