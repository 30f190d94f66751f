"""Containers, their extensions, and the nested-type grammar.

A container is a tuple of shapes with a number of positions for each shape;
the positions of ``s`` are ``0..P(s)-1``.  Finite sets are tuples of
hashable elements, and an element of an extension is ``(s, f)`` with ``f`` a
tuple of length ``P(s)``.

The combinators come with explicit maps between extensions.  Each map is a
disjoint union over shape components whose behaviour depends only on a small
signature (position counts and the set ``X``), which is what
:func:`check_component_bijections` exploits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .category import FinCategory, finset_category, opposite, sum_offsets
from .fam import FamObject


@dataclass(frozen=True)
class Container:
    shapes: tuple
    positions: tuple

    def __post_init__(self):
        if len(self.shapes) != len(self.positions):
            raise ValueError("positions must be given for every shape")
        if len(set(self.shapes)) != len(self.shapes):
            raise ValueError("duplicate shapes")

    def P(self, s) -> int:
        return self.positions[self.shapes.index(s)]

    def items(self):
        return zip(self.shapes, self.positions)

    def __repr__(self):
        return f"Container({dict(self.items())!r})"


def container(shapes: Sequence, positions) -> Container:
    shapes = tuple(shapes)
    pos = tuple(positions(s) for s in shapes) if callable(positions) else tuple(positions)
    return Container(shapes, pos)


def from_sizes(sizes: Sequence[int]) -> Container:
    """Container with shapes ``0..n-1``."""
    return Container(tuple(range(len(sizes))), tuple(sizes))


I_C = Container((0,), (1,))  # the identity functor
M = Container((True, False), (1, 0))  # X ↦ X + 1
BOTTOM = Container((), ())


def as_set(X) -> tuple:
    return tuple(range(X)) if isinstance(X, int) else tuple(X)


def extension(C: Container, X) -> tuple:
    """``⟦S,P⟧(X) = Σ s : S. P(s) -> X``."""
    X = as_set(X)
    return tuple((s, f) for s, p in C.items() for f in itertools.product(X, repeat=p))


def extension_size(C: Container, n: int) -> int:
    return sum(n ** p for p in C.positions)


def extension_map(C: Container, fn: Callable) -> Callable:
    """Action of ``⟦C⟧`` on a function: ``(s, f) ↦ (s, fn ∘ f)``."""
    return lambda e: (e[0], tuple(fn(x) for x in e[1]))


# -- set operations --------------------------------------------------------------


def set_sum(A, B) -> tuple:
    return tuple((0, a) for a in A) + tuple((1, b) for b in B)


def set_product(A, B) -> tuple:
    return tuple(itertools.product(A, B))


# -- combinators and their extension maps -------------------------------------------


def cont_coproduct(C: Container, D: Container) -> Container:
    shapes = tuple((0, s) for s in C.shapes) + tuple((1, s) for s in D.shapes)
    return Container(shapes, C.positions + D.positions)


def cont_product(C: Container, D: Container) -> Container:
    shapes = tuple(itertools.product(C.shapes, D.shapes))
    return Container(shapes, tuple(C.P(s) + D.P(t) for s, t in shapes))


def cont_compose(C: Container, D: Container) -> Container:
    """``(Σ s. P(s) -> S', (s, f) ↦ Σ p. P'(f p))``."""
    shapes, pos = [], []
    for s, p in C.items():
        for f in itertools.product(D.shapes, repeat=p):
            shapes.append((s, f))
            pos.append(sum(D.P(t) for t in f))
    return Container(tuple(shapes), tuple(pos))


def coproduct_map(C: Container, D: Container) -> Callable:
    """``⟦C + D⟧X -> ⟦C⟧X + ⟦D⟧X``."""
    return lambda e: (e[0][0], (e[0][1], e[1]))


def coproduct_map_inverse(C: Container, D: Container) -> Callable:
    return lambda e: ((e[0], e[1][0]), e[1][1])


def product_map(C: Container, D: Container) -> Callable:
    """``⟦C × D⟧X -> ⟦C⟧X × ⟦D⟧X``: split the positions at ``P(s)``."""

    def go(e):
        (s, t), f = e
        n = C.P(s)
        return (s, f[:n]), (t, f[n:])

    return go


def product_map_inverse(C: Container, D: Container) -> Callable:
    return lambda e: ((e[0][0], e[1][0]), e[0][1] + e[1][1])


def compose_map(C: Container, D: Container) -> Callable:
    """``⟦C ∘ D⟧X -> ⟦C⟧(⟦D⟧X)``: cut the positions into blocks, one per ``p``."""

    def go(e):
        (s, g), f = e
        sizes = [D.P(t) for t in g]
        offs = sum_offsets(sizes)
        return s, tuple((t, f[o:o + n]) for t, o, n in zip(g, offs, sizes))

    return go


def compose_map_inverse(C: Container, D: Container) -> Callable:
    def go(e):
        s, inner = e
        g = tuple(t for t, _ in inner)
        f = tuple(x for _, xs in inner for x in xs)
        return (s, g), f

    return go


# -- bijection checks -----------------------------------------------------------------


@dataclass
class BijectionCheck:
    ok: bool
    checked: int
    witness: object = None


def check_bijection(fn: Callable, domain, codomain, inverse: Callable | None = None) -> BijectionCheck:
    """Exhaustive: ``fn`` maps ``domain`` injectively onto ``codomain``."""
    target = set(codomain)
    seen = {}
    for x in domain:
        y = fn(x)
        if y not in target:
            return BijectionCheck(False, len(seen), {"input": x, "got": y, "problem": "outside codomain"})
        if y in seen:
            return BijectionCheck(False, len(seen), {"input": x, "other": seen[y], "problem": "not injective"})
        if inverse is not None and inverse(y) != x:
            return BijectionCheck(False, len(seen), {"input": x, "got": inverse(y), "problem": "inverse"})
        seen[y] = x
    if len(seen) != len(target):
        return BijectionCheck(False, len(seen), {"problem": "not surjective", "missing": len(target) - len(seen)})
    return BijectionCheck(True, len(seen))


_COMPONENT_MEMO: dict = {}


def check_component_bijections(kind: str, C: Container, D: Container, X) -> BijectionCheck:
    """Verify one combinator's extension map at ``X``, shape component by component.

    Components of ``⟦C op D⟧X`` are indexed by the shapes of ``C`` (and of
    ``D`` for products); the map restricted to a component depends only on
    its signature, so each distinct signature is enumerated once.
    """
    X = as_set(X)
    total = 0
    if kind == "coproduct":
        parts = [((0, s), Container(((0, s),), (p,)), None) for s, p in C.items()]
        parts += [((1, s), Container(((1, s),), (p,)), None) for s, p in D.items()]
        for _, single, _ in parts:
            (i, s), p = single.shapes[0], single.positions[0]
            key = (kind, p, len(X))
            if key not in _COMPONENT_MEMO:
                dom = extension(single, X)
                side = Container((s,), (p,))
                cod = tuple((i, e) for e in extension(side, X))
                _COMPONENT_MEMO[key] = check_bijection(
                    coproduct_map(C, D), dom, cod, coproduct_map_inverse(C, D)
                )
            r = _COMPONENT_MEMO[key]
            if not r.ok:
                return r
            total += r.checked
        return BijectionCheck(True, total)
    if kind == "product":
        for s, p in C.items():
            for t, q in D.items():
                key = (kind, p, q, len(X))
                if key not in _COMPONENT_MEMO:
                    Cs, Dt = Container((s,), (p,)), Container((t,), (q,))
                    dom = extension(Container(((s, t),), (p + q,)), X)
                    cod = set_product(extension(Cs, X), extension(Dt, X))
                    _COMPONENT_MEMO[key] = check_bijection(
                        product_map(Cs, Dt), dom, cod, product_map_inverse(Cs, Dt)
                    )
                r = _COMPONENT_MEMO[key]
                if not r.ok:
                    return r
                total += r.checked
        return BijectionCheck(True, total)
    if kind == "compose":
        inner = extension(D, X)
        for s, p in C.items():
            key = (kind, p, D, len(X))
            if key not in _COMPONENT_MEMO:
                Cs = Container((s,), (p,))
                dom = extension(cont_compose(Cs, D), X)
                cod = extension(Cs, inner)
                _COMPONENT_MEMO[key] = check_bijection(
                    compose_map(Cs, D), dom, cod, compose_map_inverse(Cs, D)
                )
            r = _COMPONENT_MEMO[key]
            if not r.ok:
                return r
            total += r.checked
        return BijectionCheck(True, total)
    raise ValueError(f"unknown combinator {kind!r}")


# -- Nest grammar -------------------------------------------------------------------------


@dataclass(frozen=True)
class Id:
    def __repr__(self):
        return "Id"


@dataclass(frozen=True)
class K:
    C: Container

    def __repr__(self):
        return f"K{self.C!r}"


@dataclass(frozen=True)
class Plus:
    left: object
    right: object


@dataclass(frozen=True)
class Times:
    left: object
    right: object


@dataclass(frozen=True)
class Comp:
    outer: object
    inner: object


NestExpr = Id | K | Plus | Times | Comp


def lam_example():
    """``K I_C + (Id × Id) + (Id ⊛ K M)``."""
    return Plus(Plus(K(I_C), Times(Id(), Id())), Comp(Id(), K(M)))


def nest_depth(N) -> int:
    match N:
        case Id() | K():
            return 1
        case Plus(a, b) | Times(a, b) | Comp(a, b):
            return 1 + max(nest_depth(a), nest_depth(b))
    raise TypeError(f"not a Nest expression: {N!r}")


def interpret_nest(N, F: Callable, X) -> tuple:
    """``⟦N⟧ F X`` for ``F`` an evaluator on finite sets."""
    X = as_set(X)
    match N:
        case Id():
            return as_set(F(X))
        case K(C):
            return extension(C, X)
        case Plus(a, b):
            return set_sum(interpret_nest(a, F, X), interpret_nest(b, F, X))
        case Times(a, b):
            return set_product(interpret_nest(a, F, X), interpret_nest(b, F, X))
        case Comp(a, b):
            return interpret_nest(a, F, interpret_nest(b, F, X))
    raise TypeError(f"not a Nest expression: {N!r}")


def interpret_nest_cont(N, C: Container) -> Container:
    """``⟦N⟧_Cont C``."""
    match N:
        case Id():
            return C
        case K(D):
            return D
        case Plus(a, b):
            return cont_coproduct(interpret_nest_cont(a, C), interpret_nest_cont(b, C))
        case Times(a, b):
            return cont_product(interpret_nest_cont(a, C), interpret_nest_cont(b, C))
        case Comp(a, b):
            return cont_compose(interpret_nest_cont(a, C), interpret_nest_cont(b, C))
    raise TypeError(f"not a Nest expression: {N!r}")


def nest_map(N, C: Container, X) -> Callable:
    """Explicit map ``⟦⟦N⟧_Cont C⟧X -> ⟦N⟧(⟦C⟧)X`` built from the combinator maps."""
    X = as_set(X)
    match N:
        case Id() | K():
            return lambda e: e
        case Plus(a, b):
            A, B = interpret_nest_cont(a, C), interpret_nest_cont(b, C)
            split, fa, fb = coproduct_map(A, B), nest_map(a, C, X), nest_map(b, C, X)

            def go(e):
                i, x = split(e)
                return (i, fa(x) if i == 0 else fb(x))

            return go
        case Times(a, b):
            A, B = interpret_nest_cont(a, C), interpret_nest_cont(b, C)
            split, fa, fb = product_map(A, B), nest_map(a, C, X), nest_map(b, C, X)

            def go(e):
                x, y = split(e)
                return fa(x), fb(y)

            return go
        case Comp(a, b):
            A, B = interpret_nest_cont(a, C), interpret_nest_cont(b, C)
            cut = compose_map(A, B)
            fb = nest_map(b, C, X)
            Y = interpret_nest(b, lambda Z: extension(C, Z), X)
            fa = nest_map(a, C, Y)
            move = extension_map(A, fb)

            def go(e):
                return fa(move(cut(e)))

            return go
    raise TypeError(f"not a Nest expression: {N!r}")


def nest_count(N, C: Container, n: int) -> int:
    """``|⟦N⟧(⟦C⟧)(Fin n)|`` from sizes alone (used to bound sweeps)."""
    match N:
        case Id():
            return extension_size(C, n)
        case K(D):
            return extension_size(D, n)
        case Plus(a, b):
            return nest_count(a, C, n) + nest_count(b, C, n)
        case Times(a, b):
            return nest_count(a, C, n) * nest_count(b, C, n)
        case Comp(a, b):
            return nest_count(a, C, nest_count(b, C, n))
    raise TypeError(f"not a Nest expression: {N!r}")


def check_nest_square(N, C: Container, X) -> BijectionCheck:
    """``⟦⟦N⟧_Cont C⟧X ≅ ⟦N⟧(⟦C⟧)X`` by the explicit map."""
    X = as_set(X)
    dom = extension(interpret_nest_cont(N, C), X)
    cod = interpret_nest(N, lambda Z: extension(C, Z), X)
    return check_bijection(nest_map(N, C, X), dom, cod)


# -- containers as families -----------------------------------------------------------------


def container_category(max_card: int = 4) -> FinCategory:
    return opposite(finset_category(max_card))


def container_family(C: Container, cat: FinCategory | None = None) -> FamObject:
    cat = container_category() if cat is None else cat
    return FamObject(cat, C.shapes, C.positions)


def family_container(X: FamObject) -> Container:
    return Container(X.index, X.fibres)
