"""The families construction Fam(C).

A family ``(X, P)`` is a finite tuple of index elements with a fibre object
for each.  A morphism ``(h, k)`` stores, aligned with the source index, the
image of every element and the fibre morphism ``P(x) -> Q(h x)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Sequence

from .category import CategoryError, FinCategory


class FamError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FamObject:
    cat: FinCategory
    index: tuple
    fibres: tuple

    def __post_init__(self):
        if len(self.index) != len(self.fibres):
            raise FamError("index and fibres differ in length")

    @cached_property
    def position(self) -> dict:
        pos = {x: i for i, x in enumerate(self.index)}
        if len(pos) != len(self.index):
            raise FamError("duplicate index elements")
        return pos

    @cached_property
    def _key(self):
        return (self.cat, self.index, self.fibres)

    @cached_property
    def _hash(self):
        return hash(self._key)

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, FamObject) and self._hash == other._hash and self._key == other._key

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.index)

    def __contains__(self, x):
        return x in self.position

    def fibre(self, x):
        return self.fibres[self.position[x]]

    def items(self):
        return zip(self.index, self.fibres)

    def __repr__(self):
        body = ", ".join(f"{x!r}: {p!r}" for x, p in self.items())
        return f"Fam({self.cat.name}, {{{body}}})"


def fam(cat: FinCategory, assign) -> FamObject:
    """Build a family from a mapping or a sequence of (element, fibre) pairs."""
    pairs = list(assign.items()) if hasattr(assign, "items") else list(assign)
    return FamObject(cat, tuple(x for x, _ in pairs), tuple(p for _, p in pairs))


def empty_family(cat: FinCategory) -> FamObject:
    return FamObject(cat, (), ())


@dataclass(frozen=True, eq=False)
class FamMorphism:
    src: FamObject
    dst: FamObject
    on_index: tuple
    on_fibre: tuple

    @cached_property
    def _key(self):
        return (self.src, self.dst, self.on_index, self.on_fibre)

    @cached_property
    def _hash(self):
        return hash(self._key)

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, FamMorphism) and self._hash == other._hash and self._key == other._key

    def __hash__(self):
        return self._hash

    def h(self, x):
        return self.on_index[self.src.position[x]]

    def k(self, x):
        return self.on_fibre[self.src.position[x]]

    def at(self, x):
        i = self.src.position[x]
        return self.on_index[i], self.on_fibre[i]

    def __repr__(self):
        body = ", ".join(
            f"{x!r} -> {y!r} via {m!r}" for x, y, m in zip(self.src.index, self.on_index, self.on_fibre)
        )
        return f"FamMorphism({body})"


def fam_morphism(src: FamObject, dst: FamObject, fn: Callable, check: bool = True) -> FamMorphism:
    """Tabulate ``fn(x) -> (y, k_x)`` over ``src``."""
    pairs = [fn(x) for x in src.index]
    m = FamMorphism(src, dst, tuple(y for y, _ in pairs), tuple(k for _, k in pairs))
    if check:
        check_fam_morphism(m)
    return m


def check_fam_morphism(m: FamMorphism) -> None:
    C = m.src.cat
    if m.dst.cat != C:
        raise FamError("morphism between families over different categories")
    for x, p, y, k in zip(m.src.index, m.src.fibres, m.on_index, m.on_fibre):
        if y not in m.dst:
            raise FamError(f"{x!r} maps to {y!r}, not in the target index")
        if not C.is_morphism(k, p, m.dst.fibre(y)):
            raise FamError(f"fibre component at {x!r} is not a morphism {p!r} -> {m.dst.fibre(y)!r}")


@dataclass(frozen=True)
class FamIso:
    forward: FamMorphism
    backward: FamMorphism

    def verify(self) -> bool:
        return (
            fam_compose(self.backward, self.forward) == fam_identity(self.forward.src)
            and fam_compose(self.forward, self.backward) == fam_identity(self.forward.dst)
        )


def fam_identity(F: FamObject) -> FamMorphism:
    C = F.cat
    return FamMorphism(F, F, F.index, tuple(C.identity(p) for p in F.fibres))


def fam_compose(g: FamMorphism, f: FamMorphism) -> FamMorphism:
    if f.dst != g.src:
        raise FamError("endpoint mismatch in fam_compose")
    C = f.src.cat
    on_index, on_fibre = [], []
    for y, kf in zip(f.on_index, f.on_fibre):
        z, kg = g.at(y)
        on_index.append(z)
        on_fibre.append(C.compose(kg, kf))
    return FamMorphism(f.src, g.dst, tuple(on_index), tuple(on_fibre))


def is_split_cartesian(m: FamMorphism) -> bool:
    C = m.src.cat
    return all(
        C.is_identity(k) and p == m.dst.fibre(y)
        for p, y, k in zip(m.src.fibres, m.on_index, m.on_fibre)
    )


def is_fam_iso(m: FamMorphism) -> bool:
    C = m.src.cat
    if len(set(m.on_index)) != len(m.on_index) or len(m.on_index) != len(m.dst):
        return False
    return all(C.inverse(k) is not None for k in m.on_fibre)


def fam_inverse(m: FamMorphism) -> FamMorphism:
    if not is_fam_iso(m):
        raise FamError("not an isomorphism")
    C = m.src.cat
    back = {}
    for x, y, k in zip(m.src.index, m.on_index, m.on_fibre):
        back[y] = (x, C.inverse(k))
    pairs = [back[y] for y in m.dst.index]
    return FamMorphism(m.dst, m.src, tuple(x for x, _ in pairs), tuple(k for _, k in pairs))


@dataclass(frozen=True)
class Coproduct:
    obj: FamObject
    injections: tuple

    def copair(self, target: FamObject, legs: Sequence[FamMorphism]) -> FamMorphism:
        """The mediating morphism ``[legs]`` out of the coproduct."""
        if len(legs) != len(self.injections):
            raise FamError("wrong number of legs")
        on_index, on_fibre = [], []
        for (a, x) in self.obj.index:
            y, k = legs[a].at(x)
            on_index.append(y)
            on_fibre.append(k)
        return FamMorphism(self.obj, target, tuple(on_index), tuple(on_fibre))


def fam_coproduct(families: Sequence[FamObject], cat: FinCategory | None = None) -> Coproduct:
    """Indexed coproduct; elements are tagged ``(a, x)``."""
    cats = {F.cat for F in families}
    if len(cats) > 1:
        raise FamError("families over different categories")
    C = cats.pop() if cats else cat
    if C is None:
        raise FamError("empty coproduct needs an explicit category")
    index, fibres = [], []
    for a, F in enumerate(families):
        for x, p in F.items():
            index.append((a, x))
            fibres.append(p)
    obj = FamObject(C, tuple(index), tuple(fibres))
    injections = tuple(
        FamMorphism(F, obj, tuple((a, x) for x in F.index), tuple(C.identity(p) for p in F.fibres))
        for a, F in enumerate(families)
    )
    return Coproduct(obj, injections)


def reindex(g: Sequence[Hashable], m: FamMorphism) -> tuple:
    """``g*(k)``: the fibre family of ``m`` pulled back along ``g``."""
    try:
        return tuple(m.k(x) for x in g)
    except KeyError as exc:
        raise FamError(f"{exc.args[0]!r} is not in the source index") from None


@dataclass(frozen=True)
class Functor:
    """Functor data between categories: object and morphism maps."""

    source: FinCategory
    target: FinCategory
    on_obj: Callable
    on_mor: Callable

    def law_failures(self) -> list:
        S, T = self.source, self.target
        failures = []
        obs = S.objects()
        for c in obs:
            if self.on_mor(S.identity(c)) != T.identity(self.on_obj(c)):
                failures.append(("identity", c))
        for a in obs:
            for b in obs:
                for f in S.hom(a, b):
                    if not T.is_morphism(self.on_mor(f), self.on_obj(a), self.on_obj(b)):
                        failures.append(("typing", f))
                    for c in obs:
                        for g in S.hom(b, c):
                            lhs = self.on_mor(S.compose(g, f))
                            rhs = T.compose(self.on_mor(g), self.on_mor(f))
                            if lhs != rhs:
                                failures.append(("composition", g, f))
        return failures


def identity_functor(C: FinCategory) -> Functor:
    return Functor(C, C, lambda c: c, lambda m: m)


def epsilon(C: FinCategory) -> Functor:
    """The canonical embedding ``|C| -> C`` of the discretisation."""
    from .category import discretisation

    return Functor(discretisation(C), C, lambda c: c, lambda m: C.identity(m[1]))


def fam_map(F: Functor, X: FamObject, check: bool = True) -> FamObject:
    if X.cat != F.source:
        raise FamError("family is not over the functor's source")
    if check:
        bad = F.law_failures()
        if bad:
            raise CategoryError(f"functor laws fail: {bad[:3]}")
    return FamObject(F.target, X.index, tuple(F.on_obj(p) for p in X.fibres))


def fam_map_mor(F: Functor, m: FamMorphism) -> FamMorphism:
    return FamMorphism(
        fam_map(F, m.src, check=False),
        fam_map(F, m.dst, check=False),
        m.on_index,
        tuple(F.on_mor(k) for k in m.on_fibre),
    )
