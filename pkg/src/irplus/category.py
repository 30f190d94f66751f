"""Finite categories with enumerable objects and hom-sets.

Every category exposes the same small surface: ``objects()`` enumerates the
objects inside the configured budget, ``hom(a, b)`` enumerates morphisms,
``identity``/``compose``/``dom``/``cod`` give the structure.  Morphisms are
plain hashable values so equality is structural.

The finite-sets category is structural: any natural number ``n`` is the
object ``Fin n`` and any tabulated function is a morphism.  ``max_card`` only
bounds ``objects()`` (what sweeps enumerate); constructions such as
Sigma-types may legitimately produce larger objects.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Iterable, NamedTuple, Sequence


class CategoryError(ValueError):
    pass


class Fn(NamedTuple):
    """A tabulated total function ``Fin src -> Fin dst``."""

    src: int
    dst: int
    table: tuple

    def __call__(self, i):
        return self.table[i]


def fn_identity(n: int) -> Fn:
    return Fn(n, n, tuple(range(n)))


def fn_compose(g: Fn, f: Fn) -> Fn:
    if f.dst != g.src:
        raise CategoryError(f"cannot compose {g} after {f}")
    return Fn(f.src, g.dst, tuple(g.table[i] for i in f.table))


def fn_is_bijective(f: Fn) -> bool:
    return f.src == f.dst and len(set(f.table)) == f.src


def fn_inverse(f: Fn) -> Fn:
    if not fn_is_bijective(f):
        raise CategoryError(f"{f} is not a bijection")
    inv = [0] * f.src
    for i, j in enumerate(f.table):
        inv[j] = i
    return Fn(f.dst, f.src, tuple(inv))


@lru_cache(maxsize=None)
def all_functions(m: int, n: int) -> tuple:
    return tuple(Fn(m, n, t) for t in itertools.product(range(n), repeat=m))


# Canonical encodings of finite sums and products of Fin's.

def sum_offsets(sizes: Sequence[int]) -> tuple:
    out, acc = [], 0
    for s in sizes:
        out.append(acc)
        acc += s
    return tuple(out)


def sum_encode(sizes: Sequence[int], k: int, y: int) -> int:
    return sum(sizes[:k]) + y


def sum_decode(sizes: Sequence[int], z: int) -> tuple:
    for k, s in enumerate(sizes):
        if z < s:
            return k, z
        z -= s
    raise IndexError("element outside the sum")


def product_size(sizes: Sequence[int]) -> int:
    n = 1
    for s in sizes:
        n *= s
    return n


def product_encode(sizes: Sequence[int], values: Sequence[int]) -> int:
    z = 0
    for s, v in zip(sizes, values):
        z = z * s + v
    return z


def product_decode(sizes: Sequence[int], z: int) -> tuple:
    out = []
    for s in reversed(sizes):
        out.append(z % s)
        z //= s
    return tuple(reversed(out))


class FinCategory:
    """Base class; subclasses implement the structural primitives."""

    name = "category"

    def objects(self) -> tuple:
        raise NotImplementedError

    def has_object(self, c) -> bool:
        return c in self.objects()

    def hom(self, a, b) -> tuple:
        raise NotImplementedError

    def identity(self, c):
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def dom(self, m):
        raise NotImplementedError

    def cod(self, m):
        raise NotImplementedError

    def is_morphism(self, m, a, b) -> bool:
        return m in self.hom(a, b)

    def is_identity(self, m) -> bool:
        return m == self.identity(self.dom(m))

    def inverse(self, m):
        """Two-sided inverse of ``m`` or None."""
        a, b = self.dom(m), self.cod(m)
        for n in self.hom(b, a):
            if self.compose(n, m) == self.identity(a) and self.compose(m, n) == self.identity(b):
                return n
        return None

    def find_iso(self, a, b):
        """A pair ``(f, f_inv)`` witnessing ``a ≅ b`` or None."""
        if a == b:
            i = self.identity(a)
            return i, i
        for f in self.hom(a, b):
            inv = self.inverse(f)
            if inv is not None:
                return f, inv
        return None

    # Optional capabilities used by the universe codes and exponentials.
    # Categories of finite sets supply them; others raise.

    def sum_object(self, objs: Sequence):
        raise CategoryError(f"{self.name} has no finite sums of objects")

    def sum_morphism(self, ms: Sequence):
        raise CategoryError(f"{self.name} has no finite sums of morphisms")

    def product_object(self, objs: Sequence):
        raise CategoryError(f"{self.name} has no finite products of objects")

    def product_morphism(self, ms: Sequence):
        raise CategoryError(f"{self.name} has no finite products of morphisms")

    def backward(self, m) -> Fn:
        """The set function ``cod* -> dom*`` carried by ``m``, if any."""
        raise CategoryError(f"{self.name} morphisms carry no backward function")

    def reindex_sum(self, u: Fn, objs: Sequence):
        """Morphism ``Σ_k objs[k] -> Σ_k' objs[u k']`` for ``u: K' -> K``."""
        raise CategoryError(f"{self.name} cannot reindex sums")

    def reindex_product(self, u: Fn, objs: Sequence):
        """Morphism ``Π_k objs[k] -> Π_k' objs[u k']`` for ``u: K' -> K``."""
        raise CategoryError(f"{self.name} cannot reindex products")


@dataclass(frozen=True)
class DiscreteCategory(FinCategory):
    objs: tuple
    name: str = field(default="discrete", compare=False)

    def objects(self):
        return self.objs

    def has_object(self, c):
        return c in self.objs

    def hom(self, a, b):
        return (("id", a),) if a == b else ()

    def identity(self, c):
        return ("id", c)

    def compose(self, g, f):
        if g != f:
            raise CategoryError(f"cannot compose {g} after {f}")
        return f

    def dom(self, m):
        return m[1]

    def cod(self, m):
        return m[1]

    def is_morphism(self, m, a, b):
        return a == b and m == ("id", a)


@dataclass(frozen=True)
class Discretisation(FinCategory):
    """``|C|``: the objects of ``base`` with identities only."""

    base: FinCategory
    name: str = field(default="discretisation", compare=False)

    def objects(self):
        return self.base.objects()

    def has_object(self, c):
        return self.base.has_object(c)

    def hom(self, a, b):
        return (("id", a),) if a == b else ()

    def identity(self, c):
        return ("id", c)

    def compose(self, g, f):
        if g != f:
            raise CategoryError(f"cannot compose {g} after {f}")
        return f

    def dom(self, m):
        return m[1]

    def cod(self, m):
        return m[1]

    def is_morphism(self, m, a, b):
        return a == b and m == ("id", a)


@dataclass(frozen=True)
class FinSetCategory(FinCategory):
    max_card: int = 4
    name: str = field(default="finset", compare=False)

    def objects(self):
        return tuple(range(self.max_card + 1))

    def has_object(self, c):
        return isinstance(c, int) and c >= 0

    def hom(self, a, b):
        return all_functions(a, b)

    def identity(self, c):
        return fn_identity(c)

    def compose(self, g, f):
        return fn_compose(g, f)

    def dom(self, m):
        return m.src

    def cod(self, m):
        return m.dst

    def is_morphism(self, m, a, b):
        return isinstance(m, Fn) and m.src == a and m.dst == b and len(m.table) == a and all(0 <= x < b for x in m.table)

    def inverse(self, m):
        return fn_inverse(m) if fn_is_bijective(m) else None

    def find_iso(self, a, b):
        if a != b:
            return None
        i = fn_identity(a)
        return i, i

    def sum_object(self, objs):
        return sum(objs)

    def sum_morphism(self, ms):
        srcs = [m.src for m in ms]
        dsts = [m.dst for m in ms]
        offs = sum_offsets(dsts)
        table = tuple(offs[k] + y for k, m in enumerate(ms) for y in m.table)
        return Fn(sum(srcs), sum(dsts), table)

    def product_object(self, objs):
        return product_size(objs)

    def product_morphism(self, ms):
        srcs = [m.src for m in ms]
        dsts = [m.dst for m in ms]
        table = tuple(
            product_encode(dsts, [m.table[v] for m, v in zip(ms, product_decode(srcs, z))])
            for z in range(product_size(srcs))
        )
        return Fn(product_size(srcs), product_size(dsts), table)


@dataclass(frozen=True)
class Opposite(FinCategory):
    base: FinCategory
    name: str = field(default="opposite", compare=False)

    def objects(self):
        return self.base.objects()

    def has_object(self, c):
        return self.base.has_object(c)

    def hom(self, a, b):
        return self.base.hom(b, a)

    def identity(self, c):
        return self.base.identity(c)

    def compose(self, g, f):
        return self.base.compose(f, g)

    def dom(self, m):
        return self.base.cod(m)

    def cod(self, m):
        return self.base.dom(m)

    def is_morphism(self, m, a, b):
        return self.base.is_morphism(m, b, a)

    def inverse(self, m):
        return self.base.inverse(m)

    def find_iso(self, a, b):
        found = self.base.find_iso(b, a)
        return None if found is None else (found[0], found[1])

    # Sums of finite sets are products in the opposite category, and the
    # componentwise sum of set functions is the induced arrow either way.
    def sum_object(self, objs):
        return self.base.sum_object(objs)

    def sum_morphism(self, ms):
        return self.base.sum_morphism(ms)

    def product_object(self, objs):
        return self.base.product_object(objs)

    def product_morphism(self, ms):
        return self.base.product_morphism(ms)

    def backward(self, m):
        if not isinstance(self.base, FinSetCategory):
            raise CategoryError("backward functions need an opposite of finite sets")
        return m

    def reindex_sum(self, u, objs):
        if not isinstance(self.base, FinSetCategory):
            raise CategoryError("sum reindexing needs an opposite of finite sets")
        sub = [objs[u.table[kp]] for kp in range(u.src)]
        offs = sum_offsets(objs)
        table = tuple(offs[u.table[kp]] + y for kp in range(u.src) for y in range(objs[u.table[kp]]))
        return Fn(sum(sub), sum(objs), table)

    def reindex_product(self, u, objs):
        raise CategoryError(
            "Π Y -> Π (Y∘u) has no set function Π(Y∘u) -> Π Y in general"
        )


@dataclass(frozen=True)
class CoreGroupoid(FinCategory):
    """Same objects as ``base``; exactly the invertible morphisms."""

    base: FinCategory
    name: str = field(default="core", compare=False)

    def objects(self):
        return self.base.objects()

    def has_object(self, c):
        return self.base.has_object(c)

    def hom(self, a, b):
        return tuple(m for m in self.base.hom(a, b) if self.base.inverse(m) is not None)

    def identity(self, c):
        return self.base.identity(c)

    def compose(self, g, f):
        return self.base.compose(f=f, g=g)

    def dom(self, m):
        return self.base.dom(m)

    def cod(self, m):
        return self.base.cod(m)

    def is_morphism(self, m, a, b):
        if isinstance(self.base, FinSetCategory):
            return self.base.is_morphism(m, a, b) and fn_is_bijective(m)
        return m in self.hom(a, b)

    def inverse(self, m):
        return self.base.inverse(m)

    def find_iso(self, a, b):
        return self.base.find_iso(a, b)

    def _finset(self):
        if not isinstance(self.base, FinSetCategory):
            raise CategoryError("this capability needs the core of finite sets")
        return self.base

    def sum_object(self, objs):
        return self._finset().sum_object(objs)

    def sum_morphism(self, ms):
        return self._finset().sum_morphism(ms)

    def product_object(self, objs):
        return self._finset().product_object(objs)

    def product_morphism(self, ms):
        return self._finset().product_morphism(ms)

    def backward(self, m):
        self._finset()
        return fn_inverse(m)

    def reindex_sum(self, u, objs):
        self._finset()
        inv = fn_inverse(u)
        sub = [objs[u.table[kp]] for kp in range(u.src)]
        offs = sum_offsets(sub)
        table = tuple(offs[inv.table[k]] + y for k in range(len(objs)) for y in range(objs[k]))
        return Fn(sum(objs), sum(sub), table)

    def reindex_product(self, u, objs):
        self._finset()
        sub = [objs[u.table[kp]] for kp in range(u.src)]
        table = tuple(
            product_encode(sub, [product_decode(objs, z)[u.table[kp]] for kp in range(u.src)])
            for z in range(product_size(objs))
        )
        return Fn(product_size(objs), product_size(sub), table)


def discrete_category(objs: Iterable[Hashable]) -> DiscreteCategory:
    return DiscreteCategory(tuple(dict.fromkeys(objs)))


def finset_category(max_card: int = 4) -> FinSetCategory:
    if max_card < 0:
        raise CategoryError("max_card must be non-negative")
    return FinSetCategory(max_card)


def opposite(C: FinCategory) -> FinCategory:
    if isinstance(C, Opposite):
        return C.base
    return Opposite(C)


def core_groupoid(C: FinCategory) -> FinCategory:
    if isinstance(C, CoreGroupoid):
        return C
    return CoreGroupoid(C)


def discretisation(C: FinCategory) -> FinCategory:
    if isinstance(C, (DiscreteCategory, Discretisation)):
        return C
    return Discretisation(C)


def tabulate(C: FinCategory) -> dict:
    """Explicit tables of ``C`` over its enumerated objects."""
    obs = C.objects()
    hom = {(a, b): tuple(sorted(C.hom(a, b), key=repr)) for a in obs for b in obs}
    ident = {c: C.identity(c) for c in obs}
    comp = {}
    for a in obs:
        for b in obs:
            for c in obs:
                for f in hom[a, b]:
                    for g in hom[b, c]:
                        comp[g, f] = C.compose(g, f)
    return {"objects": tuple(obs), "hom": hom, "identity": ident, "compose": comp}


def same_structure(C: FinCategory, D: FinCategory) -> bool:
    return tabulate(C) == tabulate(D)


def category_law_failures(C: FinCategory) -> list:
    """Exhaustive unit/associativity/typing check over ``C.objects()``."""
    failures = []
    obs = C.objects()
    for c in obs:
        i = C.identity(c)
        if not C.is_morphism(i, c, c):
            failures.append(("identity-typing", c))
    for a in obs:
        for b in obs:
            for f in C.hom(a, b):
                if C.dom(f) != a or C.cod(f) != b:
                    failures.append(("endpoints", f))
                if C.compose(C.identity(b), f) != f or C.compose(f, C.identity(a)) != f:
                    failures.append(("unit", f))
                for c in obs:
                    for g in C.hom(b, c):
                        gf = C.compose(g, f)
                        if not C.is_morphism(gf, a, c):
                            failures.append(("compose-typing", g, f))
                        for d in obs:
                            for h in C.hom(c, d):
                                if C.compose(h, gf) != C.compose(C.compose(h, g), f):
                                    failures.append(("associativity", h, g, f))
    return failures
