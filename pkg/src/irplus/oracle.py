"""Brute-force enumeration and law sweeps.

Every check returns a :class:`Report` listing each failing case as a
reproducible ``{input, expected, got}`` record; nothing here raises on a
failed law.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .category import FinCategory
from .codes import (
    CodeFunctor,
    Delta,
    DeltaDelta,
    Iota,
    IotaIota,
    Sigma,
    SigmaSigma,
    code_law_failures,
    const_functor,
    id_plus,
    morphism_type_failures,
    proj_functor,
)
from .fam import (
    FamError,
    FamIso,
    FamMorphism,
    FamObject,
    check_fam_morphism,
    fam_compose,
    fam_identity,
)
from .semantics import interpret_code_mor, interpret_mor, interpret_obj


@dataclass(frozen=True)
class Budget:
    max_index: int = 2  # morphism-pair sweeps
    object_index: int = 3  # object sweeps
    max_objects: int = 3  # ℂ-objects used as fibres
    depth: int = 3


DEFAULT_BUDGET = Budget()


@dataclass
class Report:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, input, expected, got):
        self.failures.append({"input": input, "expected": expected, "got": got})

    def as_dict(self) -> dict:
        return {"name": self.name, "cases": self.cases, "failures": self.failures}


# -- enumerators ----------------------------------------------------------------


def enumerate_fam_objects(C: FinCategory, max_index: int, objects=None) -> Iterator[FamObject]:
    """Families with index ``0..n-1``, ``n ≤ max_index``, by size then fibres."""
    objs = tuple(C.objects() if objects is None else objects)
    for n in range(max_index + 1):
        for fibres in itertools.product(objs, repeat=n):
            yield FamObject(C, tuple(range(n)), fibres)


def enumerate_fam_morphisms(src: FamObject, dst: FamObject) -> Iterator[FamMorphism]:
    if src.cat != dst.cat:
        raise FamError("families over different categories")
    C = src.cat
    for h in itertools.product(dst.index, repeat=len(src)):
        homs = [C.hom(p, dst.fibre(y)) for p, y in zip(src.fibres, h)]
        for k in itertools.product(*homs):
            yield FamMorphism(src, dst, h, k)


def _families(C, budget: Budget, index: int):
    return list(enumerate_fam_objects(C, index, C.objects()[: budget.max_objects]))


# -- law sweeps -----------------------------------------------------------------


def check_functor_laws(code, budget: Budget = DEFAULT_BUDGET, name: str | None = None) -> Report:
    """Identity, typing and composition of ``⟦code⟧`` plus the syntactic laws."""
    C = code.cat
    rep = Report(name or "functor-laws")
    objs = C.objects()[: budget.max_objects]
    for w in code_law_failures(code, objects=objs):
        rep.fail(w, "functor law holds", "violated")
    rep.cases += 1
    for X in _families(C, budget, budget.object_index):
        rep.cases += 1
        got = interpret_mor(code, fam_identity(X))
        if got != fam_identity(interpret_obj(code, X)):
            rep.fail({"law": "identity", "family": repr(X)}, "identity", repr(got))
    fams = _families(C, budget, budget.max_index)
    homs = {(X, Y): list(enumerate_fam_morphisms(X, Y)) for X in fams for Y in fams}
    image = {}
    for (X, Y), ms in homs.items():
        for m in ms:
            rep.cases += 1
            try:
                im = interpret_mor(code, m)
                check_fam_morphism(im)
                if im.src != interpret_obj(code, X) or im.dst != interpret_obj(code, Y):
                    raise FamError("endpoints differ from the interpreted families")
            except Exception as exc:  # noqa: BLE001 - every failure is a witness
                rep.fail({"law": "typing", "morphism": repr(m)}, "a morphism ⟦γ⟧X -> ⟦γ⟧Y", str(exc))
                continue
            image[m] = im
    if rep.failures:
        return rep
    for X in fams:
        for Y in fams:
            for m1 in homs[X, Y]:
                for Z in fams:
                    for m2 in homs[Y, Z]:
                        rep.cases += 1
                        # every composite X -> Z is itself enumerated, so its image is cached
                        lhs = image[fam_compose(m2, m1)]
                        rhs = fam_compose(image[m2], image[m1])
                        if lhs != rhs:
                            rep.fail(
                                {"law": "composition", "m1": repr(m1), "m2": repr(m2)}, repr(rhs), repr(lhs)
                            )
    return rep


def check_naturality(rho, budget: Budget = DEFAULT_BUDGET, name: str | None = None) -> Report:
    """``⟦ρ⟧_Y ∘ ⟦γ⟧m = ⟦γ'⟧m ∘ ⟦ρ⟧_X`` for every enumerated ``m``."""
    C = rho.src.cat
    rep = Report(name or "naturality")
    objs = C.objects()[: budget.max_objects]
    for w in morphism_type_failures(rho, objects=objs):
        rep.fail(w, "well-typed natural code morphism", "violated")
    rep.cases += 1
    fams = _families(C, budget, budget.max_index)
    for X in fams:
        rX = interpret_code_mor(rho, X)
        for Y in fams:
            rY = interpret_code_mor(rho, Y)
            for m in enumerate_fam_morphisms(X, Y):
                rep.cases += 1
                lhs = fam_compose(rY, interpret_mor(rho.src, m))
                rhs = fam_compose(interpret_mor(rho.dst, m), rX)
                if lhs != rhs:
                    rep.fail({"morphism": repr(m)}, repr(rhs), repr(lhs))
    return rep


# -- isomorphism search --------------------------------------------------------------


def find_iso(A: FamObject, B: FamObject) -> FamIso | None:
    """An index bijection with fibre isomorphisms, or None.

    Isomorphism of fibres is an equivalence relation, so matching greedily
    inside each class is complete.
    """
    if A.cat != B.cat or len(A) != len(B):
        return None
    C = A.cat
    free = list(B.index)
    fwd_idx, fwd_k, back = [], [], {}
    for x, p in A.items():
        for j, y in enumerate(free):
            found = C.find_iso(p, B.fibre(y))
            if found is not None:
                f, g = found
                fwd_idx.append(y)
                fwd_k.append(f)
                back[y] = (x, g)
                del free[j]
                break
        else:
            return None
    forward = FamMorphism(A, B, tuple(fwd_idx), tuple(fwd_k))
    backward = FamMorphism(B, A, tuple(back[y][0] for y in B.index), tuple(back[y][1] for y in B.index))
    iso = FamIso(forward, backward)
    return iso if iso.verify() else None


# -- direct Nest recursion ---------------------------------------------------------------


def direct_nest_count(N, depth: int, n: int) -> int:
    """``|⟦N⟧^depth(⊥)(Fin n)|`` by recursion on integers alone."""
    from .containers import Comp, Id, K, Plus, Times

    def count(expr, F, m):
        match expr:
            case Id():
                return F(m)
            case K(C):
                return sum(m ** p for p in C.positions)
            case Plus(a, b):
                return count(a, F, m) + count(b, F, m)
            case Times(a, b):
                return count(a, F, m) * count(b, F, m)
            case Comp(a, b):
                return count(a, F, count(b, F, m))
        raise TypeError(f"not a Nest expression: {expr!r}")

    def T(d):
        if d == 0:
            return lambda m: 0
        prev = T(d - 1)
        memo = {}

        def F(m):
            if m not in memo:
                memo[m] = count(N, prev, m)
            return memo[m]

        return F

    return T(depth)(n)


# -- generators and mutants ------------------------------------------------------------


def random_ir_code(rng: random.Random, objs, depth: int = 3, max_arity: int = 2):
    """A random IR code; δ arguments are tabulated over every family of ``objs``."""
    from .ir import IRDelta, IRIota, IRSigma

    objs = tuple(objs)
    kind = "ι" if depth <= 1 else rng.choice("ισσδδ")
    if kind == "ι":
        return IRIota(rng.choice(objs))
    A = tuple(range(rng.randint(0, max_arity)))
    if kind == "σ":
        return IRSigma(A, tuple(random_ir_code(rng, objs, depth - 1, max_arity) for _ in A))
    table = {h: random_ir_code(rng, objs, depth - 1, max_arity) for h in itertools.product(objs, repeat=len(A))}
    return IRDelta(A, lambda h, table=table: table[tuple(h)])


def ir_corpus(objs, count: int = 100, depth: int = 3, seed: int = 0) -> list:
    rng = random.Random(seed)
    return [random_ir_code(rng, objs, depth) for _ in range(count)]


def random_plus_code(rng: random.Random, cat: FinCategory, depth: int = 3):
    """A random IR⁺ code whose δ arguments are constant or projection functors."""
    objs = cat.objects()
    kind = "ι" if depth <= 1 else rng.choice("ισδ")
    if kind == "ι":
        return Iota(cat, rng.choice(objs))
    A = tuple(range(rng.randint(0, 2)))
    if kind == "σ":
        return Sigma(cat, A, tuple(random_plus_code(rng, cat, depth - 1) for _ in A))
    if A and rng.random() < 0.5:
        return Delta(cat, A, proj_functor(cat, A, rng.choice(A)))
    return Delta(cat, A, const_functor(cat, A, random_plus_code(rng, cat, depth - 1)))


def random_code_morphism(rng: random.Random, code):
    """A random code morphism out of ``code`` (of the shape :func:`random_plus_code` makes)."""
    cat = code.cat
    match code:
        case Iota(_, c):
            targets = [d for d in cat.objects() if cat.hom(c, d)]
            d = rng.choice(targets)
            return IotaIota(code, Iota(cat, d), rng.choice(cat.hom(c, d)))
        case Sigma(_, A, branches):
            parts = [random_code_morphism(rng, b) for b in branches]
            extra = rng.randint(0, 1)
            B = tuple(range(len(A) + extra))
            order = list(B)
            rng.shuffle(order)
            alpha = tuple(order[: len(A)])
            dst_branches = [None] * len(B)
            for a, r in zip(alpha, parts):
                dst_branches[a] = r.dst
            for b in B:
                if dst_branches[b] is None:
                    dst_branches[b] = random_plus_code(rng, cat, 2)
            return SigmaSigma(code, Sigma(cat, B, tuple(dst_branches)), alpha, tuple(parts))
        case Delta(_, A, F):
            a = getattr(F, "coordinate", None)
            if a is not None:
                B = tuple(range(rng.randint(1, 2)))
                alpha = (a,) + tuple(rng.choice(A) for _ in B[1:])
                dst = Delta(cat, B, proj_functor(cat, B, 0))
                return DeltaDelta(code, dst, alpha, lambda h, cat=cat, a=a: id_plus(Iota(cat, h[a])))
            inner = F(tuple(cat.objects()[0] for _ in A))
            r = random_code_morphism(rng, inner)
            B = tuple(range(rng.randint(0, 2))) if A else ()
            alpha = tuple(rng.choice(A) for _ in B)
            dst = Delta(cat, B, const_functor(cat, B, r.dst))
            return DeltaDelta(code, dst, alpha, lambda h, r=r: r)
    raise TypeError(f"not an IR⁺ code: {code!r}")


def morphism_triples(cat: FinCategory, count: int = 200, depth: int = 3, seed: int = 0) -> list:
    """Composable ``(m1, m2, m3)`` with ``m1`` out of a random code of the given depth."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m1 = random_code_morphism(rng, random_plus_code(rng, cat, depth))
        m2 = random_code_morphism(rng, m1.dst)
        m3 = random_code_morphism(rng, m2.dst)
        out.append((m1, m2, m3))
    return out


def mutate_code(code):
    """Copy of ``code`` whose every functor sends each morphism to an identity.

    The result breaks typing of the morphism action as soon as some
    functor argument is not constant, which a law sweep must report.
    """
    memo = {}

    def go(c):
        if id(c) in memo:
            return memo[id(c)][1]
        match c:
            case Iota():
                out = c
            case Sigma(cat, A, branches):
                out = Sigma(cat, A, tuple(go(b) for b in branches))
            case Delta(cat, A, F):
                G = CodeFunctor(
                    cat, A, lambda h, F=F: go(F(h)), lambda k, F=F, cat=cat: id_plus(go(F(tuple(map(cat.dom, k))))),
                    name=f"mutant {F.name}",
                )
                out = Delta(cat, A, G)
            case _:
                raise TypeError(f"not an IR⁺ code: {c!r}")
        memo[id(c)] = (c, out)
        return out

    return go(code)


def iter_reports(reports: Iterable[Report]) -> list:
    return [r.as_dict() for r in reports]
