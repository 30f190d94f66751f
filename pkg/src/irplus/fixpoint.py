"""The initial chain ``0 -> ⟦γ⟧0 -> ⟦γ⟧²0 -> …`` and folds out of it.

Stages are built iteratively: ``ω₀,₁ = !`` and ``ω_{j+1,j+2} = ⟦γ⟧(ω_{j,j+1})``.
Every connecting morphism is certified split cartesian.  Because tags are
canonical, each stage sits inside the next one literally, so stage ``j`` is a
sub-family of stage ``j+1``.

Folds are computed pointwise: ``f₀ = !`` and
``f_{j+1}(x) = alg(⟦γ⟧(f_j)(x))``.  The target only has to be given by its
structure map, so carriers that are infinite in principle (universes of
normal forms) are handled through the finite image of each stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .fam import FamIso, FamMorphism, FamObject, empty_family, fam_inverse, is_split_cartesian
from .semantics import BudgetExceeded, element_of, interpret_mor_at, interpret_obj


class NotConverged(RuntimeError):
    """The chain did not reach a fixed point within the stage budget."""


@dataclass(frozen=True)
class SplitCertificate:
    checked: int
    split: bool
    witness: tuple = ()  # (element, image, fibre morphism) of the first failure
    pointwise: bool = False  # target stage was not materialised


@dataclass(frozen=True)
class ChainStage:
    stage: int
    object: FamObject
    connecting: FamMorphism | None
    certificate: SplitCertificate


@dataclass(frozen=True)
class FixpointResult:
    code: object
    stages: tuple
    fixed: tuple | None = None  # (n, FamIso from stage n to stage n+1)

    def object(self, j: int) -> FamObject:
        return self.stages[j].object

    @property
    def cardinalities(self) -> list:
        return [len(s.object) for s in self.stages]

    @property
    def all_split(self) -> bool:
        return all(s.certificate.split for s in self.stages)


def _certify(m: FamMorphism) -> SplitCertificate:
    C = m.src.cat
    for x, p, y, k in zip(m.src.index, m.src.fibres, m.on_index, m.on_fibre):
        if not (C.is_identity(k) and m.dst.fibre(y) == p):
            return SplitCertificate(len(m.src), False, (x, y, k))
    return SplitCertificate(len(m.src), True)


def _connect(code, prev: FamMorphism, src: FamObject, dst: FamObject) -> FamMorphism:
    """``⟦code⟧(prev)`` restricted to the already built stages."""
    on_index, on_fibre = [], []
    for t in src.index:
        y, k = interpret_mor_at(code, prev, t)
        on_index.append(y)
        on_fibre.append(k)
    return FamMorphism(src, dst, tuple(on_index), tuple(on_fibre))


def _pointwise_certificate(code, prev: FamMorphism, src: FamObject) -> SplitCertificate:
    """Check ``ω_{n,n+1}`` element by element without building stage ``n+1``."""
    C = src.cat
    for x, p in src.items():
        y, k = interpret_mor_at(code, prev, x)
        if not (C.is_identity(k) and C.dom(k) == p and element_of(code, src, y)):
            return SplitCertificate(len(src), False, (x, y, k), pointwise=True)
    return SplitCertificate(len(src), True, pointwise=True)


def _is_fixing(m: FamMorphism) -> bool:
    return len(m.src) == len(m.dst) and len(set(m.on_index)) == len(m.on_index) and is_split_cartesian(m)


def initial_chain(code, max_stages: int, budget_index: int = 20000) -> FixpointResult:
    """Stages ``0..max_stages`` of the initial chain, each with its ``ω_{j,j+1}``.

    The last connecting morphism is materialised when stage ``max_stages+1``
    fits the budget and is otherwise certified pointwise.  Iteration stops
    early at the first ``n`` whose connecting morphism is an isomorphism.
    """
    if max_stages < 1:
        raise ValueError("max_stages must be at least 1")
    cat = code.cat
    objs = [empty_family(cat)]
    try:
        objs.append(interpret_obj(code, objs[0], budget_index))
    except BudgetExceeded as exc:
        raise BudgetExceeded(str(exc), stage=1, limit=budget_index) from None
    prev = FamMorphism(objs[0], objs[1], (), ())
    stages = [ChainStage(0, objs[0], prev, _certify(prev))]
    fixed = None
    j = 1
    while True:
        src = objs[j]
        last = j == max_stages
        try:
            nxt = interpret_obj(code, src, budget_index)
        except BudgetExceeded as exc:
            if not last:
                raise BudgetExceeded(str(exc), stage=j + 1, limit=budget_index) from None
            stages.append(ChainStage(j, src, None, _pointwise_certificate(code, prev, src)))
            break
        omega = _connect(code, prev, src, nxt)
        stages.append(ChainStage(j, src, omega, _certify(omega)))
        if _is_fixing(omega):
            fixed = (j, FamIso(omega, fam_inverse(omega)))
            break
        if last:
            break
        objs.append(nxt)
        prev = omega
        j += 1
    return FixpointResult(code, tuple(stages), fixed)


# -- folds --------------------------------------------------------------------


@dataclass
class PointwiseFold:
    """Result of a truncated fold: ``value[x] = (image, fibre morphism)``."""

    code: object
    depth: int
    stages: list  # stage families X_0..X_depth
    value: dict = field(default_factory=dict)
    carrier: FamObject | None = None
    incoherent: list = field(default_factory=list)  # x where f_{j+1}(x) != f_j(x)

    def __call__(self, x):
        return self.value[x]

    def morphism(self, j: int | None = None) -> FamMorphism:
        src = self.stages[self.depth if j is None else j]
        pairs = [self.value[x] for x in src.index]
        return FamMorphism(src, self.carrier, tuple(y for y, _ in pairs), tuple(k for _, k in pairs))


def _carrier(cat, value: dict, target_fibre: Callable) -> FamObject:
    idx = tuple(dict.fromkeys(y for y, _ in value.values()))
    return FamObject(cat, idx, tuple(target_fibre(y) for y in idx))


def fold_pointwise(code, structure: Callable, target_fibre: Callable, depth: int, budget_index: int = 20000,
                   order: str = "forward") -> PointwiseFold:
    """Iterate ``f_{j+1} = structure ∘ ⟦code⟧(f_j)`` up to stage ``depth``.

    ``structure(t)`` takes an element of ``⟦code⟧(A, Q)`` and returns
    ``(a, k)`` with ``k : fibre(t) -> Q(a)``; ``target_fibre(a)`` is ``Q(a)``.
    """
    cat = code.cat
    X = empty_family(cat)
    stages = [X]
    value: dict = {}
    carrier = _carrier(cat, value, target_fibre)
    f = FamMorphism(X, carrier, (), ())
    incoherent = []
    for _ in range(depth):
        try:
            nxt = interpret_obj(code, X, budget_index)
        except BudgetExceeded as exc:
            raise BudgetExceeded(str(exc), stage=len(stages), limit=budget_index) from None
        new = {}
        elems = nxt.index if order == "forward" else tuple(reversed(nxt.index))
        for x in elems:
            t, c = interpret_mor_at(code, f, x, X.fibre, carrier.fibre)
            a, k = structure(t)
            new[x] = (a, cat.compose(k, c))
            if x in value and value[x] != new[x]:
                incoherent.append({"input": x, "expected": value[x], "got": new[x]})
        value.update(new)
        carrier = _carrier(cat, value, target_fibre)
        X = nxt
        stages.append(X)
        f = FamMorphism(X, carrier, tuple(value[x][0] for x in X.index), tuple(value[x][1] for x in X.index))
    return PointwiseFold(code, depth, stages, value, carrier, incoherent)


def fold_square_failures(fold: PointwiseFold, structure: Callable) -> list:
    """Elements of the top stage where ``f ∘ in ≠ alg ∘ ⟦γ⟧f`` (``in`` the inclusion).

    Coherence failures ``f_{j+1} ∘ ω_{j,j+1} ≠ f_j`` recorded while folding are
    reported as well.
    """
    code, cat = fold.code, fold.code.cat
    top = fold.stages[fold.depth]
    f = fold.morphism()
    bad = list(fold.incoherent)
    for x in top.index:
        t, c = interpret_mor_at(code, f, x, top.fibre, fold.carrier.fibre)
        a, k = structure(t)
        got = (a, cat.compose(k, c))
        if got != fold.value[x]:
            bad.append({"input": x, "expected": fold.value[x], "got": got})
    return bad


def fold(code, algebra: FamMorphism, result: FixpointResult) -> FamMorphism:
    """The algebra map out of the fixed stage ``μ`` into ``algebra.dst``.

    The homomorphism square ``f ∘ in = alg ∘ ⟦γ⟧f`` is checked exactly;
    ValueError if it fails.
    """
    if result.fixed is None:
        raise NotConverged("the chain has no recorded fixed point")
    n, iso = result.fixed
    target = algebra.dst
    cat = code.cat
    if algebra.src != interpret_obj(code, target):
        raise ValueError("algebra source must be ⟦γ⟧ of its target")

    def structure(t):
        return algebra.at(t)

    pf = fold_pointwise(code, structure, target.fibre, n)
    mu = result.object(n)
    f = FamMorphism(mu, target, tuple(pf.value[x][0] for x in mu.index), tuple(pf.value[x][1] for x in mu.index))
    # square: f ∘ in = alg ∘ ⟦γ⟧f, with in = iso.backward : ⟦γ⟧μ -> μ
    inv = iso.backward
    for t in inv.src.index:
        x, kin = inv.at(t)
        lhs = (f.h(x), cat.compose(f.k(x), kin))
        y, c = interpret_mor_at(code, f, t)
        a, k = algebra.at(y)
        if lhs != (a, cat.compose(k, c)):
            raise ValueError(f"fold square fails at {t!r}")
    return f
