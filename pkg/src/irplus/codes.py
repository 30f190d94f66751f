"""IR⁺ codes and the morphisms between them.

Codes and morphisms are defined together: a ``Delta`` carries a
:class:`CodeFunctor`, whose action on morphisms produces code morphisms.
Functions out of finite sets are tuples aligned with the domain's
enumeration.  Families ``A -> C`` are tuples of C-objects aligned with ``A``.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .category import FinCategory


class CodeError(ValueError):
    pass


class ShapeMismatch(CodeError):
    pass


class LawViolation(CodeError):
    def __init__(self, message, witnesses=()):
        super().__init__(message)
        self.witnesses = list(witnesses)


def positions(A: Sequence) -> dict:
    return {a: i for i, a in enumerate(A)}


def precompose(h: Sequence, alpha: Sequence, A: Sequence) -> tuple:
    """``h ∘ alpha`` for ``h`` aligned with ``A`` and ``alpha`` valued in ``A``."""
    pos = positions(A)
    return tuple(h[pos[a]] for a in alpha)


# -- codes ------------------------------------------------------------------


@dataclass(frozen=True)
class Iota:
    cat: FinCategory
    obj: object

    def __repr__(self):
        return f"ι({self.obj!r})"


@dataclass(frozen=True, eq=False)
class Sigma:
    cat: FinCategory
    A: tuple
    branches: tuple

    def __post_init__(self):
        if len(self.A) != len(self.branches):
            raise CodeError("sigma branches must be total on the index set")

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Sigma)
            and hash(self) == hash(other)
            and (self.cat, self.A, self.branches) == (other.cat, other.A, other.branches)
        )

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((self.cat, self.A, self.branches))
            object.__setattr__(self, "_hash", h)
            return h

    def f(self, a):
        return self.branches[positions(self.A)[a]]

    def __repr__(self):
        return f"σ_{len(self.A)}({', '.join(map(repr, self.branches))})"


@dataclass(frozen=True, eq=False)
class Delta:
    cat: FinCategory
    A: tuple
    F: "CodeFunctor"

    def __repr__(self):
        return f"δ_{len(self.A)}({self.F.name})"


class _Memo:
    """Thread-safe memo table for a unary function on hashable arguments."""

    def __init__(self, fn):
        self.fn = fn
        self.table = {}
        self.lock = threading.Lock()

    def __call__(self, x):
        try:
            return self.table[x]
        except KeyError:
            pass
        v = self.fn(x)
        with self.lock:
            return self.table.setdefault(x, v)


class CodeFunctor:
    """A functor ``(A -> C) -> IR⁺(C)``.

    ``on_obj`` takes a family (tuple of C-objects aligned with ``A``);
    ``on_mor`` takes a tuple of C-morphisms between two such families and
    returns a code morphism between the images.
    """

    def __init__(self, cat: FinCategory, A: Sequence, on_obj: Callable, on_mor: Callable, name: str = "F"):
        self.cat = cat
        self.A = tuple(A)
        self.name = name
        self._obj = _Memo(lambda h: on_obj(tuple(h)))
        self._mor = _Memo(lambda k: on_mor(tuple(k)))
        self.raw_on_obj = on_obj
        self.raw_on_mor = on_mor

    def __call__(self, h):
        h = tuple(h)
        if len(h) != len(self.A):
            raise CodeError(f"{self.name}: family of length {len(h)} for index set of size {len(self.A)}")
        return self._obj(h)

    def mor(self, k):
        return self._mor(tuple(k))

    def __repr__(self):
        return f"CodeFunctor({self.name})"


def delta(A: Sequence, F: CodeFunctor, check: bool = True, objects: Sequence | None = None) -> Delta:
    """Build ``δ_A F``, enforcing the functor laws of ``F`` on a small budget."""
    d = Delta(F.cat, tuple(A), F)
    if check:
        bad = functor_law_failures(F, objects=objects, max_witnesses=3)
        if bad:
            raise LawViolation(f"{F.name} is not a functor", bad)
    return d


def iota(c, cat: FinCategory) -> Iota:
    if not cat.has_object(c):
        raise CodeError(f"{c!r} is not an object of {cat.name}")
    return Iota(cat, c)


def sigma(A: Sequence, f, cat: FinCategory) -> Sigma:
    A = tuple(A)
    branches = tuple(f(a) for a in A) if callable(f) else tuple(f)
    return Sigma(cat, A, branches)


# -- morphisms --------------------------------------------------------------


@dataclass(frozen=True)
class IotaIota:
    src: Iota
    dst: Iota
    f: object


@dataclass(frozen=True)
class SigmaSigma:
    src: Sigma
    dst: Sigma
    alpha: tuple
    rho: tuple

    def at(self, a):
        i = positions(self.src.A)[a]
        return self.alpha[i], self.rho[i]


@dataclass(frozen=True, eq=False)
class DeltaDelta:
    """``δ→δ(α, ρ)``; note ``alpha`` runs from the target's index set."""

    src: Delta
    dst: Delta
    alpha: tuple
    components: Callable

    def __post_init__(self):
        if not isinstance(self.components, _Memo):
            object.__setattr__(self, "components", _Memo(self.components))

    def rho(self, h):
        return self.components(tuple(h))


CodeMorphism = IotaIota | SigmaSigma | DeltaDelta


def code_category(code) -> FinCategory:
    return code.cat


def id_plus(code):
    match code:
        case Iota(cat, c):
            return IotaIota(code, code, cat.identity(c))
        case Sigma(_, A, branches):
            return SigmaSigma(code, code, A, tuple(id_plus(b) for b in branches))
        case Delta(_, A, F):
            return DeltaDelta(code, code, A, lambda h, F=F: id_plus(F(h)))
    raise CodeError(f"not a code: {code!r}")


def _shallow_same(x, y) -> bool:
    if x is y:
        return True
    match x, y:
        case Iota(), Iota():
            return x == y
        case Sigma(), Sigma():
            return x.A == y.A
        case Delta(), Delta():
            return x.A == y.A
    return False


def compose_plus(f, g):
    """``f ∘ g`` in IR⁺(C): first ``g``, then ``f``."""
    if not _shallow_same(g.dst, f.src):
        raise ShapeMismatch(f"cannot compose {type(f).__name__} after {type(g).__name__}: endpoints differ")
    match f, g:
        case IotaIota(), IotaIota():
            cat = f.src.cat
            return IotaIota(g.src, f.dst, cat.compose(f.f, g.f))
        case SigmaSigma(), SigmaSigma():
            mid = positions(f.src.A)
            alpha = tuple(f.alpha[mid[b]] for b in g.alpha)
            rho = tuple(compose_plus(f.rho[mid[b]], t) for b, t in zip(g.alpha, g.rho))
            return SigmaSigma(g.src, f.dst, alpha, rho)
        case DeltaDelta(), DeltaDelta():
            # f = δδ(α, ρ) : δ_B G -> δ_C H, g = δδ(β, τ) : δ_A F -> δ_B G
            A, B = g.src.A, g.dst.A
            alpha = precompose(g.alpha, f.alpha, B)

            def comp(h, f=f, g=g, A=A):
                return compose_plus(f.rho(precompose(h, g.alpha, A)), g.rho(h))

            return DeltaDelta(g.src, f.dst, alpha, comp)
    raise ShapeMismatch(f"cannot compose {type(f).__name__} after {type(g).__name__}")


def plus_ir(left, right):
    """Binary coproduct of codes as a sigma over a two-element set."""
    if left.cat != right.cat:
        raise CodeError("codes over different categories")
    return Sigma(left.cat, (0, 1), (left, right))


# -- enumeration helpers ----------------------------------------------------


def budget_objects(cat: FinCategory, max_objects: int = 3) -> tuple:
    return tuple(cat.objects()[:max_objects])


def families(A: Sequence, objs: Sequence) -> Iterable[tuple]:
    return itertools.product(objs, repeat=len(A))


def family_morphisms(cat: FinCategory, h: Sequence, h2: Sequence) -> Iterable[tuple]:
    return itertools.product(*(cat.hom(a, b) for a, b in zip(h, h2)))


# -- extensional equality ---------------------------------------------------


def codes_equal(x, y, objects: Sequence | None = None, with_morphisms: bool = True) -> bool:
    """Structural equality; functor arguments compared on enumerated families."""
    if x is y:
        return True
    match x, y:
        case Iota(), Iota():
            return x == y
        case Sigma(), Sigma():
            return x.cat == y.cat and x.A == y.A and all(
                codes_equal(a, b, objects, with_morphisms) for a, b in zip(x.branches, y.branches)
            )
        case Delta(), Delta():
            if x.cat != y.cat or x.A != y.A:
                return False
            objs = budget_objects(x.cat) if objects is None else objects
            hs = list(families(x.A, objs))
            if not all(codes_equal(x.F(h), y.F(h), objects, with_morphisms) for h in hs):
                return False
            if with_morphisms:
                for h in hs:
                    for h2 in hs:
                        for k in family_morphisms(x.cat, h, h2):
                            if not morphisms_equal(x.F.mor(k), y.F.mor(k), objects):
                                return False
            return True
    return False


def morphisms_equal(m, n, objects: Sequence | None = None) -> bool:
    if m is n:
        return True
    match m, n:
        case IotaIota(), IotaIota():
            return m == n
        case SigmaSigma(), SigmaSigma():
            return (
                m.alpha == n.alpha
                and codes_equal(m.src, n.src, objects, False)
                and codes_equal(m.dst, n.dst, objects, False)
                and all(morphisms_equal(a, b, objects) for a, b in zip(m.rho, n.rho))
            )
        case DeltaDelta(), DeltaDelta():
            if m.alpha != n.alpha or m.src.A != n.src.A:
                return False
            if not (codes_equal(m.src, n.src, objects, False) and codes_equal(m.dst, n.dst, objects, False)):
                return False
            objs = budget_objects(m.src.cat) if objects is None else objects
            return all(morphisms_equal(m.rho(h), n.rho(h), objects) for h in families(m.src.A, objs))
    return False


# -- typing and law checks --------------------------------------------------


def morphism_type_failures(m, objects: Sequence | None = None, naturality: bool = True) -> list:
    """Endpoint and naturality failures of a code morphism, as witnesses."""
    out = []
    match m:
        case IotaIota(src, dst, f):
            cat = src.cat
            if not isinstance(src, Iota) or not isinstance(dst, Iota) or not cat.is_morphism(f, src.obj, dst.obj):
                out.append({"where": "ι→ι", "morphism": repr(f), "src": repr(src), "dst": repr(dst)})
        case SigmaSigma(src, dst, alpha, rho):
            if not isinstance(src, Sigma) or not isinstance(dst, Sigma) or len(alpha) != len(src.A):
                return [{"where": "σ→σ", "problem": "shape"}]
            dpos = positions(dst.A)
            for a, b, r in zip(src.A, alpha, rho):
                if b not in dpos:
                    out.append({"where": "σ→σ", "a": repr(a), "problem": "α leaves the target index set"})
                    continue
                if not codes_equal(r.src, src.f(a), objects, False) or not codes_equal(r.dst, dst.f(b), objects, False):
                    out.append({"where": "σ→σ", "a": repr(a), "problem": "component endpoints"})
                out.extend(morphism_type_failures(r, objects, naturality))
        case DeltaDelta(src, dst, alpha, _):
            if not isinstance(src, Delta) or not isinstance(dst, Delta) or len(alpha) != len(dst.A):
                return [{"where": "δ→δ", "problem": "shape"}]
            if any(a not in positions(src.A) for a in alpha):
                return [{"where": "δ→δ", "problem": "α leaves the source index set"}]
            cat = src.cat
            objs = budget_objects(cat) if objects is None else objects
            hs = list(families(src.A, objs))
            for h in hs:
                r = m.rho(h)
                if not codes_equal(r.src, src.F(h), objects, False) or not codes_equal(
                    r.dst, dst.F(precompose(h, alpha, src.A)), objects, False
                ):
                    out.append({"where": "δ→δ", "h": repr(h), "problem": "component endpoints"})
                    continue
                out.extend(morphism_type_failures(r, objects, naturality))
            if naturality and not out:
                for h in hs:
                    for h2 in hs:
                        for k in family_morphisms(cat, h, h2):
                            lhs = compose_plus(dst.F.mor(precompose(k, alpha, src.A)), m.rho(h))
                            rhs = compose_plus(m.rho(h2), src.F.mor(k))
                            if not morphisms_equal(lhs, rhs, objects):
                                out.append({"where": "δ→δ naturality", "h": repr(h), "h2": repr(h2), "k": repr(k)})
        case _:
            out.append({"problem": f"not a code morphism: {m!r}"})
    return out


def functor_law_failures(F: CodeFunctor, objects: Sequence | None = None, max_witnesses: int | None = None) -> list:
    """Identity, typing and composition laws of ``F`` over enumerated families."""
    cat = F.cat
    objs = budget_objects(cat) if objects is None else objects
    hs = list(families(F.A, objs))
    out = []

    def full():
        return max_witnesses is not None and len(out) >= max_witnesses

    for h in hs:
        ident = tuple(cat.identity(c) for c in h)
        if not morphisms_equal(F.mor(ident), id_plus(F(h)), objects):
            out.append({"law": "identity", "family": repr(h), "functor": F.name})
            if full():
                return out
    homs = {(h, h2): list(family_morphisms(cat, h, h2)) for h in hs for h2 in hs}
    for (h, h2), ks in homs.items():
        for k in ks:
            r = F.mor(k)
            try:
                ok = codes_equal(r.src, F(h), objects, False) and codes_equal(r.dst, F(h2), objects, False)
            except AttributeError:
                ok = False
            if not ok:
                out.append({"law": "typing", "from": repr(h), "to": repr(h2), "k": repr(k), "functor": F.name})
                if full():
                    return out
    if out:
        return out
    for h in hs:
        for h2 in hs:
            for k1 in homs[h, h2]:
                for h3 in hs:
                    for k2 in homs[h2, h3]:
                        k21 = tuple(cat.compose(b, a) for a, b in zip(k1, k2))
                        if not morphisms_equal(F.mor(k21), compose_plus(F.mor(k2), F.mor(k1)), objects):
                            out.append(
                                {"law": "composition", "k1": repr(k1), "k2": repr(k2), "functor": F.name}
                            )
                            if full():
                                return out
    return out


def code_law_failures(code, objects: Sequence | None = None, max_witnesses: int | None = None) -> list:
    """Recursively check every functor argument reachable from ``code``."""
    out = []
    seen = set()

    def walk(c):
        if id(c) in seen or (max_witnesses is not None and len(out) >= max_witnesses):
            return
        seen.add(id(c))
        match c:
            case Sigma(_, _, branches):
                for b in branches:
                    walk(b)
            case Delta(cat, A, F):
                out.extend(functor_law_failures(F, objects, max_witnesses))
                objs = budget_objects(cat) if objects is None else objects
                for h in families(A, objs):
                    walk(F(h))

    walk(code)
    return out


# -- small functor vocabulary ----------------------------------------------


def const_functor(cat: FinCategory, A: Sequence, code, name: str = "const") -> CodeFunctor:
    return CodeFunctor(cat, A, lambda h: code, lambda k: id_plus(code), name)


def proj_functor(cat: FinCategory, A: Sequence, a, name: str = "proj") -> CodeFunctor:
    i = positions(A)[a]
    F = CodeFunctor(
        cat,
        A,
        lambda h: Iota(cat, h[i]),
        lambda k: IotaIota(Iota(cat, cat.dom(k[i])), Iota(cat, cat.cod(k[i])), k[i]),
        name,
    )
    F.coordinate = a
    return F


# -- spines -----------------------------------------------------------------


def unify_spines(s, t):
    """Merge two spines, reading ``"*"`` (an empty σ's missing tail) as a wildcard."""
    if s is None or t is None:
        return None
    if s == ("*",):
        return t
    if t == ("*",):
        return s
    if not s or not t or s[0] != t[0]:
        return None
    if s[0] == "ι":
        return s
    rest = unify_spines(s[1:], t[1:])
    return None if rest is None else (s[0],) + rest


def _unify_all(subs):
    out = ("*",)
    for s in subs:
        out = unify_spines(out, s)
        if out is None:
            return None
    return out


def spine(code, objects: Sequence | None = None):
    """The common σ/δ/ι spine of ``code`` or None when branches disagree."""
    match code:
        case Iota():
            return ("ι",)
        case Sigma(_, _, branches):
            rest = _unify_all(spine(b, objects) for b in branches)
            return None if rest is None else ("σ",) + rest
        case Delta(cat, A, F):
            objs = budget_objects(cat) if objects is None else objects
            rest = _unify_all(spine(F(h), objects) for h in families(A, objs))
            return None if rest is None else ("δ",) + rest
    raise CodeError(f"not a code: {code!r}")


def code_depth(code, objects: Sequence | None = None) -> int:
    match code:
        case Iota():
            return 1
        case Sigma(_, _, branches):
            return 1 + max((code_depth(b, objects) for b in branches), default=0)
        case Delta(cat, A, F):
            objs = budget_objects(cat) if objects is None else objects
            return 1 + max((code_depth(F(h), objects) for h in families(A, objs)), default=0)
    raise CodeError(f"not a code: {code!r}")
