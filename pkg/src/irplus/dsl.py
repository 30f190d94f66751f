"""S-expression definitions of categories, codes and Nest expressions.

Top-level forms::

    (category ID CAT)
    (code ID CODE [:over CAT])     ; or (code KIND ARGS...) with ID = KIND
    (nest ID NEST)                 ; or (nest lam)

Functor arguments of δ are limited to a fixed combinator vocabulary, so
every definition is first order and printable.  Parsing returns canonical
forms; printing them and parsing again gives the same forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .category import core_groupoid, discrete_category, finset_category, opposite
from .codes import CodeFunctor, Delta, Iota, IotaIota, Sigma, const_functor, plus_ir, proj_functor
from .containers import BOTTOM, I_C, M, Comp, Id, K, Plus, Times, from_sizes, lam_example
from .universes import nf_universe_code, pi_universe_code, sigma_universe_code


class DSLError(ValueError):
    def __init__(self, message, line=None, col=None):
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.col = col


class Sym(str):
    line = col = None


class SList(list):
    line = col = None


_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s()]+")


def read(text: str) -> list:
    """All s-expressions in ``text``; integers become ints, everything else symbols."""
    stack = [SList()]
    line, col = 1, 1
    for m in _TOKEN.finditer(text):
        tok = m.group()
        if tok == "(":
            new = SList()
            new.line, new.col = line, col
            stack[-1].append(new)
            stack.append(new)
        elif tok == ")":
            if len(stack) == 1:
                raise DSLError("unbalanced ')'", line, col)
            stack.pop()
        elif not tok.isspace() and not tok.startswith(";"):
            if re.fullmatch(r"-?\d+", tok):
                stack[-1].append(int(tok))
            else:
                s = Sym(tok)
                s.line, s.col = line, col
                stack[-1].append(s)
        nl = tok.count("\n")
        if nl:
            line += nl
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
    if len(stack) != 1:
        open_ = stack[-1]
        raise DSLError("unclosed '('", open_.line, open_.col)
    return stack[0]


def show(x) -> str:
    if isinstance(x, (list, tuple)):
        return "(" + " ".join(show(y) for y in x) + ")"
    return str(x)


def _pos(x, fallback=None):
    src = x if getattr(x, "line", None) is not None else fallback
    return (getattr(src, "line", None), getattr(src, "col", None))


def _err(msg, x, fallback=None):
    return DSLError(msg, *_pos(x, fallback))


def _plain(x):
    """Strip position data so canonical forms compare structurally."""
    if isinstance(x, list):
        return tuple(_plain(y) for y in x)
    if isinstance(x, Sym):
        return str(x)
    return x


# -- definitions ---------------------------------------------------------------------------


@dataclass
class Definition:
    kind: str  # "category" | "code" | "nest"
    name: str
    form: tuple  # canonical, position free
    over: object = None  # category form for codes
    value: object = None


@dataclass
class Definitions:
    items: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.items.values())

    def __len__(self):
        return len(self.items)

    def get(self, name: str, kind: str | None = None) -> Definition:
        d = self.items.get(name)
        if d is None or (kind is not None and d.kind != kind):
            raise DSLError(f"unknown {kind or 'identifier'} {name!r}")
        return d

    def of_kind(self, kind: str) -> list:
        return [d for d in self if d.kind == kind]

    def forms(self) -> list:
        return [(d.kind, d.name, d.form, d.over) for d in self]


DEFAULT_CATEGORY = ("opposite", ("finset", 3))

CODE_HEADS = {
    "iota", "sigma", "plus", "delta", "sigma-universe", "nf-universe", "pi-universe",
    "compile", "bullet", "exp", "times", "subst",
}
UNIVERSES = {"sigma-universe": sigma_universe_code, "nf-universe": nf_universe_code, "pi-universe": pi_universe_code}
FUNCTOR_HEADS = {"const", "proj", "sum-of", "product-of"}
NEST_ATOMS = {"id": Id(), "lam": lam_example()}
CONTAINER_ATOMS = {"ic": I_C, "m": M, "bottom": BOTTOM}


def _arity(x, n, what):
    if len(x) != n:
        raise _err(f"{what} takes {n - 1} argument(s), got {len(x) - 1}", x)


class _Evaluator:
    def __init__(self, defs: Definitions):
        self.defs = defs

    # categories
    def category(self, x):
        if isinstance(x, str):
            d = self.defs.get(x, "category") if x in self.defs.items else None
            if d is None:
                raise _err(f"unknown category {x!r}", x)
            return d.value
        if not isinstance(x, (list, tuple)) or not x:
            raise _err("expected a category form", x)
        head = x[0]
        if head == "finset":
            _arity(x, 2, "finset")
            return finset_category(self.integer(x[1], x))
        if head == "opposite":
            _arity(x, 2, "opposite")
            return opposite(self.category(x[1]))
        if head == "core":
            _arity(x, 2, "core")
            return core_groupoid(self.category(x[1]))
        if head == "discrete":
            return discrete_category(tuple(_plain(y) for y in x[1:]))
        raise _err(f"unknown category former {head!r}", x)

    def integer(self, v, parent):
        if not isinstance(v, int) or v < 0:
            raise _err(f"expected a natural number, got {v!r}", v, parent)
        return v

    def obj(self, v, cat, parent):
        v = _plain(v)
        if not cat.has_object(v):
            raise _err(f"{v!r} is not an object of {cat.name}", parent)
        return v

    # containers and nests
    def container(self, x):
        if isinstance(x, str) and x in CONTAINER_ATOMS:
            return CONTAINER_ATOMS[x]
        if isinstance(x, (list, tuple)) and x and x[0] == "cont":
            return from_sizes([self.integer(p, x) for p in x[1:]])
        raise _err(f"expected a container, got {_plain(x)!r}", x)

    def nest(self, x):
        if isinstance(x, str):
            if x in NEST_ATOMS:
                return NEST_ATOMS[x]
            d = self.defs.items.get(x)
            if d is None or d.kind != "nest":
                raise _err(f"unknown nest {x!r}", x)
            return d.value
        if not isinstance(x, (list, tuple)) or not x:
            raise _err("expected a nest form", x)
        head = x[0]
        if head == "k":
            _arity(x, 2, "k")
            return K(self.container(x[1]))
        if head in ("plus", "times", "comp"):
            _arity(x, 3, head)
            ctor = {"plus": Plus, "times": Times, "comp": Comp}[head]
            return ctor(self.nest(x[1]), self.nest(x[2]))
        raise _err(f"unknown nest former {head!r}", x)

    # codes
    def code(self, x, cat):
        from . import compile as comp

        if isinstance(x, str):
            d = self.defs.items.get(x)
            if d is None or d.kind != "code":
                raise _err(f"unknown code {x!r}", x)
            if d.value.cat != cat:
                raise _err(f"code {x!r} lives over a different category", x)
            return d.value
        if not isinstance(x, (list, tuple)) or not x:
            raise _err("expected a code form", x)
        head = x[0]
        if head == "iota":
            _arity(x, 2, "iota")
            return Iota(cat, self.obj(x[1], cat, x))
        if head == "sigma":
            return Sigma(cat, tuple(range(len(x) - 1)), tuple(self.code(y, cat) for y in x[1:]))
        if head == "plus":
            _arity(x, 3, "plus")
            return plus_ir(self.code(x[1], cat), self.code(x[2], cat))
        if head == "delta":
            _arity(x, 3, "delta")
            n = self.integer(x[1], x)
            return Delta(cat, tuple(range(n)), self.functor(x[2], cat, n))
        if head in UNIVERSES:
            ground = 2
            for opt in x[1:]:
                if isinstance(opt, (list, tuple)) and len(opt) == 2 and opt[0] == "ground":
                    ground = self.integer(opt[1], opt)
                else:
                    raise _err(f"unknown option {_plain(opt)!r}", opt, x)
            return UNIVERSES[head](cat, ground)
        if head == "compile":
            _arity(x, 2, "compile")
            return comp.compile_nest(self.nest(x[1]), cat).code
        if head == "bullet":
            _arity(x, 3, "bullet")
            return comp.bullet(self.nest(x[1]), self.code(x[2], cat)).code
        if head == "exp":
            _arity(x, 3, "exp")
            return comp.exponential(self.integer(x[1], x), self.code(x[2], cat)).code
        if head == "times":
            _arity(x, 3, "times")
            return comp.times_g(self.code(x[1], cat), self.code(x[2], cat), comp.plus_bifunctor(cat)).code
        if head == "subst":
            _arity(x, 3, "subst")
            return comp.subst_iota(self.code(x[1], cat), comp.plus_bifunctor(cat), self.obj(x[2], cat, x))
        raise _err(f"unknown code former {head!r}", x)

    def functor(self, x, cat, n):
        if not isinstance(x, (list, tuple)) or not x or x[0] not in FUNCTOR_HEADS:
            raise _err(f"expected one of {sorted(FUNCTOR_HEADS)}", x)
        A = tuple(range(n))
        head = x[0]
        if head == "const":
            _arity(x, 2, "const")
            return const_functor(cat, A, self.code(x[1], cat))
        if head == "proj":
            _arity(x, 2, "proj")
            i = self.integer(x[1], x)
            if i >= n:
                raise _err(f"projection {i} out of range for δ over {n}", x)
            return proj_functor(cat, A, i)
        obj_op, mor_op = (
            (cat.sum_object, cat.sum_morphism) if head == "sum-of" else (cat.product_object, cat.product_morphism)
        )
        return CodeFunctor(
            cat, A, lambda h: Iota(cat, obj_op(h)),
            lambda k: IotaIota(Iota(cat, obj_op([cat.dom(m) for m in k])), Iota(cat, obj_op([cat.cod(m) for m in k])),
                               mor_op(k)),
            name=head,
        )


def _split_over(x):
    body, over = [], None
    i = 0
    while i < len(x):
        if x[i] == ":over":
            if i + 1 >= len(x):
                raise _err(":over needs a category", x)
            over = x[i + 1]
            i += 2
        else:
            body.append(x[i])
            i += 1
    return body, over


def _canonical_code(x):
    """``(code ID FORM)`` or the shorthand ``(code KIND ARGS...)``."""
    body, over = _split_over(x)
    if len(body) < 2 or not isinstance(body[1], str):
        raise _err("code needs an identifier", x)
    third = body[2] if len(body) > 2 else None
    explicit = len(body) == 3 and (
        (isinstance(third, list) and third and third[0] in CODE_HEADS) or isinstance(third, str)
    )
    if explicit or (len(body) == 3 and isinstance(third, list) and body[1] not in CODE_HEADS):
        return str(body[1]), third, over
    if body[1] not in CODE_HEADS:
        raise _err(f"unknown code former {str(body[1])!r}", body[1], x)
    form = SList([body[1], *body[2:]])
    form.line, form.col = x.line, x.col
    return str(body[1]), form, over


def parse_source(text: str) -> Definitions:
    """Parse and evaluate every definition in ``text``."""
    defs = Definitions()
    ev = _Evaluator(defs)
    for x in read(text):
        if not isinstance(x, list) or not x or not isinstance(x[0], str):
            raise _err("expected a top-level form", x)
        head = x[0]
        if head == "category":
            _arity(x, 3, "category")
            name, form = str(x[1]), x[2]
            d = Definition("category", name, _plain(form), value=ev.category(form))
        elif head == "code":
            name, form, over = _canonical_code(x)
            cat_form = DEFAULT_CATEGORY if over is None else over
            cat = ev.category(cat_form)
            try:
                value = ev.code(form, cat)
            except DSLError:
                raise
            except ValueError as exc:
                raise _err(str(exc), form, x) from None
            d = Definition("code", name, _plain(form), None if over is None else _plain(over), value)
        elif head == "nest":
            if len(x) == 2 and isinstance(x[1], str):
                name, form = str(x[1]), x[1]
            else:
                _arity(x, 3, "nest")
                name, form = str(x[1]), x[2]
            d = Definition("nest", name, _plain(form), value=ev.nest(form))
        else:
            raise _err(f"unknown top-level form {head!r}", x)
        if name in defs.items:
            raise _err(f"{name!r} is defined twice", x)
        defs.items[name] = d
    return defs


def print_definitions(defs: Definitions) -> str:
    lines = []
    for d in defs:
        parts = [d.kind, d.name, d.form]
        if d.over is not None:
            parts += [":over", d.over]
        lines.append(show(list(parts)))
    return "\n".join(lines) + ("\n" if lines else "")


DEFAULT_SOURCE = """\
; codes over the opposite of finite sets unless stated otherwise
(category core3 (core (finset 3)))
(category finset3 (finset 3))
(category two (discrete a b))
(code sigma-universe (ground 2))
(code sigma-universe-core (sigma-universe (ground 2)) :over core3)
(code pi-universe-core (pi-universe (ground 2)) :over core3)
(code nf-universe-core (nf-universe (ground 2)) :over core3)
(code iota 1)
(code pairs (delta 2 (sum-of)))
(code tagged (sigma (iota a) (delta 1 (const (iota b)))) :over two)
(nest lam)
(nest square (times id id))
(nest maybe (k m))
(code lam-code (compile lam))
(code square-code (compile square))
"""


def default_definitions() -> Definitions:
    return parse_source(DEFAULT_SOURCE)
