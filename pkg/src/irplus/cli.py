"""Command-line front end: ``irplus check | chain | nest | fold``.

Every command prints one JSON document ``{version, suites, ...}`` and exits
with 0 when no suite has failures, 1 on a failed check, 2 on usage or parse
errors and 3 when a budget is exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .category import Fn, category_law_failures
from .compile import compile_nest, is_uniform, nest_family
from .containers import BOTTOM, I_C, M, check_component_bijections, check_nest_square, from_sizes, nest_count
from .dsl import DSLError, default_definitions, parse_source
from .fixpoint import initial_chain
from .oracle import Budget, Report, check_functor_laws, direct_nest_count, find_iso, mutate_code
from .semantics import BudgetExceeded, interpret_obj

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

NEST_CONTAINERS = (BOTTOM, I_C, M, from_sizes([0, 2]))
SQUARE_CAP = 5000  # largest extension enumerated by the nest square check


def _jsonable(x):
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return repr(x)


def _emit(doc: dict, pretty: bool) -> None:
    text = json.dumps(_jsonable(doc), indent=2 if pretty else None, ensure_ascii=False)
    sys.stdout.write(text + "\n")
    sys.stdout.flush()


def _document(reports, **extra) -> dict:
    doc = {"version": __version__, "suites": [r.as_dict() for r in reports]}
    doc.update(extra)
    return doc


def _status(reports) -> int:
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def _budget(args) -> Budget:
    return Budget(max_index=args.budget_index, object_index=args.budget_index + 1, max_objects=args.budget_objects)


def _load(path):
    if path is None:
        return default_definitions()
    return parse_source(Path(path).read_text(encoding="utf-8"))


# -- suites ------------------------------------------------------------------------------


def chain_report(name: str, code, stages: int, budget_index: int) -> tuple:
    result = initial_chain(code, stages, budget_index)
    rep = Report(f"chain:{name}")
    for st in result.stages:
        rep.cases += 1
        if not st.certificate.split:
            rep.fail({"stage": st.stage, "element": st.certificate.witness[:1]}, "split cartesian", st.certificate.witness)
    return rep, result


def nest_reports(name: str, N, cat) -> list:
    square = Report(f"nest-square:{name}")
    compiled = Report(f"compile:{name}")
    uniform = Report(f"uniform:{name}")
    code = compile_nest(N, cat)
    uniform.cases += 1
    if is_uniform(code.code) is None:
        uniform.fail({"nest": repr(N)}, "a common spine", None)
    for C in NEST_CONTAINERS:
        for n in range(3):
            if nest_count(N, C, n) > SQUARE_CAP:
                continue
            square.cases += 1
            r = check_nest_square(N, C, n)
            if not r.ok:
                square.fail({"container": repr(C), "X": n}, "bijection", r.witness)
        compiled.cases += 1
        A = interpret_obj(code.code, _family(C, cat))
        B = nest_family(N, C, cat)
        if find_iso(A, B) is None:
            compiled.fail({"container": repr(C)}, f"{len(B)} shapes up to iso", f"{len(A)} shapes, no iso")
    return [uniform, square, compiled]


def _family(C, cat):
    from .containers import container_family

    return container_family(C, cat)


def combinator_report(max_shapes: int = 2, max_pos: int = 2, max_x: int = 2) -> Report:
    import itertools

    rep = Report("container-combinators")
    conts = [
        from_sizes(c) for n in range(max_shapes + 1) for c in itertools.combinations_with_replacement(range(max_pos + 1), n)
    ]
    for a in conts:
        for b in conts:
            for x in range(max_x + 1):
                for kind in ("coproduct", "product", "compose"):
                    rep.cases += 1
                    r = check_component_bijections(kind, a, b, x)
                    if not r.ok:
                        rep.fail({"kind": kind, "C": repr(a), "D": repr(b), "X": x}, "bijection", r.witness)
    return rep


# -- commands ----------------------------------------------------------------------------


def cmd_check(defs, args) -> tuple:
    budget = _budget(args)
    reports = []
    for d in defs:
        if d.kind == "category":
            rep = Report(f"category-laws:{d.name}")
            rep.cases = 1
            for w in category_law_failures(d.value):
                rep.fail(w, "category law holds", "violated")
            reports.append(rep)
        elif d.kind == "code":
            code = mutate_code(d.value) if args.mutate else d.value
            reports.append(check_functor_laws(code, budget, name=f"functor-laws:{d.name}"))
            rep, _ = chain_report(d.name, code, args.stages, args.budget_chain)
            reports.append(rep)
        elif d.kind == "nest":
            from .compile import default_category

            reports.extend(nest_reports(d.name, d.value, default_category()))
    if defs.of_kind("nest"):
        reports.append(combinator_report())
    return _status(reports), _document(reports)


def cmd_chain(defs, args) -> tuple:
    d = defs.get(args.id, "code")
    rep, result = chain_report(d.name, d.value, args.stages, args.budget_chain)
    stages = [
        {
            "stage": st.stage,
            "cardinality": len(st.object),
            "fibres": list(st.object.fibres),
            "split": st.certificate.split,
            "checked": st.certificate.checked,
            "pointwise": st.certificate.pointwise,
        }
        for st in result.stages
    ]
    data = {
        "id": d.name,
        "cardinalities": result.cardinalities[1:],
        "stages": stages,
        "fixed": None if result.fixed is None else result.fixed[0],
    }
    return _status([rep]), _document([rep], chain=data)


def chain_extension(result, j: int, n: int) -> int:
    if j < len(result.stages):
        X = result.object(j)
    else:
        if result.fixed is None:
            raise BudgetExceeded(f"stage {j} was not computed", stage=j)
        X = result.object(result.fixed[0])
    return sum(n ** p for p in X.fibres)


def cmd_nest(defs, args) -> tuple:
    d = defs.get(args.id, "nest")
    from .compile import default_category

    code = compile_nest(d.value, default_category()).code
    result = initial_chain(code, max(args.depth, 1), args.budget_chain)
    rep = Report(f"nest:{d.name}")
    rows = []
    for j in range(args.depth + 1):
        for n in args.xs:
            got = chain_extension(result, j, n)
            want = direct_nest_count(d.value, j, n)
            rep.cases += 1
            rows.append({"depth": j, "X": n, "chain": got, "direct": want, "equal": got == want})
            if got != want:
                rep.fail({"depth": j, "X": n}, want, got)
    return _status([rep]), _document([rep], nest={"id": d.name, "rows": rows})


def cmd_fold(defs, args) -> tuple:
    from .nf import ground_map_fold, nf_fold, nf_predicate
    from .category import fn_is_bijective

    if args.kind == "nf":
        f = nf_fold(args.depth, args.ground)
        rep = Report("nf-fold")
        top = f.universe
        for u in top.index:
            rep.cases += 1
            v, k = f.nf(u), f.correct(u)
            if not nf_predicate(f.code, v):
                rep.fail({"u": u}, "normal form", v)
            elif not fn_is_bijective(k):
                rep.fail({"u": u}, "bijection", k)
        for w in f.square_failures():
            rep.fail(w["input"], w["expected"], w["got"])
        data = {"elements": len(top), "normal": len(set(f.nf(u) for u in top.index))}
        return _status([rep]), _document([rep], fold=data)
    table = tuple(int(v) for v in args.map.split(",")) if args.map else (0, 1, 1)
    f = Fn(len(table), max(table) + 1 if table else 0, table)
    g = ground_map_fold(f, args.depth)
    rep = Report("ground-map-fold")
    rep.cases = len(g.fold.value)
    for w in g.square_failures():
        rep.fail(w["input"], w["expected"], w["got"])
    return _status([rep]), _document([rep], fold={"elements": rep.cases, "map": list(table)})


# -- entry point --------------------------------------------------------------------------


def _sizes(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated sizes, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="irplus", description="Check, iterate and fold positive inductive-recursive codes.")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--file", "-f", help="definition file (default: built-in corpus)")
    common.add_argument("--budget-index", type=int, default=2, help="largest family index in morphism sweeps")
    common.add_argument("--budget-objects", type=int, default=3, help="category objects used as fibres")
    common.add_argument("--budget-chain", type=int, default=20000, help="largest chain stage materialised")
    common.add_argument("--stages", type=int, default=3)
    common.add_argument("--depth", type=int, default=3)
    common.add_argument("--xs", type=_sizes, default=[1, 2, 3], help="comma separated |X| values")
    common.add_argument("--mutate", action="store_true", help="corrupt every functor argument before checking")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="pretty", action="store_false", help="compact JSON (default)")
    fmt.add_argument("--pretty", dest="pretty", action="store_true", help="indented JSON")
    common.set_defaults(pretty=False)
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", parents=[common], help="run every law suite on the definitions")
    c.add_argument("source", nargs="?", help="definition file (same as --file)")
    sub.add_parser("chain", parents=[common], help="initial chain of a code").add_argument("id")
    sub.add_parser("nest", parents=[common], help="compiled chain vs direct Nest recursion").add_argument("id")
    f = sub.add_parser("fold", parents=[common], help="normal-form or ground-map fold")
    f.add_argument("kind", choices=("nf", "ground-map"))
    f.add_argument("--ground", type=int, default=2)
    f.add_argument("--map", help="ground map table, e.g. 0,1,1")
    return p


COMMANDS = {"check": cmd_check, "chain": cmd_chain, "nest": cmd_nest, "fold": cmd_fold}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    path = getattr(args, "source", None) or args.file
    try:
        defs = _load(path)
        status, doc = COMMANDS[args.command](defs, args)
    except (DSLError, OSError) as exc:
        print(f"irplus: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        _emit({"version": __version__, "suites": [], "error": str(exc), "stage": exc.stage, "limit": exc.limit},
              args.pretty)
        return EXIT_BUDGET
    _emit(doc, args.pretty)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
