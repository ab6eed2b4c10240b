"""Command-line front end.

Subcommands: parse, fv, fm, wf, step, normalize, trace, translate, alpha-eq,
eq-mod2, match, fuzz.  Terms are read from the command line or, when the
positional argument is omitted, from stdin.  Exit codes: 0 success or a true
answer, 1 usage or parse error, 2 a false answer or a fuzz violation, 3 an
engine error (wait application, dangling index, missing table entry).
"""
from __future__ import annotations

import argparse
import json
import sys

from . import harness, indexed, named, syntax, translate
from .core import (
    FAIL,
    BadPath,
    EngineError,
    NotARedex,
    ParseError,
    Success,
    format_path,
    parse_path,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FALSE = 2
EXIT_ENGINE = 3


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _read_term(text: str | None, side: str | None = None):
    if text is None:
        text = sys.stdin.read()
    return syntax.parse(text, side)


def _side_arg(args) -> str | None:
    return None if args.side == "auto" else args.side


# ---------------------------------------------------------------------------
# Handlers.


def _cmd_parse(args) -> int:
    t = _read_term(args.term, _side_arg(args))
    if args.json:
        print(json.dumps(syntax.to_json(t), sort_keys=True))
    else:
        print(syntax.unparse(t))
    return EXIT_OK


def _cmd_fv(args) -> int:
    return _free_sets(args, which="fv")


def _cmd_fm(args) -> int:
    return _free_sets(args, which="fm")


def _free_sets(args, which: str) -> int:
    t = _read_term(args.term, _side_arg(args))
    if syntax.term_side(t) == "named":
        items = sorted(named.fv(t) if which == "fv" else named.fm(t))
    else:
        pairs = indexed.fv(t) if which == "fv" else indexed.fm(t)
        items = [f"{i}.{j}" for (i, j) in sorted(pairs)]
    print("{" + ", ".join(items) + "}")
    return EXIT_OK


def _cmd_wf(args) -> int:
    t = _read_term(args.term, "indexed")
    err = indexed.check_well_formed(t)
    if err is None:
        print("true")
        return EXIT_OK
    print(f"false: {err}")
    return EXIT_FALSE


def _cmd_step(args) -> int:
    t = _read_term(args.term)
    pos = parse_path(args.pos)
    stepper = named.step if syntax.term_side(t) == "named" else indexed.step
    print(syntax.unparse(stepper(t, pos)))
    return EXIT_OK


def _cmd_normalize(args) -> int:
    t = _read_term(args.term)
    runner = named.normalize if syntax.term_side(t) == "named" else indexed.normalize
    res = runner(t, args.max_steps)
    if args.trace:
        print(syntax.unparse(t))
        for n, (pos, u) in enumerate(res.trace, start=1):
            print(f"-- step {n} at {format_path(pos)}")
            print(syntax.unparse(u))
    else:
        print(syntax.unparse(res.term))
    print(f"-- status: {res.status}, steps: {res.steps}")
    return EXIT_OK


def _parse_table(text: str | None):
    if text is None:
        return None
    rows = json.loads(text)
    if not isinstance(rows, list) or not all(
            isinstance(r, list) and all(isinstance(s, str) for s in r)
            for r in rows):
        raise _UsageError("tables must be JSON arrays of arrays of strings")
    return rows


def _cmd_translate(args) -> int:
    vtable = _parse_table(args.vtable)
    mtable = _parse_table(args.mtable)
    if (vtable is None) != (mtable is None):
        raise _UsageError("--vtable and --mtable must be given together")
    if args.to == "indexed":
        t = _read_term(args.term, "named")
        out = (translate.to_indexed_default(t) if vtable is None
               else translate.to_indexed(t, vtable, mtable))
    else:
        t = _read_term(args.term, "indexed")
        out = (translate.to_named_default(t) if vtable is None
               else translate.to_named(t, vtable, mtable))
    print(syntax.unparse(out))
    return EXIT_OK


def _cmd_alpha_eq(args) -> int:
    a = syntax.parse(args.left, "named")
    b = syntax.parse(args.right, "named")
    ok = named.alpha_eq(a, b)
    print("true" if ok else "false")
    return EXIT_OK if ok else EXIT_FALSE


def _cmd_eq_mod2(args) -> int:
    a = syntax.parse(args.left, "indexed")
    b = syntax.parse(args.right, "indexed")
    ok = indexed.eq_mod_secondary(a, b)
    print("true" if ok else "false")
    return EXIT_OK if ok else EXIT_FALSE


def _format_named_subst(subst, theta) -> str:
    order = [x for x in theta if x in subst]
    order += sorted(set(subst) - set(order))
    inside = ", ".join(f"{x} := {syntax.unparse(subst[x])}" for x in order)
    return "{" + inside + "}"


def _cmd_match(args) -> int:
    if (args.theta is None) == (args.arity is None):
        raise _UsageError("give exactly one of --theta or --arity")
    if args.theta is not None:
        theta = tuple(s for s in args.theta.split(",") if s)
        p = syntax.parse(args.pattern, "named")
        u = syntax.parse(args.arg, "named")
        m = named.match(theta, p, u)
        if isinstance(m, Success):
            print(f"Success {_format_named_subst(m.subst, theta)}")
        else:
            print("Fail" if m is FAIL else "Wait")
    else:
        p = syntax.parse(args.pattern, "indexed")
        u = syntax.parse(args.arg, "indexed")
        m = indexed.match(args.arity, p, u)
        if isinstance(m, Success):
            inside = ", ".join(f"1.{j} := {syntax.unparse(v)}"
                               for j, v in sorted(m.subst.mapping.items()))
            print("Success {" + inside + "}")
        else:
            print("Fail" if m is FAIL else "Wait")
    return EXIT_OK


def _cmd_fuzz(args) -> int:
    if args.suite == "bisim":
        report = harness.run_bisim_suite(args.seed, args.count,
                                         max_size=args.max_size, jobs=args.jobs)
    elif args.suite == "lemmas":
        report = harness.run_lemma_suite(args.seed, args.count, jobs=args.jobs)
    else:
        report = harness.run_confluence_suite(args.seed, args.count,
                                              max_size=min(args.max_size, 12),
                                              depth=args.depth, jobs=args.jobs)
    if args.json:
        print(json.dumps(report.to_json(), sort_keys=True))
    else:
        print(report.render_text())
    return EXIT_OK if report.ok else EXIT_FALSE


# ---------------------------------------------------------------------------
# Parser wiring.


def build_parser() -> _ArgumentParser:
    top = _ArgumentParser(prog="purepat",
                          description="pattern-calculus rewriting engine")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, handler, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(handler=handler)
        return p

    def add_term(p):
        p.add_argument("term", nargs="?", default=None,
                       help="term text (stdin when omitted)")

    def add_side(p):
        p.add_argument("--side", choices=("auto", "named", "indexed"),
                       default="auto")

    p = add("parse", _cmd_parse, "parse and pretty-print a term")
    add_term(p)
    add_side(p)
    p.add_argument("--json", action="store_true", help="emit the JSON AST")

    p = add("fv", _cmd_fv, "free variables")
    add_term(p)
    add_side(p)
    p = add("fm", _cmd_fm, "free matchables")
    add_term(p)
    add_side(p)

    p = add("wf", _cmd_wf, "well-formedness of an indexed term")
    add_term(p)

    p = add("step", _cmd_step, "contract the redex at a position")
    add_term(p)
    p.add_argument("--pos", default="",
                   help="path of f/a/p/b segments; empty for the root")

    for name in ("normalize", "trace"):
        p = add(name, _cmd_normalize,
                "reduce leftmost-outermost to normal form"
                + (" and print the trace" if name == "trace" else ""))
        add_term(p)
        p.add_argument("--max-steps", type=int, default=1000)
        if name == "normalize":
            p.add_argument("--trace", action="store_true")
        else:
            p.set_defaults(trace=True)

    p = add("translate", _cmd_translate, "translate between the calculi")
    add_term(p)
    p.add_argument("--to", choices=("indexed", "named"), required=True)
    p.add_argument("--vtable", help="JSON rows for variables")
    p.add_argument("--mtable", help="JSON rows for matchables")

    p = add("alpha-eq", _cmd_alpha_eq, "alpha-equivalence of two named terms")
    p.add_argument("left")
    p.add_argument("right")

    p = add("eq-mod2", _cmd_eq_mod2,
            "equality of two indexed terms modulo secondary indices")
    p.add_argument("left")
    p.add_argument("right")

    p = add("match", _cmd_match, "run the matching operation")
    p.add_argument("pattern")
    p.add_argument("arg")
    p.add_argument("--theta", help="comma-separated binder list (named)")
    p.add_argument("--arity", type=int, help="binder arity (indexed)")

    p = add("fuzz", _cmd_fuzz, "run a differential test suite")
    p.add_argument("--suite", choices=("bisim", "lemmas", "confluence"),
                   required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-size", type=int, default=20)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--json", action="store_true")
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, BadPath, NotARedex) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except EngineError as e:
        print(f"engine error: {e}", file=sys.stderr)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
