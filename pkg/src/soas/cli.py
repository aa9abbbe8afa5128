"""The ``soas`` command-line tool.

Exit codes: 0 on success, 1 when a term, law or proof fails to check, 2 on
usage errors and unreadable or unparsable input.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import corpus
from .concrete import parse_ctx, parse_term, print_term, read_mdecls
from .errors import SoasError, SpecError, TermSyntaxError
from .eqlog import check_proofs, elaborate_theory
from .laws import LAWS, run_case, run_laws
from .signature import dump_signature, parse_sort, parse_spec, show_sort
from .stlc import Stuck, evaluate, numeral, trace
from .term import MCtx, check
from ._lex import TokenStream, tokenize

OK, FAILED, USAGE = 0, 1, 2

# Elaboration reports these through TermSyntaxError, but the text did parse:
# the term is merely ill-scoped or ill-sorted, which is a check failure.
_CHECK_KINDS = {
    "unbound-variable", "sort-mismatch", "env-length-mismatch", "unknown-operator",
    "unknown-metavariable", "arity-mismatch", "incomplete-instantiation",
    "ambiguous-sort-inference",
}


class UsageError(Exception):
    pass


def _read(path: str):
    """Text of ``path``, falling back to the bundled corpus by file name."""
    p = Path(path)
    if p.exists():
        return p.read_text(encoding="utf-8"), str(p)
    if corpus.has(p.name):
        return corpus.read(p.name), p.name
    raise UsageError(f"{path}: no such file")


def _load_sig(path):
    text, name = _read(path)
    return parse_spec(text, source=name), name


def _exit_code(err: SoasError) -> int:
    if isinstance(err, SpecError):
        return USAGE
    if isinstance(err, TermSyntaxError) and err.kind not in _CHECK_KINDS:
        return USAGE
    return FAILED


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args, out):
    sig, name = _load_sig(args.spec)
    theory = elaborate_theory(sig, name)
    for ax in theory.axioms.values():
        ls = check(sig, ax.mctx, ax.sorts, ax.lhs)
        rs = check(sig, ax.mctx, ax.sorts, ax.rhs)
        if ls != rs or ls != ax.sort:
            raise SoasError(f"axiom {ax.name} relates terms of sorts {ls} and {rs}",
                            kind="sort-mismatch", source=name)
    print(f"{len(sig.typecons)} types, {len(sig.ops)} operators, "
          f"{len(theory.axioms)} axioms", file=out)
    if args.verbose:
        for ax in theory.axioms.values():
            print(f"  {ax.show(sig)}", file=out)
    return OK


def cmd_dump(args, out):
    sig, _ = _load_sig(args.spec)
    out.write(dump_signature(sig))
    return OK


def cmd_term(args, out):
    sig, _ = _load_sig(args.spec)
    if len(args.text) == 1 and Path(args.text[0]).is_file():
        text, source = _read(args.text[0])
    elif args.text:
        text, source = " ".join(args.text), "<term>"
    else:
        raise UsageError("no term given")
    try:
        ctx = parse_ctx(sig, args.ctx) if args.ctx else []
        mctx = MCtx()
        if args.mctx:
            ts = TokenStream(tokenize(args.mctx, error=TermSyntaxError), error=TermSyntaxError)
            mctx = read_mdecls(ts, sig)
            if not ts.at_eof():
                ts.fail(f"unexpected {ts.describe(ts.tok)} in metavariable context")
        expected = None
        if args.sort:
            expected = parse_sort(args.sort, sig)
    except SoasError as err:
        raise err.located("<options>")
    try:
        t = parse_term(sig, mctx, ctx, text, expected)
    except SoasError as err:
        if err.pos is None:
            err.pos = (1, 1)
        raise err.located(source)
    sort = check(sig, mctx, tuple(s for _, s in ctx), t)
    print(f"{print_term(sig, mctx, ctx, t)} : {show_sort(sort, sig)}", file=out)
    return OK


def cmd_laws(args, out):
    sig, _ = _load_sig(args.spec)
    if args.replay:
        law, _, seed = args.replay.partition(":")
        if law not in LAWS or not seed.lstrip("-").isdigit():
            raise UsageError(f"--replay expects LAW:SEED with LAW one of {', '.join(LAWS)}")
        r = run_case(sig, law, int(seed), args.budget)
        if r is None:
            print(f"{law}:{seed} passes", file=out)
            return OK
        if r == "skipped":
            print(f"{law}:{seed} skipped (no inhabited case)", file=out)
            return OK
        print(r.render(), file=out)
        return FAILED
    laws = args.law or list(LAWS)
    for law in laws:
        if law not in LAWS:
            raise UsageError(f"unknown law {law!r}; choose from {', '.join(LAWS)}")
    start = time.perf_counter()
    results = run_laws(sig, args.cases, args.budget, args.seed, laws)
    failed = False
    for r in results:
        extra = f" ({r.skipped} skipped)" if r.skipped else ""
        status = "ok" if not r.failures else "FAILED"
        print(f"{r.law:<16} {r.passed}/{args.cases} {status}{extra}", file=out)
        for cx in r.failures[:args.show]:
            print(cx.render(), file=out)
        failed |= bool(r.failures)
    if args.timing:
        print(f"elapsed {time.perf_counter() - start:.2f}s", file=sys.stderr)
    return FAILED if failed else OK


def cmd_eval(args, out):
    sig, _ = _load_sig(args.spec)
    if not all(sig.has_op(o) for o in ("app", "lam", "ze", "su")):
        raise UsageError("eval needs a signature with app, lam, ze and su (see stlc.soas)")
    text = " ".join(args.term)
    if not text:
        raise UsageError("no term given")
    try:
        t = parse_term(sig, MCtx(), [], text)
    except SoasError as err:
        if err.pos is None:
            err.pos = (1, 1)
        raise err.located("<term>")
    sort = check(sig, MCtx(), (), t)
    steps = trace(t, args.fuel)
    for i, u in enumerate(steps):
        print(f"{i:>4}  {print_term(sig, MCtx(), [], u)}", file=out)
    if len(steps) > args.fuel:
        print(f"fuel exhausted after {args.fuel} steps", file=out)
        return FAILED
    last = steps[-1]
    n = numeral(last)
    value = evaluate(t)
    shown = n if n is not None else value
    print(f"value: {shown} : {show_sort(sort, sig)}", file=out)
    return OK


def cmd_prove(args, out):
    sig, name = _load_sig(args.spec)
    theory = elaborate_theory(sig, name)
    text, source = _read(args.script)
    reports = check_proofs(theory, text, source)
    for r in reports:
        if args.verbose:
            print(f"  {r.name}: {r.steps} step(s)  {r.statement.show(sig)}", file=out)
    names = ", ".join(r.name for r in reports)
    noun = "theorem" if len(reports) == 1 else "theorems"
    print(f"{len(reports)} {noun} checked: {names}", file=out)
    return OK


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="soas", description="Second-order abstract syntax toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="parse a signature and check its theory")
    c.add_argument("spec")
    c.add_argument("-v", "--verbose", action="store_true", help="list the axioms")
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("dump", help="print the canonical signature dump")
    d.add_argument("spec")
    d.set_defaults(func=cmd_dump)

    t = sub.add_parser("term", help="parse, check and print a term")
    t.add_argument("spec")
    t.add_argument("--ctx", default="", help='variable context, e.g. "x : N, y : N"')
    t.add_argument("--mctx", default="", help='metavariables, e.g. "m : (N) N"')
    t.add_argument("--sort", help="expected sort")
    t.add_argument("text", nargs="*", help="a file, or the term text after --")
    t.set_defaults(func=cmd_term)

    la = sub.add_parser("laws", help="run the randomised law suite")
    la.add_argument("spec")
    la.add_argument("--cases", type=int, default=100)
    la.add_argument("--budget", type=int, default=20)
    la.add_argument("--seed", type=int, default=0)
    la.add_argument("--law", action="append", help="restrict to a law (repeatable)")
    la.add_argument("--replay", metavar="LAW:SEED", help="rerun one printed counterexample")
    la.add_argument("--show", type=int, default=3, help="counterexamples printed per law")
    la.add_argument("--timing", action="store_true")
    la.set_defaults(func=cmd_laws)

    e = sub.add_parser("eval", help="evaluate a closed term (stlc signatures)")
    e.add_argument("spec")
    e.add_argument("--fuel", type=int, default=1000)
    e.add_argument("term", nargs="*")
    e.set_defaults(func=cmd_eval)

    pr = sub.add_parser("prove", help="check a proof script")
    pr.add_argument("spec")
    pr.add_argument("script")
    pr.add_argument("-v", "--verbose", action="store_true")
    pr.set_defaults(func=cmd_prove)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        argv = list(sys.argv[1:] if argv is None else argv)
        # Everything after "--" is term text, even if it looks like an option.
        tail = []
        if "--" in argv:
            i = argv.index("--")
            argv, tail = argv[:i], argv[i + 1:]
        parser = build_parser()
        # argparse leaves positionals that follow options unassigned; they are term text.
        args, extra = parser.parse_known_args(argv)
        field = "text" if hasattr(args, "text") else "term" if hasattr(args, "term") else None
        if any(e.startswith("-") for e in extra) or ((extra or tail) and field is None):
            raise UsageError(f"unrecognized arguments: {' '.join(extra + tail)}")
        if field is not None:
            setattr(args, field, list(getattr(args, field) or []) + extra + tail)
        return args.func(args, out)
    except UsageError as err:
        print(f"soas: {err}", file=sys.stderr)
        return USAGE
    except Stuck as err:
        print(str(err), file=sys.stderr)
        return FAILED
    except SoasError as err:
        print(str(err), file=sys.stderr)
        return _exit_code(err)


if __name__ == "__main__":
    sys.exit(main())
