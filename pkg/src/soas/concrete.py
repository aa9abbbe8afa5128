"""Concrete term syntax: reader, sort inference and printer.

Surface forms::

    op(a1, ..., an)        prefix application
    op(v1 v2. body, a2)    binder names for an argument (v1 is x0 of the body)
    op(body, a2)           binders may be left anonymous; refer to them as xK
    m[t1, ..., tk]  m      metavariable with its environment
    (t : sort)             ascription
    a $ b   λ t   0        operator notation declared in the signature

Names resolve in this order: binder names, context names, metavariables
without parameters, nullary operators, constant notation, and finally raw
de Bruijn indices ``x0``, ``x1``, ... into the whole current context.

The printer emits binders anonymously and bound variables as ``xK`` by
de Bruijn index, inserting ascriptions only where inference would otherwise
leave a sort variable open.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ._lex import TokenStream, tokenize
from .ctx import Var
from .errors import SoasError, SortError, TermSyntaxError
from .signature import (DEFAULT_PREC, SVar, Signature, Sort, SortParser, resolve,
                        show_sort, sort_vars, substitute_sort, unify)
from .term import Arg, Con, MCtx, MVar, MvarDecl, check

_RAW_VAR = re.compile(r"x(\d+)")


# ---------------------------------------------------------------------------
# raw syntax


@dataclass
class RArg:
    names: list | None
    body: object


@dataclass
class RIdent:
    name: str
    pos: tuple


@dataclass
class RApp:
    op: str
    args: list
    pos: tuple
    notation: bool = False


@dataclass
class RMeta:
    name: str
    env: list
    pos: tuple


@dataclass
class RAsc:
    term: object
    sort: Sort
    pos: tuple


@dataclass
class Tables:
    infix: dict = field(default_factory=dict)
    prefix: dict = field(default_factory=dict)
    postfix: dict = field(default_factory=dict)
    const: dict = field(default_factory=dict)


_TABLES = {}


def notation_tables(sig: Signature) -> Tables:
    key = id(sig)
    hit = _TABLES.get(key)
    if hit is not None and hit[0] is sig:
        return hit[1]
    tb = Tables()
    for o in sig.ops:
        n = o.usable_notation
        if n is None:
            continue
        getattr(tb, {"infix": "infix", "prefix": "prefix", "postfix": "postfix",
                     "const": "const"}[n.kind])[n.symbol] = o
    _TABLES[key] = (sig, tb)
    return tb


def _sides(n):
    p = n.precedence
    if n.assoc == "l":
        return p, p + 1
    if n.assoc == "r":
        return p + 1, p
    return p + 1, p + 1


class RawParser:
    """Pratt reader producing raw (unresolved, unsorted) terms."""

    def __init__(self, ts: TokenStream, sig: Signature):
        self.ts = ts
        self.sig = sig
        self.tb = notation_tables(sig)

    def term(self, minprec=0):
        ts = self.ts
        lhs = self.unary()
        while True:
            t = ts.tok
            if t.kind not in ("SYM", "NAME"):
                return lhs
            decl = self.tb.infix.get(t.text)
            if decl is not None:
                n = decl.notation
                if n.precedence < minprec:
                    return lhs
                ts.next()
                rhs = self.term(_sides(n)[1])
                lhs = RApp(decl.name, [RArg(None, lhs), RArg(None, rhs)], t.pos, True)
                continue
            decl = self.tb.postfix.get(t.text)
            if decl is not None and decl.notation.precedence >= minprec:
                ts.next()
                lhs = RApp(decl.name, [RArg(None, lhs)], t.pos, True)
                continue
            return lhs

    def unary(self):
        ts = self.ts
        t = ts.tok
        decl = self.tb.prefix.get(t.text) if t.kind in ("SYM", "NAME") else None
        # A word-shaped prefix symbol followed by "(" is a call only when it also
        # names an operator; "λ (f) $ x" is notation.
        call = t.kind == "NAME" and (ts.peek().text == "[" or
                                     (ts.peek().text == "(" and self.sig.has_op(t.text)))
        if decl is not None and not call:
            ts.next()
            names = self.binder_names() if decl.args[0].bound else None
            body = self.term(decl.notation.precedence)
            return RApp(decl.name, [RArg(names, body)], t.pos, True)
        return self.atom()

    def binder_names(self):
        ts = self.ts
        j = ts.i
        while ts.toks[j].kind == "NAME":
            j += 1
        if j > ts.i and ts.toks[j].kind == "PUNCT" and ts.toks[j].text == ".":
            names = [ts.next().text for _ in range(j - ts.i)]
            ts.next()
            return names
        return None

    def atom(self):
        ts = self.ts
        t = ts.tok
        if t.kind == "PUNCT" and t.text == "(":
            ts.next()
            e = self.term()
            if ts.accept(":"):
                s = SortParser(ts, self.sig).sort()
                ts.expect(")")
                return RAsc(e, s, t.pos)
            ts.expect(")")
            return e
        if t.kind == "NAME":
            ts.next()
            if ts.at("(", "PUNCT"):
                ts.next()
                args = []
                if not ts.at(")"):
                    args.append(self.arg())
                    while ts.accept(","):
                        args.append(self.arg())
                ts.expect(")")
                return RApp(t.text, args, t.pos)
            if ts.at("[", "PUNCT"):
                ts.next()
                env = []
                if not ts.at("]"):
                    env.append(self.term())
                    while ts.accept(","):
                        env.append(self.term())
                ts.expect("]")
                return RMeta(t.text, env, t.pos)
            return RIdent(t.text, t.pos)
        if t.kind in ("NUM", "SYM") and t.text in self.tb.const:
            ts.next()
            return RApp(self.tb.const[t.text].name, [], t.pos, True)
        ts.fail(f"expected a term, found {ts.describe(t)}")

    def arg(self):
        names = self.binder_names()
        return RArg(names, self.term())


def read_raw(text, sig: Signature, pos=(1, 1)):
    ts = TokenStream(tokenize(text, *pos, error=TermSyntaxError), error=TermSyntaxError)
    raw = RawParser(ts, sig).term()
    if not ts.at_eof():
        ts.fail(f"unexpected {ts.describe(ts.tok)} after term")
    return raw


# ---------------------------------------------------------------------------
# elaboration with sort inference


def _named(ctx):
    """Normalise a context given as sorts or as ``(name, sort)`` pairs."""
    out = []
    for e in ctx:
        if isinstance(e, tuple) and len(e) == 2 and not isinstance(e, Sort):
            out.append((e[0], e[1]))
        else:
            out.append((None, e))
    for name, _ in out:
        if name is not None and _RAW_VAR.fullmatch(name):
            raise TermSyntaxError(f"context name {name!r} is reserved for de Bruijn indices",
                                  kind="reserved-name")
    return out


class Elaborator:
    def __init__(self, sig: Signature, mctx: MCtx):
        self.sig = sig
        self.mctx = mctx
        self.tb = notation_tables(sig)
        self.theta = {}
        self.origins = {}
        self.count = 0

    def fail(self, message, pos, kind, path=()):
        raise TermSyntaxError(message, kind=kind, pos=pos, path=path)

    def unify(self, got, want, pos, path):
        try:
            unify(got, want, self.theta)
        except SortError:
            self.fail(f"expected {self.show(want)}, found {self.show(got)}", pos, "sort-mismatch", path)

    def show(self, s):
        return show_sort(resolve(s, self.theta), self.sig)

    def elab(self, raw, scope, path):
        if isinstance(raw, RAsc):
            t, s = self.elab(raw.term, scope, path)
            self.unify(s, raw.sort, raw.pos, path)
            return t, s
        if isinstance(raw, RMeta):
            return self.meta(raw.name, raw.env, raw.pos, scope, path)
        if isinstance(raw, RApp):
            try:
                decl = self.sig.op(raw.op)
            except SortError:
                self.fail(f"unknown operator {raw.op!r}", raw.pos, "unknown-operator", path)
            return self.con(decl, raw.args, raw.pos, scope, path)
        if isinstance(raw, RIdent):
            return self.ident(raw, scope, path)
        raise TypeError(raw)

    def ident(self, raw, scope, path):
        name = raw.name
        for i, (n, s) in enumerate(scope):
            if n == name:
                return Var(i, s), s
        if name in self.mctx and not self.mctx[name].params:
            return self.meta(name, [], raw.pos, scope, path)
        if self.sig.has_op(name) and not self.sig.op(name).args:
            return self.con(self.sig.op(name), [], raw.pos, scope, path)
        if name in self.tb.const:
            return self.con(self.tb.const[name], [], raw.pos, scope, path)
        m = _RAW_VAR.fullmatch(name)
        if m:
            i = int(m.group(1))
            if i >= len(scope):
                self.fail(f"{name} is not bound in a context of length {len(scope)}",
                          raw.pos, "unbound-variable", path)
            return Var(i, scope[i][1]), scope[i][1]
        if name in self.mctx:
            d = self.mctx[name]
            self.fail(f"{name} takes {len(d.params)} argument(s), given 0", raw.pos,
                      "env-length-mismatch", path)
        self.fail(f"unbound name {name!r}", raw.pos, "unbound-variable", path)

    def meta(self, name, env, pos, scope, path):
        if name not in self.mctx:
            self.fail(f"unknown metavariable {name!r}", pos, "unknown-metavariable", path)
        d = self.mctx[name]
        if len(env) != len(d.params):
            self.fail(f"{name} takes {len(d.params)} argument(s), given {len(env)}", pos,
                      "env-length-mismatch", path)
        out = []
        for j, (e, p) in enumerate(zip(env, d.params)):
            t, s = self.elab(e, scope, path + (f"env{j}",))
            self.unify(s, p, _pos(e, pos), path + (f"env{j}",))
            out.append(t)
        return MVar(name, tuple(out)), d.sort

    def con(self, decl, rargs, pos, scope, path):
        if len(rargs) != len(decl.args):
            self.fail(f"{decl.name} takes {len(decl.args)} argument(s), given {len(rargs)}",
                      pos, "arity-mismatch", path)
        theta = {}
        result_vars = sort_vars(decl.result)
        for v in decl.sortvars:
            fresh = SVar(f"?{self.count}")
            self.count += 1
            theta[v] = fresh
            at = path if v in result_vars else None
            if at is None:
                for k, a in enumerate(decl.args):
                    if v in sort_vars(a.body):
                        at = path + (f"arg{k}",)
                        break
            self.origins[fresh.name] = (decl.name, v, pos, at)
        args = []
        for k, (ra, spec) in enumerate(zip(rargs, decl.args)):
            bound = tuple(substitute_sort(b, theta) for b in spec.bound)
            names = ra.names
            if names is None:
                names = [None] * len(bound)
            elif any(_RAW_VAR.fullmatch(n) for n in names):
                self.fail("binder names of the form xN are reserved for de Bruijn indices",
                          pos, "reserved-name", path)
            elif len(names) != len(bound):
                self.fail(f"argument {k} of {decl.name} binds {len(bound)} variable(s), "
                          f"{len(names)} named", pos, "binder-arity-mismatch", path)
            inner = list(zip(names, bound)) + scope
            body, s = self.elab(ra.body, inner, path + (f"arg{k}",))
            self.unify(s, substitute_sort(spec.body, theta), _pos(ra.body, pos), path + (f"arg{k}",))
            args.append(Arg(bound, body))
        return Con(decl.name, theta, tuple(args)), substitute_sort(decl.result, theta)

    # -- resolution of inferred sorts

    def zonk(self, t):
        if isinstance(t, Var):
            return Var(t.index, self.ground(t.sort))
        if isinstance(t, MVar):
            return MVar(t.name, tuple(self.zonk(e) for e in t.env))
        return Con(t.op, {v: self.ground(s) for v, s in t.inst},
                   tuple(Arg(tuple(self.ground(b) for b in a.bound), self.zonk(a.body))
                         for a in t.args))

    def ground(self, s):
        r = resolve(s, self.theta)
        left = sort_vars(r)
        if left:
            self.residual.update(left)
        return r

    def finish(self, t):
        self.residual = set()
        t = self.zonk(t)
        if self.residual:
            origins = sorted((self.origins[v] for v in self.residual), key=lambda o: o[2])
            what = ", ".join(f"{var} of {op} at {p[0]}:{p[1]}" for op, var, p, _ in origins)
            err = TermSyntaxError(f"cannot infer {what}; add a sort ascription",
                                  kind="ambiguous-sort-inference", pos=origins[0][2])
            err.residual = [f"{var} of {op}" for op, var, _, _ in origins]
            err.ascribe = list(dict.fromkeys(o[3] for o in origins if o[3] is not None))
            raise err
        return t


def _pos(raw, default):
    return getattr(raw, "pos", default)


def elaborate(sig: Signature, mctx: MCtx, ctx, raw, expected=None):
    """Resolve names and infer sorts of a raw term, then check the result."""
    scope = _named(ctx)
    el = Elaborator(sig, mctx)
    t, s = el.elab(raw, scope, ())
    if expected is not None:
        el.unify(s, expected, _pos(raw, None), ())
    t = el.finish(t)
    sorts = tuple(s for _, s in scope)
    check(sig, mctx, sorts, t)
    return t


def parse_term(sig: Signature, mctx: MCtx, ctx, text, expected=None, pos=(1, 1)):
    """Parse ``text`` as a term over ``mctx`` in ``ctx``.

    ``ctx`` lists ``(name, sort)`` pairs, or bare sorts for unnamed
    variables; the first entry is x0.
    """
    return elaborate(sig, mctx, ctx, read_raw(text, sig, pos), expected)


# ---------------------------------------------------------------------------
# declarations used by theories and proof scripts


def parse_ctx(sig: Signature, text, pos=(1, 1)):
    """``"x : N, y : N"`` (commas optional) as a list of ``(name, sort)``."""
    ts = TokenStream(tokenize(text, *pos, error=TermSyntaxError), error=TermSyntaxError)
    out = read_vdecls(ts, sig)
    if not ts.at_eof():
        ts.fail(f"unexpected {ts.describe(ts.tok)} in context")
    return out


def read_vdecls(ts: TokenStream, sig: Signature, stop=()):
    out = []
    seen = set()
    while ts.tok.kind == "NAME" and ts.tok.text not in stop:
        t = ts.next()
        if t.text in seen:
            ts.fail(f"duplicate variable {t.text!r}", t, kind="duplicate-name")
        if _RAW_VAR.fullmatch(t.text):
            ts.fail(f"name {t.text!r} is reserved for de Bruijn indices", t, kind="reserved-name")
        seen.add(t.text)
        ts.expect(":")
        out.append((t.text, SortParser(ts, sig).sort()))
        ts.accept(",")
    return out


def read_mdecls(ts: TokenStream, sig: Signature, stop=()):
    decls = []
    while ts.tok.kind == "NAME" and ts.tok.text not in stop:
        t = ts.next()
        ts.expect(":")
        params = []
        if ts.at("(") and _is_param_list(ts, sig):
            ts.next()
            if not ts.at(")"):
                params.append(SortParser(ts, sig).sort())
                while ts.accept(","):
                    params.append(SortParser(ts, sig).sort())
            ts.expect(")")
        sort = SortParser(ts, sig).sort()
        if any(d.name == t.text for d in decls):
            ts.fail(f"duplicate metavariable {t.text!r}", t, kind="duplicate-name")
        decls.append(MvarDecl(t.text, tuple(params), sort))
        ts.accept(",")
    return MCtx(tuple(decls))


def _is_param_list(ts, sig):
    """Whether the ``(`` at the cursor opens a parameter list rather than a sort.

    A parameter list is always followed by the metavariable's sort.
    """
    depth, j, toks = 0, ts.i, ts.toks
    while toks[j].kind != "EOF":
        if toks[j].kind == "PUNCT" and toks[j].text == "(":
            depth += 1
        elif toks[j].kind == "PUNCT" and toks[j].text == ")":
            depth -= 1
            if depth == 0:
                break
        j += 1
    nxt = toks[min(j + 1, len(toks) - 1)]
    _, prefix, named = sig.sort_tables
    if nxt.kind == "PUNCT":
        return nxt.text == "("
    if nxt.kind == "SYM":
        return nxt.text == "*" or nxt.text in prefix
    if nxt.kind == "NAME":
        return nxt.text in named or nxt.text in prefix
    return False


# ---------------------------------------------------------------------------
# printing


class Printer:
    def __init__(self, sig, mctx, ctx, ascribe=()):
        self.sig = sig
        self.mctx = mctx
        self.gamma = _named(ctx)
        self.tb = notation_tables(sig)
        self.ascribe = set(ascribe)
        self.gnames = {n for n, _ in self.gamma if n is not None}
        self.mnames = {d.name for d in mctx if not d.params}

    def show(self, t, depth=0, ctx=None, path=(), minprec=0):
        text, prec = self.term(t, depth, ctx, path)
        if path in self.ascribe:
            s = check(self.sig, self.mctx, ctx, t)
            return f"({text} : {show_sort(s, self.sig)})"
        return f"({text})" if prec < minprec else text

    def term(self, t, depth, ctx, path):
        atom = 10**9
        if isinstance(t, Var):
            if t.index >= depth:
                name = self.gamma[t.index - depth][0]
                if name is not None:
                    return name, atom
            return f"x{t.index}", atom
        if isinstance(t, MVar):
            if not t.env and t.name not in self.gnames:
                return t.name, atom
            env = ", ".join(self.show(e, depth, ctx, path + (f"env{j}",))
                            for j, e in enumerate(t.env))
            return f"{t.name}[{env}]", atom
        decl = self.sig.op(t.op)
        n = decl.usable_notation
        parts = []
        for k, a in enumerate(t.args):
            parts.append((a, depth + len(a.bound), tuple(a.bound) + ctx, path + (f"arg{k}",)))
        if n is not None:
            kind, p = n.kind, n.precedence
            if kind == "const":
                return n.symbol, atom
            if kind == "infix":
                lp, rp = _sides(n)
                (a0, d0, c0, p0), (a1, d1, c1, p1) = parts
                return (f"{self.show(a0.body, d0, c0, p0, lp)} {n.symbol} "
                        f"{self.show(a1.body, d1, c1, p1, rp)}"), p
            (a0, d0, c0, p0), = parts
            if kind == "prefix":
                return f"{n.symbol} {self.show(a0.body, d0, c0, p0, p)}", p
            return f"{self.show(a0.body, d0, c0, p0, p)} {n.symbol}", p
        if not t.args:
            if t.op in self.gnames or t.op in self.mnames or _RAW_VAR.fullmatch(t.op):
                return f"{t.op}()", atom
            return t.op, atom
        return f"{t.op}({', '.join(self.show(a.body, d, c, p) for a, d, c, p in parts)})", atom


def print_term(sig: Signature, mctx: MCtx, ctx, t) -> str:
    """Render ``t`` so that :func:`parse_term` reads back the same tree.

    Ascriptions are added where inference could not otherwise recover the
    instantiation; the result sort of ``t`` itself is assumed known.
    """
    sorts = tuple(s for _, s in _named(ctx))
    expected = check(sig, mctx, sorts, t)
    ascribe = set()
    for _ in range(64):
        text = Printer(sig, mctx, ctx, ascribe).show(t, 0, sorts)
        try:
            parse_term(sig, mctx, ctx, text, expected)
        except TermSyntaxError as err:
            extra = set(getattr(err, "ascribe", ())) - ascribe
            if err.kind != "ambiguous-sort-inference" or not extra:
                return text
            ascribe |= extra
            continue
        return text
    return text
