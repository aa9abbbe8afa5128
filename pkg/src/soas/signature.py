"""Sorts, second-order signatures and the textual specification language.

A signature declares type constructors (which generate the sorts) and
operators.  Each operator argument may bind variables::

    type
      N   : 0-ary
      _↣_ : 2-ary | r30
    term
      app : α ↣ β  α  ->  β   | _$_ l20
      lam : α.β       ->  α ↣ β | λ_ r10

Lower-case identifiers that are not declared type constructors are sort
variables, so ``app`` above is really the family ``app_{α,β}``.  A spec with
no ``type`` section is unsorted: its only sort is ``*``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Union

from ._lex import TokenStream, strip_comment, tokenize, ALIASES
from .errors import SortError, SpecError

DEFAULT_PREC = 50
_ATOM = 10**6
_APP = 10**5


@dataclass(frozen=True)
class Sort:
    """A ground sort: a declared type constructor applied to child sorts."""

    con: str
    args: tuple = ()

    def __str__(self):
        return show_sort(self)

    def __repr__(self):
        return f"Sort({show_sort(self)!r})"


@dataclass(frozen=True)
class SVar:
    """A sort variable, only legal inside operator declarations."""

    name: str

    def __str__(self):
        return self.name


SortExpr = Union[Sort, SVar]

STAR = Sort("*")


@dataclass(frozen=True)
class Notation:
    """Infix/prefix/constant notation such as ``_$_ l20`` or ``λ_ r10``."""

    pattern: str
    assoc: str | None = None
    prec: int | None = None

    @property
    def holes(self):
        return self.pattern.count("_")

    @property
    def symbol(self):
        return self.pattern.strip("_")

    @property
    def kind(self):
        p, h = self.pattern, self.holes
        if h == 0:
            return "const"
        if h == 1 and p.endswith("_") and len(p) > 1:
            return "prefix"
        if h == 1 and p.startswith("_") and len(p) > 1:
            return "postfix"
        if h == 2 and p.startswith("_") and p.endswith("_") and len(p) > 2:
            return "infix"
        return "mixfix"

    @property
    def precedence(self):
        return DEFAULT_PREC if self.prec is None else self.prec

    def fixity_text(self):
        if self.prec is None:
            return ""
        return f"{self.assoc or ''}{self.prec}"

    def __str__(self):
        fx = self.fixity_text()
        return f"{self.pattern} {fx}" if fx else self.pattern


@dataclass(frozen=True)
class TypeConDecl:
    name: str
    arity: int
    notation: Notation | None = None


@dataclass(frozen=True)
class BoundArity:
    """One operator argument: the sorts it binds (head first) and its body sort."""

    bound: tuple
    body: SortExpr


@dataclass(frozen=True)
class OperatorDecl:
    name: str
    sortvars: tuple
    args: tuple
    result: SortExpr
    notation: Notation | None = None

    @property
    def usable_notation(self):
        """The notation if its hole count matches the argument count."""
        n = self.notation
        if n is None or n.kind == "mixfix" or n.holes != len(self.args):
            return None
        return n


@dataclass(frozen=True)
class TheoryLine:
    text: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Signature:
    typecons: tuple
    ops: tuple
    theory: tuple = ()

    @cached_property
    def _ops(self):
        return {o.name: o for o in self.ops}

    @cached_property
    def _typecons(self):
        return {t.name: t for t in self.typecons}

    @property
    def is_sorted(self):
        return bool(self.typecons)

    def op(self, name):
        try:
            return self._ops[name]
        except KeyError:
            raise SortError(f"unknown operator {name!r}", kind="unknown-operator") from None

    def has_op(self, name):
        return name in self._ops

    def typecon(self, name):
        return self._typecons.get(name)

    @cached_property
    def sort_tables(self):
        infix, prefix, named = {}, {}, {}
        for t in self.typecons:
            n = t.notation
            if n is not None and n.pattern == t.name:
                if n.kind == "infix":
                    infix[n.symbol] = t
                elif n.kind == "prefix":
                    prefix[n.symbol] = t
                else:
                    named[t.name] = t
            else:
                named[t.name] = t
        return infix, prefix, named

    def base_sorts(self):
        if not self.is_sorted:
            return [STAR]
        return [Sort(t.name) for t in self.typecons if t.arity == 0]


# ---------------------------------------------------------------------------
# sort utilities


def sort_vars(e, acc=None):
    """Sort variables of ``e`` in first-occurrence order."""
    acc = [] if acc is None else acc
    if isinstance(e, SVar):
        if e.name not in acc:
            acc.append(e.name)
    else:
        for a in e.args:
            sort_vars(a, acc)
    return acc


def is_ground(e):
    if isinstance(e, SVar):
        return False
    return all(is_ground(a) for a in e.args)


def instantiate(e, theta: Mapping[str, Sort]) -> Sort:
    """Replace every sort variable of ``e`` by its image under ``theta``."""
    if isinstance(e, SVar):
        try:
            return theta[e.name]
        except KeyError:
            raise SortError(f"unbound sort variable {e.name}", kind="unbound-sort-variable") from None
    if not e.args:
        return e
    return Sort(e.con, tuple(instantiate(a, theta) for a in e.args))


def substitute_sort(e, theta):
    """Partial instantiation: variables outside ``theta`` are kept."""
    if isinstance(e, SVar):
        return theta.get(e.name, e)
    if not e.args:
        return e
    return Sort(e.con, tuple(substitute_sort(a, theta) for a in e.args))


def unify_sorts(e1, e2: Sort, theta=None) -> dict:
    """Extend ``theta`` minimally so that ``instantiate(e1, theta) == e2``.

    ``e2`` must be ground, so no occurs check is needed.
    """
    if not is_ground(e2):
        raise SortError(f"right-hand sort {e2} is not ground", kind="non-ground")
    out = dict(theta or {})
    _match(e1, e2, out, e1, e2)
    return out


def _match(e, s, theta, top1, top2):
    if isinstance(e, SVar):
        bound = theta.get(e.name)
        if bound is None:
            theta[e.name] = s
        elif bound != s:
            raise SortError(
                f"{e.name} is bound to {bound} but must also match {s}",
                kind="binding-conflict",
            )
        return
    if e.con != s.con or len(e.args) != len(s.args):
        raise SortError(
            f"cannot match {show_sort(top1)} against {show_sort(top2)}: {show_sort(e)} vs {show_sort(s)}",
            kind="constructor-clash",
        )
    for a, b in zip(e.args, s.args):
        _match(a, b, theta, top1, top2)


def resolve(e, theta):
    """Apply a triangular substitution ``theta`` exhaustively."""
    while isinstance(e, SVar) and e.name in theta:
        e = theta[e.name]
    if isinstance(e, SVar) or not e.args:
        return e
    return Sort(e.con, tuple(resolve(a, theta) for a in e.args))


def unify(e1, e2, theta):
    """Two-sided first-order unification of sort expressions (mutates ``theta``)."""
    a, b = _walk(e1, theta), _walk(e2, theta)
    if isinstance(a, SVar) and isinstance(b, SVar) and a.name == b.name:
        return theta
    if isinstance(a, SVar):
        if _occurs(a.name, b, theta):
            raise SortError(f"cyclic sort {a} = {resolve(b, theta)}", kind="occurs-check")
        theta[a.name] = b
        return theta
    if isinstance(b, SVar):
        return unify(b, a, theta)
    if a.con != b.con or len(a.args) != len(b.args):
        raise SortError(
            f"{show_sort(resolve(a, theta))} vs {show_sort(resolve(b, theta))}",
            kind="constructor-clash",
        )
    for x, y in zip(a.args, b.args):
        unify(x, y, theta)
    return theta


def _walk(e, theta):
    while isinstance(e, SVar) and e.name in theta:
        e = theta[e.name]
    return e


def _occurs(name, e, theta):
    e = _walk(e, theta)
    if isinstance(e, SVar):
        return e.name == name
    return any(_occurs(name, a, theta) for a in e.args)


def operator_arity(sig: Signature, op: str, theta: Mapping[str, Sort]):
    """Ground argument arities ``[(bound ctx, body sort)]`` and result sort of ``op``."""
    decl = sig.op(op)
    missing = [v for v in decl.sortvars if v not in theta]
    if missing:
        raise SortError(
            f"instantiation of {op} misses {', '.join(missing)}",
            kind="incomplete-instantiation",
        )
    args = tuple(
        (tuple(instantiate(b, theta) for b in a.bound), instantiate(a.body, theta))
        for a in decl.args
    )
    return args, instantiate(decl.result, theta)


# ---------------------------------------------------------------------------
# printing


def show_sort(s, sig: Signature | None = None, minprec=0):
    """Render a sort with the declared notation and minimal parentheses."""
    if isinstance(s, SVar):
        return s.name
    decl = sig.typecon(s.con) if sig is not None else None
    n = decl.notation if decl is not None else None
    if n is None and sig is None and _is_pattern(s.con):
        n = Notation(s.con)
    if n is not None and n.pattern == s.con and n.holes == len(s.args):
        p = n.precedence
        if n.kind == "infix":
            lp, rp = (p, p + 1) if n.assoc == "l" else (p + 1, p) if n.assoc == "r" else (p + 1, p + 1)
            txt = f"{show_sort(s.args[0], sig, lp)} {n.symbol} {show_sort(s.args[1], sig, rp)}"
            return f"({txt})" if p < minprec else txt
        if n.kind == "prefix":
            txt = f"{n.symbol} {show_sort(s.args[0], sig, p)}"
            return f"({txt})" if p < minprec else txt
    if not s.args:
        return s.con
    txt = s.con + " " + " ".join(show_sort(a, sig, _ATOM) for a in s.args)
    return f"({txt})" if _APP < minprec else txt


# ---------------------------------------------------------------------------
# sort-expression parser


class SortParser:
    """Precedence-climbing reader of sort expressions over a token stream."""

    def __init__(self, ts: TokenStream, sig: Signature, allow_vars=False):
        self.ts = ts
        self.sig = sig
        self.allow_vars = allow_vars
        self.infix, self.prefix, self.named = sig.sort_tables

    def sort(self, minprec=0):
        return self.tail(self.prefix_term(), minprec)

    def tail(self, lhs, minprec=0):
        ts = self.ts
        while True:
            t = ts.tok
            decl = self.infix.get(t.text) if t.kind in ("SYM", "NAME") else None
            if decl is None:
                return lhs
            n = decl.notation
            p = n.precedence
            if p < minprec:
                return lhs
            ts.next()
            rhs = self.sort(p if n.assoc == "r" else p + 1)
            lhs = Sort(decl.name, (lhs, rhs))

    def prefix_term(self):
        ts = self.ts
        t = ts.tok
        if t.kind in ("SYM", "NAME") and t.text in self.prefix:
            decl = self.prefix[t.text]
            ts.next()
            return Sort(decl.name, (self.sort(decl.notation.precedence),))
        if t.kind == "NAME" and t.text in self.named:
            decl = self.named[t.text]
            ts.next()
            args = []
            for _ in range(decl.arity):
                if not self.starts_atom():
                    ts.fail(
                        f"type constructor {decl.name} expects {decl.arity} argument(s)",
                        kind="arity-mismatch",
                    )
                args.append(self.atom())
            return Sort(decl.name, tuple(args))
        return self.atom()

    def starts_atom(self):
        t = self.ts.tok
        if t.kind == "PUNCT":
            return t.text == "("
        if t.kind == "SYM":
            return t.text == "*" and t.text not in self.infix
        return t.kind == "NAME" and t.text not in self.infix

    def atom(self):
        ts = self.ts
        t = ts.tok
        if ts.accept("("):
            s = self.sort()
            ts.expect(")")
            return s
        if t.kind == "SYM" and t.text == "*" and not self.sig.is_sorted:
            ts.next()
            return STAR
        if t.kind == "NAME":
            decl = self.named.get(t.text)
            if decl is not None:
                if decl.arity != 0:
                    ts.fail(
                        f"type constructor {decl.name} expects {decl.arity} argument(s)",
                        kind="arity-mismatch",
                    )
                ts.next()
                return Sort(decl.name)
            if not self.sig.is_sorted:
                ts.fail(f"unsorted signature has only the sort '*', found {t.text!r}",
                        kind="undeclared-sort-variable")
            if self.allow_vars and t.text[0].islower():
                ts.next()
                return SVar(t.text)
            if self.allow_vars:
                ts.fail(f"unknown type constructor {t.text!r}", kind="unknown-type-constructor")
            if t.text[0].islower():
                ts.fail(f"sort variable {t.text!r} not allowed here", kind="undeclared-sort-variable")
            ts.fail(f"unknown type constructor {t.text!r}", kind="unknown-type-constructor")
        ts.fail(f"expected a sort, found {ts.describe(t)}")


def parse_sort(text, sig: Signature, allow_vars=False, pos=(1, 1)):
    """Parse a complete sort expression from ``text``."""
    ts = TokenStream(tokenize(text, *pos, error=SpecError), error=SpecError)
    s = SortParser(ts, sig, allow_vars).sort()
    if not ts.at_eof():
        ts.fail(f"unexpected {ts.describe(ts.tok)} after sort")
    return s


# ---------------------------------------------------------------------------
# the specification language

_TYDECL = re.compile(r"^(\S+)\s*:\s*(\d+)\s*-\s*ary\s*(?:\|\s*(.*))?$")
_FIXITY = re.compile(r"^([lr]?)(\d+)$")


def _alias(text):
    for k, v in ALIASES.items():
        text = text.replace(k, v)
    return text


def _is_pattern(name):
    return "_" in name and not re.fullmatch(r"[A-Za-z_][\w']*", name)


def _fixity(text, pos):
    m = _FIXITY.match(text)
    if not m:
        raise SpecError(f"malformed fixity {text!r}", kind="parse-error", pos=pos)
    return (m.group(1) or None), int(m.group(2))


def _notation(items, pos, fixity_only=False, pattern=None):
    if fixity_only:
        if len(items) > 1:
            raise SpecError("expected a single fixity annotation", pos=pos)
        assoc, prec = _fixity(items[0], pos) if items else (None, None)
        return Notation(pattern, assoc, prec)
    if not items:
        raise SpecError("empty notation", pos=pos)
    if len(items) > 2:
        raise SpecError(f"unexpected notation text {' '.join(items[2:])!r}", pos=pos)
    assoc, prec = _fixity(items[1], pos) if len(items) == 2 else (None, None)
    return Notation(_alias(items[0]), assoc, prec)


def parse_spec(text: str, source: str | None = None) -> Signature:
    """Parse spec-language source into a :class:`Signature`."""
    try:
        return _parse_spec(text)
    except SpecError as e:
        raise e.located(source) if source else e


def _parse_spec(text):
    section = None
    seen_section = set()
    type_lines, term_lines, theory = [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = strip_comment(raw)
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        word = line.strip()
        if word in ("type", "term", "theory"):
            if word in seen_section:
                raise SpecError(f"duplicate section {word!r}", kind="duplicate-name", pos=(lineno, col))
            seen_section.add(word)
            section = word
            continue
        if section is None:
            raise SpecError("expected a 'type', 'term' or 'theory' section header",
                            pos=(lineno, col))
        if section == "type":
            type_lines.append((word, lineno, col))
        elif section == "term":
            term_lines.append((line, lineno, col))
        else:
            if word[0] in "('‘" or not theory:
                theory.append(TheoryLine(word, lineno, col))
            else:
                prev = theory[-1]
                theory[-1] = TheoryLine(prev.text + " " + word, prev.line, prev.col)
    typecons = []
    names = set()
    for word, lineno, col in type_lines:
        m = _TYDECL.match(word)
        if not m:
            raise SpecError(f"malformed type declaration {word!r}", pos=(lineno, col))
        name, arity = _alias(m.group(1)), int(m.group(2))
        if name in names:
            raise SpecError(f"duplicate type constructor {name!r}", kind="duplicate-name",
                            pos=(lineno, col))
        names.add(name)
        items = m.group(3).split() if m.group(3) else []
        if _is_pattern(name):
            notation = _notation(items, (lineno, col), fixity_only=True, pattern=name)
            if notation.holes != arity:
                raise SpecError(
                    f"notation {name} has {notation.holes} holes but arity {arity}",
                    kind="arity-mismatch", pos=(lineno, col),
                )
        else:
            notation = _notation(items, (lineno, col)) if items else None
        typecons.append(TypeConDecl(name, arity, notation))
    if "term" not in seen_section:
        raise SpecError("missing 'term' section", pos=(1, 1))
    sig0 = Signature(tuple(typecons), ())

    ops = []
    opnames = set()
    for line, lineno, col in term_lines:
        op = _parse_opdecl(line, lineno, sig0)
        if op.name in opnames:
            raise SpecError(f"duplicate operator {op.name!r}", kind="duplicate-name",
                            pos=(lineno, col))
        opnames.add(op.name)
        ops.append(op)
    return Signature(tuple(typecons), tuple(ops), tuple(theory))


def _parse_opdecl(line, lineno, sig0):
    colon = line.find(":")
    if colon < 0:
        raise SpecError("expected ':' in operator declaration", pos=(lineno, 1))
    name = line[:colon].strip()
    ncol = len(line) - len(line.lstrip()) + 1
    if not re.fullmatch(r"[^\s():,.\[\]]+", name):
        raise SpecError(f"malformed operator name {name!r}", pos=(lineno, ncol))
    rest = line[colon + 1:]
    bar = rest.find("|")
    notation = None
    if bar >= 0:
        items = rest[bar + 1:].split()
        notation = _notation(items, (lineno, colon + bar + 2))
        rest = rest[:bar]
    ts = TokenStream(tokenize(rest, lineno, colon + 2, error=SpecError), error=SpecError)
    sp = SortParser(ts, sig0, allow_vars=True)
    args = []
    result = None
    while not ts.at_eof():
        if ts.accept("->"):
            result = sp.sort()
            if not ts.at_eof():
                ts.fail(f"unexpected {ts.describe(ts.tok)} after result sort")
            break
        args.append(_parse_argspec(ts, sp))
    if result is None:
        if len(args) != 1 or args[0].bound:
            raise SpecError(f"operator {name} needs '->' before its result sort",
                            pos=(lineno, ncol))
        result, args = args[0].body, []
    svars = []
    for a in args:
        for b in a.bound:
            sort_vars(b, svars)
        sort_vars(a.body, svars)
    sort_vars(result, svars)
    return OperatorDecl(name, tuple(svars), tuple(args), result, notation)


def _parse_argspec(ts, sp):
    if ts.at("("):
        save = ts.i
        ts.next()
        group = [sp.sort()]
        while ts.accept(","):
            group.append(sp.sort())
        ts.expect(")")
        if ts.accept("."):
            return BoundArity(tuple(group), sp.sort())
        if len(group) != 1:
            ts.i = save
            ts.fail("a parenthesised sort list must be followed by '.'")
        lhs = sp.tail(group[0])
        return _binder_tail(ts, sp, [lhs])
    return _binder_tail(ts, sp, [sp.sort()])


def _binder_tail(ts, sp, group):
    while ts.accept(","):
        group.append(sp.sort())
    if ts.accept("."):
        return BoundArity(tuple(group), sp.sort())
    if len(group) > 1:
        ts.fail("comma-separated sorts must be followed by '.'")
    return BoundArity((), group[0])


# ---------------------------------------------------------------------------
# canonical dump and re-rendering


def _arg_text(a, sig):
    bound = ",".join(show_sort(b, sig) for b in a.bound)
    return f"({bound};{show_sort(a.body, sig)})"


def dump_signature(sig: Signature) -> str:
    """Canonical, byte-stable, line-oriented serialisation of ``sig``."""
    out = []
    for t in sig.typecons:
        line = f"ty {t.name} {t.arity}"
        if t.notation is not None:
            line += f" | {t.notation}"
        out.append(line)
    for o in sig.ops:
        args = " ".join(_arg_text(a, sig) for a in o.args)
        line = f"op {o.name} [{','.join(o.sortvars)}] : {args + ' ' if args else ''}-> {show_sort(o.result, sig)}"
        if o.notation is not None:
            line += f" | {o.notation}"
        out.append(line)
    for th in sig.theory:
        out.append(f"th {th.text}")
    return "".join(line + "\n" for line in out)


_DUMP_TY = re.compile(r"^ty (\S+) (\d+)(?: \| (.*))?$")
_DUMP_OP = re.compile(r"^op (\S+) \[([^\]]*)\] : (.*?)-> (.*?)(?: \| (.*))?$")


def parse_dump(text: str) -> Signature:
    """Inverse of :func:`dump_signature`."""
    typecons, ops, theory = [], [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.startswith("ty "):
            m = _DUMP_TY.match(line)
            if not m:
                raise SpecError(f"malformed dump line {line!r}", pos=(lineno, 1))
            items = m.group(3).split() if m.group(3) else []
            notation = _notation(items, (lineno, 1)) if items else None
            typecons.append(TypeConDecl(m.group(1), int(m.group(2)), notation))
        elif line.startswith("op "):
            m = _DUMP_OP.match(line)
            if not m:
                raise SpecError(f"malformed dump line {line!r}", pos=(lineno, 1))
            sig0 = Signature(tuple(typecons), ())
            ts = TokenStream(tokenize(m.group(3), lineno, 1, error=SpecError), error=SpecError)
            sp = SortParser(ts, sig0, allow_vars=True)
            args = []
            while not ts.at_eof():
                ts.expect("(")
                bound = []
                if not ts.at(";"):
                    bound.append(sp.sort())
                    while ts.accept(","):
                        bound.append(sp.sort())
                ts.expect(";")
                body = sp.sort()
                ts.expect(")")
                args.append(BoundArity(tuple(bound), body))
            result = parse_sort(m.group(4), sig0, allow_vars=True, pos=(lineno, 1))
            svars = tuple(v for v in m.group(2).split(",") if v)
            items = m.group(5).split() if m.group(5) else []
            notation = _notation(items, (lineno, 1)) if items else None
            ops.append(OperatorDecl(m.group(1), svars, tuple(args), result, notation))
        elif line.startswith("th "):
            theory.append(TheoryLine(line[3:]))
        elif line.strip():
            raise SpecError(f"malformed dump line {line!r}", pos=(lineno, 1))
    return Signature(tuple(typecons), tuple(ops), tuple(theory))


def render_spec(sig: Signature) -> str:
    """Spec-language source that parses back to ``sig``."""
    out = []
    if sig.typecons:
        out.append("type")
        for t in sig.typecons:
            line = f"  {t.name} : {t.arity}-ary"
            n = t.notation
            if n is not None:
                if n.pattern == t.name:
                    if n.prec is not None:
                        line += f" | {n.fixity_text()}"
                else:
                    line += f" | {n}"
            out.append(line)
    out.append("term")
    for o in sig.ops:
        parts = []
        for a in o.args:
            body = show_sort(a.body, sig)
            if a.bound:
                bound = ", ".join(show_sort(b, sig) for b in a.bound)
                if len(a.bound) > 1 or bound != show_sort(a.bound[0], sig, _ATOM):
                    bound = f"({bound})"
                parts.append(f"{bound}.({body})" if " " in body else f"{bound}.{body}")
            else:
                parts.append(f"({body})" if " " in body else body)
        line = f"  {o.name} : {'  '.join(parts)}{'  ' if parts else ''}-> {show_sort(o.result, sig)}"
        if o.notation is not None:
            line += f" | {o.notation}"
        out.append(line)
    if sig.theory:
        out.append("theory")
        out.extend(f"  {th.text}" for th in sig.theory)
    return "\n".join(out) + "\n"
