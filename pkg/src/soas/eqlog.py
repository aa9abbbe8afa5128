"""Second-order equational logic: theories, axiom instances and proof scripts.

A theory is a list of named axioms ``𝔛 ▷ Γ ⊢ lhs = rhs``.  Proofs are chains
of terms joined by steps, each step an axiom or theorem instance (optionally
reversed), possibly applied inside a congruence context with a typed hole::

    theorem d0zero : |> x : * |- pdiff(w. 0, x) ~ 0
      pdiff(w. 0, x)
      ~[ cong (ax 0XmultL rev with (a := x0)) at pdiff(w. ∘[w], x) hole ∘ : (*) * ]
      pdiff(w. 0 ⊗ w, x)
      ~[ ax ∂⊗ with (a := 0) ]
      0

The checker recomputes every step and compares it with the written term.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ._lex import TokenStream, tokenize
from .concrete import (RawParser, _named, elaborate, print_term, read_mdecls, read_vdecls)
from .ctx import Ctx
from .errors import CheckError, ProofError, SoasError, SortError, SpecError, TermSyntaxError
from .metasub import MetaMap, id_metamap, metamap, msub
from .signature import Signature, Sort, is_ground, show_sort
from .term import Arg, Con, MCtx, MVar, MvarDecl, check, check_mctx, subterms
from .traverse import wkl


@dataclass(frozen=True)
class Axiom:
    name: str
    mctx: MCtx
    ctx: tuple  # (name, Sort) pairs
    sort: Sort
    lhs: object
    rhs: object

    @property
    def sorts(self) -> Ctx:
        return tuple(s for _, s in self.ctx)

    def show(self, sig):
        ms = "  ".join(_show_mdecl(d, sig) for d in self.mctx)
        vs = "  ".join(f"{n} : {show_sort(s, sig)}" for n, s in self.ctx)
        lhs = print_term(sig, self.mctx, self.ctx, self.lhs)
        rhs = print_term(sig, self.mctx, self.ctx, self.rhs)
        return f"({self.name}) {ms} ▷ {vs} ⊢ {lhs} = {rhs}".replace("  ▷", " ▷").replace("▷  ⊢", "▷ ⊢")


def _show_mdecl(d, sig):
    s = show_sort(d.sort, sig)
    if not d.params:
        return f"{d.name} : {s}"
    return f"{d.name} : ({', '.join(show_sort(p, sig) for p in d.params)}) {s}"


@dataclass
class Theory:
    sig: Signature
    axioms: dict = field(default_factory=dict)
    theorems: dict = field(default_factory=dict)

    def add_axiom(self, ax: Axiom, pos=None):
        if ax.name in self.axioms or ax.name in self.theorems:
            raise SpecError(f"duplicate axiom {ax.name!r}", kind="duplicate-name", pos=pos)
        self.axioms[ax.name] = ax

    def add_theorem(self, ax: Axiom, pos=None):
        if ax.name in self.axioms or ax.name in self.theorems:
            raise ProofError(f"name {ax.name!r} is already taken", kind="duplicate-name", pos=pos)
        self.theorems[ax.name] = ax

    def lookup(self, kind, name, pos=None):
        table = self.axioms if kind == "ax" else self.theorems
        if name not in table:
            what = "axiom" if kind == "ax" else "theorem"
            raise ProofError(f"unknown {what} {name!r}", kind=f"unknown-{what}", pos=pos)
        return table[name]


# ---------------------------------------------------------------------------
# theory elaboration

MACROS = {
    "unit of": 2,
    "commutative": 1,
    "associative": 1,
    "distributes over": 2,
    "annihilates": 2,
}
_MACRO = re.compile(r"^['‘]([^'’]+)['’]\s+(unit of|commutative|associative|distributes over|annihilates)"
                    r"\s*(?:['‘]([^'’]+)['’])?\s*$")
_AXIOM = re.compile(r"^\(([^()\s]+)\)\s*(.*)$", re.S)


def _prefix(sig, name):
    """Short name used in generated axiom names: ASCII notation symbol or op name."""
    n = sig.op(name).notation
    if n is not None and n.kind == "const" and re.fullmatch(r"[A-Za-z0-9]+", n.symbol):
        return n.symbol
    return name


def _binary_sort(sig, name, pos):
    d = sig.op(name)
    if len(d.args) != 2 or any(a.bound for a in d.args) or not is_ground(d.result) or \
            any(a.body != d.result for a in d.args):
        raise SpecError(f"{name} must be a binary operator on a single ground sort",
                        kind="macro-error", pos=pos)
    return d.result


def _const_sort(sig, name, pos):
    d = sig.op(name)
    if d.args or not is_ground(d.result):
        raise SpecError(f"{name} must be a ground constant", kind="macro-error", pos=pos)
    return d.result


def elaborate_theory(sig: Signature, source=None) -> Theory:
    """Expand the theory lines of ``sig`` into axioms."""
    th = Theory(sig)
    parsed = []
    commutative = set()
    for line in sig.theory:
        pos = (line.line, line.col)
        m = _MACRO.match(line.text)
        if m:
            a, kw, b = m.groups()
            if (b is None) != (MACROS[kw] == 1):
                raise SpecError(f"macro {kw!r} takes {MACROS[kw]} operand(s)", kind="macro-error",
                                pos=pos, source=source)
            for n in (a, b):
                if n is not None and not sig.has_op(n):
                    raise SpecError(f"unknown operator {n!r}", kind="unknown-operator",
                                    pos=pos, source=source)
            if kw == "commutative":
                commutative.add(a)
            parsed.append(("macro", (a, kw, b), pos))
        elif line.text.startswith("("):
            parsed.append(("axiom", line, pos))
        else:
            raise SpecError(f"unknown theory line {line.text!r}", kind="unknown-macro",
                            pos=pos, source=source)
    try:
        for kind, item, pos in parsed:
            if kind == "macro":
                for ax in _expand(sig, *item, commutative, pos):
                    th.add_axiom(ax, pos)
            else:
                th.add_axiom(parse_axiom(sig, item.text, pos), pos)
    except SoasError as err:
        raise err.located(source) if source and err.source is None else err
    return th


def _expand(sig, a, kw, b, commutative, pos):
    def mk(name, n, lhs, rhs, s):
        letters = "abc"[:n]
        mctx = MCtx(tuple(MvarDecl(x, (), s) for x in letters))
        return Axiom(name, mctx, (), s, lhs, rhs)

    def op(name, *args):
        return Con(name, (), tuple(_arg(x) for x in args))

    v = lambda x: MVar(x)
    if kw == "commutative":
        s = _binary_sort(sig, a, pos)
        yield mk(f"{a}C", 2, op(a, v("a"), v("b")), op(a, v("b"), v("a")), s)
    elif kw == "associative":
        s = _binary_sort(sig, a, pos)
        yield mk(f"{a}A", 3, op(a, op(a, v("a"), v("b")), v("c")),
                 op(a, v("a"), op(a, v("b"), v("c"))), s)
    elif kw == "unit of":
        s = _binary_sort(sig, b, pos)
        if _const_sort(sig, a, pos) != s:
            raise SpecError(f"{a} and {b} have different sorts", kind="sort-mismatch", pos=pos)
        u, p = op(a), _prefix(sig, a)
        yield mk(f"{p}U{b}L", 1, op(b, u, v("a")), v("a"), s)
        if b in commutative:
            yield mk(f"{p}U{b}R", 1, op(b, v("a"), u), v("a"), s)
    elif kw == "annihilates":
        s = _binary_sort(sig, b, pos)
        if _const_sort(sig, a, pos) != s:
            raise SpecError(f"{a} and {b} have different sorts", kind="sort-mismatch", pos=pos)
        u, p = op(a), _prefix(sig, a)
        yield mk(f"{p}X{b}L", 1, op(b, u, v("a")), u, s)
        if b in commutative:
            yield mk(f"{p}X{b}R", 1, op(b, v("a"), u), u, s)
    elif kw == "distributes over":
        s = _binary_sort(sig, a, pos)
        if _binary_sort(sig, b, pos) != s:
            raise SpecError(f"{a} and {b} have different sorts", kind="sort-mismatch", pos=pos)
        yield mk(f"{a}D{b}L", 3, op(a, v("a"), op(b, v("b"), v("c"))),
                 op(b, op(a, v("a"), v("b")), op(a, v("a"), v("c"))), s)
        if a in commutative:
            yield mk(f"{a}D{b}R", 3, op(a, op(b, v("a"), v("b")), v("c")),
                     op(b, op(a, v("a"), v("c")), op(a, v("b"), v("c"))), s)


def _arg(t):
    return Arg((), t)


def parse_axiom(sig: Signature, text, pos=(1, 1)) -> Axiom:
    """``(name) mdecls |> vdecls |- lhs = rhs``."""
    m = _AXIOM.match(text)
    if not m:
        raise SpecError(f"malformed axiom line {text!r}", pos=pos)
    name, rest = m.group(1), m.group(2)
    col = pos[1] + text.index(rest) if rest else pos[1]
    ts = TokenStream(tokenize(rest, pos[0], col, error=SpecError), error=SpecError)
    return _read_statement(ts, sig, name, "=")


def _read_header(ts, sig):
    mctx = read_mdecls(ts, sig)
    check_mctx(sig, mctx)
    ts.expect("▷")
    ctx = read_vdecls(ts, sig)
    ts.expect("⊢")
    return mctx, ctx


def _read_statement(ts, sig, name, eq):
    mctx, ctx = _read_header(ts, sig)
    lraw = RawParser(ts, sig).term()
    if not (ts.at(eq) or ts.at("=") or ts.at("≈")):
        ts.fail(f"expected {eq!r} between the two sides, found {ts.describe(ts.tok)}")
    ts.next()
    rraw = RawParser(ts, sig).term()
    lhs, rhs, s = _elab_pair(sig, mctx, ctx, lraw, rraw)
    return Axiom(name, mctx, tuple(ctx), s, lhs, rhs)


def _elab_pair(sig, mctx, ctx, lraw, rraw):
    """Elaborate two sides of an equation at a common sort."""
    try:
        lhs = elaborate(sig, mctx, ctx, lraw)
    except TermSyntaxError as err:
        if err.kind != "ambiguous-sort-inference":
            raise
        rhs = elaborate(sig, mctx, ctx, rraw)
        s = check(sig, mctx, tuple(x for _, x in ctx), rhs)
        return elaborate(sig, mctx, ctx, lraw, s), rhs, s
    s = check(sig, mctx, tuple(x for _, x in ctx), lhs)
    return lhs, elaborate(sig, mctx, ctx, rraw, s), s


# ---------------------------------------------------------------------------
# steps


@dataclass
class AxStep:
    kind: str  # "ax" | "thm"
    name: str
    rev: bool = False
    with_: list = field(default_factory=list)  # (mvar name, raw term, pos)
    pos: tuple | None = None


@dataclass
class CongStep:
    inner: object
    context: object  # raw term mentioning the hole
    hole: MvarDecl
    pos: tuple | None = None


def instantiate_axiom(ax: Axiom, zeta: MetaMap):
    """Instance of ``ax`` under ``zeta``, with the axiom context included as a prefix."""
    g, k = zeta.glob, len(ax.ctx)
    if tuple(g[:k]) != ax.sorts:
        raise ProofError(
            f"context of {ax.name} does not embed as a prefix of the goal context",
            kind="context-embedding")
    rest = tuple(g[k:])
    return (msub(wkl(ax.lhs, ax.sorts, rest), zeta), msub(wkl(ax.rhs, ax.sorts, rest), zeta))


def step_sides(theory: Theory, step, ymctx: MCtx, ctx):
    """The (source, target) pair a step relates, over ``ymctx`` in named ``ctx``."""
    sig = theory.sig
    ctx = _named(ctx)
    sorts = tuple(s for _, s in ctx)
    if isinstance(step, AxStep):
        ax = theory.lookup(step.kind, step.name, step.pos)
        given = {}
        for name, raw, pos in step.with_:
            if name not in ax.mctx:
                raise ProofError(f"{ax.name} has no metavariable {name!r}",
                                 kind="unknown-metavariable", pos=pos)
            if name in given:
                raise ProofError(f"{name} given twice", kind="duplicate-name", pos=pos)
            d = ax.mctx[name]
            given[name] = elaborate(sig, ymctx, [(None, p) for p in d.params] + ctx, raw, d.sort)
        missing = [d.name for d in ax.mctx if d.name not in given]
        if missing:
            raise ProofError(f"no instance given for {', '.join(missing)} of {ax.name}",
                             kind="missing-metavariable", pos=step.pos)
        zeta = metamap(ax.mctx, ymctx, sorts, given)
        src, tgt = instantiate_axiom(ax, zeta)
        return (tgt, src) if step.rev else (src, tgt)
    if isinstance(step, CongStep):
        h = step.hole
        if h.name in ymctx:
            raise ProofError(f"hole name {h.name!r} clashes with a metavariable",
                             kind="duplicate-name", pos=step.pos)
        check_mctx(sig, MCtx((h,)))
        ext = ymctx.extend(h)
        ctxt = elaborate(sig, ext, ctx, step.context)
        if not any(isinstance(u, MVar) and u.name == h.name for u in subterms(ctxt)):
            raise ProofError(f"hole {h.name} does not occur in the congruence context",
                             kind="hole-missing", pos=step.pos)
        s, t = step_sides(theory, step.inner, ymctx, [(None, p) for p in h.params] + ctx)
        ident = id_metamap(ymctx, sorts).entries
        plug = lambda side: msub(ctxt, MetaMap(ext, ymctx, sorts, ident + (side,)))
        return plug(s), plug(t)
    raise TypeError(step)


def check_step(theory: Theory, current, step, ymctx: MCtx, ctx):
    """Apply ``step`` to ``current`` and return the resulting term."""
    src, tgt = step_sides(theory, step, ymctx, ctx)
    if current != src:
        sig = theory.sig
        raise ProofError(
            "step does not apply: the current term differs from the step's source side\n"
            f"  expected: {_show(sig, ymctx, ctx, src)}\n  found:    {_show(sig, ymctx, ctx, current)}",
            kind="side-mismatch", pos=step.pos, expected=src, found=current)
    return tgt


def _show(sig, mctx, ctx, t):
    try:
        return print_term(sig, mctx, ctx, t)
    except SoasError:
        return str(t)


# ---------------------------------------------------------------------------
# proof scripts


@dataclass
class ProofScript:
    name: str
    mctx: MCtx
    ctx: list
    lhs_raw: object
    rhs_raw: object
    chain: list  # [raw term, (step, raw term), ...]
    pos: tuple | None = None


def _read_name(ts):
    """A possibly multi-token name such as ``∂Ch2`` (adjacent tokens, no spaces)."""
    t = ts.tok
    if t.kind not in ("NAME", "SYM", "NUM"):
        ts.fail(f"expected a name, found {ts.describe(t)}")
    ts.next()
    text, line, end = t.text, t.line, t.col + len(t.text)
    while ts.tok.kind in ("NAME", "SYM", "NUM") and ts.tok.line == line and ts.tok.col == end:
        nt = ts.next()
        text += nt.text
        end = nt.col + len(nt.text)
    return text


def _read_step(ts, sig):
    t = ts.tok
    if ts.accept("cong"):
        ts.expect("(")
        inner = _read_step(ts, sig)
        ts.expect(")")
        ts.expect("at")
        ctx_raw = RawParser(ts, sig).term()
        ts.expect("hole")
        holes = read_mdecls(ts, sig)
        if len(holes) != 1:
            ts.fail("expected exactly one hole declaration")
        return CongStep(inner, ctx_raw, holes.decls[0], t.pos)
    if t.text not in ("ax", "thm"):
        ts.fail(f"expected 'ax', 'thm' or 'cong', found {ts.describe(t)}")
    ts.next()
    name = _read_name(ts)
    rev = bool(ts.accept("rev"))
    with_ = []
    if ts.accept("with"):
        ts.expect("(")
        while True:
            nt = ts.expect_kind("NAME")
            ts.expect(":=")
            with_.append((nt.text, RawParser(ts, sig).term(), nt.pos))
            if not ts.accept(","):
                break
        ts.expect(")")
    return AxStep(t.text, name, rev, with_, t.pos)


def parse_proofs(sig: Signature, text, source=None):
    """Read every ``theorem`` block of a proof-script file."""
    try:
        ts = TokenStream(tokenize(text, error=TermSyntaxError), error=TermSyntaxError)
        scripts = []
        while not ts.at_eof():
            start = ts.expect("theorem")
            name = _read_name(ts)
            ts.expect(":")
            mctx, ctx = _read_header(ts, sig)
            lhs = RawParser(ts, sig).term()
            if not (ts.at("≈") or ts.at("=")):
                ts.fail(f"expected '~' between the goal's sides, found {ts.describe(ts.tok)}")
            ts.next()
            rhs = RawParser(ts, sig).term()
            cpos = ts.tok.pos
            chain = [(None, RawParser(ts, sig).term(), cpos)]
            while ts.at("≈"):
                ts.next()
                ts.expect("[")
                step = _read_step(ts, sig)
                ts.expect("]")
                tpos = ts.tok.pos
                chain.append((step, RawParser(ts, sig).term(), tpos))
            scripts.append(ProofScript(name, mctx, ctx, lhs, rhs, chain, start.pos))
        return scripts
    except SoasError as err:
        raise err.located(source) if source and err.source is None else err


@dataclass
class Report:
    name: str
    steps: int
    statement: Axiom


def check_proof(theory: Theory, script: ProofScript, source=None) -> Report:
    """Check one script and register its goal as a theorem."""
    sig = theory.sig
    try:
        mctx, ctx = script.mctx, script.ctx
        lhs, rhs, sort = _elab_pair(sig, mctx, ctx, script.lhs_raw, script.rhs_raw)
        goal = Axiom(script.name, mctx, tuple(ctx), sort, lhs, rhs)
        _, first, fpos = script.chain[0]
        current = elaborate(sig, mctx, ctx, first, sort)
        if current != lhs:
            raise ProofError(
                "the chain does not start at the goal's left-hand side\n"
                f"  expected: {_show(sig, mctx, ctx, lhs)}\n  found:    {_show(sig, mctx, ctx, current)}",
                kind="side-mismatch", pos=fpos, expected=lhs, found=current)
        for i, (step, raw, tpos) in enumerate(script.chain[1:], 1):
            try:
                computed = check_step(theory, current, step, mctx, ctx)
            except ProofError as err:
                err.step = i
                raise
            written = elaborate(sig, mctx, ctx, raw, sort)
            if written != computed:
                raise ProofError(
                    f"step {i} of {script.name} yields a different term than written\n"
                    f"  expected: {_show(sig, mctx, ctx, computed)}\n"
                    f"  found:    {_show(sig, mctx, ctx, written)}",
                    kind="side-mismatch", pos=tpos, step=i, expected=computed, found=written)
            current = computed
        if current != rhs:
            raise ProofError(
                f"the chain of {script.name} ends before reaching the goal's right-hand side\n"
                f"  expected: {_show(sig, mctx, ctx, rhs)}\n  found:    {_show(sig, mctx, ctx, current)}",
                kind="side-mismatch", pos=script.pos, expected=rhs, found=current)
        theory.add_theorem(goal, script.pos)
        return Report(script.name, len(script.chain) - 1, goal)
    except SoasError as err:
        if isinstance(err, (CheckError, SortError, TermSyntaxError)) and not isinstance(err, ProofError):
            err = ProofError(err.message, kind=err.kind, pos=err.pos, path=err.path)
        raise err.located(source) if source and err.source is None else err


def check_proofs(theory: Theory, text, source=None):
    return [check_proof(theory, s, source) for s in parse_proofs(theory.sig, text, source)]
