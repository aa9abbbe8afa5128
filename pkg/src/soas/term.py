"""The signature-generic term tree and its well-formedness checker.

Terms are immutable trees of three node kinds:

* :class:`~soas.ctx.Var` -- a de Bruijn variable carrying its sort;
* :class:`MVar` -- a metavariable applied to an environment of terms, one per
  parameter of its declaration;
* :class:`Con` -- an operator with an explicit sort instantiation and one
  :class:`Arg` per declared argument; an argument's ``bound`` sorts sit at the
  head of the context its body lives in.

Nothing is enforced at construction time except by the ``mk_*`` smart
constructors; :func:`check` recomputes every typing invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .ctx import Ctx, Var, concat
from .errors import CheckError, SoasError, SortError
from .signature import Signature, Sort, operator_arity, show_sort

CHECKED = True


@dataclass(frozen=True)
class MvarDecl:
    name: str
    params: tuple
    sort: Sort

    def __str__(self):
        ps = ", ".join(map(str, self.params))
        return f"{self.name} : ({ps}) {self.sort}" if self.params else f"{self.name} : {self.sort}"


@dataclass(frozen=True)
class MCtx:
    decls: tuple = ()

    def __post_init__(self):
        names = [d.name for d in self.decls]
        if len(set(names)) != len(names):
            raise CheckError(f"duplicate metavariable in {names}", kind="duplicate-name")

    def __getitem__(self, name) -> MvarDecl:
        for d in self.decls:
            if d.name == name:
                return d
        raise CheckError(f"unknown metavariable {name!r}", kind="unknown-metavariable")

    def __contains__(self, name):
        return any(d.name == name for d in self.decls)

    def __iter__(self):
        return iter(self.decls)

    def __len__(self):
        return len(self.decls)

    @property
    def names(self):
        return tuple(d.name for d in self.decls)

    def extend(self, *decls):
        return MCtx(self.decls + tuple(decls))


@dataclass(frozen=True)
class MVar:
    name: str
    env: tuple = ()

    def __str__(self):
        return show_term(self)


@dataclass(frozen=True)
class Arg:
    bound: tuple
    body: object


@dataclass(frozen=True)
class Con:
    op: str
    inst: tuple
    args: tuple = ()

    def __post_init__(self):
        if isinstance(self.inst, Mapping):
            object.__setattr__(self, "inst", tuple(sorted(self.inst.items())))

    @property
    def theta(self):
        return dict(self.inst)

    def __str__(self):
        return show_term(self)


@dataclass(frozen=True)
class Sub:
    """Simultaneous substitution: entry ``i`` is a term in ``target`` of sort ``source[i]``."""

    source: Ctx
    target: Ctx
    entries: tuple


Term = object  # Var | MVar | Con


def show_term(t):
    """Prefix-form rendering without notation; for diagnostics."""
    if isinstance(t, Var):
        return f"x{t.index}"
    if isinstance(t, MVar):
        return f"{t.name}[{', '.join(show_term(e) for e in t.env)}]"
    if isinstance(t, Con):
        if not t.args:
            return f"{t.op}()"
        parts = []
        for a in t.args:
            body = show_term(a.body)
            parts.append(f"{'.' * bool(a.bound)}{body}" if a.bound else body)
        return f"{t.op}({', '.join(parts)})"
    return repr(t)


# ---------------------------------------------------------------------------
# checking


def check_sort(sig: Signature, s):
    if not isinstance(s, Sort):
        raise CheckError(f"{s!r} is not a ground sort", kind="ill-formed-sort")
    if not sig.is_sorted:
        if s.con != "*" or s.args:
            raise CheckError(f"unsorted signature has no sort {s}", kind="ill-formed-sort")
        return
    decl = sig.typecon(s.con)
    if decl is None or decl.arity != len(s.args):
        raise CheckError(f"{s} is not a sort of this signature", kind="ill-formed-sort")
    for a in s.args:
        check_sort(sig, a)


def check_mctx(sig: Signature, mctx: MCtx):
    for d in mctx:
        for p in d.params:
            check_sort(sig, p)
        check_sort(sig, d.sort)


def check(sig: Signature, mctx: MCtx, ctx: Ctx, t) -> Sort:
    """Synthesise the sort of ``t`` in ``ctx`` and validate it recursively."""
    if isinstance(t, Var):
        if not 0 <= t.index < len(ctx):
            raise CheckError(
                f"x{t.index} is not bound in a context of length {len(ctx)}",
                kind="unbound-variable",
            )
        if ctx[t.index] != t.sort:
            raise CheckError(
                f"x{t.index} is annotated {show_sort(t.sort, sig)} but the context gives "
                f"{show_sort(ctx[t.index], sig)}",
                kind="sort-mismatch",
            )
        return t.sort
    if isinstance(t, MVar):
        decl = mctx[t.name]
        if len(t.env) != len(decl.params):
            raise CheckError(
                f"{t.name} takes {len(decl.params)} argument(s), given {len(t.env)}",
                kind="env-length-mismatch",
            )
        for j, (e, p) in enumerate(zip(t.env, decl.params)):
            try:
                s = check(sig, mctx, ctx, e)
            except CheckError as err:
                raise err.under(f"env{j}")
            if s != p:
                raise CheckError(
                    f"expected {show_sort(p, sig)}, found {show_sort(s, sig)}",
                    kind="sort-mismatch", path=(f"env{j}",),
                )
        return decl.sort
    if isinstance(t, Con):
        try:
            decl = sig.op(t.op)
        except SortError:
            raise CheckError(f"unknown operator {t.op!r}", kind="unknown-operator") from None
        theta = t.theta
        extra = sorted(set(theta) - set(decl.sortvars))
        if extra:
            raise CheckError(f"{t.op} has no sort variable(s) {', '.join(extra)}",
                             kind="incomplete-instantiation")
        for s in theta.values():
            check_sort(sig, s)
        try:
            arity, result = operator_arity(sig, t.op, theta)
        except SortError as err:
            raise CheckError(err.message, kind=err.kind) from None
        if len(t.args) != len(arity):
            raise CheckError(f"{t.op} takes {len(arity)} argument(s), given {len(t.args)}",
                             kind="arity-mismatch")
        for i, (a, (bound, body)) in enumerate(zip(t.args, arity)):
            if tuple(a.bound) != bound:
                raise CheckError(
                    f"argument binds ({', '.join(show_sort(b, sig) for b in a.bound)}) "
                    f"but {t.op} expects ({', '.join(show_sort(b, sig) for b in bound)})",
                    kind="sort-mismatch", path=(f"arg{i}",),
                )
            try:
                s = check(sig, mctx, concat(bound, ctx), a.body)
            except CheckError as err:
                raise err.under(f"arg{i}")
            if s != body:
                raise CheckError(
                    f"expected {show_sort(body, sig)}, found {show_sort(s, sig)}",
                    kind="sort-mismatch", path=(f"arg{i}",),
                )
        return result
    raise CheckError(f"not a term: {t!r}", kind="ill-formed")


def check_sub(sig: Signature, mctx: MCtx, sigma: Sub):
    if len(sigma.entries) != len(sigma.source):
        raise CheckError(
            f"substitution has {len(sigma.entries)} entries for {len(sigma.source)} variables",
            kind="env-length-mismatch",
        )
    for i, (e, s) in enumerate(zip(sigma.entries, sigma.source)):
        try:
            got = check(sig, mctx, sigma.target, e)
        except CheckError as err:
            raise err.under(f"entry{i}")
        if got != s:
            raise CheckError(f"expected {show_sort(s, sig)}, found {show_sort(got, sig)}",
                             kind="sort-mismatch", path=(f"entry{i}",))


# ---------------------------------------------------------------------------
# smart constructors


def mk_var(ctx: Ctx, index: int) -> Var:
    if not 0 <= index < len(ctx):
        raise CheckError(f"x{index} is not bound in a context of length {len(ctx)}",
                         kind="unbound-variable")
    return Var(index, ctx[index])


def mk_mvar(sig, mctx: MCtx, ctx: Ctx, name, env) -> MVar:
    t = MVar(name, tuple(env))
    if CHECKED:
        check(sig, mctx, ctx, t)
    return t


def mk_con(sig, mctx: MCtx, ctx: Ctx, op, inst, args) -> Con:
    """Build an operator node; bare terms in ``args`` become non-binding arguments."""
    decl = sig.op(op)
    out = []
    for a, spec in zip(args, decl.args):
        if isinstance(a, Arg):
            out.append(a)
        elif spec.bound:
            raise CheckError(f"argument of {op} must bind variables", kind="sort-mismatch")
        else:
            out.append(Arg((), a))
    out.extend(a if isinstance(a, Arg) else Arg((), a) for a in args[len(decl.args):])
    t = Con(op, dict(inst), tuple(out))
    if CHECKED:
        check(sig, mctx, ctx, t)
    return t


# ---------------------------------------------------------------------------
# first-order substitutions


def lookup(sigma: Sub, v: Var):
    if not 0 <= v.index < len(sigma.entries):
        raise SoasError(f"x{v.index} is outside a substitution of length {len(sigma.entries)}",
                        kind="out-of-bounds")
    return sigma.entries[v.index]


def tabulate(f: Callable[[Var], object], source: Ctx, target: Ctx | None = None) -> Sub:
    """Materialise ``f`` at every variable of ``source``."""
    source = tuple(source)
    return Sub(source, tuple(source if target is None else target),
               tuple(f(Var(i, s)) for i, s in enumerate(source)))


def id_sub(gamma: Ctx) -> Sub:
    gamma = tuple(gamma)
    return Sub(gamma, gamma, tuple(Var(i, s) for i, s in enumerate(gamma)))


def eq_term(t1, t2) -> bool:
    """Alpha-equivalence, which for de Bruijn terms is structural equality."""
    return t1 == t2


def subterms(t):
    """Pre-order iterator over ``t`` and all of its subterms."""
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        if isinstance(u, MVar):
            stack.extend(reversed(u.env))
        elif isinstance(u, Con):
            stack.extend(a.body for a in reversed(u.args))


def term_size(t) -> int:
    return sum(1 for _ in subterms(t))
