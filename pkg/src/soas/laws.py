"""Randomised checks of the renaming, substitution, fold and metasubstitution laws.

Every case draws from its own :class:`random.Random` seeded by
``"<law>/<case seed>"``, so a failure is replayed by re-running that single
law at that seed (``soas laws --replay LAW:SEED``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .concrete import print_term
from .ctx import Var, compose_ren, id_ren
from .errors import GenerationError, SoasError
from .generate import (gen_term, random_ctx, random_goal, random_mctx, random_renaming,
                       random_sort, random_sub)
from .metasub import MetaMap, compose, id_metamap, msub, wk_metamap
from .term import Arg, Con, MVar, Sub, check, lookup, tabulate
from .traverse import (MetaAlgebra, SizeAlgebra, SyntacticAlgebra, fold, map_sub, ren,
                       ren_as_sub, sub)


class LawFailure(Exception):
    def __init__(self, message, details=()):
        super().__init__(message)
        self.details = list(details)


def _eq(lhs, rhs, what, show):
    if lhs != rhs:
        raise LawFailure(f"{what} differ", [("left", show(lhs)), ("right", show(rhs))])


class _Case:
    """Random inputs for one law instance."""

    def __init__(self, sig, rng, budget):
        self.sig = sig
        self.rng = rng
        self.budget = budget
        self.notes = []

    def term(self, mctx=None, prefix="m", nonempty_ctx=False):
        mctx = random_mctx(self.sig, self.rng, prefix=prefix) if mctx is None else mctx
        for _ in range(50):
            ctx, sort, t = random_goal(self.sig, mctx, self.rng, self.budget)
            if ctx or not nonempty_ctx:
                self.note("term", mctx, ctx, t)
                return mctx, ctx, sort, t
        raise GenerationError("no case with a non-empty context")

    def sub(self, mctx, source, target=None):
        target = random_ctx(self.sig, self.rng) if target is None else target
        return random_sub(self.sig, mctx, source, target, self.rng, max(2, self.budget // 3))

    def metamap(self, source, target, glob, budget=None):
        b = budget or max(2, self.budget // 2)
        entries = tuple(gen_term(self.sig, target, tuple(d.params) + tuple(glob), d.sort, b, self.rng)
                        for d in source)
        return MetaMap(source, target, tuple(glob), entries)

    def note(self, label, mctx, ctx, t):
        self.notes.append((label, _show(self.sig, mctx, ctx, t)))


def _show(sig, mctx, ctx, t):
    try:
        return print_term(sig, mctx, ctx, t)
    except SoasError:
        return str(t)


# ---------------------------------------------------------------------------
# the laws; each takes a _Case and raises LawFailure on a counterexample


def law_counit(c):
    mctx, ctx, _, t = c.term()
    _eq(ren(t, id_ren(ctx)), t, "ren(t, id) and t", lambda u: _show(c.sig, mctx, ctx, u))


def law_comult(c):
    mctx, ctx, _, t = c.term()
    rho = random_renaming(c.sig, c.rng, ctx)
    varrho = random_renaming(c.sig, c.rng, rho.target)
    show = lambda u: _show(c.sig, mctx, varrho.target, u)
    _eq(ren(ren(t, rho), varrho), ren(t, compose_ren(rho, varrho)),
        "ren(ren(t, ρ), ϱ) and ren(t, ρ;ϱ)", show)


def law_lunit(c):
    mctx = random_mctx(c.sig, c.rng)
    ctx = random_ctx(c.sig, c.rng)
    if not ctx:
        ctx = (random_sort(c.sig, c.rng),)
    i = c.rng.randrange(len(ctx))
    sigma = c.sub(mctx, ctx)
    v = Var(i, ctx[i])
    show = lambda u: _show(c.sig, mctx, sigma.target, u)
    _eq(sub(v, sigma), lookup(sigma, v), "sub(x, σ) and σ(x)", show)


def law_runit(c):
    mctx, ctx, _, t = c.term()
    ident = tabulate(lambda v: v, ctx)
    _eq(sub(t, ident), t, "sub(t, id) and t", lambda u: _show(c.sig, mctx, ctx, u))


def law_assoc(c):
    mctx, ctx, _, t = c.term()
    sigma = c.sub(mctx, ctx)
    varsigma = c.sub(mctx, sigma.target)
    both = map_sub(lambda e: sub(e, varsigma), sigma, varsigma.target)
    show = lambda u: _show(c.sig, mctx, varsigma.target, u)
    _eq(sub(sub(t, sigma), varsigma), sub(t, both), "sub(sub(t, σ), ς) and sub(t, σ;ς)", show)


def law_ren_as_sub(c):
    mctx, ctx, _, t = c.term()
    rho = random_renaming(c.sig, c.rng, ctx)
    show = lambda u: _show(c.sig, mctx, rho.target, u)
    _eq(ren(t, rho), sub(t, ren_as_sub(rho)), "ren(t, ρ) and sub(t, var∘ρ)", show)


def law_sub_ren(c):
    mctx, ctx, _, t = c.term()
    rho = random_renaming(c.sig, c.rng, ctx)
    sigma = c.sub(mctx, rho.target)
    fused = tabulate(lambda v: lookup(sigma, rho(v)), ctx, sigma.target)
    show = lambda u: _show(c.sig, mctx, sigma.target, u)
    _eq(sub(ren(t, rho), sigma), sub(t, fused), "sub(ren(t, ρ), σ) and sub(t, σ∘ρ)", show)


def law_ren_sub(c):
    mctx, ctx, _, t = c.term()
    sigma = c.sub(mctx, ctx)
    rho = random_renaming(c.sig, c.rng, sigma.target)
    fused = map_sub(lambda e: ren(e, rho), sigma, rho.target)
    show = lambda u: _show(c.sig, mctx, rho.target, u)
    _eq(ren(sub(t, sigma), rho), sub(t, fused), "ren(sub(t, σ), ρ) and sub(t, ren∘σ)", show)


def law_preservation(c):
    mctx, ctx, sort, t = c.term()
    sigma = c.sub(mctx, ctx)
    got = check(c.sig, mctx, sigma.target, sub(t, sigma))
    if got != sort:
        raise LawFailure(f"substitution changed the sort from {sort} to {got}")


def law_fold_unique(c):
    mctx, ctx, _, t = c.term()
    _eq(fold(SyntacticAlgebra(), t), t, "fold(syntactic, t) and t", lambda u: _show(c.sig, mctx, ctx, u))


class _TreeAlgebra(MetaAlgebra):
    """Records the full shape of the fold, so equal results mean equal calls."""

    def on_con(self, op, inst, args):
        return ("con", op, inst, tuple(args))

    def on_var(self, v):
        return ("var", v.index, v.sort)

    def on_mvar(self, name, values):
        return ("mvar", name, tuple(values))


def law_fold_hom(c):
    mctx, ctx, _, t = c.term()
    for alg in (SizeAlgebra(), _TreeAlgebra()):
        if isinstance(t, Con):
            want = alg.on_con(t.op, t.inst, [(a.bound, fold(alg, a.body)) for a in t.args])
        elif isinstance(t, MVar):
            want = alg.on_mvar(t.name, [fold(alg, e) for e in t.env])
        else:
            want = alg.on_var(t)
        _eq(fold(alg, t), want, f"fold with {type(alg).__name__} and its handlers", repr)


def law_ms_identity(c):
    mctx, ctx, _, t = c.term()
    _eq(msub(t, id_metamap(mctx, ctx)), t, "msub(t, id) and t", lambda u: _show(c.sig, mctx, ctx, u))


def law_ms_mvar(c):
    mx = random_mctx(c.sig, c.rng, prefix="m")
    if not len(mx):
        raise GenerationError("empty metavariable context")
    my = random_mctx(c.sig, c.rng, prefix="n")
    ctx = random_ctx(c.sig, c.rng)
    d = c.rng.choice(mx.decls)
    b = max(2, c.budget // 3)
    env = tuple(gen_term(c.sig, mx, ctx, p, b, c.rng) for p in d.params)
    t = MVar(d.name, env)
    zeta = c.metamap(mx, my, ctx)
    c.note("term", mx, ctx, t)
    expect = sub(zeta[d.name], Sub(tuple(d.params) + tuple(ctx), tuple(ctx),
                                   tuple(msub(e, zeta) for e in env)
                                   + tuple(Var(j, s) for j, s in enumerate(ctx))))
    _eq(msub(t, zeta), expect, "msub(m[ε], ζ) and sub(ζ(m), [msub ε, id])",
        lambda u: _show(c.sig, my, ctx, u))


def law_ms_hom(c):
    mx, ctx, _, t = c.term()
    my = random_mctx(c.sig, c.rng, prefix="n")
    zeta = c.metamap(mx, my, ctx)
    if isinstance(t, Var):
        want = t
    elif isinstance(t, Con):
        want = Con(t.op, t.inst, tuple(Arg(a.bound, msub(a.body, wk_metamap(zeta, a.bound)))
                                       for a in t.args))
    else:
        return
    _eq(msub(t, zeta), want, "msub(t, ζ) and its structural unfolding",
        lambda u: _show(c.sig, my, ctx, u))


def law_ms_preservation(c):
    mx, ctx, sort, t = c.term()
    my = random_mctx(c.sig, c.rng, prefix="n")
    zeta = c.metamap(mx, my, ctx)
    got = check(c.sig, my, ctx, msub(t, zeta))
    if got != sort:
        raise LawFailure(f"metasubstitution changed the sort from {sort} to {got}")


def law_ms_kleisli(c):
    c.budget = min(c.budget, 10)
    mx, ctx, _, t = c.term()
    my = random_mctx(c.sig, c.rng, prefix="n")
    mz = random_mctx(c.sig, c.rng, prefix="k")
    zeta = c.metamap(mx, my, ctx)
    xi = c.metamap(my, mz, ctx)
    _eq(msub(msub(t, zeta), xi), msub(t, compose(zeta, xi)),
        "msub(msub(t, ζ), ξ) and msub(t, ζ;ξ)", lambda u: _show(c.sig, mz, ctx, u))


LAWS = {
    "counit": law_counit,
    "comult": law_comult,
    "lunit": law_lunit,
    "runit": law_runit,
    "assoc": law_assoc,
    "ren-as-sub": law_ren_as_sub,
    "sub-ren": law_sub_ren,
    "ren-sub": law_ren_sub,
    "preservation": law_preservation,
    "fold-unique": law_fold_unique,
    "fold-hom": law_fold_hom,
    "ms-identity": law_ms_identity,
    "ms-mvar": law_ms_mvar,
    "ms-hom": law_ms_hom,
    "ms-preservation": law_ms_preservation,
    "ms-kleisli": law_ms_kleisli,
}

CORE_LAWS = ("counit", "comult", "lunit", "runit", "assoc", "ren-as-sub", "sub-ren", "ren-sub")


@dataclass
class Counterexample:
    law: str
    seed: int
    message: str
    details: list = field(default_factory=list)

    def render(self):
        lines = [f"counterexample for {self.law}: {self.message}",
                 f"  replay with --replay {self.law}:{self.seed}"]
        lines += [f"  {k}: {v}" for k, v in self.details]
        return "\n".join(lines)


@dataclass
class LawResult:
    law: str
    passed: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)


def case_seed(seed: int, i: int) -> int:
    return seed * 1_000_003 + i


def run_case(sig, law: str, cseed: int, budget: int):
    """Run one case; returns ``None``, ``"skipped"`` or a :class:`Counterexample`."""
    fn = LAWS[law]
    rng = random.Random(f"{law}/{cseed}")
    for _ in range(20):
        c = _Case(sig, rng, budget)
        try:
            fn(c)
            return None
        except GenerationError:
            continue
        except LawFailure as f:
            return Counterexample(law, cseed, str(f), c.notes + f.details)
        except SoasError as err:
            return Counterexample(law, cseed, f"raised {err}", c.notes)
    return "skipped"


def run_laws(sig, cases=100, budget=20, seed=0, laws=None):
    out = []
    for law in laws or LAWS:
        res = LawResult(law)
        for i in range(cases):
            r = run_case(sig, law, case_seed(seed, i), budget)
            if r is None:
                res.passed += 1
            elif r == "skipped":
                res.skipped += 1
            else:
                res.failures.append(r)
        out.append(res)
    return out
