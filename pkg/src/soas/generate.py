"""Random well-sorted terms, contexts, renamings and substitutions.

Everything here is driven by an explicit :class:`random.Random` so a case is
reproducible from its seed.
"""

from __future__ import annotations

import itertools
import random

from .ctx import Ctx, Renaming, Var, concat
from .errors import GenerationError, SortError
from .signature import STAR, Signature, Sort, operator_arity, unify_sorts
from .term import Arg, Con, MCtx, MVar, MvarDecl, Sub

RETRIES = 100
_NODE_LIMIT = 400
LEAF_CHANCE = 0.15


def _rng(seed_or_rng):
    if isinstance(seed_or_rng, random.Random):
        return seed_or_rng
    return random.Random(seed_or_rng)


def sorts_up_to(sig: Signature, depth: int = 2):
    """All ground sorts of nesting depth at most ``depth``, in a fixed order."""
    if not sig.is_sorted:
        return [STAR]
    levels = [Sort(t.name) for t in sig.typecons if t.arity == 0]
    out = list(levels)
    for _ in range(depth - 1):
        nxt = []
        for t in sig.typecons:
            if t.arity == 0:
                continue
            for args in itertools.product(out, repeat=t.arity):
                s = Sort(t.name, tuple(args))
                if s not in out and s not in nxt:
                    nxt.append(s)
        out.extend(nxt)
    return out


def random_sort(sig, rng, depth=2):
    return rng.choice(sorts_up_to(sig, depth))


def random_ctx(sig, rng, max_len=3, depth=2):
    return tuple(random_sort(sig, rng, depth) for _ in range(rng.randint(0, max_len)))


def random_mctx(sig, rng, max_len=3, max_params=2, depth=2, prefix="m"):
    decls = []
    for i in range(rng.randint(0, max_len)):
        params = tuple(random_sort(sig, rng, depth) for _ in range(rng.randint(0, max_params)))
        decls.append(MvarDecl(f"{prefix}{i}", params, random_sort(sig, rng, depth)))
    return MCtx(tuple(decls))


def random_renaming(sig, rng, source: Ctx, extra=2, depth=2) -> Renaming:
    """A sort-preserving renaming out of ``source`` into a random superset context."""
    target = list(source) + [random_sort(sig, rng, depth) for _ in range(rng.randint(0, extra))]
    rng.shuffle(target)
    target = tuple(target)
    m = tuple(rng.choice([j for j, s in enumerate(target) if s == src]) for src in source)
    return Renaming(tuple(source), target, m)


class _Gen:
    def __init__(self, sig, mctx, rng):
        self.sig = sig
        self.mctx = mctx
        self.rng = rng
        self.pool = sorts_up_to(sig, 2)
        self.nodes = 0

    def productions(self, ctx, goal, budget):
        """Applicable productions, split into leaves and inner nodes."""
        leaves = [("var", i) for i, s in enumerate(ctx) if s == goal]
        inner = []
        for d in self.mctx:
            if d.sort == goal and len(d.params) < budget:
                (inner if d.params else leaves).append(("mvar", d))
        for o in self.sig.ops:
            if len(o.args) >= max(budget, 1):
                continue
            try:
                theta = unify_sorts(o.result, goal)
            except SortError:
                continue
            (inner if o.args else leaves).append(("con", (o, theta)))
        return leaves, inner

    def term(self, ctx, goal, budget):
        self.nodes += 1
        if self.nodes > _NODE_LIMIT:
            raise GenerationError("node limit reached")
        leaves, inner = self.productions(ctx, goal, budget)
        # Usually inner nodes go first so terms use their budget and leaves are the
        # fallback; sometimes all productions compete uniformly, for size variety.
        if self.rng.random() < LEAF_CHANCE:
            order = leaves + inner
            self.rng.shuffle(order)
        else:
            self.rng.shuffle(leaves)
            self.rng.shuffle(inner)
            order = inner + leaves
        for kind, p in order:
            try:
                if kind == "var":
                    return Var(p, goal)
                if kind == "mvar":
                    share = self.split(budget - 1, len(p.params))
                    return MVar(p.name, tuple(self.term(ctx, s, b) for s, b in zip(p.params, share)))
                o, theta = p
                theta = dict(theta)
                for v in o.sortvars:
                    if v not in theta:
                        theta[v] = self.rng.choice(self.pool)
                arity, _ = operator_arity(self.sig, o.name, theta)
                share = self.split(budget - 1, len(arity))
                args = tuple(Arg(bound, self.term(concat(bound, ctx), body, b))
                             for (bound, body), b in zip(arity, share))
                return Con(o.name, theta, args)
            except GenerationError:
                if self.nodes > _NODE_LIMIT:
                    raise
                continue
        raise GenerationError(f"no term of sort {goal} within budget {budget}")

    def split(self, budget, n):
        """Divide ``budget`` among ``n`` children, each getting at least 1."""
        if n == 0:
            return []
        cuts = sorted(self.rng.randint(0, budget - n) for _ in range(n - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [budget - n])]
        return [1 + p for p in parts]


def gen_term(sig: Signature, mctx: MCtx, ctx: Ctx, sort: Sort, budget: int, seed=0):
    """A random term of ``sort`` in ``ctx`` with at most about ``budget`` nodes."""
    rng = _rng(seed)
    last = None
    for _ in range(RETRIES):
        g = _Gen(sig, mctx, rng)
        try:
            return g.term(tuple(ctx), sort, budget)
        except GenerationError as err:
            last = err
    raise GenerationError(f"cannot generate a term of sort {sort}: {last.message}")


def inhabited(sig, mctx, ctx, sort, budget, rng) -> bool:
    try:
        gen_term(sig, mctx, ctx, sort, budget, rng)
        return True
    except GenerationError:
        return False


def random_sub(sig, mctx, source: Ctx, target: Ctx, rng, budget=6) -> Sub:
    entries = tuple(gen_term(sig, mctx, target, s, budget, rng) for s in source)
    return Sub(tuple(source), tuple(target), entries)


def random_goal(sig, mctx, rng, budget, max_ctx=3):
    """Pick (ctx, sort, term) with a generated term; retries until something inhabits."""
    for _ in range(RETRIES):
        ctx = random_ctx(sig, rng, max_ctx)
        sort = random_sort(sig, rng)
        try:
            return ctx, sort, gen_term(sig, mctx, ctx, sort, budget, rng)
        except GenerationError:
            continue
    raise GenerationError("no inhabited goal found")
