import random

import pytest
from hypothesis import given, strategies as st

from oracle import POOL, oracle_sub, subst, to_named
from soas import corpus
from soas.concrete import parse_term, print_term
from soas.ctx import Var, compose_ren, id_ren
from soas.errors import ContextError
from soas.generate import random_ctx, random_goal, random_mctx, random_renaming, random_sub
from soas.signature import Sort
from soas.term import Arg, Con, MCtx, Sub, check, id_sub, lookup, tabulate, term_size
from soas.traverse import (SizeAlgebra, SyntacticAlgebra, contr, fold, lift_sub, map_sub, ren,
                           ren_as_sub, sub, sub1, sub2, wkl, wkr)

N = Sort("N")
NAMES = ["stlc.soas", "pd.soas", "stlc-full.soas", "arith.soas"]


def case(name, seed, budget=15):
    sig = corpus.load(name)
    rng = random.Random(seed)
    mctx = random_mctx(sig, rng)
    ctx, sort, t = random_goal(sig, mctx, rng, budget)
    return sig, rng, mctx, ctx, sort, t


def test_weakening_and_contraction(arith):
    g = [("x", N), ("y", N)]
    t = parse_term(arith, MCtx(), g, "x + y")
    assert wkl(t, (N, N), (N,)) == t
    shifted = wkr(t, (N, N), (N,))
    assert print_term(arith, MCtx(), [("z", N)] + g, shifted) == "x + y"
    assert shifted == parse_term(arith, MCtx(), [("z", N)] + g, "x + y")
    both = parse_term(arith, MCtx(), g + [("u", N), ("v", N)], "x + v")
    assert contr(both, (N, N)) == parse_term(arith, MCtx(), g, "x + y")


def test_sub1_under_binder(arith):
    # (λ y. x + y)[1 + 1 / x]
    g = [("x", N)]
    body = parse_term(arith, MCtx(), g, "lam(y. x + y)")
    s = parse_term(arith, MCtx(), [], "1 + 1")
    got = sub1(s, body, N)
    assert got == parse_term(arith, MCtx(), [], "lam(y. (1 + 1) + y)")


def test_sub2_order(arith):
    g = [("a", N), ("b", N)]
    t = parse_term(arith, MCtx(), g, "a × b")
    one = parse_term(arith, MCtx(), [], "1")
    two = parse_term(arith, MCtx(), [], "1 + 1")
    assert sub2(one, two, t, (N, N)) == parse_term(arith, MCtx(), [], "1 × (1 + 1)")


def test_lift_sub_shape():
    sigma = Sub((N,), (N, N), (Var(1, N),))
    lifted = lift_sub((N,), sigma)
    assert lifted.entries == (Var(0, N), Var(2, N))
    assert lifted.source == (N, N) and lifted.target == (N, N, N)


def test_context_mismatch_is_reported():
    with pytest.raises(ContextError):
        sub(Var(0, N), Sub((), (), ()))
    with pytest.raises(ContextError):
        ren(Var(0, N), id_ren((Sort("B"),)))


def test_oracle_exercises_capture(arith):
    # t = lam(b. x + b) with x the only variable; x := a where the target
    # name of the variable is the binder's name in the named term
    t = parse_term(arith, MCtx(), [("x", N)], "lam(w. x + w)")
    named = to_named(t, ["s0"])
    binder = named[3][0][0][0]
    out = subst(named, {"s0": ("var", binder, N)})
    assert out[3][0][0][0] != binder
    sigma = Sub((N,), tuple([N] * (POOL.index(binder) + 1)), (Var(POOL.index(binder), N),))
    assert oracle_sub(t, sigma) == sub(t, sigma)


@given(st.sampled_from(NAMES), st.integers(0, 10**6))
def test_sub_matches_named_oracle(name, seed):
    sig, rng, mctx, ctx, _, t = case(name, seed)
    sigma = random_sub(sig, mctx, ctx, random_ctx(sig, rng, 6), rng, 5)
    assert sub(t, sigma) == oracle_sub(t, sigma)


@given(st.sampled_from(NAMES), st.integers(0, 10**6))
def test_renaming_laws(name, seed):
    sig, rng, mctx, ctx, sort, t = case(name, seed)
    assert ren(t, id_ren(ctx)) == t
    r1 = random_renaming(sig, rng, ctx)
    r2 = random_renaming(sig, rng, r1.target)
    assert ren(ren(t, r1), r2) == ren(t, compose_ren(r1, r2))
    assert ren(t, r1) == sub(t, ren_as_sub(r1))
    assert check(sig, mctx, r1.target, ren(t, r1)) == sort


@given(st.sampled_from(NAMES), st.integers(0, 10**6))
def test_substitution_laws(name, seed):
    sig, rng, mctx, ctx, sort, t = case(name, seed)
    assert sub(t, id_sub(ctx)) == t
    s1 = random_sub(sig, mctx, ctx, random_ctx(sig, rng), rng, 5)
    s2 = random_sub(sig, mctx, s1.target, random_ctx(sig, rng), rng, 5)
    assert sub(sub(t, s1), s2) == sub(t, map_sub(lambda e: sub(e, s2), s1, s2.target))
    rho = random_renaming(sig, rng, s1.target)
    assert ren(sub(t, s1), rho) == sub(t, map_sub(lambda e: ren(e, rho), s1, rho.target))
    r0 = random_renaming(sig, rng, ctx)
    s3 = random_sub(sig, mctx, r0.target, random_ctx(sig, rng), rng, 5)
    assert sub(ren(t, r0), s3) == sub(t, tabulate(lambda v: lookup(s3, r0(v)), ctx, s3.target))
    assert check(sig, mctx, s1.target, sub(t, s1)) == sort


@given(st.sampled_from(NAMES), st.integers(0, 10**6))
def test_fold(name, seed):
    *_, t = case(name, seed)
    assert fold(SyntacticAlgebra(), t) == t
    assert fold(SizeAlgebra(), t) == term_size(t)


def test_fold_sees_binders(stlc):
    class Depth(SyntacticAlgebra):
        def on_con(self, op, inst, args):
            return max([0] + [len(b) + v for b, v in args])

        def on_var(self, v):
            return 0

    k = parse_term(stlc, MCtx(), [], "(λ λ x1 : N ↣ N ↣ N)")
    assert fold(Depth(), k) == 2


def test_degenerate_inputs(stlc, pd):
    ze = parse_term(stlc, MCtx(), [], "ze")
    empty = Sub((), (), ())
    assert sub(ze, empty) == ze
    assert ren(ze, id_ren(())) == ze
    assert sub(ze, Sub((), (N, N), ())) == ze
    assert lift_sub((), empty) is empty
    assert map_sub(lambda e: e, empty) == empty
    one = parse_term(pd, MCtx(), [], "1")
    assert fold(SyntacticAlgebra(), one) == one and term_size(one) == 1
