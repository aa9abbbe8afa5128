import random

import pytest
from hypothesis import given, strategies as st

from oracle import run
from props import k_combinator, seeded, soundness, substitution_lemma
from soas import corpus
from soas.concrete import parse_term
from soas.ctx import Var
from soas.errors import SoasError
from soas.generate import gen_term
from soas.signature import Sort
from soas.stlc import (Fun, Nat, Stuck, evaluate, is_val, multistep, numeral, step, trace,
                       value_eq)
from soas.term import Con, MCtx, MVar

N = Sort("N")
STLC = corpus.load("stlc.soas")


def parse(sig, text, sort=None):
    return parse_term(sig, MCtx(), [], text, sort)


def test_k_combinator_trace(stlc):
    t = parse(stlc, "((λ λ x1 : N ↣ N ↣ N) $ ze) $ su(ze)")
    steps = trace(t, 10)
    assert len(steps) == 3 and numeral(steps[-1]) == 0
    assert steps[1] == parse(stlc, "(λ ze : N ↣ N) $ su(ze)")
    assert evaluate(t) == Nat(0)


def test_values(stlc):
    assert is_val(parse(stlc, "su(su(ze))"))
    assert is_val(parse(stlc, "(λ x0 : N ↣ N)"))
    assert not is_val(parse(stlc, "su((λ x0 : N ↣ N) $ ze)"))
    assert step(parse(stlc, "ze")) is None


def test_call_by_value_order(stlc):
    # the argument is reduced before the β-step
    t = parse(stlc, "(λ su(x0) : N ↣ N) $ ((λ x0 : N ↣ N) $ ze)")
    assert step(t) == parse(stlc, "(λ su(x0) : N ↣ N) $ ze")
    # and the function before the argument
    u = parse(stlc, "((λ x0 : (N ↣ N) ↣ N ↣ N) $ (λ x0 : N ↣ N)) $ ((λ x0 : N ↣ N) $ ze)")
    assert step(u) == parse(stlc, "(λ x0 : N ↣ N) $ ((λ x0 : N ↣ N) $ ze)")


def test_fuel(stlc):
    t = parse(stlc, "(λ su(x0) : N ↣ N) $ ((λ x0 : N ↣ N) $ ze)")
    assert multistep(t, 1) == (step(t), 1, False)
    end, n, done = multistep(t, 100)
    assert done and n == 2 and numeral(end) == 1


def test_stuck_and_open_terms(stlc):
    with pytest.raises(Stuck) as e:
        step(Con("pair", {}, ()))
    assert e.value.kind == "stuck"
    with pytest.raises(SoasError) as e:
        step(Var(0, N))
    assert e.value.kind == "open-term"
    with pytest.raises(SoasError):
        evaluate(MVar("m", ()))


def test_open_evaluation(stlc):
    t = parse_term(stlc, MCtx(), [("f", Sort("_↣_", (N, N))), ("n", N)], "f $ su(n)")
    double = Fun(lambda v: Nat(2 * v.n))
    assert evaluate(t, (double, Nat(3))) == Nat(8)


def test_value_eq_at_arrows(stlc):
    rng = random.Random(0)
    ident = evaluate(parse(stlc, "(λ x0 : N ↣ N)"))
    succ = evaluate(parse(stlc, "(λ su(x0) : N ↣ N)"))
    assert value_eq(stlc, ident, ident, Sort("_↣_", (N, N)), rng)
    assert not value_eq(stlc, ident, succ, Sort("_↣_", (N, N)), rng)


@given(st.integers(0, 10**6))
def test_matches_direct_interpreter(seed):
    t = gen_term(STLC, MCtx(), (), N, 15, random.Random(seed))
    assert evaluate(t).n == run(t)


@given(st.integers(0, 10**6))
def test_k_behaviour(seed):
    assert seeded(k_combinator, STLC, seed)


@given(st.integers(0, 10**6))
def test_soundness(seed):
    assert seeded(soundness, STLC, seed)


@given(st.integers(0, 10**6))
def test_substitution_lemma(seed):
    assert seeded(substitution_lemma, STLC, seed)
