import pytest

from soas import corpus, laws
from soas.ctx import Var
from soas.term import Arg, Con, MVar, Sub
from soas.traverse import sub as real_sub


@pytest.mark.parametrize("name", ["stlc.soas", "pd.soas", "arith.soas", "lambda.soas"])
def test_all_laws_hold(name):
    results = laws.run_laws(corpus.load(name), cases=15, budget=12, seed=7)
    assert [r.law for r in results] == list(laws.LAWS)
    for r in results:
        assert not r.failures, r.failures[0].render()
        assert r.passed + r.skipped == 15


def test_runs_are_deterministic(stlc):
    a = laws.run_laws(stlc, cases=5, budget=10, seed=3, laws=["assoc"])
    b = laws.run_laws(stlc, cases=5, budget=10, seed=3, laws=["assoc"])
    assert a == b


def _forgetful_sub(t, sigma):
    # drops the shift under binders: a classic de Bruijn bug
    if isinstance(t, Var):
        return sigma.entries[t.index]
    if isinstance(t, MVar):
        return MVar(t.name, tuple(_forgetful_sub(e, sigma) for e in t.env))
    return Con(t.op, t.inst, tuple(Arg(a.bound, real_sub(a.body, _lift_naive(a.bound, sigma)))
                                   for a in t.args))


def _lift_naive(theta, sigma):
    head = tuple(Var(i, s) for i, s in enumerate(theta))
    return Sub(tuple(theta) + sigma.source, tuple(theta) + sigma.target, head + sigma.entries)


def test_broken_substitution_is_caught_and_replays(monkeypatch, stlc):
    monkeypatch.setattr(laws, "sub", _forgetful_sub)
    res, = laws.run_laws(stlc, cases=60, budget=12, seed=1, laws=["sub-ren"])
    assert res.failures
    cx = res.failures[0]
    text = cx.render()
    assert f"--replay sub-ren:{cx.seed}" in text and "term:" in text
    again = laws.run_case(stlc, "sub-ren", cx.seed, 12)
    assert again.render() == text
    monkeypatch.undo()
    assert laws.run_case(stlc, "sub-ren", cx.seed, 12) is None


def test_case_seeds_are_distinct():
    seeds = {laws.case_seed(s, i) for s in range(3) for i in range(100)}
    assert len(seeds) == 300
