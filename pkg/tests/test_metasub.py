import random

import pytest
from hypothesis import given, strategies as st

from soas import corpus
from soas.concrete import parse_term
from soas.ctx import Var
from soas.errors import SoasError
from soas.laws import run_case
from soas.metasub import (MetaMap, check_metamap, compose, id_metamap, metamap, msub,
                          wk_metamap)
from soas.signature import Sort
from soas.term import MCtx, MVar, MvarDecl, check

N = Sort("N")
ARITH = corpus.load("arith.soas")
X = MCtx((MvarDecl("a", (N, N), N), MvarDecl("b", (N,), N)))
Y = MCtx((MvarDecl("c", (N,), N),))


def term(mctx, ctx, text):
    return parse_term(ARITH, mctx, ctx, text)


def worked_zeta():
    return metamap(X, Y, (N,), {
        "a": term(Y, [N, N, N], "c[x0] × x1"),
        "b": term(Y, [N, N], "c[x0 + x1]"),
    })


def test_worked_example():
    t = term(X, [("x", N)], "lam(y. a[x + 1, b[y]])")
    zeta = worked_zeta()
    check_metamap(ARITH, zeta)
    got = msub(t, zeta)
    assert got == term(Y, [("x", N)], "lam(y. c[x + 1] × c[y + x])")
    assert check(ARITH, Y, (N,), got) == Sort("_↣_", (N, N))


def test_weakening_keeps_parameters():
    zeta = worked_zeta()
    wk = wk_metamap(zeta, (N,))
    assert wk["b"] == term(Y, [N, N, N], "c[x0 + x2]")
    assert wk.glob == (N, N)
    assert wk_metamap(zeta, ()) is zeta


def test_identity_entries():
    ident = id_metamap(X, (N,))
    assert ident["a"] == MVar("a", (Var(0, N), Var(1, N)))
    assert ident["b"] == MVar("b", (Var(0, N),))


def test_trivial_cases():
    zeta = worked_zeta()
    assert msub(Var(0, N), zeta) == Var(0, N)
    m = MCtx((MvarDecl("k", (), N),))
    closed = term(MCtx(), [], "1 + 1")
    assert msub(MVar("k", ()), metamap(m, MCtx(), (N,), {"k": closed})) == closed


def test_missing_and_extra_entries():
    with pytest.raises(SoasError) as e:
        metamap(X, Y, (N,), {"a": term(Y, [N, N, N], "x0")})
    assert e.value.kind == "missing-metavariable"
    with pytest.raises(SoasError) as e:
        metamap(Y, Y, (N,), {"c": term(Y, [N, N], "x0"), "z": term(Y, [N], "x0")})
    assert e.value.kind == "unknown-metavariable"


def test_ill_sorted_entry_is_caught():
    bad = MetaMap(Y, Y, (N,), (parse_term(ARITH, Y, [N, N], "lam(z. x0)", Sort("_↣_", (N, N))),))
    with pytest.raises(SoasError) as e:
        check_metamap(ARITH, bad)
    assert e.value.kind == "sort-mismatch"


def test_composition_example():
    zeta = worked_zeta()
    Z = MCtx((MvarDecl("d", (), N),))
    xi = metamap(Y, Z, (N,), {"c": term(Z, [N, N], "x0 × d[]")})
    t = term(X, [("x", N)], "lam(y. a[x + 1, b[y]])")
    both = compose(zeta, xi)
    assert msub(msub(t, zeta), xi) == msub(t, both)
    assert msub(t, both) == term(Z, [("x", N)], "lam(y. ((x + 1) × d[]) × ((y + x) × d[]))")
    with pytest.raises(SoasError):
        compose(xi, zeta)


@pytest.mark.parametrize("law", ["ms-identity", "ms-mvar", "ms-hom", "ms-preservation",
                                 "ms-kleisli"])
@given(st.sampled_from(["stlc.soas", "pd.soas", "arith.soas"]), st.integers(0, 10**6))
def test_metasub_laws(law, name, seed):
    assert run_case(corpus.load(name), law, seed, 12) in (None, "skipped")
