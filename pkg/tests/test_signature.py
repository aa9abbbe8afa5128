import pytest
from hypothesis import given, strategies as st

from soas import corpus
from soas.errors import SortError, SpecError
from soas.signature import (STAR, SVar, Sort, dump_signature, instantiate, operator_arity,
                            parse_dump, parse_sort, parse_spec, render_spec, show_sort,
                            unify_sorts)


@pytest.mark.parametrize("name, types, ops", [
    ("stlc-full.soas", 6, 17),
    ("pd.soas", 0, 6),
    ("stlc.soas", 2, 4),
    ("lambda.soas", 2, 2),
    ("arith.soas", 2, 4),
])
def test_counts(name, types, ops):
    sig = corpus.load(name)
    assert (len(sig.typecons), len(sig.ops)) == (types, ops)


@pytest.mark.parametrize("name", [n for n in corpus.names() if n.endswith(".soas")])
def test_dump_round_trip(name):
    sig = corpus.load(name)
    text = dump_signature(sig)
    assert text.endswith("\n")
    again = parse_dump(text)
    assert dump_signature(again) == text
    assert dump_signature(parse_spec(render_spec(sig))) == text


def test_dump_is_stable(stlc):
    assert dump_signature(stlc) == (
        "ty N 0\n"
        "ty _↣_ 2 | _↣_ r30\n"
        "op app [α,β] : (;α ↣ β) (;α) -> β | _$_ l20\n"
        "op lam [α,β] : (α;β) -> α ↣ β | λ_ r10\n"
        "op ze [] : -> N\n"
        "op su [] : (;N) -> N\n")


def test_operator_shapes(stlc, pd):
    lam = stlc.op("lam")
    assert lam.sortvars == ("α", "β")
    assert len(lam.args) == 1 and lam.args[0].bound == (SVar("α"),)
    assert lam.notation.kind == "prefix" and lam.notation.precedence == 10
    pdiff = pd.op("pdiff")
    assert [len(a.bound) for a in pdiff.args] == [1, 0]
    assert pdiff.result == STAR


def test_arity_instantiation(stlc):
    N = Sort("N")
    arity, result = operator_arity(stlc, "app", {"α": N, "β": N})
    assert result == N
    assert arity == (((), Sort("_↣_", (N, N))), ((), N))


def test_unknown_operator(stlc):
    with pytest.raises(SortError) as e:
        stlc.op("nope")
    assert e.value.kind == "unknown-operator"


def test_sort_printing(stlc):
    N = Sort("N")
    arr = lambda a, b: Sort("_↣_", (a, b))
    assert show_sort(arr(N, arr(N, N)), stlc) == "N ↣ N ↣ N"
    assert show_sort(arr(arr(N, N), N), stlc) == "(N ↣ N) ↣ N"
    assert parse_sort("N => N => N", stlc) == arr(N, arr(N, N))


def test_unify_and_instantiate(stlc):
    N = Sort("N")
    pat = stlc.op("app").args[0].body
    theta = unify_sorts(pat, Sort("_↣_", (N, Sort("_↣_", (N, N)))))
    assert theta == {"α": N, "β": Sort("_↣_", (N, N))}
    assert instantiate(pat, theta) == Sort("_↣_", (N, Sort("_↣_", (N, N))))
    with pytest.raises(SortError):
        unify_sorts(pat, N)


def test_comments_and_aliases():
    sig = parse_spec("""
-- a comment
type
  B : 0-ary   -- trailing comment
term
  neg : B -> B | ~_
  t   : B    | T
""")
    assert [o.name for o in sig.ops] == ["neg", "t"]


@pytest.mark.parametrize("text, kind, pos", [
    ("term\n  foo : N -> N\n", "undeclared-sort-variable", (2, 9)),
    ("type\n  N : 0-ary\nterm\n  foo N -> N\n", "spec-error", (4, 1)),
    ("type\n N : x-ary\nterm\n", "spec-error", (2, 2)),
    ("type\n  N : 0-ary\n  N : 0-ary\nterm\n", "duplicate-name", (3, 3)),
    ("  foo : * -> *\n", "spec-error", (1, 3)),
])
def test_spec_errors(text, kind, pos):
    with pytest.raises(SpecError) as e:
        parse_spec(text, source="bad.soas")
    assert e.value.kind == kind
    assert e.value.pos == pos
    assert str(e.value).startswith(f"bad.soas:{pos[0]}:{pos[1]}:")


_full = corpus.load("stlc-full.soas")
_ground = [Sort(t.name) for t in _full.typecons if t.arity == 0]
_ctors = [t for t in _full.typecons if t.arity > 0]
sorts = st.recursive(
    st.sampled_from(_ground),
    lambda inner: st.builds(
        lambda t, args: Sort(t.name, tuple(args[: t.arity])),
        st.sampled_from(_ctors), st.lists(inner, min_size=2, max_size=2)),
    max_leaves=8)


@given(sorts)
def test_sort_print_parse(s):
    assert parse_sort(show_sort(s, _full), _full) == s
