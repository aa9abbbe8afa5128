"""The acceptance criteria, one test each.

Run with pytest (a summary line per criterion is printed at the end) or
directly: ``python3 tests/test_acceptance.py``.
"""

import io
import os
import random
import sys
import time

sys.path.insert(0, os.path.dirname(__file__))

from conftest import ACCEPTANCE  # noqa: E402
from props import k_combinator, soundness, substitution_lemma  # noqa: E402
from soas import corpus  # noqa: E402
from soas.cli import main  # noqa: E402
from soas.concrete import parse_term  # noqa: E402
from soas.ctx import Var  # noqa: E402
from soas.eqlog import check_proofs, elaborate_theory  # noqa: E402
from soas.errors import CheckError, ProofError  # noqa: E402
from soas.laws import CORE_LAWS, run_laws  # noqa: E402
from soas.metasub import metamap, msub  # noqa: E402
from soas.signature import Sort, dump_signature, parse_dump, parse_spec, render_spec  # noqa: E402
from soas.term import Arg, Con, MCtx, MVar, MvarDecl, check  # noqa: E402

SEED = 42
N = Sort("N")


def _laws(names, law_names, cases, budget):
    total, failures = 0, []
    for name in names:
        for r in run_laws(corpus.load(name), cases, budget, SEED, law_names):
            total += r.passed
            failures += [f"{name} {cx.law}:{cx.seed}" for cx in r.failures]
            if r.skipped:
                failures.append(f"{name} {r.law}: {r.skipped} skipped")
    return total, failures


def criterion_1():
    start = time.perf_counter()
    total, failures = _laws(["stlc.soas", "pd.soas"], list(CORE_LAWS), 500, 20)
    elapsed = time.perf_counter() - start
    ok = not failures and total == 2 * 8 * 500 and elapsed < 60
    detail = f"{total}/8000 law instances hold in {elapsed:.1f}s"
    return ok, detail + (f"; failures {failures[:3]}" if failures else "")


def criterion_2():
    names = ["stlc.soas", "pd.soas", "stlc-full.soas", "arith.soas"]
    total, failures = _laws(names, ["fold-unique"], 500, 20)
    return not failures and total == 500 * len(names), f"{total} folds are the identity"


def criterion_3():
    sig = corpus.load("arith.soas")
    X = MCtx((MvarDecl("a", (N, N), N), MvarDecl("b", (N,), N)))
    Y = MCtx((MvarDecl("c", (N,), N),))
    t = parse_term(sig, X, [("x", N)], "lam(y. a[x + 1, b[y]])")
    zeta = metamap(X, Y, (N,), {
        "a": parse_term(sig, Y, [N, N, N], "c[x0] × x1"),
        "b": parse_term(sig, Y, [N, N], "c[x0 + x1]"),
    })
    want = parse_term(sig, Y, [N], "lam(y. c[x1 + 1] × c[y + x1])")
    example = msub(t, zeta) == want
    total, failures = _laws(["stlc.soas", "pd.soas", "arith.soas"], ["ms-mvar"], 200, 20)
    ok = example and not failures and total == 600
    return ok, f"worked example {'reproduced' if example else 'DIFFERS'}; mvar law {total}/600"


def criterion_4():
    total, failures = _laws(["stlc.soas", "pd.soas", "arith.soas"], ["ms-kleisli"], 200, 10)
    return not failures and total == 600, f"Kleisli composition {total}/600"


def criterion_5():
    out = io.StringIO()
    code = main(["prove", "pd.soas", "pd-proofs.eqp"], out=out)
    good = code == 0 and out.getvalue() == "2 theorems checked: d0zero, chain1\n"
    text = corpus.read("pd-proofs.eqp")
    line = "  pdiff(w. a[w], b[x]) ⊗ pdiff(w. b[w], x) ⊕ pdiff(w. a[b[x]], 0) ⊗ 0\n"
    mutated = text.replace(line, line.replace("⊗ 0\n", "⊗ 1\n"))
    try:
        check_proofs(elaborate_theory(corpus.load("pd.soas")), mutated)
        caught = False
    except ProofError as err:
        lineno = text[:text.index(line)].count("\n") + 1
        caught = err.kind == "side-mismatch" and err.step == 2 and err.pos[0] == lineno
    return good and caught, (f"prove: {out.getvalue().strip()!r}; "
                             f"mutated chain1 step 2 {'rejected' if caught else 'NOT rejected'}")


def criterion_6():
    full, pd = corpus.load("stlc-full.soas"), corpus.load("pd.soas")
    counts = (len(full.typecons), len(full.ops), len(pd.ops)) == (6, 17, 6)
    stable = True
    for name in corpus.names():
        if name.endswith(".soas"):
            sig = corpus.load(name)
            d = dump_signature(sig)
            stable &= dump_signature(parse_dump(d)) == d
            stable &= dump_signature(parse_spec(render_spec(sig))) == d
    return counts and stable, (f"stlc-full {len(full.typecons)} types/{len(full.ops)} ops, "
                               f"pd {len(pd.ops)} ops; dumps {'stable' if stable else 'UNSTABLE'}")


def criterion_7():
    sig = corpus.load("stlc.soas")
    rng = random.Random(SEED)
    k = sum(k_combinator(sig, rng) for _ in range(50))
    sound = sum(soundness(sig, rng, 15, 1000) for _ in range(200))
    lemma = sum(substitution_lemma(sig, rng) for _ in range(200))
    return (k, sound, lemma) == (50, 200, 200), (
        f"K {k}/50, reduction reaches a numeral preserving eval {sound}/200, "
        f"substitution lemma {lemma}/200")


def criterion_8():
    sig = corpus.load("stlc.soas")
    M = MCtx((MvarDecl("m", (N,), N),))
    su = lambda t: Con("su", {}, (Arg((), t),))
    app = lambda f, a: Con("app", {"α": N, "β": N}, (Arg((), f), Arg((), a)))
    cases = [
        (su(su(Var(2, N))), "unbound-variable", ("arg0", "arg0")),
        (app(Var(0, Sort("_↣_", (N, N))), Var(0, Sort("_↣_", (N, N)))), "sort-mismatch", ("arg1",)),
        (su(MVar("m", ())), "env-length-mismatch", ("arg0",)),
        (su(Con("nope", {}, ())), "unknown-operator", ("arg0",)),
    ]
    got = []
    for t, kind, path in cases:
        try:
            check(sig, M, (Sort("_↣_", (N, N)),), t)
            got.append(False)
        except CheckError as err:
            got.append(err.kind == kind and err.path == path)
    stderr, sys.stderr = sys.stderr, io.StringIO()
    try:
        codes = [
            main(["term", "stlc.soas", "--", "w"], out=io.StringIO()),
            main(["term", "stlc.soas", "--", "su(λ x0)"], out=io.StringIO()),
            main(["term", "stlc.soas", "--mctx", "m : (N) N", "--", "m[]"], out=io.StringIO()),
            main(["term", "stlc.soas", "--", "nope(ze)"], out=io.StringIO()),
            main(["term", "stlc.soas", "--", "su(ze"], out=io.StringIO()),
            main(["nope"], out=io.StringIO()),
            main(["check", "stlc.soas"], out=io.StringIO()),
        ]
    finally:
        sys.stderr = stderr
    ok = all(got) and codes == [1, 1, 1, 1, 2, 2, 0]
    return ok, f"error categories and paths {sum(got)}/4; exit codes {codes}"


CRITERIA = {
    1: ("law suite", criterion_1),
    2: ("fold uniqueness", criterion_2),
    3: ("metasubstitution example and mvar law", criterion_3),
    4: ("Kleisli composition", criterion_4),
    5: ("equational corpus", criterion_5),
    6: ("spec counts and dump", criterion_6),
    7: ("STLC semantics", criterion_7),
    8: ("negative paths", criterion_8),
}


def _run(n):
    title, fn = CRITERIA[n]
    ok, detail = fn()
    line = f"[{'PASS' if ok else 'FAIL'}] {n}. {title}: {detail}"
    ACCEPTANCE[n] = line
    print(line)
    return ok, line


def test_criterion_1():
    ok, line = _run(1)
    assert ok, line


def test_criterion_2():
    ok, line = _run(2)
    assert ok, line


def test_criterion_3():
    ok, line = _run(3)
    assert ok, line


def test_criterion_4():
    ok, line = _run(4)
    assert ok, line


def test_criterion_5():
    ok, line = _run(5)
    assert ok, line


def test_criterion_6():
    ok, line = _run(6)
    assert ok, line


def test_criterion_7():
    ok, line = _run(7)
    assert ok, line


def test_criterion_8():
    ok, line = _run(8)
    assert ok, line


if __name__ == "__main__":
    results = [_run(n)[0] for n in CRITERIA]
    sys.exit(0 if all(results) else 1)
