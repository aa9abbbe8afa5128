"""Instantiate parametrised metavariables in a term with binders.

    python3 demos/metasubstitution.py
"""

from soas import corpus, msub, metamap, parse_term, print_term
from soas.metasub import compose
from soas.signature import Sort
from soas.term import MCtx, MvarDecl

sig = corpus.load("arith.soas")
N = Sort("N")

X = MCtx((MvarDecl("a", (N, N), N), MvarDecl("b", (N,), N)))
Y = MCtx((MvarDecl("c", (N,), N),))
gamma = [("x", N)]

t = parse_term(sig, X, gamma, "lam(y. a[x + 1, b[y]])")
print("term:        ", print_term(sig, X, gamma, t))

# a and b are replaced by terms over their parameters (first, x0) and x
zeta = metamap(X, Y, (N,), {
    "a": parse_term(sig, Y, [("p", N), ("q", N), ("x", N)], "c[p] × q"),
    "b": parse_term(sig, Y, [("p", N), ("x", N)], "c[p + x]"),
})
for d, e in zeta.items():
    params = [(f"p{i}", s) for i, s in enumerate(d.params)]
    print(f"  {d.name} := {print_term(sig, Y, params + gamma, e)}")

result = msub(t, zeta)
print("result:      ", print_term(sig, Y, gamma, result))

# a second round, and the composite doing both at once
Z = MCtx((MvarDecl("k", (), N),))
xi = metamap(Y, Z, (N,), {"c": parse_term(sig, Z, [("p", N), ("x", N)], "p × k[]")})
twice = msub(result, xi)
print("then c := p × k[]:", print_term(sig, Z, gamma, twice))
print("composite agrees:", msub(t, compose(zeta, xi)) == twice)
