"""Evaluate simply typed λ-terms two ways and watch them agree.

    python3 demos/stlc_eval.py
"""

import random

from soas import corpus, parse_term, print_term
from soas.generate import gen_term
from soas.signature import Sort
from soas.stlc import evaluate, trace
from soas.term import MCtx

sig = corpus.load("stlc.soas")
N = Sort("N")

add2 = "(λ su(su(x0)) : N ↣ N)"
twice = "(λ λ x1 $ (x1 $ x0) : (N ↣ N) ↣ N ↣ N)"
t = parse_term(sig, MCtx(), [], f"{twice} $ {add2} $ su(ze)")

for i, u in enumerate(trace(t, 50)):
    print(f"{i:>2}  {print_term(sig, MCtx(), [], u)}    ⟦·⟧ = {evaluate(u)}")

print()
rng = random.Random(1)
for _ in range(5):
    r = gen_term(sig, MCtx(), (), N, 15, rng)
    steps = trace(r, 1000)
    print(f"{len(steps) - 1:>3} steps  {print_term(sig, MCtx(), [], r)}  ⇒  {evaluate(r)}")
