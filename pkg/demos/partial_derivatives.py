"""Elaborate the partial-differentiation theory and check derivations in it.

    python3 demos/partial_derivatives.py
"""

from soas import corpus
from soas.eqlog import check_proofs, elaborate_theory
from soas.errors import ProofError

sig = corpus.load("pd.soas")
theory = elaborate_theory(sig, "pd.soas")
print(f"{len(theory.axioms)} axioms:")
for ax in theory.axioms.values():
    print("  ", ax.show(sig))

script = corpus.read("pd-proofs.eqp")
for r in check_proofs(theory, script, "pd-proofs.eqp"):
    print(f"proved {r.name} in {r.steps} steps:", r.statement.show(sig))

# a slip in an intermediate term is pinpointed
broken = script.replace("pdiff(w. 0 ⊗ w, x)\n", "pdiff(w. w ⊗ 0, x)\n")
try:
    check_proofs(elaborate_theory(sig), broken, "broken.eqp")
except ProofError as err:
    print("\nrejected:", err)
