"""
Balanced multidegrees
=====================

A multidegree on a quasistable curve is balanced when it satisfies the basic
inequality on every subcurve.  The enumerator goes over every blow-up of the
stable curve and returns the balanced degrees of a given total.
"""

# %%
from rootstrata import DualGraph, QuasistableModel, enumerate_balanced, is_stably_balanced

curve = DualGraph.from_edges([1, 1], [(0, 1)] * 3)
for model, degrees in enumerate_balanced(curve, 0).items():
    print(f"Delta={sorted(model.delta)!s:10}", [d.values for d in degrees])

# %%
# A degree that fails names the subcurve that breaks the inequality.
verdict = is_stably_balanced(QuasistableModel(curve, frozenset()), (2, -2))
print(verdict.status.value)
for w in verdict.witnesses:
    print("  subcurve", w.vertices, w.kind, "d_Z =", w.d_Z, "w_Z =", w.w_Z, "k_Z =", w.k_Z)

# %%
# Twisting by the canonical bundle maps degree 0 onto degree 2g - 2 = 6.
shifted = enumerate_balanced(curve, 6)
print([d.values for d in shifted[QuasistableModel(curve, frozenset())]])
