"""
Strata of limit cube roots
==========================

Over a nodal curve the limit r-th roots of a line bundle split into strata,
one per admissible weighting of the dual graph.  Here we list the strata of
cube roots of the trivial bundle on the three-node curve and check that,
weighted by multiplicity, they add up to the r^(2g) roots of a smooth curve.
"""

# %%
from rootstrata import DualGraph, ResidueVector, arithmetic_genus, fiber_inventory

curve = DualGraph.from_edges([1, 1], [(0, 1)] * 3)
report = fiber_inventory(curve, 3, target=ResidueVector(3, [0, 0]))

for s in report.strata:
    print(
        f"Delta={sorted(s.weighting.delta)!s:10} weights={s.weighting.weights} "
        f"roots={s.root_count.coeff}*3^(2g^nu) mult={s.multiplicity} aut={s.aut_order}"
    )

# %%
# The total length is kept with the Jacobian factor symbolic.
print("sum of mult * roots =", report.length.coeff, "* 3^(2g^nu) =", report.length.value)
print("3^(2g) =", 3 ** (2 * arithmetic_genus(curve)))

# %%
# The same fiber for roots of the canonical bundle (a 3-spin structure needs
# 3 | 2g - 2, which fails here, so we take l = 3 instead of l = 1).
spin = fiber_inventory(curve, 3, l=3)
print(len(spin.strata), "strata for cube roots of omega^3")
