"""
Two components meeting in k nodes
=================================

For curves with two smooth components the fiber dimension is k - 1 apart
from four exceptional families, where it drops to 0.  The exceptions are
checked here against the integer problem they come from.
"""

# %%
from rootstrata import DualGraph, riass_dimension, shat_fiber, step2_exists

for k, r, res in [(2, 3, 0), (3, 4, 2), (4, 3, 0), (3, 5, 1), (5, 2, 1)]:
    case = riass_dimension(k, r, 1, res, -res)
    print(f"k={k} r={r} residues={case.residues}: dimension {case.dimension} via {case.via}")

# %%
# The witness of a positive-dimensional family, when there is one.
print(step2_exists(3, 5, 1, 1))
print(step2_exists(2, 3, 1, 0))

# %%
# The same numbers come out of the full fiber inventory.
curve = DualGraph.from_edges([1, 2], [(0, 1)] * 3)
print(shat_fiber(curve, 5, 0).dimension.to_json(), riass_dimension(3, 5, 0, 3, 5).dimension)
