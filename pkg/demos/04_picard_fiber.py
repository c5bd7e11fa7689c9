"""
The fiber of the Picard compactification
========================================

Limit roots are compared with balanced line bundles through twisters.  For
cube roots of the trivial bundle on the three-node curve the fiber is a
finite set of points together with two projective planes.
"""

# %%
from rootstrata import DualGraph, chi_diagnostics, shat_fiber, twister_candidates

curve = DualGraph.from_edges([1, 1], [(0, 1)] * 3)
print("twisters on the curve itself:", [t.t.values for t in twister_candidates(curve, [], 3, 0)])

report = shat_fiber(curve, 3, 0)
for s in report.strata:
    print(
        f"Delta={sorted(s.model.delta)!s:10} t={s.twister.t.values!s:18} "
        f"d={s.multidegree.values!s:18} dim={s.dimension.value}{'' if s.dimension.exact else '?'}"
    )
print("isolated points:", report.isolated_points)
print("families of planes:", sum(s.families.coeff for s in report.strata_of_dimension(2)), "* 3^(2g^nu)")

# %%
# The comparison map is regular exactly when every limit root is balanced.
print(chi_diagnostics(curve, 3, 0).summary())
print(chi_diagnostics(curve, 2, 1).summary())
