"""
Dual graphs, blow-ups and cycles mod r
======================================

A nodal curve is recorded by its dual graph: one vertex per component of the
normalization, labelled by its genus, and one edge per node.  This script
builds the curve made of two elliptic components meeting in three nodes and
looks at the combinatorics everything else is built on.
"""

# %%
from rootstrata import (
    DualGraph,
    ResidueVector,
    arithmetic_genus,
    betti1,
    blow_up,
    omega_multidegree,
    solve_boundary,
)

curve = DualGraph.from_edges([1, 1], [(0, 1), (0, 1), (0, 1)])
print("b1 =", betti1(curve), " g =", arithmetic_genus(curve), " g^nu =", curve.normalization_genus)
print("canonical multidegree:", omega_multidegree(curve).values)

# %%
# Blowing up two of the nodes inserts a rational bridge in each.  The curve
# left after deleting those nodes is still connected, so the graph Sigma that
# records how the bridges glue it back has one vertex and two loops.
model = blow_up(curve, [0, 1])
X = model.derived_graph
print("blown-up graph edges:", X.edges, " exceptional:", sorted(X.exceptional))
print("Sigma: vertices", model.sigma_graph.n_vertices, " b1", model.sigma_betti1())

# %%
# Chains with coefficients in Z/3 whose boundary vanishes form H_1(Gamma, Z/3);
# the spanning-tree solver lists all 3^b1 of them.
for chain in solve_boundary(curve, ResidueVector(3, [0, 0])):
    print(chain.values)
