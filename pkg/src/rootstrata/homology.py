"""Chains on a graph with Z/r coefficients.

0-chains (``ResidueVector``) are indexed by vertices, 1-chains (``EdgeChain``)
by edges and read against the canonical ``(tail, head)`` orientation.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from .graph import DualGraph, Multidegree, Multigraph, betti1


@dataclass(frozen=True)
class ResidueVector:
    modulus: int
    values: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        object.__setattr__(self, "values", tuple(int(x) % self.modulus for x in self.values))

    @property
    def is_zero(self) -> bool:
        return not any(self.values)

    def total(self) -> int:
        return sum(self.values) % self.modulus

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


@dataclass(frozen=True)
class EdgeChain:
    modulus: int
    values: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        object.__setattr__(self, "values", tuple(int(x) % self.modulus for x in self.values))

    @property
    def support(self) -> frozenset:
        return frozenset(i for i, x in enumerate(self.values) if x)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


def boundary(graph: Multigraph, chain: EdgeChain) -> ResidueVector:
    """Each edge with coefficient ``u`` adds ``+u`` at its head and ``-u`` at its tail."""
    if len(chain) != graph.n_edges:
        raise ValueError("chain length does not match the edge count")
    r = chain.modulus
    out = [0] * graph.n_vertices
    for (a, b), u in zip(graph.edges, chain.values):
        out[b] += u
        out[a] -= u
    return ResidueVector(r, out)


def coboundary(graph: Multigraph, vec: ResidueVector) -> EdgeChain:
    if len(vec) != graph.n_vertices:
        raise ValueError("vector length does not match the vertex count")
    return EdgeChain(vec.modulus, [vec[b] - vec[a] for a, b in graph.edges])


def residue_class(d: Multidegree | Sequence[int], r: int) -> ResidueVector:
    values = d.values if isinstance(d, Multidegree) else d
    return ResidueVector(r, values)


def h1_count(graph: Multigraph, r: int) -> int:
    """``|H_1(graph, Z/r)| = r^{b_1}``."""
    return r ** betti1(graph)


def _spanning_tree(graph: Multigraph):
    """BFS tree from vertex 0.  Returns (tree edge ids in BFS order, parent edge of every vertex)."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(graph.n_vertices)]
    for i, (a, b) in enumerate(graph.edges):
        if a != b:
            adj[a].append((i, b))
            adj[b].append((i, a))
    parent_edge = [-1] * graph.n_vertices
    seen = [False] * graph.n_vertices
    seen[0] = True
    order = [0]
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for i, w in adj[v]:
            if not seen[w]:
                seen[w] = True
                parent_edge[w] = i
                order.append(w)
                queue.append(w)
    return order, parent_edge


def iter_boundary_solutions(graph: Multigraph, target: ResidueVector) -> Iterator[tuple[int, ...]]:
    """Yield every coefficient tuple ``c`` with ``boundary(c) == target``.

    Non-tree edges range freely (lexicographic order in increasing edge id);
    tree edges are then forced, solved from the leaves of the BFS tree
    towards the root.
    """
    if not graph.is_connected():
        raise ValueError("boundary solver needs a connected graph")
    if len(target) != graph.n_vertices:
        raise ValueError("target length does not match the vertex count")
    r = target.modulus
    if target.total() != 0:
        return
    order, parent_edge = _spanning_tree(graph)
    tree = {e for e in parent_edge if e >= 0}
    free = [i for i in range(graph.n_edges) if i not in tree]
    edges = graph.edges
    leaves_first = order[:0:-1]  # every vertex but the root, deepest first
    for choice in product(range(r), repeat=len(free)):
        coeff = [0] * graph.n_edges
        excess = list(target.values)  # what still has to arrive at each vertex
        for i, u in zip(free, choice):
            coeff[i] = u
            a, b = edges[i]
            excess[b] -= u
            excess[a] += u
        for v in leaves_first:
            i = parent_edge[v]
            a, b = edges[i]
            # v's residual must be produced by its parent edge alone
            u = excess[v] % r if b == v else (-excess[v]) % r
            coeff[i] = u
            excess[b] -= u
            excess[a] += u
        yield tuple(coeff)


def solve_boundary(graph: Multigraph, target: ResidueVector) -> list[EdgeChain]:
    """All 1-chains with boundary ``target``; ``r^{b_1}`` of them or none."""
    r = target.modulus
    return [EdgeChain(r, c) for c in iter_boundary_solutions(graph, target)]
